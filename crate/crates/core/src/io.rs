//! Plain-text formats.
//!
//! Every file may open with `# key=value ...` comment lines. Floats are
//! written with 17 significant digits so doubles survive a round trip.
//!
//! * grid: `# resolution=N`, then `2^N` values, one per line, cell order
//! * spectrum: `# system=walsh|kaczmarz resolution=N`, then `index,coefficient`
//! * weights: optional `# monotonicity=...`, then `k,q_k` for `k = 0, 1, ...`
//! * tables: a column line followed by comma-separated rows

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::dyadic::{GridFunction, Resolution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::summability::{Monotonicity, WeightSequence};
use crate::systems::{SpectralCoeffs, SystemKind};

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `key=value` pairs collected from comment lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata(BTreeMap<String, String>);

impl Metadata {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.0.insert(key.into(), value.into());
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("missing header `# {key}=...`"),
        })
    }

    fn absorb(&mut self, line_no: usize, comment: &str) -> Result<()> {
        for token in comment.split_whitespace() {
            let (k, v) = token.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("header token `{token}` is not key=value"),
            })?;
            self.insert(k, v);
        }
        Ok(())
    }
}

/// Data lines with their 1-based line numbers; comments go to the metadata.
fn split_lines(reader: impl BufRead) -> Result<(Metadata, Vec<(usize, String)>)> {
    let mut meta = Metadata::default();
    let mut data = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            meta.absorb(i + 1, comment)?;
        } else {
            data.push((i + 1, trimmed.to_string()));
        }
    }
    Ok((meta, data))
}

fn parse_num<V: std::str::FromStr>(line: usize, field: &str) -> Result<V> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse `{}`", field.trim()),
    })
}

fn parse_float<T: Scalar>(line: usize, field: &str) -> Result<T> {
    let v: f64 = parse_num(line, field)?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value `{}`", field.trim()),
        });
    }
    Ok(T::lit(v))
}

fn parse_pair(line: usize, text: &str) -> Result<(&str, &str)> {
    let mut fields = text.split(',');
    match (fields.next(), fields.next(), fields.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line,
            message: "expected two comma-separated fields".into(),
        }),
    }
}

/// Drops a leading column line such as `index,coefficient`.
fn skip_column_line(data: &mut Vec<(usize, String)>) {
    let is_label = data
        .first()
        .and_then(|(_, l)| l.split(',').next())
        .is_some_and(|f| f.trim().parse::<f64>().is_err());
    if is_label {
        data.remove(0);
    }
}

fn resolution_of(meta: &Metadata) -> Result<Resolution> {
    Resolution::new(parse_num(1, meta.require("resolution")?)?)
}

pub fn write_grid<T: Scalar>(
    out: &mut impl Write,
    f: &GridFunction<T>,
    extra: &[(&str, String)],
) -> Result<()> {
    writeln!(out, "# resolution={}", f.resolution().bits())?;
    if !extra.is_empty() {
        let line: Vec<String> = extra.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {}", line.join(" "))?;
    }
    for v in f.values() {
        writeln!(out, "{}", format_float(v.as_f64()))?;
    }
    Ok(())
}

pub fn read_grid<T: Scalar>(reader: impl BufRead) -> Result<(GridFunction<T>, Metadata)> {
    let (meta, data) = split_lines(reader)?;
    let res = resolution_of(&meta)?;
    let values = data
        .iter()
        .map(|(line, text)| parse_float(*line, text))
        .collect::<Result<Vec<T>>>()?;
    Ok((GridFunction::new(res, values)?, meta))
}

pub fn write_spectrum<T: Scalar>(out: &mut impl Write, s: &SpectralCoeffs<T>) -> Result<()> {
    writeln!(
        out,
        "# system={} resolution={}",
        s.system(),
        s.resolution().bits()
    )?;
    writeln!(out, "index,coefficient")?;
    for (i, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "{i},{}", format_float(c.as_f64()))?;
    }
    Ok(())
}

pub fn read_spectrum<T: Scalar>(reader: impl BufRead) -> Result<SpectralCoeffs<T>> {
    let (meta, mut data) = split_lines(reader)?;
    let res = resolution_of(&meta)?;
    let system: SystemKind = meta.require("system")?.parse()?;
    skip_column_line(&mut data);
    let mut coeffs = vec![T::zero(); res.size()];
    let mut seen = vec![false; res.size()];
    for (line, text) in &data {
        let (i, c) = parse_pair(*line, text)?;
        let i: usize = parse_num(*line, i)?;
        if i >= res.size() || seen[i] {
            return Err(Error::Parse {
                line: *line,
                message: format!("index {i} out of range or repeated"),
            });
        }
        seen[i] = true;
        coeffs[i] = parse_float(*line, c)?;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Parse {
            line: data.last().map_or(1, |d| d.0),
            message: format!("coefficient {missing} missing"),
        });
    }
    SpectralCoeffs::new(res, system, coeffs)
}

pub fn write_weights<T: Scalar>(out: &mut impl Write, w: &WeightSequence<T>) -> Result<()> {
    writeln!(out, "# monotonicity={}", w.monotonicity())?;
    writeln!(out, "k,q_k")?;
    for (k, q) in w.values().iter().enumerate() {
        writeln!(out, "{k},{}", format_float(q.as_f64()))?;
    }
    Ok(())
}

/// Reads `k,q_k` rows; `k` must run `0, 1, 2, ...`. Missing monotonicity
/// header means [`Monotonicity::None`].
pub fn read_weights<T: Scalar>(
    reader: impl BufRead,
    label: impl Into<String>,
) -> Result<WeightSequence<T>> {
    let (meta, mut data) = split_lines(reader)?;
    let monotonicity = match meta.get("monotonicity") {
        Some(m) => m.parse()?,
        None => Monotonicity::None,
    };
    skip_column_line(&mut data);
    let mut q = Vec::with_capacity(data.len());
    for (expected, (line, text)) in data.iter().enumerate() {
        let (k, v) = parse_pair(*line, text)?;
        let k: usize = parse_num(*line, k)?;
        if k != expected {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected k = {expected}, got {k}"),
            });
        }
        q.push(parse_float(*line, v)?);
    }
    if q.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no weights".into(),
        });
    }
    WeightSequence::from_values(label, q, monotonicity)
}

/// One table entry.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<f32> for Cell {
    fn from(v: f32) -> Self {
        Cell::Float(f64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<V: Into<Cell>> From<Option<V>> for Cell {
    fn from(v: Option<V>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(v) => s.serialize_str(&v.to_string()),
            Cell::Text(v) => s.serialize_str(v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Missing => s.serialize_none(),
        }
    }
}

/// Column-labelled rows. Serializes as an array of row objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

struct Row<'a>(&'a [String], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(&Row(&self.columns, row))?;
        }
        seq.end()
    }
}

/// `n,q_prev,Q_n,ratio_node,ratio_cond1`.
pub fn diagnostics_table<T: Scalar>(d: &crate::summability::WeightDiagnostics<T>) -> Table {
    let mut t = Table::new(["n", "q_prev", "Q_n", "ratio_node", "ratio_cond1"]);
    for r in &d.rows {
        t.push(vec![
            r.n.into(),
            r.q_prev.as_f64().into(),
            r.q_sum.as_f64().into(),
            r.ratio_node.map(|v| v.as_f64()).into(),
            r.ratio_cond1.map(|v| v.as_f64()).into(),
        ]);
    }
    t
}

/// `k,alpha_k,n_k,min_abs_T,lower_bound,weak_quasinorm,hardy_norm,ratio`.
pub fn divergence_table<T: Scalar>(report: &crate::counterexample::DivergenceReport<T>) -> Table {
    let mut t = Table::new([
        "k",
        "alpha_k",
        "n_k",
        "min_abs_T",
        "lower_bound",
        "weak_quasinorm",
        "hardy_norm",
        "ratio",
    ]);
    for r in &report.rows {
        t.push(vec![
            r.k.into(),
            r.alpha_k.into(),
            r.n_k.into(),
            r.min_abs_t.as_f64().into(),
            r.lower_bound.as_f64().into(),
            r.weak_quasinorm.as_f64().into(),
            r.hardy_norm.as_f64().into(),
            r.ratio.as_f64().into(),
        ]);
    }
    t
}

/// `n,sup_error,l1_error`.
pub fn convergence_table<T: Scalar>(rows: &[crate::summability::ConvergenceRow<T>]) -> Table {
    let mut t = Table::new(["n", "sup_error", "l1_error"]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.sup_error.as_f64().into(),
            r.l1_error.as_f64().into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summability::k_plus_one;
    use crate::systems::fourier_coeffs;

    fn res(n: u32) -> Resolution {
        Resolution::new(n).unwrap()
    }

    #[test]
    fn grid_round_trip_is_lossless() {
        let f = GridFunction::from_fn(res(4), |j| (j as f64 + 0.1).sqrt() / 3.0 - 1.0).unwrap();
        let mut buf = Vec::new();
        write_grid(&mut buf, &f, &[("family", "fejer".into()), ("n", "3".into())]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# resolution=4\n# family=fejer n=3\n"));
        let (g, meta) = read_grid::<f64>(buf.as_slice()).unwrap();
        assert_eq!(g, f);
        assert_eq!(meta.get("family"), Some("fejer"));
    }

    #[test]
    fn grid_errors() {
        assert!(read_grid::<f64>("1\n2\n".as_bytes()).is_err());
        assert!(read_grid::<f64>("# resolution=1\n1\n".as_bytes()).is_err());
        assert!(read_grid::<f64>("# resolution=1\n1\nx\n".as_bytes()).is_err());
        assert!(read_grid::<f64>("# resolution=1\n1\nnan\n".as_bytes()).is_err());
        let (g, _) = read_grid::<f64>("# resolution=1\n\n1\n2\n".as_bytes()).unwrap();
        assert_eq!(g.values(), &[1.0, 2.0]);
    }

    #[test]
    fn spectrum_round_trip() {
        let f = GridFunction::from_fn(res(3), |j| j as f64 * 0.7).unwrap();
        let s = fourier_coeffs(&f, SystemKind::Kaczmarz);
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# system=kaczmarz resolution=3\nindex,coefficient\n0,"));
        assert_eq!(read_spectrum::<f64>(buf.as_slice()).unwrap(), s);
        let short = "# system=walsh resolution=1\n0,1\n";
        assert!(read_spectrum::<f64>(short.as_bytes()).is_err());
    }

    #[test]
    fn weights_round_trip() {
        let w = k_plus_one::<f64>(6);
        let mut buf = Vec::new();
        write_weights(&mut buf, &w).unwrap();
        let back = read_weights::<f64>(buf.as_slice(), "k_plus_1").unwrap();
        assert_eq!(back.values(), w.values());
        assert_eq!(back.monotonicity(), Monotonicity::NonDecreasing);

        let plain = read_weights::<f64>("0,1\n1,0.5\n2,2\n".as_bytes(), "x").unwrap();
        assert_eq!(plain.monotonicity(), Monotonicity::None);
        let lying = "# monotonicity=non-increasing\n0,1\n1,0.5\n2,2\n";
        assert!(matches!(
            read_weights::<f64>(lying.as_bytes(), "x"),
            Err(Error::MonotonicityViolated { index: 2, .. })
        ));
        assert!(read_weights::<f64>("0,1\n1,-1\n".as_bytes(), "x").is_err());
        assert!(read_weights::<f64>("0,1\n2,1\n".as_bytes(), "x").is_err());
    }

    #[test]
    fn table_csv_and_json() {
        let mut t = Table::new(["n", "value", "note"]);
        t.push(vec![1usize.into(), 0.5.into(), Cell::Missing]);
        t.push(vec![2usize.into(), Cell::Float(f64::INFINITY), "x".into()]);
        assert_eq!(
            t.to_csv(),
            "n,value,note\n1,5.0000000000000000e-1,\n2,inf,x\n"
        );
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"[{"n":1,"value":0.5,"note":null},{"n":2,"value":"inf","note":"x"}]"#
        );
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 2f64.powi(28), std::f64::consts::PI] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
