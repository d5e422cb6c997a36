use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use walshlab::summability::{k_plus_one, FamilyKind, MeanFamily, Orientation};
use walshlab::{Family, Weights};

use crate::error::{usage, CliResult};

/// A `--family` / `--weights` argument before its horizon is known.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    Builtin(Family),
    KPlusOne,
    File(PathBuf),
}

fn number(text: &str, field: &str) -> CliResult<f64> {
    field
        .parse()
        .map_err(|_| usage(format!("family `{text}`: cannot read number `{field}`")))
}

impl FamilySpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let kind = match parts.as_slice() {
            ["fejer"] => FamilyKind::Fejer,
            ["riesz"] => FamilyKind::Riesz,
            ["nlog"] => FamilyKind::NorlundLog,
            ["cesaro", a] => FamilyKind::Cesaro(number(text, a)?),
            ["u", a] => FamilyKind::InverseCesaro(number(text, a)?),
            ["v", a] => FamilyKind::PowerV(number(text, a)?),
            ["b", a, b] => FamilyKind::LogB {
                alpha: number(text, a)?,
                beta: b
                    .parse()
                    .map_err(|_| usage(format!("family `{text}`: beta must be 1 or 2")))?,
            },
            ["custom", "k_plus_1"] => return Ok(FamilySpec::KPlusOne),
            ["custom", ..] if parts.len() >= 2 => {
                // paths may themselves contain ':'
                return Ok(FamilySpec::File(PathBuf::from(&text.trim()["custom:".len()..])));
            }
            _ => return Err(usage(format!("unknown family `{text}`"))),
        };
        let family = MeanFamily::new(kind).map_err(|e| usage(format!("family `{text}`: {e}")))?;
        Ok(FamilySpec::Builtin(family))
    }

    /// Materializes the family with at least `horizon` weights available.
    pub fn resolve(&self, horizon: usize, orientation: Option<Orientation>) -> CliResult<Family> {
        let family = match self {
            FamilySpec::Builtin(f) => f.clone(),
            FamilySpec::KPlusOne => MeanFamily::custom(k_plus_one(horizon), Orientation::T),
            FamilySpec::File(path) => {
                let file = File::open(path)
                    .map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
                let label = path
                    .file_stem()
                    .map_or_else(|| "csv".to_string(), |s| s.to_string_lossy().into_owned());
                let w: Weights = walshlab::io::read_weights(BufReader::new(file), label)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                MeanFamily::custom(w, Orientation::T)
            }
        };
        Ok(match orientation {
            Some(o) => family.with_orientation(o),
            None => family,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_names() {
        for (text, label) in [
            ("fejer", "fejer"),
            ("riesz", "riesz"),
            ("nlog", "nlog"),
            ("cesaro:0.5", "cesaro:0.5"),
            ("u:0.3", "u:0.3"),
            ("v:0.7", "v:0.7"),
            ("b:1:1", "b:1:1"),
        ] {
            let f = FamilySpec::parse(text).unwrap().resolve(8, None).unwrap();
            assert_eq!(f.label(), label);
        }
        let k = FamilySpec::parse("custom:k_plus_1").unwrap().resolve(8, None).unwrap();
        assert_eq!(k.label(), "custom:k_plus_1");
        assert!(matches!(
            FamilySpec::parse("custom:/tmp/a:b.csv").unwrap(),
            FamilySpec::File(p) if p == PathBuf::from("/tmp/a:b.csv")
        ));
    }

    #[test]
    fn rejects_bad_names() {
        for text in ["", "cesaro", "cesaro:2", "b:1:3", "v:x", "gauss", "custom"] {
            assert!(FamilySpec::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn orientation_override() {
        let f = FamilySpec::parse("cesaro:0.5").unwrap();
        assert_eq!(f.resolve(4, None).unwrap().orientation(), Orientation::Norlund);
        assert_eq!(
            f.resolve(4, Some(Orientation::T)).unwrap().orientation(),
            Orientation::T
        );
    }
}
