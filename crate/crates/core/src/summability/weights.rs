//! Weight sequences `{q_k}` and the named summation families built from them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Declared monotonicity class. Checked on `k >= 1`: the `k = 0` weight
/// multiplies `S_0 f = 0` and carries factor `j = 0` in every Abel sum.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    NonIncreasing,
    NonDecreasing,
    None,
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::NonIncreasing => "non-increasing",
            Monotonicity::NonDecreasing => "non-decreasing",
            Monotonicity::None => "none",
        })
    }
}

impl std::str::FromStr for Monotonicity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "non-increasing" | "nonincreasing" | "decreasing" => Ok(Monotonicity::NonIncreasing),
            "non-decreasing" | "nondecreasing" | "increasing" => Ok(Monotonicity::NonDecreasing),
            "none" => Ok(Monotonicity::None),
            other => Err(Error::InvalidParameter(format!(
                "unknown monotonicity '{other}'"
            ))),
        }
    }
}

/// Nonnegative weights `q_0, ..., q_{H-1}` with prefix sums `Q_n = Σ_{k<n} q_k`
/// cached for `n <= H`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence<T> {
    label: String,
    q: Vec<T>,
    prefix: Vec<T>,
    monotonicity: Monotonicity,
}

impl<T: Scalar> WeightSequence<T> {
    pub fn from_values(
        label: impl Into<String>,
        q: Vec<T>,
        monotonicity: Monotonicity,
    ) -> Result<Self> {
        for (index, &value) in q.iter().enumerate() {
            if !value.is_finite() || value < T::zero() {
                return Err(Error::NegativeWeight {
                    index,
                    value: value.as_f64(),
                });
            }
        }
        let violation = match monotonicity {
            Monotonicity::NonIncreasing => (1..q.len().saturating_sub(1)).find(|&k| q[k + 1] > q[k]),
            Monotonicity::NonDecreasing => (1..q.len().saturating_sub(1)).find(|&k| q[k + 1] < q[k]),
            Monotonicity::None => None,
        };
        if let Some(k) = violation {
            return Err(Error::MonotonicityViolated {
                declared: monotonicity.to_string(),
                index: k + 1,
            });
        }
        let mut prefix = Vec::with_capacity(q.len() + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        for &v in &q {
            acc = acc + v;
            prefix.push(acc);
        }
        Ok(Self {
            label: label.into(),
            q,
            prefix,
            monotonicity,
        })
    }

    pub fn from_fn(
        label: impl Into<String>,
        horizon: usize,
        monotonicity: Monotonicity,
        f: impl Fn(usize) -> T,
    ) -> Result<Self> {
        Self::from_values(label, (0..horizon).map(f).collect(), monotonicity)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    /// Number of materialized weights.
    pub fn horizon(&self) -> usize {
        self.q.len()
    }

    pub fn values(&self) -> &[T] {
        &self.q
    }

    fn horizon_error(&self, needed: usize) -> Error {
        Error::WeightHorizon {
            label: self.label.clone(),
            available: self.q.len(),
            needed,
        }
    }

    pub fn q(&self, k: usize) -> Result<T> {
        self.q.get(k).copied().ok_or_else(|| self.horizon_error(k + 1))
    }

    /// `Q_n`.
    pub fn prefix_sum(&self, n: usize) -> Result<T> {
        self.prefix.get(n).copied().ok_or_else(|| self.horizon_error(n))
    }

    /// Ensures `Q_n` is available.
    pub fn require(&self, n: usize) -> Result<()> {
        self.prefix_sum(n).map(|_| ())
    }

    /// Actual behaviour on `k >= 1`, independent of the declaration.
    pub fn is_non_increasing(&self) -> bool {
        self.q.windows(2).skip(1).all(|w| w[1] <= w[0])
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.q.windows(2).skip(1).all(|w| w[1] >= w[0])
    }
}

/// The concrete summation method behind a mean.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind<T> {
    /// `q_k = 1`.
    Fejer,
    /// Riesz logarithmic means: `q_0 = 0`, `q_k = 1/k`.
    Riesz,
    /// `(C, α)` means, Nörlund orientation with `q_k = A_k^{α-1}`.
    Cesaro(T),
    /// Inverse `(C, α)` means, T orientation with `q_k = A_k^{α-1}`.
    InverseCesaro(T),
    /// `q_0 = 1`, `q_k = k^{α-1}`.
    PowerV(T),
    /// `q_k = max(0, log^{(β)}(k^α))`, natural logarithm.
    LogB { alpha: T, beta: u32 },
    /// Nörlund logarithmic means: `q_0 = 0`, `q_j = 1/j`.
    NorlundLog,
    Custom(WeightSequence<T>),
}

/// Whether weights run forward over the partial sums (T means) or are
/// reversed (Nörlund means).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    T,
    Norlund,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::T => "t",
            Orientation::Norlund => "norlund",
        })
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "t" => Ok(Orientation::T),
            "norlund" | "nörlund" | "n" => Ok(Orientation::Norlund),
            other => Err(Error::InvalidParameter(format!(
                "unknown orientation '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanFamily<T> {
    kind: FamilyKind<T>,
    orientation: Orientation,
}

impl<T: Scalar> MeanFamily<T> {
    /// Validates parameters and picks the orientation the family is defined with.
    pub fn new(kind: FamilyKind<T>) -> Result<Self> {
        let unit = |name: &str, a: T| {
            if a > T::zero() && a < T::one() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name}: alpha must lie in (0, 1), got {a}"
                )))
            }
        };
        match &kind {
            FamilyKind::Cesaro(a) => unit("cesaro", *a)?,
            FamilyKind::InverseCesaro(a) => unit("inverse cesaro", *a)?,
            FamilyKind::PowerV(a) => unit("power V", *a)?,
            FamilyKind::LogB { alpha, beta } => {
                if !(*alpha > T::zero() && alpha.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "log B: alpha must be positive, got {alpha}"
                    )));
                }
                if !(1..=2).contains(beta) {
                    return Err(Error::InvalidParameter(format!(
                        "log B: beta must be 1 or 2, got {beta}"
                    )));
                }
            }
            _ => {}
        }
        let orientation = match kind {
            FamilyKind::Cesaro(_) | FamilyKind::NorlundLog => Orientation::Norlund,
            _ => Orientation::T,
        };
        Ok(Self { kind, orientation })
    }

    pub fn fejer() -> Self {
        Self::new(FamilyKind::Fejer).expect("no parameters")
    }

    pub fn riesz() -> Self {
        Self::new(FamilyKind::Riesz).expect("no parameters")
    }

    pub fn norlund_log() -> Self {
        Self::new(FamilyKind::NorlundLog).expect("no parameters")
    }

    pub fn custom(weights: WeightSequence<T>, orientation: Orientation) -> Self {
        Self {
            kind: FamilyKind::Custom(weights),
            orientation,
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn kind(&self) -> &FamilyKind<T> {
        &self.kind
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FamilyKind::Fejer => "fejer".into(),
            FamilyKind::Riesz => "riesz".into(),
            FamilyKind::Cesaro(a) => format!("cesaro:{a}"),
            FamilyKind::InverseCesaro(a) => format!("u:{a}"),
            FamilyKind::PowerV(a) => format!("v:{a}"),
            FamilyKind::LogB { alpha, beta } => format!("b:{alpha}:{beta}"),
            FamilyKind::NorlundLog => "nlog".into(),
            FamilyKind::Custom(w) => format!("custom:{}", w.label()),
        }
    }
}

/// `A_n^α = (α+1)...(α+n)/n!` with `A_0^α = 1`.
pub fn cesaro_number<T: Scalar>(alpha: T, n: usize) -> T {
    let mut a = T::one();
    for k in 1..=n {
        let k = T::from_count(k);
        a = a * (k + alpha) / k;
    }
    a
}

/// `A_0^{α-1}, ..., A_{len-1}^{α-1}` via `A_k = A_{k-1} (k+α-1)/k`.
fn cesaro_weights<T: Scalar>(alpha: T, len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    let mut a = T::one();
    for k in 0..len {
        if k > 0 {
            let kk = T::from_count(k);
            a = a * (kk + alpha - T::one()) / kk;
        }
        out.push(a);
    }
    out
}

/// `max(0, log^{(β)}(k^α))`, zero where the iterated logarithm is undefined.
pub fn iterated_log_weight<T: Scalar>(k: usize, alpha: T, beta: u32) -> T {
    let mut v = T::from_count(k).powf(alpha);
    for _ in 0..beta {
        if v <= T::zero() {
            return T::zero();
        }
        v = v.ln();
    }
    v.max(T::zero())
}

/// Materializes `q_0, ..., q_{horizon-1}` for `family`.
pub fn make_weights<T: Scalar>(family: &MeanFamily<T>, horizon: usize) -> Result<WeightSequence<T>> {
    let label = family.label();
    let reciprocal = |k: usize| {
        if k == 0 {
            T::zero()
        } else {
            T::from_count(k).recip()
        }
    };
    match family.kind() {
        FamilyKind::Fejer => {
            WeightSequence::from_fn(label, horizon, Monotonicity::NonIncreasing, |_| T::one())
        }
        FamilyKind::Riesz | FamilyKind::NorlundLog => {
            WeightSequence::from_fn(label, horizon, Monotonicity::NonIncreasing, reciprocal)
        }
        FamilyKind::Cesaro(a) | FamilyKind::InverseCesaro(a) => WeightSequence::from_values(
            label,
            cesaro_weights(*a, horizon),
            Monotonicity::NonIncreasing,
        ),
        FamilyKind::PowerV(a) => {
            let a = *a;
            WeightSequence::from_fn(label, horizon, Monotonicity::NonIncreasing, move |k| {
                if k == 0 {
                    T::one()
                } else {
                    T::from_count(k).powf(a - T::one())
                }
            })
        }
        FamilyKind::LogB { alpha, beta } => {
            let (alpha, beta) = (*alpha, *beta);
            WeightSequence::from_fn(label, horizon, Monotonicity::NonDecreasing, move |k| {
                iterated_log_weight(k, alpha, beta)
            })
        }
        FamilyKind::Custom(w) => {
            if w.horizon() < horizon {
                return Err(Error::WeightHorizon {
                    label: w.label().to_string(),
                    available: w.horizon(),
                    needed: horizon,
                });
            }
            WeightSequence::from_values(label, w.values()[..horizon].to_vec(), w.monotonicity())
        }
    }
}

/// The `q_k = k + 1` sequence (non-decreasing, satisfies the `c >= 1` growth
/// condition for `n >= 3`).
pub fn k_plus_one<T: Scalar>(horizon: usize) -> WeightSequence<T> {
    WeightSequence::from_fn("k_plus_1", horizon, Monotonicity::NonDecreasing, |k| {
        T::from_count(k + 1)
    })
    .expect("positive increasing weights")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticRow<T> {
    pub n: usize,
    /// `q_{n-1}`
    pub q_prev: T,
    /// `Q_n`
    pub q_sum: T,
    /// `q_{n-1} n / Q_n`; `None` when `Q_n = 0`.
    pub ratio_node: Option<T>,
    /// `q_{n+1} n / Q_{n+2}`; `None` when `Q_{n+2} = 0`.
    pub ratio_cond1: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightDiagnostics<T> {
    pub rows: Vec<DiagnosticRow<T>>,
    /// Sup of `q_{n-1} n / Q_n` over the rows: the `O(1/n)` constant `C`.
    pub node_constant: T,
    /// Inf of `q_{n+1} n / Q_{n+2}` over the rows: the growth constant `c`.
    pub cond1_constant: T,
}

/// Tabulates the growth conditions on `n = 1..=n_max`.
pub fn weight_diagnostics<T: Scalar>(
    w: &WeightSequence<T>,
    n_max: usize,
) -> Result<WeightDiagnostics<T>> {
    if n_max < 3 {
        return Err(Error::InvalidParameter(format!(
            "weight diagnostics need n_max >= 3, got {n_max}"
        )));
    }
    w.require(n_max + 2)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut node = T::neg_infinity();
    let mut cond1 = T::infinity();
    for n in 1..=n_max {
        let nn = T::from_count(n);
        let q_prev = w.q(n - 1)?;
        let q_sum = w.prefix_sum(n)?;
        let ratio_node = (q_sum > T::zero()).then(|| q_prev * nn / q_sum);
        let q_ahead = w.prefix_sum(n + 2)?;
        let ratio_cond1 = (q_ahead > T::zero()).then(|| w.q[n + 1] * nn / q_ahead);
        if let Some(r) = ratio_node {
            node = node.max(r);
        }
        if let Some(r) = ratio_cond1 {
            cond1 = cond1.min(r);
        }
        rows.push(DiagnosticRow {
            n,
            q_prev,
            q_sum,
            ratio_node,
            ratio_cond1,
        });
    }
    Ok(WeightDiagnostics {
        rows,
        node_constant: node,
        cond1_constant: cond1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_builtin() -> Vec<MeanFamily<f64>> {
        vec![
            MeanFamily::fejer(),
            MeanFamily::riesz(),
            MeanFamily::new(FamilyKind::Cesaro(0.5)).unwrap(),
            MeanFamily::new(FamilyKind::InverseCesaro(0.3)).unwrap(),
            MeanFamily::new(FamilyKind::PowerV(0.7)).unwrap(),
            MeanFamily::new(FamilyKind::LogB { alpha: 1.0, beta: 1 }).unwrap(),
            MeanFamily::new(FamilyKind::LogB { alpha: 2.0, beta: 2 }).unwrap(),
            MeanFamily::norlund_log(),
        ]
    }

    #[test]
    fn fejer_prefix_sums() {
        let w = make_weights(&MeanFamily::<f64>::fejer(), 50).unwrap();
        for n in 0..=50 {
            assert_eq!(w.prefix_sum(n).unwrap(), n as f64);
        }
        assert!(w.prefix_sum(51).is_err());
    }

    #[test]
    fn riesz_sums_to_log_number() {
        let w = make_weights(&MeanFamily::<f64>::riesz(), 40).unwrap();
        for n in 1..=40 {
            let l: f64 = (1..n).map(|k| 1.0 / k as f64).sum();
            assert!((w.prefix_sum(n).unwrap() - l).abs() < 1e-14);
        }
    }

    #[test]
    fn cesaro_numbers_against_factorial_formula() {
        for &alpha in &[0.25f64, 0.5, 0.9, -0.5] {
            let direct = |n: usize| -> f64 {
                (1..=n).map(|k| (alpha + k as f64) / k as f64).product()
            };
            for n in 0..30 {
                assert!((cesaro_number(alpha, n) - direct(n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cesaro_sum_identity() {
        // Σ_{k=0}^{n} A_{n-k}^{α-1} = A_n^α, equivalently Σ_{k=1}^{n} A_{n-k}^{α-1} = A_{n-1}^α
        for &alpha in &[0.3f64, 0.5, 0.8] {
            let q = cesaro_weights(alpha, 65);
            for n in 1..=64 {
                let full: f64 = (0..=n).map(|k| q[n - k]).sum();
                assert!((full - cesaro_number(alpha, n)).abs() < 1e-12);
                let shifted: f64 = (1..=n).map(|k| q[n - k]).sum();
                assert!((shifted - cesaro_number(alpha, n - 1)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cesaro_sum_from_one_is_not_a_n() {
        // Σ_{k=1}^{n} A_{n-k}^{α-1} falls short of A_n^α by A_n^{α-1}
        let alpha = 0.5f64;
        let q = cesaro_weights(alpha, 10);
        let s: f64 = (1..=9).map(|k| q[9 - k]).sum();
        assert!((cesaro_number(alpha, 9) - s - q[9]).abs() < 1e-12);
        assert!((cesaro_number(alpha, 9) - s).abs() > 1e-3);
    }

    #[test]
    fn power_v_one_is_fejer() {
        // α = 1 is outside the family's range; the weight formula still reduces to 1
        let w = WeightSequence::from_fn("v1", 20, Monotonicity::NonIncreasing, |k| {
            if k == 0 {
                1.0f64
            } else {
                (k as f64).powf(0.0)
            }
        })
        .unwrap();
        let f = make_weights(&MeanFamily::<f64>::fejer(), 20).unwrap();
        assert_eq!(w.values(), f.values());
    }

    #[test]
    fn log_b_clamps_small_k() {
        assert_eq!(iterated_log_weight::<f64>(0, 1.0, 1), 0.0);
        assert_eq!(iterated_log_weight::<f64>(1, 1.0, 1), 0.0);
        assert!((iterated_log_weight::<f64>(2, 1.0, 1) - 2f64.ln()).abs() < 1e-15);
        // log log 2 < 0
        assert_eq!(iterated_log_weight::<f64>(2, 1.0, 2), 0.0);
        assert!(iterated_log_weight::<f64>(3, 1.0, 2) > 0.0);
    }

    #[test]
    fn builtins_are_regular_and_monotone() {
        for family in all_builtin() {
            let w = make_weights(&family, 1025).unwrap();
            match w.monotonicity() {
                Monotonicity::NonIncreasing => assert!(w.is_non_increasing(), "{}", family.label()),
                Monotonicity::NonDecreasing => assert!(w.is_non_decreasing(), "{}", family.label()),
                Monotonicity::None => panic!("built-ins declare a class"),
            }
            // Q_n strictly grows once positive
            for n in 5..1025 {
                assert!(w.prefix_sum(n + 1).unwrap() > w.prefix_sum(n).unwrap(), "{} n={n}", family.label());
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MeanFamily::new(FamilyKind::Cesaro(1.0f64)).is_err());
        assert!(MeanFamily::new(FamilyKind::PowerV(0.0f64)).is_err());
        assert!(MeanFamily::new(FamilyKind::LogB { alpha: 1.0f64, beta: 3 }).is_err());
        assert!(MeanFamily::new(FamilyKind::LogB { alpha: -1.0f64, beta: 1 }).is_err());
        assert!(WeightSequence::from_values("neg", vec![1.0f64, -0.5], Monotonicity::None).is_err());
        assert!(matches!(
            WeightSequence::from_values("up", vec![1.0f64, 1.0, 2.0], Monotonicity::NonIncreasing),
            Err(Error::MonotonicityViolated { index: 2, .. })
        ));
    }

    #[test]
    fn orientation_by_kind() {
        assert_eq!(MeanFamily::<f64>::fejer().orientation(), Orientation::T);
        assert_eq!(MeanFamily::<f64>::norlund_log().orientation(), Orientation::Norlund);
        assert_eq!(
            MeanFamily::new(FamilyKind::Cesaro(0.5f64)).unwrap().orientation(),
            Orientation::Norlund
        );
        assert_eq!(
            MeanFamily::new(FamilyKind::InverseCesaro(0.5f64)).unwrap().orientation(),
            Orientation::T
        );
    }

    #[test]
    fn diagnostics_fejer() {
        let w = make_weights(&MeanFamily::<f64>::fejer(), 202).unwrap();
        let d = weight_diagnostics(&w, 200).unwrap();
        assert!(d.rows.iter().all(|r| r.ratio_node == Some(1.0)));
        assert_eq!(d.node_constant, 1.0);
        assert!(weight_diagnostics(&w, 2).is_err());
    }

    #[test]
    fn diagnostics_k_plus_one() {
        let w = k_plus_one::<f64>(1000);
        let d = weight_diagnostics(&w, 990).unwrap();
        for row in &d.rows {
            let n = row.n as f64;
            let expected = 2.0 * n / (n + 3.0);
            assert!((row.ratio_cond1.unwrap() - expected).abs() < 1e-12);
            if row.n >= 3 {
                assert!(row.ratio_cond1.unwrap() >= 1.0);
            }
        }
        assert!((d.cond1_constant - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diagnostics_log_b_bounded() {
        // oracle: direct evaluation of q_{n-1} n / Q_n with Q_n = log((n-1)!)
        let w = make_weights(
            &MeanFamily::new(FamilyKind::LogB { alpha: 1.0f64, beta: 1 }).unwrap(),
            10_002,
        )
        .unwrap();
        let d = weight_diagnostics(&w, 10_000).unwrap();
        let mut log_fact = 0.0f64;
        for row in &d.rows {
            let n = row.n;
            if n >= 2 {
                log_fact += ((n - 1) as f64).ln();
            }
            match row.ratio_node {
                None => assert!(n <= 2),
                Some(r) => {
                    let direct = ((n - 1) as f64).ln() * n as f64 / log_fact;
                    assert!((r - direct).abs() < 1e-9 * direct);
                }
            }
        }
        let at = |n: usize| d.rows[n - 1].ratio_node.unwrap();
        assert!((at(4) - 4.0 * 3f64.ln() / 6f64.ln()).abs() < 1e-12);
        assert!(at(4) > 2.4 && at(5) > 2.0 && at(6) > 2.0);
        assert!(d.rows[6..].iter().all(|r| r.ratio_node.unwrap() <= 2.0));
        assert!(d.rows[3..].iter().all(|r| r.ratio_node.unwrap() < 2.5));
        assert_eq!(d.node_constant, 3.0);
    }
}
