//! The lacunary atomic martingale
//!
//! ```text
//! f = Σ_k (1/α_k) a_k,   a_k = 2^{α_k(1/p-1)} (D_{2^{α_k+1}} - D_{2^{α_k}})
//! ```
//!
//! with its gap conditions and the divergence experiment for T means in the
//! Walsh-Kaczmarz system.
//!
//! Powers `2^{α/p}` overflow quickly, so the gap conditions are compared on a
//! log2 scale and only exponentiated for grid values.

use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{DyadicInterval, GridFunction, Resolution};
use crate::error::{Error, Result};
use crate::hardy::hardy_norm;
use crate::scalar::Scalar;
use crate::summability::{dirichlet_kernel, partial_sum_of, Monotonicity, Summation, WeightSequence};
use crate::systems::{fourier_coeffs, SystemKind};

/// Exponent `p ∈ (0, 1/2)` and gaps `0 < α_0 < α_1 < ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleSpec<T> {
    p: T,
    alphas: Vec<u32>,
}

impl<T: Scalar> CounterexampleSpec<T> {
    pub fn new(p: T, alphas: Vec<u32>) -> Result<Self> {
        if !(p > T::zero() && p < T::lit(0.5)) {
            return Err(Error::InvalidParameter(format!(
                "p must lie in (0, 1/2), got {p}"
            )));
        }
        if let Some(&a) = alphas.first() {
            if a == 0 {
                return Err(Error::InvalidParameter("alphas must be positive".into()));
            }
        }
        if let Some(i) = alphas.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "alphas must be strictly increasing: alpha_{} = {} >= alpha_{} = {}",
                i,
                alphas[i],
                i + 1,
                alphas[i + 1]
            )));
        }
        Ok(CounterexampleSpec { p, alphas })
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alphas
    }

    /// Number of atom blocks `K`.
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Smallest resolution holding every block: `α_{K-1} + 1`.
    pub fn min_resolution(&self) -> u32 {
        self.alphas.last().map_or(1, |&a| a + 1)
    }

    fn inv_p(&self) -> f64 {
        self.p.as_f64().recip()
    }

    fn alpha(&self, k: usize) -> Result<u32> {
        self.alphas.get(k).copied().ok_or(Error::IndexOutOfRange {
            index: k,
            bound: self.alphas.len(),
        })
    }
}

/// `log2(Σ 2^{x_i})` without leaving the log scale.
fn log2_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + xs.iter().map(|x| (x - top).exp2()).sum::<f64>().log2()
}

/// Gap conditions at one index `k >= 1`; margins are `log2(rhs) - log2(lhs)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapCheck {
    pub k: usize,
    /// `Σ_{η<k} 2^{α_η/p}/α_η < 2^{α_k/p-1}/(2α_k)`
    pub cond3_margin: f64,
    /// `2^{α_{k-1}(1/p-1)}/α_{k-1} < 2^{α_k(1/p-1)-4}/α_k`
    pub cond4_margin: f64,
    pub cond3_ok: bool,
    pub cond4_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaValidation {
    /// `Σ_k α_k^{-p}` over the given terms.
    pub series_partial_sum: f64,
    pub checks: Vec<GapCheck>,
    pub passed: bool,
}

impl AlphaValidation {
    /// First index whose conditions fail.
    pub fn first_failure(&self) -> Option<usize> {
        self.checks
            .iter()
            .find(|c| !(c.cond3_ok && c.cond4_ok))
            .map(|c| c.k)
    }
}

/// Evaluates both gap conditions for every `k ∈ [1, K)`. With fewer than two
/// terms there is nothing to compare and the report passes.
pub fn validate_alphas<T: Scalar>(spec: &CounterexampleSpec<T>) -> AlphaValidation {
    let inv_p = spec.inv_p();
    let p = spec.p.as_f64();
    let a = |k: usize| f64::from(spec.alphas[k]);
    let series_partial_sum = (0..spec.len()).map(|k| a(k).powf(-p)).sum();
    let checks: Vec<GapCheck> = (1..spec.len())
        .map(|k| {
            let lhs3 = log2_sum((0..k).map(|e| a(e) * inv_p - a(e).log2()));
            let rhs3 = a(k) * inv_p - 2.0 - a(k).log2();
            let lhs4 = a(k - 1) * (inv_p - 1.0) - a(k - 1).log2();
            let rhs4 = a(k) * (inv_p - 1.0) - 4.0 - a(k).log2();
            GapCheck {
                k,
                cond3_margin: rhs3 - lhs3,
                cond4_margin: rhs4 - lhs4,
                cond3_ok: lhs3 < rhs3,
                cond4_ok: lhs4 < rhs4,
            }
        })
        .collect();
    let passed = checks.iter().all(|c| c.cond3_ok && c.cond4_ok);
    AlphaValidation {
        series_partial_sum,
        checks,
        passed,
    }
}

fn check_fits<T: Scalar>(spec: &CounterexampleSpec<T>, res: Resolution) -> Result<()> {
    if spec.min_resolution() > res.bits() {
        Err(Error::Precondition(format!(
            "resolution {} too small: the last block needs N >= {}",
            res.bits(),
            spec.min_resolution()
        )))
    } else {
        Ok(())
    }
}

/// Supporting interval `I_{α_k}` of the `k`-th block.
pub fn atom_support<T: Scalar>(spec: &CounterexampleSpec<T>, k: usize) -> Result<DyadicInterval> {
    Ok(DyadicInterval::at_origin(spec.alpha(k)?))
}

/// `a_k = 2^{α_k(1/p-1)} (D_{2^{α_k+1}} - D_{2^{α_k}})`.
pub fn atom<T: Scalar>(
    spec: &CounterexampleSpec<T>,
    k: usize,
    res: Resolution,
) -> Result<GridFunction<T>> {
    let alpha = spec.alpha(k)?;
    check_fits(spec, res)?;
    let hi = dirichlet_kernel::<T>(1 << (alpha + 1), SystemKind::Walsh, res)?;
    let lo = dirichlet_kernel::<T>(1 << alpha, SystemKind::Walsh, res)?;
    let amp = T::lit((f64::from(alpha) * (spec.inv_p() - 1.0)).exp2());
    Ok(hi.sub(&lo)?.scale(amp))
}

/// `Σ_{k<K} a_k / α_k` on the grid.
pub fn build_counterexample<T: Scalar>(
    spec: &CounterexampleSpec<T>,
    res: Resolution,
) -> Result<GridFunction<T>> {
    check_fits(spec, res)?;
    let report = validate_alphas(spec);
    if let Some(k) = report.first_failure() {
        return Err(Error::Precondition(format!(
            "gap conditions fail at k = {k}"
        )));
    }
    let mut f = GridFunction::zero(res);
    for (k, &alpha) in spec.alphas.iter().enumerate() {
        let a = atom(spec, k, res)?;
        f = f.add(&a.scale(T::from_count(alpha as usize).recip()))?;
    }
    Ok(f)
}

/// Walsh coefficient `f̂(j)`: `2^{α_k(1/p-1)}/α_k` on `[2^{α_k}, 2^{α_k+1})`,
/// zero elsewhere.
pub fn expected_coefficient<T: Scalar>(spec: &CounterexampleSpec<T>, j: usize) -> T {
    for &alpha in &spec.alphas {
        let lo = 1usize << alpha;
        if (lo..2 * lo).contains(&j) {
            let a = f64::from(alpha);
            return T::lit((a * (spec.inv_p() - 1.0)).exp2() / a);
        }
    }
    T::zero()
}

/// `2^{α_{s-1}/p+1}/α_{s-1} + 2^{α_s/p}/α_s`, bounding `|S_j f|` for
/// `2^{α_s} <= j <= 2^{α_s+1}`. The first term is absent at `s = 0`.
pub fn partial_sum_ceiling<T: Scalar>(spec: &CounterexampleSpec<T>, s: usize) -> Result<T> {
    let inv_p = spec.inv_p();
    let cur = f64::from(spec.alpha(s)?);
    let mut bound = (cur * inv_p).exp2() / cur;
    if s > 0 {
        let prev = f64::from(spec.alpha(s - 1)?);
        bound += (prev * inv_p + 1.0).exp2() / prev;
    }
    Ok(T::lit(bound))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CeilingRow<T> {
    pub s: usize,
    /// `max_j max_x |S_j f(x)|` over the block's range of `j`.
    pub max_partial_sum: T,
    pub ceiling: T,
    pub holds: bool,
}

/// Measures the partial-sum ceiling for every block in the given system.
pub fn check_partial_sum_ceiling<T: Scalar>(
    spec: &CounterexampleSpec<T>,
    f: &GridFunction<T>,
    system: SystemKind,
) -> Result<Vec<CeilingRow<T>>> {
    check_fits(spec, f.resolution())?;
    let coeffs = fourier_coeffs(f, system);
    (0..spec.len())
        .map(|s| {
            let lo = 1usize << spec.alphas[s];
            let sup = (lo..=2 * lo)
                .into_par_iter()
                .map(|j| partial_sum_of(&coeffs, j).map(|g| g.sup_norm()))
                .try_reduce(T::zero, |a, b| Ok(a.max(b)))?;
            let ceiling = partial_sum_ceiling(spec, s)?;
            Ok(CeilingRow {
                s,
                max_partial_sum: sup,
                ceiling,
                holds: sup <= ceiling,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceRow<T> {
    pub k: usize,
    pub alpha_k: u32,
    /// `2^{α_k} + 2`
    pub n_k: usize,
    /// `min_x |T_{n_k} f(x)|`
    pub min_abs_t: T,
    /// `2^{α_k(1/p-2)}/(16 α_k)`
    pub lower_bound: T,
    pub weak_quasinorm: T,
    pub hardy_norm: T,
    /// `weak_quasinorm / hardy_norm`
    pub ratio: T,
    /// `q_{n_k-1} 2^{α_k} / Q_{n_k}`
    pub cond1_constant: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceReport<T> {
    /// Monotonicity class the weights satisfy on `k >= 1`.
    pub hypothesis: Monotonicity,
    pub rows: Vec<DivergenceRow<T>>,
}

/// `2^{α(1/p-2)}/(16 α)`.
pub fn divergence_bound<T: Scalar>(spec: &CounterexampleSpec<T>, k: usize) -> Result<T> {
    let a = f64::from(spec.alpha(k)?);
    Ok(T::lit((a * (spec.inv_p() - 2.0)).exp2() / (16.0 * a)))
}

fn classify<T: Scalar>(w: &WeightSequence<T>) -> Result<Monotonicity> {
    if w.is_non_decreasing() {
        return Ok(Monotonicity::NonDecreasing);
    }
    if w.is_non_increasing() {
        return Ok(Monotonicity::NonIncreasing);
    }
    let q = w.values();
    let up = (1..q.len().saturating_sub(1)).find(|&k| q[k + 1] > q[k]);
    let down = (1..q.len().saturating_sub(1)).find(|&k| q[k + 1] < q[k]);
    let index = up.max(down).map_or(0, |k| k + 1);
    Err(Error::MonotonicityViolated {
        declared: Monotonicity::None.to_string(),
        index,
    })
}

/// Evaluates `T_{n_k} f` in the Walsh-Kaczmarz system for every block.
pub fn divergence_experiment<T: Scalar>(
    spec: &CounterexampleSpec<T>,
    w: &WeightSequence<T>,
    res: Resolution,
) -> Result<DivergenceReport<T>> {
    let hypothesis = classify(w)?;
    let f = build_counterexample(spec, res)?;
    let h = hardy_norm(&f, spec.p)?;
    let coeffs = fourier_coeffs(&f, SystemKind::Kaczmarz);
    let rows = (0..spec.len())
        .into_par_iter()
        .map(|k| {
            let alpha_k = spec.alphas[k];
            let block = 1usize << alpha_k;
            let n_k = block + 2;
            w.require(n_k)?;
            let q_sum = w.prefix_sum(n_k)?;
            if q_sum <= T::zero() {
                return Err(Error::ZeroNormalizer { n: n_k });
            }
            let t = Summation::T(w).apply(&coeffs, n_k)?;
            let weak = t.weak_lp_quasinorm(spec.p)?;
            Ok(DivergenceRow {
                k,
                alpha_k,
                n_k,
                min_abs_t: t.min_abs(),
                lower_bound: divergence_bound(spec, k)?,
                weak_quasinorm: weak,
                hardy_norm: h,
                ratio: weak / h,
                cond1_constant: w.q(n_k - 1)? * T::from_count(block) / q_sum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DivergenceReport { hypothesis, rows })
}
