//! Partial sums, T and Nörlund means, and maximal operators.
//!
//! Every mean here is a linear combination of partial sums, so it acts on the
//! spectrum as a multiplier: with `S_k f = Σ_{i<k} f̂(i) ψ_i`,
//!
//! * T mean: `f̂(i)` is weighted by `(Q_n - Q_{i+1}) / Q_n`,
//! * Nörlund mean: by `Q_{n-i} / Q_n`,
//! * `σ̃_n = (1/n) Σ_{k=1}^{n} S_k`: by `(n - i) / n`,
//!
//! for `i < n`, and zero beyond. One coefficient vector per input is reused
//! across every order `n` of a sweep.

use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::GridFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::systems::{fourier_coeffs, SpectralCoeffs, SystemKind};

use super::weights::{make_weights, MeanFamily, Orientation, WeightSequence};

/// A summation rule as a function of the order `n`.
#[derive(Copy, Clone, Debug)]
pub enum Summation<'a, T> {
    /// `(1/Q_n) Σ_{k=0}^{n-1} q_k S_k`.
    T(&'a WeightSequence<T>),
    /// `(1/Q_n) Σ_{k=1}^{n} q_{n-k} S_k`.
    Norlund(&'a WeightSequence<T>),
    /// `(1/n) Σ_{k=1}^{n} S_k`, the majorant produced by summation by parts.
    ShiftedFejer,
}

impl<'a, T: Scalar> Summation<'a, T> {
    pub fn weighted(weights: &'a WeightSequence<T>, orientation: Orientation) -> Self {
        match orientation {
            Orientation::T => Summation::T(weights),
            Orientation::Norlund => Summation::Norlund(weights),
        }
    }

    /// Normalizer of order `n`; zero means the mean is undefined.
    pub fn normalizer(&self, n: usize) -> Result<T> {
        match self {
            Summation::T(w) | Summation::Norlund(w) => w.prefix_sum(n),
            Summation::ShiftedFejer => Ok(T::from_count(n)),
        }
    }

    pub fn is_defined(&self, n: usize) -> Result<bool> {
        Ok(n >= 1 && self.normalizer(n)? > T::zero())
    }

    /// Spectral multipliers `m_0, ..., m_{n-1}` of the order-`n` mean.
    pub fn multipliers(&self, n: usize) -> Result<Vec<T>> {
        let norm = self.normalizer(n)?;
        if n == 0 || norm <= T::zero() {
            return Err(Error::ZeroNormalizer { n });
        }
        match self {
            Summation::T(w) => (0..n)
                .map(|i| Ok((norm - w.prefix_sum(i + 1)?) / norm))
                .collect(),
            Summation::Norlund(w) => (0..n).map(|i| Ok(w.prefix_sum(n - i)? / norm)).collect(),
            Summation::ShiftedFejer => Ok((0..n)
                .map(|i| T::from_count(n - i) / norm)
                .collect()),
        }
    }

    /// The order-`n` mean of the function with spectrum `coeffs`.
    pub fn apply(&self, coeffs: &SpectralCoeffs<T>, n: usize) -> Result<GridFunction<T>> {
        check_order(n, coeffs.resolution().size())?;
        let m = self.multipliers(n)?;
        Ok(coeffs.synthesize_with(|i| if i < n { m[i] } else { T::zero() }))
    }
}

pub(crate) fn check_order(n: usize, size: usize) -> Result<()> {
    if n > size {
        Err(Error::IndexOutOfRange {
            index: n,
            bound: size + 1,
        })
    } else {
        Ok(())
    }
}

/// `S_M f = Σ_{i<M} f̂(i) ψ_i`.
pub fn partial_sum<T: Scalar>(
    f: &GridFunction<T>,
    m: usize,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    partial_sum_of(&fourier_coeffs(f, system), m)
}

pub fn partial_sum_of<T: Scalar>(coeffs: &SpectralCoeffs<T>, m: usize) -> Result<GridFunction<T>> {
    check_order(m, coeffs.resolution().size())?;
    Ok(coeffs.synthesize_with(|i| if i < m { T::one() } else { T::zero() }))
}

/// `T_n f = (1/Q_n) Σ_{k=0}^{n-1} q_k S_k f`.
pub fn t_mean<T: Scalar>(
    f: &GridFunction<T>,
    n: usize,
    w: &WeightSequence<T>,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    Summation::T(w).apply(&fourier_coeffs(f, system), n)
}

/// `t_n f = (1/Q_n) Σ_{k=1}^{n} q_{n-k} S_k f`.
pub fn norlund_mean<T: Scalar>(
    f: &GridFunction<T>,
    n: usize,
    w: &WeightSequence<T>,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    Summation::Norlund(w).apply(&fourier_coeffs(f, system), n)
}

/// `σ_n f = (1/n) Σ_{k=0}^{n-1} S_k f`.
pub fn fejer_mean<T: Scalar>(
    f: &GridFunction<T>,
    n: usize,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    let w = make_weights(&MeanFamily::fejer(), n)?;
    t_mean(f, n, &w, system)
}

/// `σ̃_n f = (1/n) Σ_{k=1}^{n} S_k f`.
pub fn shifted_fejer_mean<T: Scalar>(
    f: &GridFunction<T>,
    n: usize,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    Summation::ShiftedFejer.apply(&fourier_coeffs(f, system), n)
}

/// Mean of order `n` for a named family in its configured orientation.
pub fn family_mean<T: Scalar>(
    f: &GridFunction<T>,
    n: usize,
    family: &MeanFamily<T>,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    let w = make_weights(family, n)?;
    Summation::weighted(&w, family.orientation()).apply(&fourier_coeffs(f, system), n)
}

/// `sup_{1 <= n <= n_max} |mean_n f|`, skipping orders with `Q_n = 0`.
///
/// Orders are evaluated in parallel; the pointwise max is exact, so the
/// result does not depend on scheduling.
pub fn maximal_sweep<T: Scalar>(
    coeffs: &SpectralCoeffs<T>,
    summation: Summation<'_, T>,
    n_max: usize,
) -> Result<GridFunction<T>> {
    let res = coeffs.resolution();
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    check_order(n_max, res.size())?;
    let mut orders = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if summation.is_defined(n)? {
            orders.push(n);
        }
    }
    if orders.is_empty() {
        return Err(Error::ZeroNormalizer { n: n_max });
    }
    let sup = orders
        .par_iter()
        .map(|&n| summation.apply(coeffs, n).map(|g| g.abs().into_values()))
        .try_reduce(
            || vec![T::zero(); res.size()],
            |mut acc, g| {
                for (a, v) in acc.iter_mut().zip(g) {
                    *a = a.max(v);
                }
                Ok(acc)
            },
        )?;
    Ok(GridFunction::from_raw(res, sup))
}

/// `sup_{n <= n_max} |mean_n f|` for a named family.
pub fn maximal_operator<T: Scalar>(
    f: &GridFunction<T>,
    family: &MeanFamily<T>,
    n_max: usize,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    let w = make_weights(family, n_max)?;
    maximal_sweep(
        &fourier_coeffs(f, system),
        Summation::weighted(&w, family.orientation()),
        n_max,
    )
}

/// `σ̃^* f = sup_{j <= n_max} |σ̃_j f|`.
pub fn shifted_fejer_maximal<T: Scalar>(
    f: &GridFunction<T>,
    n_max: usize,
    system: SystemKind,
) -> Result<GridFunction<T>> {
    maximal_sweep(&fourier_coeffs(f, system), Summation::ShiftedFejer, n_max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow<T> {
    pub n: usize,
    pub sup_error: T,
    pub l1_error: T,
}

/// `‖mean_n f - f‖_∞` and `‖mean_n f - f‖_1` for every defined `n <= n_max`.
pub fn convergence_table<T: Scalar>(
    f: &GridFunction<T>,
    family: &MeanFamily<T>,
    n_max: usize,
    system: SystemKind,
) -> Result<Vec<ConvergenceRow<T>>> {
    check_order(n_max, f.len())?;
    let w = make_weights(family, n_max)?;
    let summation = Summation::weighted(&w, family.orientation());
    let coeffs = fourier_coeffs(f, system);
    let mut orders = Vec::new();
    for n in 1..=n_max {
        if summation.is_defined(n)? {
            orders.push(n);
        }
    }
    orders
        .par_iter()
        .map(|&n| {
            let err = summation.apply(&coeffs, n)?.sub(f)?;
            Ok(ConvergenceRow {
                n,
                sup_error: err.sup_norm(),
                l1_error: err.lp_norm(T::one())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Resolution;
    use crate::summability::weights::{FamilyKind, Monotonicity};
    use crate::systems::sample;

    fn res(n: u32) -> Resolution {
        Resolution::new(n).unwrap()
    }

    fn wiggle(r: Resolution, seed: f64) -> GridFunction<f64> {
        GridFunction::from_fn(r, |j| ((j as f64 + seed) * 0.731).sin() + 0.2 * (j as f64 * seed).cos())
            .unwrap()
    }

    /// Literal partial sums, accumulated from sampled system functions.
    fn literal_partial_sums(f: &GridFunction<f64>, system: SystemKind, upto: usize) -> Vec<Vec<f64>> {
        let r = f.resolution();
        let mut out = vec![vec![0.0; r.size()]];
        for i in 0..upto {
            let psi = sample::<f64>(system, i, r).unwrap();
            let coeff = psi.zip_with(f, |a, b| a * b).unwrap().integrate();
            let next: Vec<f64> = out[i]
                .iter()
                .zip(psi.values())
                .map(|(s, p)| s + coeff * p)
                .collect();
            out.push(next);
        }
        out
    }

    #[test]
    fn partial_sum_edges() {
        let r = res(5);
        let f = wiggle(r, 1.0);
        for s in SystemKind::ALL {
            assert!(partial_sum(&f, 0, s).unwrap().values().iter().all(|&v| v == 0.0));
            let full = partial_sum(&f, 32, s).unwrap();
            for (a, b) in full.values().iter().zip(f.values()) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!(partial_sum(&f, 33, s).is_err());
        }
    }

    #[test]
    fn partial_sums_match_literal_sums() {
        let r = res(5);
        let f = wiggle(r, 2.0);
        for s in SystemKind::ALL {
            let lit = literal_partial_sums(&f, s, 32);
            for m in [1, 3, 7, 12, 20, 31] {
                let got = partial_sum(&f, m, s).unwrap();
                for (a, b) in got.values().iter().zip(&lit[m]) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn means_match_literal_weighted_sums() {
        let r = res(5);
        let f = wiggle(r, 3.0);
        let families = [
            MeanFamily::fejer(),
            MeanFamily::riesz(),
            MeanFamily::new(FamilyKind::PowerV(0.4)).unwrap(),
            MeanFamily::new(FamilyKind::LogB { alpha: 1.0, beta: 1 }).unwrap(),
            MeanFamily::new(FamilyKind::Cesaro(0.5)).unwrap(),
            MeanFamily::norlund_log(),
        ];
        for s in SystemKind::ALL {
            let lit = literal_partial_sums(&f, s, 32);
            for family in &families {
                let w = make_weights(family, 33).unwrap();
                for n in [3usize, 8, 13, 32] {
                    let q_n = w.prefix_sum(n).unwrap();
                    let expected: Vec<f64> = (0..r.size())
                        .map(|x| {
                            let total: f64 = match family.orientation() {
                                Orientation::T => (0..n).map(|k| w.q(k).unwrap() * lit[k][x]).sum(),
                                Orientation::Norlund => {
                                    (1..=n).map(|k| w.q(n - k).unwrap() * lit[k][x]).sum()
                                }
                            };
                            total / q_n
                        })
                        .collect();
                    let got = family_mean(&f, n, family, s).unwrap();
                    for (a, b) in got.values().iter().zip(&expected) {
                        assert!((a - b).abs() < 1e-12, "{} n={n}", family.label());
                    }
                }
            }
        }
    }

    #[test]
    fn fejer_is_unit_weights() {
        let r = res(4);
        let f = wiggle(r, 0.5);
        let lit = literal_partial_sums(&f, SystemKind::Kaczmarz, 16);
        for n in 1..=16 {
            let sigma = fejer_mean(&f, n, SystemKind::Kaczmarz).unwrap();
            for x in 0..16 {
                let e: f64 = (0..n).map(|k| lit[k][x]).sum::<f64>() / n as f64;
                assert!((sigma.values()[x] - e).abs() < 1e-12);
            }
        }
        // n = 1 only sees S_0 = 0
        assert!(fejer_mean(&f, 1, SystemKind::Walsh).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn norlund_unit_weights_order_two() {
        let r = res(4);
        let f = wiggle(r, 4.0);
        let w = make_weights(&MeanFamily::fejer(), 2).unwrap();
        let t2 = norlund_mean(&f, 2, &w, SystemKind::Walsh).unwrap();
        let s1 = partial_sum(&f, 1, SystemKind::Walsh).unwrap();
        let s2 = partial_sum(&f, 2, SystemKind::Walsh).unwrap();
        for x in 0..16 {
            assert!((t2.values()[x] - 0.5 * (s1.values()[x] + s2.values()[x])).abs() < 1e-14);
        }
    }

    #[test]
    fn norlund_log_is_literal_l_n() {
        let r = res(5);
        let f = wiggle(r, 5.0);
        let lit = literal_partial_sums(&f, SystemKind::Kaczmarz, 32);
        for n in 2..=32 {
            let l_n: f64 = (1..n).map(|k| 1.0 / k as f64).sum();
            let got = family_mean(&f, n, &MeanFamily::norlund_log(), SystemKind::Kaczmarz).unwrap();
            for x in 0..32 {
                let e: f64 = (1..n).map(|k| lit[k][x] / (n - k) as f64).sum::<f64>() / l_n;
                assert!((got.values()[x] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cesaro_norlund_matches_coefficient_formula() {
        // direct sum with A_{n-k}^{α-1} normalized by their total A_{n-1}^α
        use crate::summability::weights::cesaro_number;
        let r = res(5);
        let f = wiggle(r, 6.0);
        let alpha = 0.5;
        let lit = literal_partial_sums(&f, SystemKind::Walsh, 32);
        let family = MeanFamily::new(FamilyKind::Cesaro(alpha)).unwrap();
        for n in 1..=32 {
            let got = family_mean(&f, n, &family, SystemKind::Walsh).unwrap();
            for x in 0..32 {
                let e: f64 = (1..=n)
                    .map(|k| cesaro_number(alpha - 1.0, n - k) * lit[k][x])
                    .sum::<f64>()
                    / cesaro_number(alpha, n - 1);
                assert!((got.values()[x] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_normalizer_is_an_error() {
        let r = res(4);
        let f = wiggle(r, 1.0);
        let w = make_weights(&MeanFamily::riesz(), 4).unwrap();
        assert!(matches!(
            t_mean(&f, 1, &w, SystemKind::Walsh),
            Err(Error::ZeroNormalizer { n: 1 })
        ));
        assert!(t_mean(&f, 5, &w, SystemKind::Walsh).is_err());
        let z = WeightSequence::from_values("zeros", vec![0.0; 8], Monotonicity::None).unwrap();
        assert!(maximal_sweep(&fourier_coeffs(&f, SystemKind::Walsh), Summation::T(&z), 8).is_err());
    }

    #[test]
    fn maximal_operator_examples() {
        let r = res(5);
        let zero = GridFunction::<f64>::zero(r);
        let m = maximal_operator(&zero, &MeanFamily::fejer(), 32, SystemKind::Kaczmarz).unwrap();
        assert!(m.values().iter().all(|&v| v == 0.0));
        let one = GridFunction::constant(r, 1.0f64);
        let m = maximal_operator(&one, &MeanFamily::fejer(), 32, SystemKind::Kaczmarz).unwrap();
        assert!(m.values().iter().all(|&v| (v - 31.0 / 32.0).abs() < 1e-14));
    }

    #[test]
    fn maximal_matches_sequential_sweep() {
        let r = res(6);
        let f = wiggle(r, 7.0);
        let family = MeanFamily::riesz();
        let par = maximal_operator(&f, &family, 64, SystemKind::Kaczmarz).unwrap();
        let w = make_weights(&family, 64).unwrap();
        let mut seq = vec![0.0f64; 64];
        for n in 2..=64 {
            let t = t_mean(&f, n, &w, SystemKind::Kaczmarz).unwrap();
            for (s, v) in seq.iter_mut().zip(t.values()) {
                *s = s.max(v.abs());
            }
        }
        assert_eq!(par.values(), &seq[..]);
    }

    #[test]
    fn convergence_rows_skip_undefined_orders() {
        let r = res(4);
        let f = wiggle(r, 2.0);
        let b = MeanFamily::new(FamilyKind::LogB { alpha: 1.0, beta: 1 }).unwrap();
        let rows = convergence_table(&f, &b, 16, SystemKind::Kaczmarz).unwrap();
        assert_eq!(rows.first().unwrap().n, 3);
        assert_eq!(rows.len(), 14);
        assert!(rows.last().unwrap().sup_error < f.sup_norm() * 2.0);
    }
}
