//! Summation by parts and the maximal inequalities it yields.
//!
//! Writing `Σ_{j=1}^{n-1} q_j S_j f` through `σ̃_j f = (1/j) Σ_{k=1}^{j} S_k f`
//! gives
//!
//! ```text
//! Q_n T_n f = Σ_{j=1}^{n-2} (q_j - q_{j+1}) j σ̃_j f + q_{n-1} (n-1) σ̃_{n-1} f
//! ```
//!
//! so `|T_n f| <= a_n σ̃^* f` with `a_n` from [`abel_majorant_factor`]. For
//! non-increasing weights `a_n <= 1`; for non-decreasing weights
//! `a_n <= 2 sup_m (q_{m-1} m / Q_m) - 1`.

use serde::Serialize;

use crate::dyadic::{GridFunction, Resolution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::systems::{fourier_coeffs, sample, SystemKind};

use super::kernels::fejer_kernel;
use super::means::{check_order, maximal_sweep, Summation};
use super::weights::WeightSequence;

fn check_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("order must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `Σ_{j=0}^{n-2} (q_j - q_{j+1}) j + q_{n-1} (n-1)`.
///
/// This telescopes to `Q_n - q_0`; it equals `Q_n` only when `q_0 = 0`.
pub fn abel_normalizer<T: Scalar>(w: &WeightSequence<T>, n: usize) -> Result<T> {
    check_positive(n)?;
    let mut acc = T::zero();
    for j in 0..n.saturating_sub(1) {
        acc = acc + (w.q(j)? - w.q(j + 1)?) * T::from_count(j);
    }
    Ok(acc + w.q(n - 1)? * T::from_count(n - 1))
}

/// `Q_n F_n = Σ_{k<n} q_k D_k`, summed from sampled system functions.
///
/// Defined even when `Q_n = 0`.
pub fn weighted_dirichlet_sum<T: Scalar>(
    w: &WeightSequence<T>,
    n: usize,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    check_order(n, res.size())?;
    w.require(n)?;
    let mut dirichlet = vec![T::zero(); res.size()];
    let mut acc = vec![T::zero(); res.size()];
    for k in 0..n {
        let qk = w.q(k)?;
        if qk != T::zero() {
            for (a, d) in acc.iter_mut().zip(&dirichlet) {
                *a = *a + qk * *d;
            }
        }
        let psi = sample::<T>(system, k, res)?;
        for (d, p) in dirichlet.iter_mut().zip(psi.values()) {
            *d = *d + *p;
        }
    }
    Ok(GridFunction::from_raw(res, acc))
}

/// `Σ_{j=0}^{n-2} (q_j - q_{j+1}) j K_j + q_{n-1} (n-1) K_{n-1}`, built from
/// Fejér kernels. Terms with `j = 0` vanish.
pub fn abel_kernel<T: Scalar>(
    w: &WeightSequence<T>,
    n: usize,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    check_positive(n)?;
    check_order(n, res.size())?;
    let mut acc = vec![T::zero(); res.size()];
    let mut add = |coef: T, j: usize| -> Result<()> {
        if j == 0 || coef == T::zero() {
            return Ok(());
        }
        let k = fejer_kernel::<T>(j, system, res)?;
        let c = coef * T::from_count(j);
        for (a, v) in acc.iter_mut().zip(k.values()) {
            *a = *a + c * *v;
        }
        Ok(())
    };
    for j in 1..n.saturating_sub(1) {
        add(w.q(j)? - w.q(j + 1)?, j)?;
    }
    add(w.q(n - 1)?, n - 1)?;
    Ok(GridFunction::from_raw(res, acc))
}

/// `(Σ_{j=1}^{n-2} |q_j - q_{j+1}| j + q_{n-1} (n-1)) / Q_n`.
pub fn abel_majorant_factor<T: Scalar>(w: &WeightSequence<T>, n: usize) -> Result<T> {
    check_positive(n)?;
    let q_n = w.prefix_sum(n)?;
    if q_n <= T::zero() {
        return Err(Error::ZeroNormalizer { n });
    }
    let mut acc = T::zero();
    for j in 1..n.saturating_sub(1) {
        acc = acc + (w.q(j)? - w.q(j + 1)?).abs() * T::from_count(j);
    }
    Ok((acc + w.q(n - 1)? * T::from_count(n - 1)) / q_n)
}

/// Outcome of testing `T^* f <= factor · σ̃^* f` pointwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorantCheck<T> {
    pub factor: T,
    /// `max_x (T^* f(x) - factor σ̃^* f(x))`; non-positive when the bound holds.
    pub max_excess: T,
    pub worst_cell: usize,
    pub holds: bool,
}

/// Compares the T maximal operator against the scaled `σ̃` maximal operator
/// over orders `1..=n_max`. `tol` is relative to `max(1, factor σ̃^* f(x))`.
pub fn check_majorant<T: Scalar>(
    f: &GridFunction<T>,
    w: &WeightSequence<T>,
    n_max: usize,
    system: SystemKind,
    factor: T,
    tol: T,
) -> Result<MajorantCheck<T>> {
    let coeffs = fourier_coeffs(f, system);
    let t_star = maximal_sweep(&coeffs, Summation::T(w), n_max)?;
    let sigma_star = maximal_sweep(&coeffs, Summation::ShiftedFejer, n_max)?;
    let mut max_excess = T::neg_infinity();
    let mut worst_cell = 0;
    let mut holds = true;
    for (x, (&t, &s)) in t_star.values().iter().zip(sigma_star.values()).enumerate() {
        let bound = factor * s;
        let excess = t - bound;
        if excess > max_excess {
            max_excess = excess;
            worst_cell = x;
        }
        if excess > tol * T::one().max(bound) {
            holds = false;
        }
    }
    Ok(MajorantCheck {
        factor,
        max_excess,
        worst_cell,
        holds,
    })
}
