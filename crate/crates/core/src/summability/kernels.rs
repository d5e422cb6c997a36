//! Dirichlet, Fejér and T kernels.
//!
//! A kernel is the mean applied to the "unit spectrum" (every coefficient
//! equal to one), so kernels and means share the same multipliers and
//! `mean_n f = f * kernel_n` under dyadic convolution.

use crate::dyadic::{GridFunction, Resolution};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::systems::{SpectralCoeffs, SystemKind};

use super::means::{check_order, Summation};
use super::weights::{make_weights, MeanFamily, WeightSequence};

fn unit_spectrum<T: Scalar>(system: SystemKind, res: Resolution) -> SpectralCoeffs<T> {
    SpectralCoeffs::new(res, system, vec![T::one(); res.size()]).expect("unit spectrum")
}

/// `D_n = Σ_{i<n} ψ_i`, with `D_0 = 0`.
pub fn dirichlet_kernel<T: Scalar>(
    n: usize,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    check_order(n, res.size())?;
    Ok(unit_spectrum(system, res).synthesize_with(|i| if i < n { T::one() } else { T::zero() }))
}

/// `K_n = (1/n) Σ_{k=1}^{n} D_k`.
pub fn fejer_kernel<T: Scalar>(
    n: usize,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    Summation::ShiftedFejer.apply(&unit_spectrum(system, res), n)
}

/// `F_n = (1/Q_n) Σ_{k=0}^{n-1} q_k D_k`.
pub fn t_kernel<T: Scalar>(
    n: usize,
    w: &WeightSequence<T>,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    Summation::T(w).apply(&unit_spectrum(system, res), n)
}

/// `(1/Q_n) Σ_{k=1}^{n} q_{n-k} D_k`.
pub fn norlund_kernel<T: Scalar>(
    n: usize,
    w: &WeightSequence<T>,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    Summation::Norlund(w).apply(&unit_spectrum(system, res), n)
}

/// Kernel of a named family in its configured orientation.
pub fn family_kernel<T: Scalar>(
    n: usize,
    family: &MeanFamily<T>,
    system: SystemKind,
    res: Resolution,
) -> Result<GridFunction<T>> {
    let w = make_weights(family, n)?;
    Summation::weighted(&w, family.orientation()).apply(&unit_spectrum(system, res), n)
}
