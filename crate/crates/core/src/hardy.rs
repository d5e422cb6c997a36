//! Martingale structure at finite resolution: conditional expectations on
//! the dyadic filtration, the martingale maximal function, `H_p` quasi-norms
//! and p-atom certification.
//!
//! A martingale is represented by its terminal function at resolution `N`;
//! its `n`-th stage is `condexp(f, n)`.

use serde::Serialize;

use crate::dyadic::{check_exponent, DyadicInterval, GridFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_level<T: Scalar>(f: &GridFunction<T>, level: u32) -> Result<()> {
    let n = f.resolution().bits();
    if level > n {
        Err(Error::LevelOutOfRange { level, n_bits: n })
    } else {
        Ok(())
    }
}

/// Pairwise block sums one level coarser, with the matching sums of `|f|`.
fn halve<T: Scalar>(sums: &[T], mass: &[T]) -> (Vec<T>, Vec<T>) {
    (
        sums.chunks_exact(2).map(|p| p[0] + p[1]).collect(),
        mass.chunks_exact(2).map(|p| p[0] + p[1]).collect(),
    )
}

/// Block average, zeroed when it lies within the rounding bound of a
/// `depth`-deep pairwise sum. Cancelling blocks otherwise leave `~1e-11`
/// residues that `v^p` with small `p` inflates into visible `H_p` mass.
fn average<T: Scalar>(sum: T, mass: T, width: usize, depth: u32) -> T {
    let floor = T::epsilon() * T::from_count(2 * depth as usize + 2) * mass;
    if sum.abs() <= floor {
        T::zero()
    } else {
        sum / T::from_count(width)
    }
}

/// `E(f | F_n)`: each level-`n` interval carries its average.
pub fn condexp<T: Scalar>(f: &GridFunction<T>, level: u32) -> Result<GridFunction<T>> {
    check_level(f, level)?;
    let depth = f.resolution().bits() - level;
    if depth == 0 {
        return Ok(f.clone());
    }
    let mut sums = f.values().to_vec();
    let mut mass: Vec<T> = sums.iter().map(|v| v.abs()).collect();
    for _ in 0..depth {
        (sums, mass) = halve(&sums, &mass);
    }
    let width = 1usize << depth;
    let mut values = Vec::with_capacity(f.len());
    for (&s, &m) in sums.iter().zip(&mass) {
        values.extend(std::iter::repeat_n(average(s, m, width, depth), width));
    }
    Ok(GridFunction::from_raw(f.resolution(), values))
}

/// `f^* = max_{0 <= n <= N} |E(f | F_n)|`.
pub fn maximal_function<T: Scalar>(f: &GridFunction<T>) -> GridFunction<T> {
    let n_bits = f.resolution().bits();
    let mut sums: Vec<T> = f.values().to_vec();
    let mut mass: Vec<T> = sums.iter().map(|v| v.abs()).collect();
    let mut best = mass.clone();
    for depth in 1..=n_bits {
        (sums, mass) = halve(&sums, &mass);
        let width = 1usize << depth;
        for (b, (&s, &m)) in sums.iter().zip(&mass).enumerate() {
            let avg = average(s, m, width, depth).abs();
            for v in &mut best[b * width..(b + 1) * width] {
                *v = v.max(avg);
            }
        }
    }
    GridFunction::from_raw(f.resolution(), best)
}

/// `‖f‖_{H_p} = ‖f^*‖_p`; a quasi-norm for `p < 1`.
pub fn hardy_norm<T: Scalar>(f: &GridFunction<T>, p: T) -> Result<T> {
    check_exponent(p)?;
    maximal_function(f).lp_norm(p)
}

/// Per-condition outcome of a p-atom check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomReport {
    pub mean_ok: bool,
    pub size_ok: bool,
    pub support_ok: bool,
    /// `‖a‖_∞`
    pub measured_sup: f64,
    /// `μ(I)^{-1/p}`
    pub bound: f64,
}

impl AtomReport {
    pub fn is_atom(&self) -> bool {
        self.mean_ok && self.size_ok && self.support_ok
    }

    /// `|‖a‖_∞ - μ(I)^{-1/p}|` relative to the bound.
    pub fn size_gap(&self) -> f64 {
        (self.measured_sup - self.bound).abs() / self.bound
    }
}

/// Relative tolerance of the size condition.
pub const ATOM_TOLERANCE: f64 = 1e-12;

/// Checks `∫_I a = 0`, `‖a‖_∞ <= μ(I)^{-1/p}` and `supp a ⊂ I`.
///
/// The mean counts as zero exactly when the rounding floor of the
/// conditional expectations would zero it, and the support must be exact.
/// Anything looser lets residues through that `H_p` with `p < 1` amplifies.
pub fn is_p_atom<T: Scalar>(a: &GridFunction<T>, p: T, interval: DyadicInterval) -> Result<AtomReport> {
    check_exponent(p)?;
    let res = a.resolution();
    let cells = interval.cells(res)?;
    let tol = T::lit(ATOM_TOLERANCE);
    let sup = a.sup_norm();

    let mut sums = a.values()[cells.clone()].to_vec();
    let mut mass: Vec<T> = sums.iter().map(|v| v.abs()).collect();
    let depth = res.bits() - interval.level();
    for _ in 0..depth {
        (sums, mass) = halve(&sums, &mass);
    }
    let mean_ok = average(sums[0], mass[0], cells.len(), depth) == T::zero();

    let bound = interval.measure::<T>().powf(-p.recip());
    let size_ok = sup <= bound * (T::one() + tol);

    let support_ok = a
        .values()
        .iter()
        .enumerate()
        .filter(|(j, _)| !cells.contains(j))
        .all(|(_, v)| *v == T::zero());

    Ok(AtomReport {
        mean_ok,
        size_ok,
        support_ok,
        measured_sup: sup.as_f64(),
        bound: bound.as_f64(),
    })
}
