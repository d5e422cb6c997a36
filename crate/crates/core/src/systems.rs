//! Rademacher, Walsh-Paley and Walsh-Kaczmarz functions, the fast
//! Walsh-Hadamard transform, and Fourier coefficients in both systems.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::{reverse_bits, DyadicPoint, GridFunction, Resolution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which orthonormal system a coefficient sequence or kernel refers to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Walsh,
    Kaczmarz,
}

impl SystemKind {
    pub const ALL: [SystemKind; 2] = [SystemKind::Walsh, SystemKind::Kaczmarz];

    /// Walsh index of the `n`-th function of this system.
    #[inline]
    pub fn walsh_index(self, n: usize) -> usize {
        match self {
            SystemKind::Walsh => n,
            SystemKind::Kaczmarz => kaczmarz_index_map(n),
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Walsh => "walsh",
            SystemKind::Kaczmarz => "kaczmarz",
        })
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "walsh" | "w" | "paley" => Ok(SystemKind::Walsh),
            "kaczmarz" | "k" | "kappa" => Ok(SystemKind::Kaczmarz),
            other => Err(Error::InvalidParameter(format!("unknown system '{other}'"))),
        }
    }
}

#[inline]
fn sign(parity: u32) -> i8 {
    if parity & 1 == 0 {
        1
    } else {
        -1
    }
}

fn check_order(n: usize, res: Resolution) -> Result<()> {
    if n >= res.size() {
        Err(Error::IndexOutOfRange {
            index: n,
            bound: res.size(),
        })
    } else {
        Ok(())
    }
}

/// `r_k(x) = (-1)^{x_k}`.
pub fn rademacher(k: u32, x: DyadicPoint) -> Result<i8> {
    Ok(sign(x.coordinate(k)? as u32))
}

/// `w_n(x) = Π r_k(x)^{n_k}`, with `n_k` the bits of `n` (least significant first).
pub fn walsh(n: usize, x: DyadicPoint) -> Result<i8> {
    let res = x.resolution();
    check_order(n, res)?;
    // bit k of n meets coordinate x_k, which sits at bit N-1-k of the cell
    let aligned = reverse_bits(x.cell(), res.bits());
    Ok(sign((n & aligned).count_ones()))
}

/// `|n|`: position of the highest set bit, so `2^{|n|} <= n < 2^{|n|+1}`.
pub fn msb(n: usize) -> Result<u32> {
    if n == 0 {
        Err(Error::ZeroMsb)
    } else {
        Ok(usize::BITS - 1 - n.leading_zeros())
    }
}

/// `ρ` with `κ_n = w_{ρ(n)}`: keeps the leading bit and reverses the
/// `|n|` bits below it. `ρ(0) = 0`.
pub fn kaczmarz_index_map(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let s = usize::BITS - 1 - n.leading_zeros();
    let top = 1usize << s;
    top | reverse_bits(n - top, s)
}

/// `κ_n(x) = r_{|n|}(x) Π_{k<|n|} r_{|n|-1-k}(x)^{n_k}`, evaluated literally.
pub fn kaczmarz(n: usize, x: DyadicPoint) -> Result<i8> {
    check_order(n, x.resolution())?;
    if n == 0 {
        return Ok(1);
    }
    let s = msb(n)?;
    let mut value = rademacher(s, x)?;
    for k in 0..s {
        if (n >> k) & 1 == 1 {
            value *= rademacher(s - 1 - k, x)?;
        }
    }
    Ok(value)
}

/// `ψ_n(x)` for the given system.
pub fn evaluate(system: SystemKind, n: usize, x: DyadicPoint) -> Result<i8> {
    match system {
        SystemKind::Walsh => walsh(n, x),
        SystemKind::Kaczmarz => kaczmarz(n, x),
    }
}

/// `ψ_n` sampled on every cell.
pub fn sample<T: Scalar>(system: SystemKind, n: usize, res: Resolution) -> Result<GridFunction<T>> {
    check_order(n, res)?;
    let values = (0..res.size())
        .map(|c| {
            let x = DyadicPoint::new(res, c)?;
            Ok(if evaluate(system, n, x)? > 0 {
                T::one()
            } else {
                -T::one()
            })
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(GridFunction::from_raw(res, values))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Cell values to Walsh coefficients, normalized by `2^{-N}`.
    Forward,
    /// Walsh coefficients to cell values, unnormalized.
    Inverse,
}

/// Unnormalized Sylvester butterflies, pairing LSB-aligned index bits.
fn butterflies<T: Scalar>(data: &mut [T]) {
    let len = data.len();
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}

fn bit_reverse_permute<T: Copy>(data: &mut [T], width: u32) {
    for i in 0..data.len() {
        let j = reverse_bits(i, width);
        if i < j {
            data.swap(i, j);
        }
    }
}

/// In-place fast Walsh transform for the interval-contiguous cell layout.
///
/// Forward: `c[i] = 2^{-N} Σ_j f(j) w_i(cell j)`.
/// Inverse: `f(j) = Σ_i c[i] w_i(cell j)`.
pub fn fwht_in_place<T: Scalar>(data: &mut [T], direction: Direction) -> Result<()> {
    let len = data.len();
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let width = len.trailing_zeros();
    match direction {
        Direction::Forward => {
            bit_reverse_permute(data, width);
            butterflies(data);
            let scale = T::exp2i(-(width as i32));
            data.iter_mut().for_each(|v| *v = *v * scale);
        }
        Direction::Inverse => {
            butterflies(data);
            bit_reverse_permute(data, width);
        }
    }
    Ok(())
}

pub fn fwht<T: Scalar>(values: &[T], direction: Direction) -> Result<Vec<T>> {
    let mut out = values.to_vec();
    fwht_in_place(&mut out, direction)?;
    Ok(out)
}

/// Fourier coefficients `f̂^ψ(i) = ∫ f ψ_i dμ`, indexed in system order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCoeffs<T> {
    resolution: Resolution,
    system: SystemKind,
    coeffs: Vec<T>,
}

impl<T: Scalar> SpectralCoeffs<T> {
    pub fn new(resolution: Resolution, system: SystemKind, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != resolution.size() {
            return Err(Error::LengthMismatch {
                expected: resolution.size(),
                got: coeffs.len(),
            });
        }
        if let Some(i) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            resolution,
            system,
            coeffs,
        })
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn system(&self) -> SystemKind {
        self.system
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs[i]
    }

    /// `Σ coeffs[i]^2`, equal to `‖f‖_2^2`.
    pub fn energy(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    /// Same function, coefficients re-indexed for another system.
    pub fn to_system(&self, system: SystemKind) -> Self {
        if system == self.system {
            return self.clone();
        }
        // ρ is an involution, so both directions use the same map
        let coeffs = (0..self.coeffs.len())
            .map(|i| self.coeffs[kaczmarz_index_map(i)])
            .collect();
        Self {
            resolution: self.resolution,
            system,
            coeffs,
        }
    }

    /// `Σ_i multiplier(i) f̂(i) ψ_i`; indices with a zero multiplier are skipped.
    pub fn synthesize_with(&self, multiplier: impl Fn(usize) -> T) -> GridFunction<T> {
        let mut walsh_order = vec![T::zero(); self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let m = multiplier(i);
            if m != T::zero() {
                walsh_order[self.system.walsh_index(i)] = m * c;
            }
        }
        fwht_in_place(&mut walsh_order, Direction::Inverse).expect("power-of-two length");
        GridFunction::from_raw(self.resolution, walsh_order)
    }

    /// Inverse transform.
    pub fn synthesize(&self) -> GridFunction<T> {
        self.synthesize_with(|_| T::one())
    }
}

/// Coefficients of `f` in the given system.
pub fn fourier_coeffs<T: Scalar>(f: &GridFunction<T>, system: SystemKind) -> SpectralCoeffs<T> {
    let walsh = fwht(f.values(), Direction::Forward).expect("grid length is a power of two");
    let spectrum = SpectralCoeffs {
        resolution: f.resolution(),
        system: SystemKind::Walsh,
        coeffs: walsh,
    };
    spectrum.to_system(system)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(n: u32) -> Resolution {
        Resolution::new(n).unwrap()
    }

    fn pt(r: Resolution, c: usize) -> DyadicPoint {
        DyadicPoint::new(r, c).unwrap()
    }

    #[test]
    fn rademacher_examples() {
        let r = res(3);
        assert_eq!(rademacher(0, pt(r, 0b011)).unwrap(), 1);
        assert_eq!(rademacher(0, pt(r, 0b100)).unwrap(), -1);
        assert!(matches!(
            rademacher(3, pt(r, 0)),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn walsh_examples() {
        let r = res(3);
        for c in 0..8 {
            assert_eq!(walsh(0, pt(r, c)).unwrap(), 1);
            assert_eq!(walsh(1, pt(r, c)).unwrap(), if c < 4 { 1 } else { -1 });
            let x = pt(r, c);
            let literal = rademacher(0, x).unwrap() * rademacher(1, x).unwrap();
            assert_eq!(walsh(3, x).unwrap(), literal);
        }
        assert!(walsh(8, pt(r, 0)).is_err());
    }

    #[test]
    fn msb_examples() {
        assert_eq!(msb(1).unwrap(), 0);
        assert_eq!(msb(5).unwrap(), 2);
        assert_eq!(msb(1 << 10).unwrap(), 10);
        assert!(matches!(msb(0), Err(Error::ZeroMsb)));
    }

    #[test]
    fn index_map_examples() {
        for n in 0..4 {
            assert_eq!(kaczmarz_index_map(n), n);
        }
        assert_eq!(kaczmarz_index_map(5), 6);
        assert_eq!(kaczmarz_index_map(11), 14);
    }

    #[test]
    fn kaczmarz_examples() {
        let r = res(4);
        for c in 0..16 {
            let x = pt(r, c);
            assert_eq!(kaczmarz(0, x).unwrap(), 1);
            let r2r1 = rademacher(2, x).unwrap() * rademacher(1, x).unwrap();
            assert_eq!(kaczmarz(5, x).unwrap(), r2r1);
            assert_eq!(kaczmarz(5, x).unwrap(), walsh(6, x).unwrap());
        }
    }

    /// O(4^N) inner products against literally evaluated system functions.
    fn direct_coeffs(f: &[f64], system: SystemKind, r: Resolution) -> Vec<f64> {
        (0..r.size())
            .map(|i| {
                (0..r.size())
                    .map(|j| f[j] * evaluate(system, i, pt(r, j)).unwrap() as f64)
                    .sum::<f64>()
                    / r.size() as f64
            })
            .collect()
    }

    #[test]
    fn forward_transform_examples() {
        let r = res(4);
        let ones = fwht(&[1.0f64; 16], Direction::Forward).unwrap();
        assert_eq!(ones[0], 1.0);
        assert!(ones[1..].iter().all(|&c| c == 0.0));
        let w5 = sample::<f64>(SystemKind::Walsh, 5, r).unwrap();
        let c = fwht(w5.values(), Direction::Forward).unwrap();
        for (i, v) in c.iter().enumerate() {
            assert_eq!(*v, if i == 5 { 1.0 } else { 0.0 });
        }
        assert!(matches!(
            fwht(&[1.0f64; 6], Direction::Forward),
            Err(Error::NotPowerOfTwo(6))
        ));
    }

    #[test]
    fn fwht_matches_direct_inner_products() {
        let r = res(5);
        let f: Vec<f64> = (0..32).map(|j| ((j * j) as f64 * 0.13).sin()).collect();
        let fast = fwht(&f, Direction::Forward).unwrap();
        let direct = direct_coeffs(&f, SystemKind::Walsh, r);
        for (a, b) in fast.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
        let g = GridFunction::new(r, f.clone()).unwrap();
        let kc = fourier_coeffs(&g, SystemKind::Kaczmarz);
        let kdirect = direct_coeffs(&f, SystemKind::Kaczmarz, r);
        for (a, b) in kc.coeffs().iter().zip(&kdirect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn kaczmarz_coefficients_of_kappa_6() {
        let r = res(4);
        let k6 = sample::<f64>(SystemKind::Kaczmarz, 6, r).unwrap();
        let c = fourier_coeffs(&k6, SystemKind::Kaczmarz);
        for (i, v) in c.coeffs().iter().enumerate() {
            assert_eq!(*v, if i == 6 { 1.0 } else { 0.0 });
        }
        let one = GridFunction::constant(r, 1.0f64);
        for s in SystemKind::ALL {
            assert_eq!(fourier_coeffs(&one, s).coeff(0), 1.0);
        }
    }

    #[test]
    fn single_precision_round_trip() {
        let r = res(6);
        let f: Vec<f32> = (0..64).map(|j| (j as f32 * 0.7).cos()).collect();
        let back = fwht(&fwht(&f, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).abs() < 1e-5);
        }
        let g = GridFunction::new(r, f).unwrap();
        let c = fourier_coeffs(&g, SystemKind::Kaczmarz);
        assert!((c.energy() - g.lp_norm(2.0).unwrap().powi(2)).abs() < 1e-4);
    }

    #[test]
    fn system_parses() {
        assert_eq!("Walsh".parse::<SystemKind>().unwrap(), SystemKind::Walsh);
        assert_eq!("kaczmarz".parse::<SystemKind>().unwrap(), SystemKind::Kaczmarz);
        assert!("haar".parse::<SystemKind>().is_err());
    }
}
