//! Finite-resolution model of the dyadic group.
//!
//! A point keeps its first `N` coordinates `(x_0, ..., x_{N-1})`. Coordinate
//! `x_k` lives at bit `N - 1 - k` of the cell index, so the dyadic interval
//! `I_n(x)` is the contiguous block of `2^{N-n}` cells sharing the top `n`
//! bits of `x`. Haar measure gives every cell mass `2^{-N}`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of dyadic coordinates retained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution(u32);

impl Resolution {
    pub const MAX_BITS: u32 = 30;

    pub fn new(n_bits: u32) -> Result<Self> {
        if n_bits == 0 || n_bits > Self::MAX_BITS {
            return Err(Error::InvalidResolution {
                got: n_bits,
                max: Self::MAX_BITS,
            });
        }
        Ok(Self(n_bits))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    /// Number of cells, `2^N`.
    #[inline]
    pub fn size(self) -> usize {
        1usize << self.0
    }

    pub(crate) fn ensure_same(self, other: Resolution) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ResolutionMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

/// Reverses the low `width` bits of `x`.
#[inline]
pub fn reverse_bits(x: usize, width: u32) -> usize {
    if width == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - width)
    }
}

/// A point of the truncated group, identified with its cell.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    resolution: Resolution,
    cell: usize,
}

impl DyadicPoint {
    pub fn new(resolution: Resolution, cell: usize) -> Result<Self> {
        if cell >= resolution.size() {
            return Err(Error::IndexOutOfRange {
                index: cell,
                bound: resolution.size(),
            });
        }
        Ok(Self { resolution, cell })
    }

    pub fn zero(resolution: Resolution) -> Self {
        Self {
            resolution,
            cell: 0,
        }
    }

    /// Builds a point from `(x_0, ..., x_{N-1})`; each entry must be 0 or 1.
    pub fn from_coordinates(resolution: Resolution, coords: &[u8]) -> Result<Self> {
        if coords.len() != resolution.bits() as usize {
            return Err(Error::LengthMismatch {
                expected: resolution.bits() as usize,
                got: coords.len(),
            });
        }
        let n = resolution.bits();
        let mut cell = 0usize;
        for (k, &c) in coords.iter().enumerate() {
            if c > 1 {
                return Err(Error::InvalidParameter(format!(
                    "coordinate x_{k} = {c} is not 0 or 1"
                )));
            }
            cell |= (c as usize) << (n - 1 - k as u32);
        }
        Ok(Self { resolution, cell })
    }

    #[inline]
    pub fn resolution(self) -> Resolution {
        self.resolution
    }

    #[inline]
    pub fn cell(self) -> usize {
        self.cell
    }

    /// Coordinate `x_k`.
    pub fn coordinate(self, k: u32) -> Result<u8> {
        let n = self.resolution.bits();
        if k >= n {
            return Err(Error::CoordinateOutOfRange { k, n_bits: n });
        }
        Ok(((self.cell >> (n - 1 - k)) & 1) as u8)
    }

    /// Group operation: coordinate-wise addition mod 2.
    pub fn xor_add(self, other: DyadicPoint) -> Result<Self> {
        self.resolution.ensure_same(other.resolution)?;
        Ok(Self {
            resolution: self.resolution,
            cell: self.cell ^ other.cell,
        })
    }
}

/// `I_n(x)`: points whose first `level` coordinates equal those encoded in
/// `prefix` (with `x_0` as the most significant bit of the prefix).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    level: u32,
    prefix: usize,
}

impl DyadicInterval {
    pub fn new(level: u32, prefix: usize) -> Result<Self> {
        if level >= usize::BITS || prefix >> level != 0 {
            return Err(Error::InvalidParameter(format!(
                "prefix {prefix} does not fit in {level} bits"
            )));
        }
        Ok(Self { level, prefix })
    }

    /// `I_n = I_n(0)`.
    pub fn at_origin(level: u32) -> Self {
        Self { level, prefix: 0 }
    }

    /// The level-`level` interval containing `x`.
    pub fn containing(x: DyadicPoint, level: u32) -> Result<Self> {
        let n = x.resolution().bits();
        if level > n {
            return Err(Error::LevelOutOfRange { level, n_bits: n });
        }
        Ok(Self {
            level,
            prefix: x.cell() >> (n - level),
        })
    }

    #[inline]
    pub fn level(self) -> u32 {
        self.level
    }

    #[inline]
    pub fn prefix(self) -> usize {
        self.prefix
    }

    /// Haar measure `2^{-level}`.
    pub fn measure<T: Scalar>(self) -> T {
        T::exp2i(-(self.level as i32))
    }

    /// The cell range covered at resolution `res`.
    pub fn cells(self, res: Resolution) -> Result<Range<usize>> {
        let n = res.bits();
        if self.level > n {
            return Err(Error::LevelOutOfRange {
                level: self.level,
                n_bits: n,
            });
        }
        let width = 1usize << (n - self.level);
        Ok(self.prefix * width..(self.prefix + 1) * width)
    }

    pub fn children(self) -> [DyadicInterval; 2] {
        let level = self.level + 1;
        [
            Self {
                level,
                prefix: self.prefix << 1,
            },
            Self {
                level,
                prefix: (self.prefix << 1) | 1,
            },
        ]
    }

    pub fn contains(self, x: DyadicPoint) -> bool {
        let n = x.resolution().bits();
        self.level <= n && x.cell() >> (n - self.level) == self.prefix
    }
}

/// Real-valued function on the truncated group, one value per level-`N` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    resolution: Resolution,
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    /// Wraps `values`; the length must be `2^N` and every value finite.
    pub fn new(resolution: Resolution, values: Vec<T>) -> Result<Self> {
        if values.len() != resolution.size() {
            return Err(Error::LengthMismatch {
                expected: resolution.size(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { resolution, values })
    }

    /// Constructor for values produced by this crate's own arithmetic.
    pub(crate) fn from_raw(resolution: Resolution, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), resolution.size());
        Self { resolution, values }
    }

    pub fn from_fn(resolution: Resolution, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::new(resolution, (0..resolution.size()).map(f).collect())
    }

    pub fn constant(resolution: Resolution, c: T) -> Self {
        Self::from_raw(resolution, vec![c; resolution.size()])
    }

    pub fn zero(resolution: Resolution) -> Self {
        Self::constant(resolution, T::zero())
    }

    pub fn indicator(resolution: Resolution, interval: DyadicInterval) -> Result<Self> {
        let cells = interval.cells(resolution)?;
        let mut values = vec![T::zero(); resolution.size()];
        values[cells].iter_mut().for_each(|v| *v = T::one());
        Ok(Self::from_raw(resolution, values))
    }

    #[inline]
    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn at(&self, x: DyadicPoint) -> T {
        self.values[x.cell()]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_raw(self.resolution, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.resolution.ensure_same(other.resolution)?;
        Ok(Self::from_raw(
            self.resolution,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| c * v)
    }

    pub fn abs(&self) -> Self {
        self.map(T::abs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise maximum.
    pub fn max_with(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, T::max)
    }

    /// `∫ f dμ = 2^{-N} Σ f(j)`.
    pub fn integrate(&self) -> T {
        let sum: T = self.values.iter().copied().sum();
        sum * T::exp2i(-(self.resolution.bits() as i32))
    }

    /// `(∫ |f|^p dμ)^{1/p}`.
    pub fn lp_norm(&self, p: T) -> Result<T> {
        check_exponent(p)?;
        let mean = self.map(|v| v.abs().powf(p)).integrate();
        Ok(mean.powf(p.recip()))
    }

    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn min_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::infinity(), |acc, v| acc.min(v.abs()))
    }

    /// `sup_{λ>0} λ μ(|f| > λ)^{1/p}`.
    ///
    /// `|f|` is a simple function, so the supremum is approached as `λ`
    /// increases to one of its values `v`, where it equals
    /// `v μ(|f| >= v)^{1/p}`.
    pub fn weak_lp_quasinorm(&self, p: T) -> Result<T> {
        check_exponent(p)?;
        let mut mags: Vec<T> = self.values.iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
        let total = T::from_count(mags.len());
        let inv_p = p.recip();
        let mut best = T::zero();
        let mut i = 0;
        while i < mags.len() {
            let v = mags[i];
            if v <= T::zero() {
                break;
            }
            let mut j = i;
            while j < mags.len() && mags[j] == v {
                j += 1;
            }
            let measure = T::from_count(j) / total;
            best = best.max(v * measure.powf(inv_p));
            i = j;
        }
        Ok(best)
    }

    /// Dyadic convolution `(f * g)(x) = ∫ f(t) g(x ⊕ t) dμ(t)`, through the
    /// Walsh transform.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        use crate::systems::{fwht, Direction};
        self.resolution.ensure_same(other.resolution)?;
        let a = fwht(&self.values, Direction::Forward)?;
        let b = fwht(&other.values, Direction::Forward)?;
        let product: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| x * y).collect();
        Ok(Self::from_raw(
            self.resolution,
            fwht(&product, Direction::Inverse)?,
        ))
    }
}

pub(crate) fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if p > T::zero() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveExponent(p.as_f64()))
    }
}
