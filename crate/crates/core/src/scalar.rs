use std::fmt::Debug;

use num_traits::{Num, Signed, ToPrimitive};

use crate::Rational;

/// Field element usable as an edge resistance.
///
/// Implemented for `f32`, `f64` and [`Rational`]. Exact code paths compare
/// with `==`; floating paths are expected to carry their own tolerance.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(value: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_usize(value: usize) -> Self {
        let mut out = Self::zero();
        let mut bit = Self::one();
        let mut v = value;
        while v > 0 {
            if v & 1 == 1 {
                out = out + bit.clone();
            }
            bit = bit.clone() + bit;
            v >>= 1;
        }
        out
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(value: &Rational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_usize(value: usize) -> Self {
        value as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(value: &Rational) -> Self {
        value.to_f32().unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn from_usize(value: usize) -> Self {
        value as f32
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn from_usize(value: usize) -> Self {
        Rational::from_integer(value.into())
    }
}

/// Convert to `f64` without overflowing when numerator and denominator are
/// individually larger than `f64::MAX`.
pub(crate) fn rational_to_f64(value: &Rational) -> f64 {
    if let Some(f) = ToPrimitive::to_f64(value) {
        if f.is_finite() {
            return f;
        }
    }
    let num_bits = value.numer().bits() as i64;
    let den_bits = value.denom().bits() as i64;
    let shift_num = (num_bits - 900).max(0) as u64;
    let shift_den = (den_bits - 900).max(0) as u64;
    let n = (value.numer() >> shift_num).to_f64().unwrap_or(f64::NAN);
    let d = (value.denom() >> shift_den).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_num as i64 - shift_den as i64) as i32)
}
