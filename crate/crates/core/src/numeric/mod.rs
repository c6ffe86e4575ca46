//! Number representations: exact quadratic-field elements, rational
//! enclosures, 128-bit phases and compensated summation.

mod enclosure;
mod fixed;
mod kahan;
mod quad;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

pub use enclosure::Enclosure;
pub use fixed::{ulps_ceil, ulps_floor, widening_mul, FixedReal, Fx, Phase, ULP};
pub use kahan::{compensated_sum, CompensatedSum};
pub use quad::Quad;

#[allow(unused_imports)]
pub(crate) use quad::is_perfect_square;

/// A high-precision real: exact when it lives in ℚ or a real quadratic
/// field, otherwise a certified enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Exact(Quad),
    Approx(Enclosure),
}

impl Real {
    pub fn from_rational(r: &BigRational) -> Self {
        Real::Exact(Quad::from_rational(r))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_quad(&self) -> Option<&Quad> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Approx(_) => None,
        }
    }

    pub fn enclose(&self, bits: u32) -> Enclosure {
        match self {
            Real::Exact(q) => q.enclose(bits),
            Real::Approx(e) => e.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64(),
            Real::Approx(e) => e.mid_f64(),
        }
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q + &Quad::from_rational(r)),
            Real::Approx(e) => Real::Approx(e.add_rational(r)),
        }
    }

    pub fn sub_rational(&self, r: &BigRational) -> Self {
        self.add_rational(&-r)
    }

    /// `self − other`: exact when both are exact in a common field, otherwise
    /// an enclosure built from `bits`-bit enclosures of the operands.
    pub fn sub(&self, other: &Real, bits: u32) -> Self {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) if a.compatible(b) => Real::Exact(a - b),
            _ => Real::Approx(self.enclose(bits).sub(&other.enclose(bits))),
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q * &Quad::from_rational(r)),
            Real::Approx(e) => Real::Approx(e.mul_rational(r)),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        self.mul_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn abs(&self) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q.abs()),
            Real::Approx(e) => Real::Approx(e.abs()),
        }
    }

    /// `None` when the value is zero or the enclosure straddles zero.
    pub fn recip(&self) -> Option<Self> {
        match self {
            Real::Exact(q) => q.recip().map(Real::Exact),
            Real::Approx(e) => e.recip().map(Real::Approx),
        }
    }

    /// `None` when an enclosure cannot certify the floor.
    pub fn floor(&self) -> Option<BigInt> {
        match self {
            Real::Exact(q) => Some(q.floor()),
            Real::Approx(e) => e.floor(),
        }
    }

    pub fn fract(&self) -> Option<Self> {
        let f = self.floor()?;
        Some(self.sub_rational(&BigRational::from_integer(f)))
    }

    /// `Some(zero?)` when decidable.
    pub fn is_zero(&self) -> Option<bool> {
        match self {
            Real::Exact(q) => Some(q.is_zero()),
            Real::Approx(e) => {
                if e.contains_zero() {
                    e.is_point().then_some(true)
                } else {
                    Some(false)
                }
            }
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        match self {
            Real::Exact(q) => Some(q.cmp(&Quad::from_rational(r))),
            Real::Approx(e) => e.cmp_rational(r),
        }
    }

    pub fn fixed(&self) -> FixedReal {
        FixedReal::from_real(self)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Approx(e) => write!(f, "[{}, {}]", e.lo(), e.hi()),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}
