//! 128-bit fixed-point numbers and phases on ℝ/ℤ.
//!
//! Products of the form ∏|e(x) − e(nα)| only need `nα mod 1` with an error far
//! below the separation δ/N, so the hot loops work with exact dyadic phases
//! carrying 128 fractional bits and an explicit error budget in ulps.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{Enclosure, Real};

const LOW64: u128 = u64::MAX as u128;

/// 2^-128 as an `f64`.
pub const ULP: f64 = 1.0 / (1u128 << 64) as f64 / (1u128 << 64) as f64;

/// Full 256-bit product `a·b`, returned as `(hi, lo)`.
pub fn widening_mul(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & LOW64);
    let (b1, b0) = (b >> 64, b & LOW64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LOW64) + (p10 & LOW64);
    let lo = (p00 & LOW64) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

fn two_pow_128() -> BigInt {
    BigInt::one() << 128
}

/// An exact dyadic real `int + frac·2^-128`.
///
/// Sample points, shifts and orbit base points are all `Fx` values, so every
/// comparison involving them can be settled exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fx {
    int: i64,
    frac: u128,
}

impl Fx {
    pub const ZERO: Fx = Fx { int: 0, frac: 0 };

    pub const fn from_parts(int: i64, frac: u128) -> Self {
        Self { int, frac }
    }

    pub const fn from_int(int: i64) -> Self {
        Self { int, frac: 0 }
    }

    pub fn int(&self) -> i64 {
        self.int
    }

    pub fn frac(&self) -> u128 {
        self.frac
    }

    pub fn phase(&self) -> Phase {
        Phase(self.frac)
    }

    /// ⌊num·2^128/den⌋·2^-128, i.e. the dyadic just below `num/den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero());
        let v = (num * two_pow_128()).div_floor(den);
        Self::from_scaled(&v)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer(), r.denom())
    }

    /// Exact conversion; every finite `f64` with a modest exponent is dyadic.
    pub fn from_f64(x: f64) -> Self {
        let r = BigRational::from_float(x).expect("finite float");
        Self::from_rational(&r)
    }

    fn from_scaled(v: &BigInt) -> Self {
        let mask = two_pow_128() - 1;
        let frac = (v & &mask).to_u128().expect("masked");
        let int = (v >> 128u32).to_i64().expect("integer part out of range");
        Self { int, frac }
    }

    pub fn to_scaled(&self) -> BigInt {
        (BigInt::from(self.int) << 128) + BigInt::from(self.frac)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.to_scaled(), two_pow_128())
    }

    pub fn to_f64(&self) -> f64 {
        self.int as f64 + self.frac as f64 * ULP
    }

    pub fn neg(&self) -> Self {
        if self.frac == 0 {
            Self::from_int(-self.int)
        } else {
            Self {
                int: -self.int - 1,
                frac: self.frac.wrapping_neg(),
            }
        }
    }

    /// `self · n`, exact.
    pub fn mul_int(&self, n: i64) -> Self {
        let m = n.unsigned_abs() as u128;
        let (hi, lo) = widening_mul(self.frac, m);
        let int = self
            .int
            .checked_mul(n.abs())
            .and_then(|v| v.checked_add(hi as i64))
            .expect("fixed-point overflow");
        let r = Self { int, frac: lo };
        if n < 0 {
            r.neg()
        } else {
            r
        }
    }

    pub fn abs(&self) -> Self {
        if self.int < 0 {
            self.neg()
        } else {
            *self
        }
    }
}

impl Add for Fx {
    type Output = Fx;
    fn add(self, rhs: Fx) -> Fx {
        let (frac, carry) = self.frac.overflowing_add(rhs.frac);
        Fx {
            int: self.int + rhs.int + carry as i64,
            frac,
        }
    }
}

impl Sub for Fx {
    type Output = Fx;
    fn sub(self, rhs: Fx) -> Fx {
        let (frac, borrow) = self.frac.overflowing_sub(rhs.frac);
        Fx {
            int: self.int - rhs.int - borrow as i64,
            frac,
        }
    }
}

impl From<Fx> for FixedReal {
    fn from(x: Fx) -> Self {
        FixedReal::exact(x)
    }
}

impl fmt::Display for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl Serialize for Fx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// A point of ℝ/ℤ with 128-bit resolution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase(pub u128);

impl Phase {
    pub const HALF: Phase = Phase(1u128 << 127);

    /// ‖·‖ in ulps.
    pub fn dist(self) -> u128 {
        std::cmp::min(self.0, self.0.wrapping_neg())
    }

    /// ‖·‖ as a float in [0, 1/2].
    pub fn dist_f64(self) -> f64 {
        self.dist() as f64 * ULP
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 * ULP
    }

    /// Phase of `n/den`, exact up to flooring to the ulp grid.
    pub fn from_ratio(n: u64, den: u64) -> Self {
        assert!(den > 0);
        let n = (n % den) as u128;
        let den = den as u128;
        let hi_num = n << 64;
        let hi = hi_num / den;
        let rem = hi_num % den;
        let lo = (rem << 64) / den;
        Phase((hi << 64) | lo)
    }

    /// Phase of a real number of turns given as an `f64` (reduced mod 1).
    pub fn from_turns(t: f64) -> Self {
        Phase(Fx::from_f64(t - t.floor()).frac)
    }

    pub fn mul_int(self, n: i64) -> Self {
        Phase(self.0.wrapping_mul(n as u128))
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_sub(rhs.0))
    }
}

/// A real number known to lie within `err` ulps of the dyadic `mid`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedReal {
    pub mid: Fx,
    pub err: u128,
}

impl FixedReal {
    pub fn from_real(v: &Real) -> Self {
        match v {
            Real::Exact(q) => {
                // floor(q·2^128) differs from q by less than one ulp
                let scaled = q.mul_int(&two_pow_128()).floor();
                Self {
                    mid: Fx::from_scaled(&scaled),
                    err: if q.is_rational() && q.to_rational().unwrap().denom().is_one() {
                        0
                    } else {
                        1
                    },
                }
            }
            Real::Approx(e) => Self::from_enclosure(e),
        }
    }

    pub fn from_enclosure(e: &Enclosure) -> Self {
        let lo = (e.lo().numer() * two_pow_128()).div_floor(e.lo().denom());
        let hi = (e.hi().numer() * two_pow_128()).div_ceil(e.hi().denom());
        let err = (&hi - &lo).to_u128().unwrap_or(u128::MAX);
        Self {
            mid: Fx::from_scaled(&lo),
            err,
        }
    }

    pub const fn exact(mid: Fx) -> Self {
        Self { mid, err: 0 }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn phase(&self) -> Phase {
        self.mid.phase()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mid: self.mid + other.mid,
            err: self.err.saturating_add(other.err),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mid: self.mid - other.mid,
            err: self.err.saturating_add(other.err),
        }
    }

    /// Phase of `value·other` where both factors carry errors.
    pub fn phase_times_fixed(&self, other: &FixedReal) -> (Phase, u128) {
        let (p, e) = self.phase_times(&other.mid);
        let mag = self.mid.int.unsigned_abs() as u128 + 1;
        (p, e.saturating_add(other.err.saturating_mul(mag)))
    }

    /// Phase of `n·value` and its error in ulps.
    pub fn phase_times_int(&self, n: i64) -> (Phase, u128) {
        let p = self.mid.phase().mul_int(n);
        (p, self.err.saturating_mul(n.unsigned_abs() as u128))
    }

    /// Phase of `value·x` for an exact dyadic `x`, and its error in ulps.
    pub fn phase_times(&self, x: &Fx) -> (Phase, u128) {
        let a_int = self.mid.int as u128;
        let a_frac = self.mid.frac;
        let x_int = x.int as u128;
        let (hi, _) = widening_mul(a_frac, x.frac);
        let p = a_int
            .wrapping_mul(x.frac)
            .wrapping_add(a_frac.wrapping_mul(x_int))
            .wrapping_add(hi);
        let mag = x.int.unsigned_abs() as u128 + 1;
        (Phase(p), self.err.saturating_mul(mag).saturating_add(1))
    }
}

/// `ceil(r·2^128)` clamped into `u128`, for thresholds expressed in ulps.
pub fn ulps_ceil(r: &BigRational) -> u128 {
    if r.is_negative() {
        return 0;
    }
    let v = (r.numer() * two_pow_128()).div_ceil(r.denom());
    v.to_u128().unwrap_or(u128::MAX)
}

/// `floor(r·2^128)` clamped into `u128`.
pub fn ulps_floor(r: &BigRational) -> u128 {
    if r.is_negative() {
        return 0;
    }
    let v = (r.numer() * two_pow_128()).div_floor(r.denom());
    match v.sign() {
        Sign::Minus => 0,
        _ => v.to_u128().unwrap_or(u128::MAX),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widening_mul_matches_bigint() {
        let a = 0xdead_beef_0123_4567_89ab_cdef_f00d_cafeu128;
        let b = u128::MAX - 12345;
        let (hi, lo) = widening_mul(a, b);
        let big = BigInt::from(a) * BigInt::from(b);
        let expect = (BigInt::from(hi) << 128) + BigInt::from(lo);
        assert_eq!(big, expect);
    }

    #[test]
    fn neg_and_mul_int() {
        let x = Fx::from_f64(0.75);
        assert_eq!(x.neg().to_f64(), -0.75);
        assert_eq!(x.mul_int(-3).to_f64(), -2.25);
        assert_eq!(x.mul_int(5).to_f64(), 3.75);
        assert_eq!((x + x).to_f64(), 1.5);
        assert_eq!((x - Fx::from_int(2)).to_f64(), -1.25);
    }

    #[test]
    fn phase_ratio_is_floor() {
        let p = Phase::from_ratio(1, 3);
        let exact = BigRational::new(1.into(), 3.into());
        assert_eq!(p.0, ulps_floor(&exact));
        assert_eq!(Phase::from_ratio(1, 2), Phase::HALF);
        assert_eq!(Phase::HALF.dist(), 1u128 << 127);
    }

    #[test]
    fn phase_times_dyadic() {
        let a = FixedReal {
            mid: Fx::from_f64(2.5),
            err: 0,
        };
        let (p, _) = a.phase_times(&Fx::from_f64(1.25)); // 3.125
        assert_eq!(p.to_f64(), 0.125);
        let (p, _) = a.phase_times(&Fx::from_f64(-1.25)); // -3.125
        assert_eq!(p.to_f64(), 0.875);
    }
}
