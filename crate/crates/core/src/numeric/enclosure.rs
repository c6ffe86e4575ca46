use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A closed interval `[lo, hi]` with exact rational endpoints that is known to
/// contain some real quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigRational,
    hi: BigRational,
}

impl Enclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "inverted enclosure");
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.hi, -&self.lo)
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        Self::new(&self.lo + r, &self.hi + r)
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let a = &self.lo * r;
        let b = &self.hi * r;
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(Self::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = std::cmp::max(-&self.lo, self.hi.clone());
            Self::new(BigRational::zero(), m)
        }
    }

    /// `Some(ordering)` when every point of the enclosure compares the same way
    /// against `r`.
    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        if &self.lo > r {
            Some(Ordering::Greater)
        } else if &self.hi < r {
            Some(Ordering::Less)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// The common floor of all points, if there is one.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        let b = self.hi.floor().to_integer();
        (a == b).then_some(a)
    }

    /// Rounds the endpoints outward to multiples of 2^-bits, bounding the
    /// size of the rationals carried through longer computations.
    pub fn round_outward(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let lo = (self.lo.numer() * &scale).div_floor(self.lo.denom());
        let hi = (self.hi.numer() * &scale).div_ceil(self.hi.denom());
        Self::new(
            BigRational::new(lo, scale.clone()),
            BigRational::new(hi, scale),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn recip_of_positive_interval() {
        let e = Enclosure::new(r(1, 4), r(1, 2));
        let inv = e.recip().unwrap();
        assert_eq!(inv.lo(), &r(2, 1));
        assert_eq!(inv.hi(), &r(4, 1));
        assert!(Enclosure::new(r(-1, 2), r(1, 2)).recip().is_none());
    }

    #[test]
    fn floor_needs_agreement() {
        assert_eq!(Enclosure::new(r(1, 3), r(2, 3)).floor(), Some(0.into()));
        assert_eq!(Enclosure::new(r(2, 3), r(4, 3)).floor(), None);
    }

    #[test]
    fn outward_rounding_contains_original() {
        let e = Enclosure::new(r(1, 3), r(1, 3));
        let w = e.round_outward(20);
        assert!(w.lo() <= &r(1, 3) && w.hi() >= &r(1, 3));
        assert!(w.width() <= r(1, 1 << 19));
    }
}
