//! Exact arithmetic in real quadratic fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Enclosure;
use crate::error::{Error, Result};

/// An element `(a + b·√d) / c` of ℚ(√d), with `c > 0` and `d` square-free.
///
/// Rationals are represented with `b = 0` and `d = 0`; they mix freely with
/// elements of any field. Mixing two genuinely different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

/// Returns `(s, k)` with `n = s²·k` and `k` square-free, for modest `n`.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut k = n.clone();
    let mut s = BigInt::one();
    // Trial division is fine for user-sized discriminants; very large ones are
    // left as-is, which only costs a canonical form, not correctness.
    if k.bits() > 64 {
        return (s, k);
    }
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= k && p <= limit {
        let p2 = &p * &p;
        while (&k % &p2).is_zero() {
            k /= &p2;
            s *= &p;
        }
        p += 1;
    }
    (s, k)
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

impl Quad {
    /// Builds `(p + q·√d) / r`.
    pub fn new(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::InvalidSpec("denominator r must be nonzero".into()));
        }
        if q.is_zero() {
            return Ok(Self::from_ratio(p, r));
        }
        if !d.is_positive() {
            return Err(Error::InvalidSpec("d must be a positive integer".into()));
        }
        if is_perfect_square(&d) {
            return Err(Error::InvalidSpec(format!("d = {d} is a perfect square")));
        }
        let (s, k) = square_free_split(&d);
        Ok(Self::normalized(p, q * s, k, r))
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::normalized(n, BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn from_ratio(n: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalized(n, BigInt::zero(), BigInt::zero(), den)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer().clone(), r.denom().clone())
    }

    fn normalized(mut a: BigInt, mut b: BigInt, mut d: BigInt, mut c: BigInt) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        if b.is_zero() {
            d = BigInt::zero();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_zero() && !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, d, c }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    /// Coefficients `(a, b, d, c)` of `(a + b√d)/c`.
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.d, &self.c)
    }

    /// Whether `self` and `other` can be combined exactly.
    pub fn compatible(&self, other: &Self) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }

    fn field(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "mixing elements of different quadratic fields");
                self.d.clone()
            }
        }
    }

    /// Sign of the value as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² against b²d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// ⌊value⌋, exact.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        // b√d is irrational and lies strictly between consecutive integers.
        let s = (&self.b * &self.b * &self.d).sqrt();
        let lower = if self.b.is_positive() {
            &self.a + &s
        } else {
            &self.a - &s - 1
        };
        lower.div_floor(&self.c)
    }

    /// `value − ⌊value⌋`.
    pub fn fract(&self) -> Self {
        self - &Self::from_integer(self.floor())
    }

    /// ⌊value + 1/2⌋.
    pub fn round(&self) -> BigInt {
        (self + &Self::from_ratio(BigInt::one(), BigInt::from(2))).floor()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // c / (a + b√d) = c (a − b√d) / (a² − b² d)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(Self::normalized(
            &self.c * &self.a,
            -(&self.c * &self.b),
            self.d.clone(),
            norm,
        ))
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::normalized(&self.a * n, &self.b * n, self.d.clone(), self.c.clone())
    }

    /// Enclosure of width at most 2^-bits.
    pub fn enclose(&self, bits: u32) -> Enclosure {
        if let Some(r) = self.to_rational() {
            return Enclosure::point(r);
        }
        let scale = BigInt::one() << bits;
        let f = self.mul_int(&scale).floor();
        let den = scale;
        Enclosure::new(
            BigRational::new(f.clone(), den.clone()),
            BigRational::new(f + 1, den),
        )
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.to_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let e = self.enclose(160);
        e.lo().to_f64().unwrap_or(f64::NAN)
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for &Quad {
    type Output = Quad;
    fn add(self, rhs: &Quad) -> Quad {
        let d = self.field(rhs);
        Quad::normalized(
            &self.a * &rhs.c + &rhs.a * &self.c,
            &self.b * &rhs.c + &rhs.b * &self.c,
            d,
            &self.c * &rhs.c,
        )
    }
}

impl Sub for &Quad {
    type Output = Quad;
    fn sub(self, rhs: &Quad) -> Quad {
        self + &(-rhs)
    }
}

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
            c: self.c.clone(),
        }
    }
}

impl Mul for &Quad {
    type Output = Quad;
    fn mul(self, rhs: &Quad) -> Quad {
        let d = self.field(rhs);
        Quad::normalized(
            &self.a * &rhs.a + &self.b * &rhs.b * &d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
            &self.c * &rhs.c,
        )
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            write!(f, "({} + {}·√{})/{}", self.a, self.b, self.d, self.c)
        }
    }
}
