//! Number specifications and their textual grammar:
//!
//! ```text
//! rat:<p>/<q>
//! quad:<p>,<q>,<d>,<r>              (p + q√d)/r
//! dec:<digits>@<bits>
//! cf:<a0>;<a1>,<a2>,...[;periodic=<len>]
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{Enclosure, FixedReal, Quad, Real};

/// Default working precision for decimal inputs, in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 4096;

/// Exact or high-precision description of a real number α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealSpec {
    Rational {
        p: BigInt,
        q: BigInt,
    },
    /// `(p + q√d)/r`
    Quadratic {
        p: BigInt,
        q: BigInt,
        d: BigInt,
        r: BigInt,
    },
    Decimal {
        digits: String,
        precision_bits: u32,
    },
    /// `[a0; terms...]`, the last `period` terms repeating forever when set.
    ExplicitCf {
        a0: BigInt,
        terms: Vec<BigInt>,
        period: Option<usize>,
    },
}

impl RealSpec {
    pub fn rational(p: i64, q: i64) -> Self {
        RealSpec::Rational {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn quadratic(p: i64, q: i64, d: i64, r: i64) -> Self {
        RealSpec::Quadratic {
            p: p.into(),
            q: q.into(),
            d: d.into(),
            r: r.into(),
        }
    }

    /// (√5 − 1)/2
    pub fn golden() -> Self {
        Self::quadratic(-1, 1, 5, 2)
    }

    /// √2 − 1
    pub fn silver() -> Self {
        Self::quadratic(-1, 1, 2, 1)
    }

    /// Checks the variant invariants and produces the numeric value.
    pub fn resolve(&self) -> Result<Real> {
        match self {
            RealSpec::Rational { p, q } => {
                if q.is_zero() {
                    return Err(Error::InvalidSpec("rational with zero denominator".into()));
                }
                if q.is_negative() {
                    return Err(Error::InvalidSpec("rational denominator must be positive".into()));
                }
                Ok(Real::Exact(Quad::from_ratio(p.clone(), q.clone())))
            }
            RealSpec::Quadratic { p, q, d, r } => {
                Quad::new(p.clone(), q.clone(), d.clone(), r.clone()).map(Real::Exact)
            }
            RealSpec::Decimal {
                digits,
                precision_bits,
            } => {
                if *precision_bits < 64 {
                    return Err(Error::InvalidSpec("precision_bits must be at least 64".into()));
                }
                let (value, places) = parse_decimal(digits, 0)?;
                let ulp = BigRational::new(BigInt::one(), BigInt::from(10).pow(places));
                let e = Enclosure::new(&value - &ulp, &value + &ulp);
                Ok(Real::Approx(e.round_outward(*precision_bits)))
            }
            RealSpec::ExplicitCf { a0, terms, period } => {
                if let Some(i) = terms.iter().position(|t| t < &BigInt::one()) {
                    return Err(Error::InvalidSpec(format!(
                        "partial quotient a_{} must be at least 1",
                        i + 1
                    )));
                }
                match period {
                    None => {
                        let (h, g) = convergent(a0, terms);
                        Ok(Real::Exact(Quad::from_ratio(h.0, g.0)))
                    }
                    Some(len) => {
                        if *len == 0 || *len > terms.len() {
                            return Err(Error::InvalidSpec(format!(
                                "period {len} must lie in 1..={}",
                                terms.len()
                            )));
                        }
                        periodic_value(a0, terms, *len).map(Real::Exact)
                    }
                }
            }
        }
    }
}

/// Last two convergent numerators and denominators of `[a0; terms]`:
/// `((h_m, h_{m-1}), (g_m, g_{m-1}))`.
fn convergent(a0: &BigInt, terms: &[BigInt]) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let (mut h, mut h1) = (a0.clone(), BigInt::one());
    let (mut g, mut g1) = (BigInt::one(), BigInt::zero());
    for t in terms {
        let hn = t * &h + &h1;
        let gn = t * &g + &g1;
        h1 = std::mem::replace(&mut h, hn);
        g1 = std::mem::replace(&mut g, gn);
    }
    ((h, h1), (g, g1))
}

fn periodic_value(a0: &BigInt, terms: &[BigInt], len: usize) -> Result<Quad> {
    let split = terms.len() - len;
    let block = &terms[split..];
    // y = [b1; b2, ..., bL, y] solves g y² + (g' − h) y − h' = 0, y > 1.
    let ((h, h1), (g, g1)) = convergent(&block[0], &block[1..]);
    let b = &h - &g1;
    let disc = &b * &b + BigInt::from(4) * &g * &h1;
    let y = Quad::new(b, BigInt::one(), disc, BigInt::from(2) * &g)?;
    let ((hp, hp1), (gp, gp1)) = convergent(a0, &terms[..split]);
    let num = &(&y * &Quad::from_integer(hp)) + &Quad::from_integer(hp1);
    let den = &(&y * &Quad::from_integer(gp)) + &Quad::from_integer(gp1);
    let inv = den
        .recip()
        .ok_or_else(|| Error::InvalidSpec("degenerate periodic expansion".into()))?;
    Ok(&num * &inv)
}

/// A spec together with its resolved value and 128-bit fixed-point image.
#[derive(Clone, Debug)]
pub struct RealNumber {
    spec: RealSpec,
    value: Real,
    fixed: FixedReal,
}

impl RealNumber {
    pub fn new(spec: RealSpec) -> Result<Self> {
        let value = spec.resolve()?;
        let fixed = value.fixed();
        Ok(Self { spec, value, fixed })
    }

    pub fn from_quad(q: Quad) -> Self {
        let (a, b, d, c) = q.parts();
        let spec = if q.is_rational() {
            RealSpec::Rational {
                p: a.clone(),
                q: c.clone(),
            }
        } else {
            RealSpec::Quadratic {
                p: a.clone(),
                q: b.clone(),
                d: d.clone(),
                r: c.clone(),
            }
        };
        let value = Real::Exact(q);
        let fixed = value.fixed();
        Self { spec, value, fixed }
    }

    pub fn golden() -> Self {
        Self::new(RealSpec::golden()).expect("valid")
    }

    pub fn silver() -> Self {
        Self::new(RealSpec::silver()).expect("valid")
    }

    pub fn spec(&self) -> &RealSpec {
        &self.spec
    }

    pub fn value(&self) -> &Real {
        &self.value
    }

    pub fn fixed(&self) -> &FixedReal {
        &self.fixed
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_rational(&self) -> bool {
        matches!(&self.value, Real::Exact(q) if q.is_rational())
    }
}

impl FromStr for RealNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RealNumber::new(s.parse()?)
    }
}

impl PartialEq for RealNumber {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Serialize for RealNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.spec.to_string())
    }
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Rational { p, q } => write!(f, "rat:{p}/{q}"),
            RealSpec::Quadratic { p, q, d, r } => write!(f, "quad:{p},{q},{d},{r}"),
            RealSpec::Decimal {
                digits,
                precision_bits,
            } => write!(f, "dec:{digits}@{precision_bits}"),
            RealSpec::ExplicitCf { a0, terms, period } => {
                write!(f, "cf:{a0}")?;
                if !terms.is_empty() {
                    let t: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                    write!(f, ";{}", t.join(","))?;
                }
                if let Some(len) = period {
                    write!(f, ";periodic={len}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for RealSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `s` according to the number-spec grammar.
pub fn parse_alpha_spec(s: &str) -> Result<RealSpec> {
    s.parse()
}

impl FromStr for RealSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(parse_err(0, "a number specification"));
        }
        let Some(colon) = s.find(':') else {
            return Err(parse_err(0, "one of 'rat:', 'quad:', 'dec:', 'cf:'"));
        };
        let (tag, body) = (&s[..colon], &s[colon + 1..]);
        let base = colon + 1;
        match tag {
            "rat" => {
                let mut c = Cursor::new(body, base);
                let p = c.integer()?;
                c.expect('/')?;
                let q = c.integer()?;
                c.end()?;
                if !q.is_positive() {
                    return Err(parse_err(base, "a positive denominator"));
                }
                Ok(RealSpec::Rational { p, q })
            }
            "quad" => {
                let mut c = Cursor::new(body, base);
                let p = c.integer()?;
                c.expect(',')?;
                let q = c.integer()?;
                c.expect(',')?;
                let d = c.integer()?;
                c.expect(',')?;
                let r = c.integer()?;
                c.end()?;
                Ok(RealSpec::Quadratic { p, q, d, r })
            }
            "dec" => {
                let Some(at) = body.rfind('@') else {
                    return Err(parse_err(base + body.len(), "'@<bits>'"));
                };
                let digits = &body[..at];
                parse_decimal(digits, base)?;
                let mut c = Cursor::new(&body[at + 1..], base + at + 1);
                let bits = c.unsigned()?;
                c.end()?;
                let precision_bits = u32::try_from(bits)
                    .map_err(|_| parse_err(base + at + 1, "a bit count below 2^32"))?;
                Ok(RealSpec::Decimal {
                    digits: digits.to_string(),
                    precision_bits,
                })
            }
            "cf" => {
                let mut c = Cursor::new(body, base);
                let a0 = c.integer()?;
                let mut terms = Vec::new();
                let mut period = None;
                if c.eat(';') {
                    if c.peek_str("periodic=") {
                        return Err(parse_err(c.pos(), "partial quotients before 'periodic='"));
                    }
                    terms.push(c.integer()?);
                    while c.eat(',') {
                        terms.push(c.integer()?);
                    }
                    if c.eat(';') {
                        c.expect_str("periodic=")?;
                        let len = c.unsigned()?;
                        period = Some(len as usize);
                    }
                }
                c.end()?;
                Ok(RealSpec::ExplicitCf { a0, terms, period })
            }
            _ => Err(parse_err(0, "one of 'rat:', 'quad:', 'dec:', 'cf:'")),
        }
    }
}

fn parse_err(position: usize, expected: &str) -> Error {
    Error::Parse {
        position,
        expected: expected.to_string(),
    }
}

/// Parses `[+-]digits[.digits]` exactly, returning the value and the number of
/// fractional digits.
pub(crate) fn parse_decimal(s: &str, base: usize) -> Result<(BigRational, u32)> {
    let mut c = Cursor::new(s, base);
    let negative = if c.eat('-') {
        true
    } else {
        c.eat('+');
        false
    };
    let int_digits = c.digits();
    if int_digits.is_empty() {
        return Err(parse_err(c.pos(), "a digit"));
    }
    let mut all = int_digits.to_string();
    let mut places = 0u32;
    if c.eat('.') {
        let frac = c.digits();
        if frac.is_empty() {
            return Err(parse_err(c.pos(), "a digit after '.'"));
        }
        places = frac.len() as u32;
        all.push_str(frac);
    }
    c.end()?;
    let mut n: BigInt = all.parse().expect("digits only");
    if negative {
        n = -n;
    }
    Ok((BigRational::new(n, BigInt::from(10).pow(places)), places))
}

/// Parses an exact rational given as `p/q`, `p` or a decimal literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    if let Some(slash) = s.find('/') {
        let mut c = Cursor::new(&s[..slash], 0);
        let p = c.integer()?;
        c.end()?;
        let mut c = Cursor::new(&s[slash + 1..], slash + 1);
        let q = c.integer()?;
        c.end()?;
        if q.is_zero() {
            return Err(parse_err(slash + 1, "a nonzero denominator"));
        }
        Ok(BigRational::new(p, q))
    } else {
        parse_decimal(s, 0).map(|(v, _)| v)
    }
}

struct Cursor<'a> {
    s: &'a str,
    i: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, base: usize) -> Self {
        Self { s, i: 0, base }
    }

    fn pos(&self) -> usize {
        self.base + self.i
    }

    fn rest(&self) -> &'a str {
        &self.s[self.i..]
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.rest().starts_with(ch) {
            self.i += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn peek_str(&self, p: &str) -> bool {
        self.rest().starts_with(p)
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(parse_err(self.pos(), &format!("'{ch}'")))
        }
    }

    fn expect_str(&mut self, p: &str) -> Result<()> {
        if self.peek_str(p) {
            self.i += p.len();
            Ok(())
        } else {
            Err(parse_err(self.pos(), &format!("'{p}'")))
        }
    }

    fn digits(&mut self) -> &'a str {
        let rest = self.rest();
        let n = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
        self.i += n;
        &rest[..n]
    }

    fn unsigned(&mut self) -> Result<u64> {
        let at = self.pos();
        let d = self.digits();
        if d.is_empty() {
            return Err(parse_err(at, "a digit"));
        }
        d.parse().map_err(|_| parse_err(at, "an integer below 2^64"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let at = self.pos();
        let d = self.digits();
        if d.is_empty() {
            return Err(parse_err(at, "a digit"));
        }
        let v: BigInt = d.parse().expect("digits only");
        Ok(if neg { -v } else { v })
    }

    fn end(&self) -> Result<()> {
        if self.i == self.s.len() {
            Ok(())
        } else {
            Err(parse_err(self.pos(), "end of input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_variant() {
        assert_eq!(
            parse_alpha_spec("quad:-1,1,5,2").unwrap(),
            RealSpec::quadratic(-1, 1, 5, 2)
        );
        assert_eq!(parse_alpha_spec("rat:2/7").unwrap(), RealSpec::rational(2, 7));
        assert!(matches!(
            parse_alpha_spec("dec:0.61803@128").unwrap(),
            RealSpec::Decimal { precision_bits: 128, .. }
        ));
        let cf = parse_alpha_spec("cf:0;2,2,2;periodic=1").unwrap();
        assert_eq!(cf.to_string(), "cf:0;2,2,2;periodic=1");
    }

    #[test]
    fn periodic_cf_is_silver_ratio() {
        let cf = RealNumber::new(parse_alpha_spec("cf:0;2,2,2;periodic=1").unwrap()).unwrap();
        assert_eq!(cf, RealNumber::silver());
        let g = RealNumber::new(parse_alpha_spec("cf:0;1;periodic=1").unwrap()).unwrap();
        assert_eq!(g, RealNumber::golden());
    }

    #[test]
    fn finite_cf_is_rational() {
        let x = RealNumber::new(parse_alpha_spec("cf:0;3,2").unwrap()).unwrap();
        assert_eq!(x, RealNumber::new(RealSpec::rational(2, 7)).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_alpha_spec("quad:1,2;3,4") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 8),
            other => panic!("unexpected {other:?}"),
        }
        match parse_alpha_spec("rat:2/") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_alpha_spec("").is_err());
        assert!(parse_alpha_spec("pi").is_err());
        assert!(parse_alpha_spec("dec:0.5").is_err());
    }

    #[test]
    fn invariants_are_checked_on_resolve() {
        assert!(RealSpec::quadratic(0, 1, 4, 1).resolve().is_err());
        assert!(RealSpec::quadratic(0, 1, 2, 0).resolve().is_err());
        let low = RealSpec::Decimal {
            digits: "0.5".into(),
            precision_bits: 32,
        };
        assert!(low.resolve().is_err());
        let bad = RealSpec::ExplicitCf {
            a0: 0.into(),
            terms: vec![1.into(), 0.into()],
            period: None,
        };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_rational("1/128").unwrap(),
            BigRational::new(1.into(), 128.into())
        );
        assert_eq!(
            parse_rational("0.25").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
    }
}
