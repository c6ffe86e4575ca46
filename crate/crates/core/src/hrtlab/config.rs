use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::contfrac::RealNumber;
use crate::error::{Error, Result};

/// Bits kept when an irrational coordinate is replaced by a rational.
pub const COORDINATE_BITS: u32 = 256;

/// Zero tolerance for quantities built from approximate coordinates, relative
/// to the square of the coordinate scale.
const APPROX_ZERO_BITS: u32 = 192;

/// Largest denominator accepted as "rational" for approximate inputs.
const LATTICE_MAX_DEN_BITS: u32 = 32;

fn ser_rat<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A time-frequency shift `(t, ξ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanePoint {
    #[serde(serialize_with = "ser_rat")]
    pub t: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub xi: BigRational,
    /// Both coordinates are the exact values, not approximations.
    pub exact: bool,
}

impl PlanePoint {
    pub fn rational(t: BigRational, xi: BigRational) -> Self {
        Self { t, xi, exact: true }
    }

    pub fn from_ints(t: i64, xi: i64) -> Self {
        Self::rational(rat(t), rat(xi))
    }

    /// Irrational coordinates are rounded to `COORDINATE_BITS` bits.
    pub fn from_reals(t: &RealNumber, xi: &RealNumber) -> Self {
        let approx = |x: &RealNumber| x.value().enclose(COORDINATE_BITS).lo().clone();
        Self {
            t: approx(t),
            xi: approx(xi),
            exact: t.is_rational() && xi.is_rational(),
        }
    }

    fn sub(&self, o: &Self) -> (BigRational, BigRational) {
        (&self.t - &o.t, &self.xi - &o.xi)
    }

    fn scale(&self) -> BigRational {
        self.t.abs().max(self.xi.abs())
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.xi)
    }
}

type Vec2 = (BigRational, BigRational);

fn cross(a: &Vec2, b: &Vec2) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub collinear: bool,
    pub lattice: bool,
    pub two_two: bool,
    pub general: bool,
}

/// Four points with their classification. `pairing` lists the first
/// two-two pairing found as `[a, b, c, d]`, lines `ab ∥ cd`, with `a = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Configuration {
    pub points: [PlanePoint; 4],
    pub flags: Flags,
    pub pairing: Option<[usize; 4]>,
}

/// Exact zero test, or `|v| ≤ 2^-192·scale²` for approximate inputs.
struct ZeroTest {
    tol: Option<BigRational>,
}

impl ZeroTest {
    fn new(points: &[PlanePoint]) -> Self {
        if points.iter().all(|p| p.exact) {
            return Self { tol: None };
        }
        let s = points.iter().map(PlanePoint::scale).max().unwrap_or_else(BigRational::zero)
            + BigRational::one();
        let eps = BigRational::new(BigInt::one(), BigInt::one() << APPROX_ZERO_BITS);
        Self {
            tol: Some(eps * &s * &s),
        }
    }

    fn is_zero(&self, v: &BigRational) -> bool {
        match &self.tol {
            None => v.is_zero(),
            Some(t) => v.abs() <= *t,
        }
    }

    /// Whether `v` is within tolerance of a rational of small height.
    fn is_rational(&self, v: &BigRational) -> bool {
        match &self.tol {
            None => true,
            Some(t) => {
                let max_den = BigInt::one() << LATTICE_MAX_DEN_BITS;
                best_approximation(v, &max_den).is_some_and(|r| (v - r).abs() <= *t)
            }
        }
    }
}

/// Last continued-fraction convergent of `v` with denominator ≤ `max_den`.
fn best_approximation(v: &BigRational, max_den: &BigInt) -> Option<BigRational> {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut num, mut den) = (v.numer().clone(), v.denom().clone());
    let mut best = None;
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > *max_den {
            break;
        }
        best = Some(BigRational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        (num, den) = (den, r);
    }
    best
}

const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

pub fn classify_configuration(points: [PlanePoint; 4]) -> Result<Configuration> {
    let zt = ZeroTest::new(&points);
    for i in 0..4 {
        for j in i + 1..4 {
            let (dt, dx) = points[j].sub(&points[i]);
            if zt.is_zero(&dt) && zt.is_zero(&dx) {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    let d: Vec<Vec2> = (1..4).map(|i| points[i].sub(&points[0])).collect();
    let collinear = zt.is_zero(&cross(&d[0], &d[1])) && zt.is_zero(&cross(&d[0], &d[2]));

    let pairing = PAIRINGS.into_iter().find(|&[a, b, c, e]| {
        let v = points[b].sub(&points[a]);
        let w = points[e].sub(&points[c]);
        let gap = points[c].sub(&points[a]);
        zt.is_zero(&cross(&v, &w)) && !zt.is_zero(&cross(&v, &gap))
    });

    // v3 = a·v1 + b·v2 over an independent pair; lattice iff a, b ∈ ℚ
    let lattice = !collinear && {
        let (i, j, l) = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
            .into_iter()
            .find(|&(i, j, _)| !zt.is_zero(&cross(&d[i], &d[j])))
            .expect("not collinear");
        let det = cross(&d[i], &d[j]);
        let a = cross(&d[l], &d[j]) / &det;
        let b = cross(&d[i], &d[l]) / &det;
        zt.is_rational(&a) && zt.is_rational(&b)
    };
    let two_two = pairing.is_some();
    Ok(Configuration {
        points,
        flags: Flags {
            collinear,
            lattice,
            two_two,
            general: !(collinear || lattice || two_two),
        },
        pairing,
    })
}

/// An area-one affine map `z ↦ L·(z − origin)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    /// Row-major `[[a, b], [c, d]]`.
    #[serde(serialize_with = "ser_matrix")]
    pub linear: [[BigRational; 2]; 2],
    pub origin: PlanePoint,
}

fn ser_matrix<S: Serializer>(m: &[[BigRational; 2]; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for v in m.iter().flatten() {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

impl AffineMap {
    pub fn determinant(&self) -> BigRational {
        let [[a, b], [c, d]] = &self.linear;
        a * d - b * c
    }

    pub fn apply(&self, p: &PlanePoint) -> PlanePoint {
        let [[a, b], [c, d]] = &self.linear;
        let (t, x) = p.sub(&self.origin);
        PlanePoint {
            t: a * &t + b * &x,
            xi: c * &t + d * &x,
            exact: p.exact,
        }
    }

    /// Inverse of `apply`, using `det = 1`.
    pub fn invert(&self, p: &PlanePoint) -> PlanePoint {
        let [[a, b], [c, d]] = &self.linear;
        PlanePoint {
            t: d * &p.t - b * &p.xi + &self.origin.t,
            xi: -c * &p.t + a * &p.xi + &self.origin.xi,
            exact: p.exact,
        }
    }
}

/// `(0,0), (1,0), (0,α_raw), (1,β)` reached by `map`, and `α = α_raw − fold`
/// folded into `[0, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialConfig {
    #[serde(serialize_with = "ser_rat")]
    pub alpha: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub alpha_raw: BigRational,
    pub fold: i64,
    #[serde(serialize_with = "ser_rat")]
    pub beta: BigRational,
    /// `alpha` and `beta` are exact rather than rounded irrationals.
    pub exact: bool,
    pub map: AffineMap,
    /// Source indices sent to `(0,0), (1,0), (0,α_raw), (1,β)`.
    pub order: [usize; 4],
}

impl SpecialConfig {
    pub fn image(&self) -> [PlanePoint; 4] {
        let e = self.exact;
        [
            PlanePoint { t: rat(0), xi: rat(0), exact: e },
            PlanePoint { t: rat(1), xi: rat(0), exact: e },
            PlanePoint { t: rat(0), xi: self.alpha_raw.clone(), exact: e },
            PlanePoint { t: rat(1), xi: self.beta.clone(), exact: e },
        ]
    }

    /// Source points recovered through the inverse map, in input order.
    pub fn recover(&self) -> [PlanePoint; 4] {
        let img = self.image();
        let mut out = img.clone();
        for (slot, &src) in self.order.iter().enumerate() {
            out[src] = self.map.invert(&img[slot]);
        }
        out
    }
}

pub fn normalize_to_special(points: [PlanePoint; 4]) -> Result<SpecialConfig> {
    let conf = classify_configuration(points)?;
    if conf.flags.collinear {
        return Err(Error::DegenerateCollinear);
    }
    let [o, i, j, l] = conf.pairing.ok_or(Error::NotTwoTwo)?;
    let p = &conf.points;
    // Unit normal to the lines scaled so the second line sits at t = 1.
    let v = p[i].sub(&p[o]);
    let n = (-v.1.clone(), v.0.clone());
    let gap = p[j].sub(&p[o]);
    let h = &n.0 * &gap.0 + &n.1 * &gap.1;
    let w = (&n.0 / &h, &n.1 / &h);
    let w2 = &w.0 * &w.0 + &w.1 * &w.1;
    let s = (-&w.1 / &w2, &w.0 / &w2);

    let xi_of = |q: &PlanePoint, origin: &PlanePoint| {
        let (dt, dx) = q.sub(origin);
        &s.0 * dt + &s.1 * dx
    };
    let (mut o, mut i) = (o, i);
    if xi_of(&p[i], &p[o]).is_negative() {
        (o, i) = (i, o);
    }
    let origin = p[o].clone();
    let y_i = xi_of(&p[i], &origin);
    let y_j = xi_of(&p[j], &origin);
    let y_l = xi_of(&p[l], &origin);
    // shear ξ ↦ ξ − y_j·t puts the second line's first point at (1, 0)
    let map = AffineMap {
        linear: [
            [w.0.clone(), w.1.clone()],
            [&s.0 - &y_j * &w.0, &s.1 - &y_j * &w.1],
        ],
        origin,
    };
    let fold = y_i.floor().to_integer();
    let alpha = &y_i - BigRational::from_integer(fold.clone());
    Ok(SpecialConfig {
        alpha,
        alpha_raw: y_i,
        fold: fold.try_into().map_err(|_| {
            Error::InvalidParameter("normalized α is too large to fold".into())
        })?,
        beta: y_l - y_j,
        exact: conf.points.iter().all(|q| q.exact),
        map,
        order: [o, j, i, l],
    })
}
