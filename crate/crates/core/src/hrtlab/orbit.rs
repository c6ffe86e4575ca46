use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::contfrac::RealNumber;
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, FixedReal, Fx, Real};
use crate::unitprod::{Coef, Orbit, TwoTermSymbol};

/// Working precision for the exact-or-enclosed evaluation of `(n′ − 2θ)/β`.
const SELECTION_BITS: u32 = 512;

fn ser_rat<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The two symbols of `f(x+1)·P(x) = f(x)·Q(x)` with `P = A + B·e(αx)` and
/// `Q = 1 + e(θ)·e(βx)`.
#[derive(Clone, Debug)]
pub struct SymbolPair {
    pub p: TwoTermSymbol,
    pub q: TwoTermSymbol,
    pub theta: BigRational,
}

impl SymbolPair {
    pub fn new(a: Coef, b: Coef, alpha: RealNumber, beta: RealNumber, theta: BigRational) -> Result<Self> {
        let f = Coef::unit(Fx::from_rational(&theta).phase());
        Ok(Self {
            p: TwoTermSymbol::new(a, b, alpha)?,
            q: TwoTermSymbol::new(Coef::real(1.0), f, beta)?,
            theta,
        })
    }

    /// `Q` with an arbitrary second coefficient `F` in place of `e(θ)`.
    pub fn with_q_coef(p: TwoTermSymbol, f: Coef, beta: RealNumber) -> Result<Self> {
        Ok(Self {
            q: TwoTermSymbol::new(Coef::real(1.0), f, beta)?,
            p,
            theta: BigRational::zero(),
        })
    }
}

/// `ln|f(x+n)| − ln|f(x)|` for `n ∈ [−back, fwd]`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTrace {
    pub x: f64,
    pub back: u64,
    pub fwd: u64,
    /// `log_f[i]` belongs to offset `i − back`.
    pub log_f: Vec<f64>,
    /// `ln|Q(x+n)| − ln|P(x+n)|` for `n ∈ [−back, fwd − 1]`.
    pub steps: Vec<f64>,
}

impl OrbitTrace {
    pub fn at(&self, n: i64) -> Option<f64> {
        let i = n + self.back as i64;
        (i >= 0).then(|| self.log_f.get(i as usize).copied()).flatten()
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        -(self.back as i64)..=self.fwd as i64
    }
}

fn log_range(sym: &TwoTermSymbol, orbit: &Orbit, lo: i64, hi: i64, tag: char) -> Result<Vec<f64>> {
    (lo..=hi)
        .map(|n| sym.log_abs_at(orbit, n).ok_or(Error::ZeroOnOrbit { n, symbol: tag }))
        .collect()
}

pub fn orbit_trace(pair: &SymbolPair, x: &FixedReal, back: u64, fwd: u64) -> Result<OrbitTrace> {
    let (lo, hi) = (-(back as i64), fwd as i64 - 1);
    let op = pair.p.orbit(x);
    let oq = pair.q.orbit(x);
    let lp = log_range(&pair.p, &op, lo, hi, 'P')?;
    let lq = log_range(&pair.q, &oq, lo, hi, 'Q')?;
    let steps: Vec<f64> = lq.iter().zip(&lp).map(|(q, p)| q - p).collect();

    let mut log_f = vec![0.0; (back + fwd + 1) as usize];
    let zero = back as usize;
    let mut acc = CompensatedSum::new();
    for i in 0..fwd as usize {
        acc += steps[zero + i];
        log_f[zero + i + 1] = acc.value();
    }
    let mut acc = CompensatedSum::new();
    for i in 1..=back as usize {
        acc += -steps[zero - i];
        log_f[zero - i] = acc.value();
    }
    Ok(OrbitTrace {
        x: x.to_f64(),
        back,
        fwd,
        log_f,
        steps,
    })
}

/// `n′` with `m = ⌊(n′ − 2θ)/β⌋ > 0` and `γ = {(n′ − 2θ)/β} ∈ I`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugateSelection {
    pub n_prime: u64,
    pub m: u64,
    pub gamma: f64,
    #[serde(skip)]
    pub gamma_exact: Real,
    #[serde(serialize_with = "ser_interval")]
    pub interval: (BigRational, BigRational),
    #[serde(serialize_with = "ser_rat")]
    pub theta: BigRational,
    /// `m` is taken as the floor, `γ = v − ⌊v⌋`.
    pub floor_convention: &'static str,
    pub warnings: Vec<String>,
}

fn ser_interval<S: Serializer>(
    v: &(BigRational, BigRational),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&v.0.to_string())?;
    seq.serialize_element(&v.1.to_string())?;
    seq.end()
}

impl ConjugateSelection {
    /// `γ` as a 128-bit fixed-point value with error bound.
    pub fn gamma_fixed(&self) -> FixedReal {
        self.gamma_exact.fixed()
    }
}

pub fn conjugate_selection(
    beta: &RealNumber,
    theta: &BigRational,
    interval: (BigRational, BigRational),
    n_max: u64,
) -> Result<ConjugateSelection> {
    let (lo, hi) = &interval;
    if lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "selection interval [{lo}, {hi}] has no interior"
        )));
    }
    let inv = beta
        .value()
        .recip()
        .ok_or_else(|| Error::InvalidParameter("β must be nonzero".into()))?;
    let mut warnings = Vec::new();
    if beta.is_rational() {
        warnings.push("rational β: {n′/β} is periodic, the search may fail".to_string());
    }
    let two_theta = theta * BigRational::from_integer(2.into());
    let undecidable = |n| Error::UndecidableAtPrecision { n, bits: SELECTION_BITS };
    for n in 0..=n_max {
        let shift = BigRational::from_integer(BigInt::from(n)) - &two_theta;
        let v = match &inv {
            Real::Exact(_) => inv.mul_rational(&shift),
            Real::Approx(_) => Real::Approx(inv.enclose(SELECTION_BITS).mul_rational(&shift)),
        };
        let m = v.floor().ok_or_else(|| undecidable(n))?;
        if !m.is_positive() {
            continue;
        }
        let gamma = v.fract().ok_or_else(|| undecidable(n))?;
        let ge = gamma.cmp_rational(lo).ok_or_else(|| undecidable(n))?;
        let le = gamma.cmp_rational(hi).ok_or_else(|| undecidable(n))?;
        if ge.is_ge() && le.is_le() {
            return Ok(ConjugateSelection {
                n_prime: n,
                m: m.to_u64().ok_or_else(|| Error::InvalidParameter("m overflows".into()))?,
                gamma: gamma.to_f64(),
                gamma_exact: gamma,
                interval,
                theta: theta.clone(),
                floor_convention: "floor",
                warnings,
            });
        }
    }
    Err(Error::SearchExhausted { n_max })
}

/// Both readings of the product identity over the backward orbit of `γ − x`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugateIdentity {
    pub l: u64,
    /// `Σ_{n=−L}^{−1} ln|Q(γ − x + n)|`
    pub lhs: f64,
    /// `Σ_{n=m+1}^{L+m+1} ln|Q(x + n)|`
    pub rhs_extra_factor: f64,
    /// `Σ_{n=m+1}^{L+m} ln|Q(x + n)|`
    pub rhs_corrected: f64,
    /// Relative differences of the products, `|e^{lhs − rhs} − 1|`.
    pub extra_factor_discrepancy: f64,
    pub corrected_discrepancy: f64,
    pub extra_factor_matches: bool,
    pub corrected_matches: bool,
    /// `max_n ||Q(y − n)| − |Q(x + n)||` over `|n| ≤ L` with `y = γ + m − x`.
    pub factor_max_diff: f64,
}

/// Relative tolerance for products that should agree.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

pub fn conjugate_identity_check(
    pair: &SymbolPair,
    sel: &ConjugateSelection,
    x: &FixedReal,
    l: u64,
) -> Result<ConjugateIdentity> {
    let q = &pair.q;
    let m = sel.m as i64;
    let l = l as i64;
    let gamma = sel.gamma_fixed();
    let z = gamma.sub(x);
    let y = z.add(&FixedReal::exact(Fx::from_int(m)));
    let (oz, ox, oy) = (q.orbit(&z), q.orbit(x), q.orbit(&y));
    let zero = |n| Error::ZeroFactor { n };
    let lhs = q.log_product(&oz, -l, -1).map_err(zero)?;
    let rhs_corrected = q.log_product(&ox, m + 1, l + m).map_err(zero)?;
    let rhs_extra_factor = rhs_corrected + q.log_abs_at(&ox, l + m + 1).ok_or(zero(l + m + 1))?;

    let mut factor_max_diff = 0f64;
    for n in -l..=l {
        let a = q.log_abs_at(&oy, -n).ok_or(zero(-n))?.exp();
        let b = q.log_abs_at(&ox, n).ok_or(zero(n))?.exp();
        factor_max_diff = factor_max_diff.max((a - b).abs());
    }
    let rel = |a: f64, b: f64| (a - b).exp_m1().abs();
    let (pd, cd) = (rel(lhs, rhs_extra_factor), rel(lhs, rhs_corrected));
    Ok(ConjugateIdentity {
        l: l as u64,
        lhs,
        rhs_extra_factor,
        rhs_corrected,
        extra_factor_discrepancy: pd,
        corrected_discrepancy: cd,
        extra_factor_matches: pd <= IDENTITY_TOLERANCE,
        corrected_matches: cd <= IDENTITY_TOLERANCE,
        factor_max_diff,
    })
}
