//! Lacunary products `∏|e(x) − e(nα)|`, the separation condition that makes
//! them comparable to `|e(Nx) − 1|`, and the two-sided products of symbols
//! `A + B·e(αx)` along integer orbits.

mod corollary;
mod sampling;
mod symbol;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::contfrac::{ConvergentTable, RealNumber};
use crate::error::{Error, Result};
use crate::numeric::{ulps_ceil, ulps_floor, CompensatedSum, Enclosure, FixedReal, Fx, Phase, Quad, Real, ULP};

pub use corollary::{
    calibrate, corollary_admissible, corollary_products, good_set_fraction, sample_products,
    stratified_points, Calibration, CorollaryProducts, CorollarySample, GoodSet,
};
pub use sampling::{proposition_band, sample_admissible, ProductReport, PropositionBand, Sample};
pub use symbol::{Coef, Orbit, TwoTermSymbol, ZERO_GUARD};

/// Precisions tried, in order, when the 128-bit fast path cannot settle a
/// comparison.
pub const ESCALATION_BITS: [u32; 4] = [256, 512, 1024, 2048];

/// Hypothesis failures attached to results instead of aborting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    EvenIndex,
    NotInE,
    RationalAlpha,
    OutOfRegime,
}

impl Warning {
    pub fn as_str(self) -> &'static str {
        match self {
            Warning::EvenIndex => "even_index",
            Warning::NotInE => "not_in_e",
            Warning::RationalAlpha => "rational_alpha",
            Warning::OutOfRegime => "out_of_regime",
        }
    }

    pub fn join(ws: &[Warning]) -> String {
        ws.iter().map(|w| w.as_str()).collect::<Vec<_>>().join("|")
    }
}

/// Warnings for using row `k` of `table` as the denominator `N`.
pub fn convergent_warnings(table: &ConvergentTable, k: usize) -> Vec<Warning> {
    let mut w = Vec::new();
    if k.is_multiple_of(2) {
        w.push(Warning::EvenIndex);
    }
    if !table.row(k).is_some_and(|r| r.in_e) {
        w.push(Warning::NotInE);
    }
    if table.alpha().as_quad().is_some_and(Quad::is_rational) {
        w.push(Warning::RationalAlpha);
    }
    w
}

/// δ, N and α for the separation condition
/// `min{‖x‖/N, ‖x − nα‖, ‖x − n/N‖ : 1 ≤ n ≤ N} ≥ δ/N`.
#[derive(Clone, Debug)]
pub struct AdmissibilityParams {
    alpha: RealNumber,
    delta: BigRational,
    n: u64,
    k: Option<usize>,
    delta_ulps: (u128, u128),
    sep: BigRational,
    sep_ulps: (u128, u128),
}

impl AdmissibilityParams {
    pub fn new(alpha: RealNumber, delta: BigRational, n: u64, k: Option<usize>) -> Result<Self> {
        let hundredth = BigRational::new(BigInt::one(), BigInt::from(100));
        if !delta.is_positive() || delta >= hundredth {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1/100), got {delta}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        let sep = &delta / BigRational::from_integer(BigInt::from(n));
        Ok(Self {
            alpha,
            delta_ulps: (ulps_floor(&delta), ulps_ceil(&delta)),
            sep_ulps: (ulps_floor(&sep), ulps_ceil(&sep)),
            delta,
            sep,
            n,
            k,
        })
    }

    /// Parameters for `N = N_k` taken from a convergent table of `alpha`.
    pub fn for_convergent(
        alpha: &RealNumber,
        table: &ConvergentTable,
        delta: BigRational,
        k: usize,
    ) -> Result<Self> {
        let n = table.n_u64(k).ok_or(Error::DepthUnavailable {
            requested: k,
            available: table.len().saturating_sub(1),
        })?;
        Self::new(alpha.clone(), delta, n, Some(k))
    }

    pub fn alpha(&self) -> &RealNumber {
        &self.alpha
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }
}

/// Decides `true ≥ τ` for a distance known as `d ± err` ulps and a threshold
/// `τ` bracketed by `thr = (floor, ceil)` in ulps.
fn fast_ge(d: u128, err: u128, thr: (u128, u128)) -> Option<bool> {
    if d.saturating_sub(err) >= thr.1 && d >= err {
        Some(true)
    } else if d.saturating_add(err) < thr.0 {
        Some(false)
    } else {
        None
    }
}

fn dist_quad(q: &Quad) -> Quad {
    let f = q.fract();
    let g = &Quad::from_integer(BigInt::one()) - &f;
    std::cmp::min(f, g)
}

/// Bounds on `‖v‖` for `v` in the enclosure.
fn dist_enclosure(e: &Enclosure) -> (BigRational, BigRational) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c = BigRational::from_integer((e.lo() + &half).floor().to_integer());
    let (lo, hi) = (e.lo() - &c, e.hi() - &c);
    let cap = |v: BigRational| std::cmp::min(v, half.clone());
    if !lo.is_negative() {
        (lo, cap(hi))
    } else if !hi.is_positive() {
        (-hi, cap(-lo))
    } else {
        (BigRational::zero(), cap(std::cmp::max(-lo, hi)))
    }
}

/// `‖v(bits)‖ ≥ thr`, escalating precision; `v` builds the quantity at a given
/// working precision (exactly when possible).
fn certified_ge(v: impl Fn(u32) -> Real, thr: &BigRational, n: u64) -> Result<bool> {
    for bits in ESCALATION_BITS {
        match v(bits) {
            Real::Exact(q) => return Ok(dist_quad(&q) >= Quad::from_rational(thr)),
            Real::Approx(e) => {
                let (lo, hi) = dist_enclosure(&e);
                if &lo >= thr {
                    return Ok(true);
                }
                if &hi < thr {
                    return Ok(false);
                }
            }
        }
    }
    Err(Error::UndecidableAtPrecision {
        n,
        bits: *ESCALATION_BITS.last().unwrap(),
    })
}

/// Whether `x` satisfies the separation condition for `params`.
pub fn admissible(x: &Real, params: &AdmissibilityParams) -> Result<bool> {
    check(&x.fixed(), params, || x.clone())
}

/// Same as [`admissible`] for an exact dyadic point.
pub fn admissible_fx(x: Fx, params: &AdmissibilityParams) -> Result<bool> {
    check(&FixedReal::exact(x), params, || {
        Real::from_rational(&x.to_rational())
    })
}

pub(crate) fn check(
    xf: &FixedReal,
    p: &AdmissibilityParams,
    exact_x: impl Fn() -> Real,
) -> Result<bool> {
    let n_big = BigInt::from(p.n);
    // ‖x‖ ≥ δ
    let ok = match fast_ge(xf.phase().dist(), xf.err, p.delta_ulps) {
        Some(b) => b,
        None => certified_ge(|_| exact_x(), &p.delta, 0)?,
    };
    if !ok {
        return Ok(false);
    }
    // min_n ‖x − n/N‖ = ‖Nx‖/N ≥ δ/N
    let (ph, err) = xf.phase_times_int(p.n as i64);
    let ok = match fast_ge(ph.dist(), err, p.delta_ulps) {
        Some(b) => b,
        None => certified_ge(|_| exact_x().mul_int(&n_big), &p.delta, p.n)?,
    };
    if !ok {
        return Ok(false);
    }
    // ‖x − nα‖ ≥ δ/N
    let a = p.alpha.fixed();
    let xp = xf.phase();
    let mut step = Phase::default();
    for n in 1..=p.n {
        step = step + a.phase();
        let d = (xp - step).dist();
        let err = xf
            .err
            .saturating_add(a.err.saturating_mul(n as u128))
            .saturating_add(1);
        let ok = match fast_ge(d, err, p.sep_ulps) {
            Some(b) => b,
            None => certified_ge(
                |bits| {
                    let na = p.alpha.value().mul_int(&BigInt::from(n));
                    exact_x().sub(&na, bits)
                },
                &p.sep,
                n,
            )?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn log_two_sin(d: u128) -> f64 {
    (2.0 * (PI * d as f64 * ULP).sin()).ln()
}

/// The literal product `∏_{n=1}^{N}|e(x) − e(n/N)|` next to its closed form
/// `|e(Nx) − 1|`, both as logarithms.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComparisonProduct {
    pub literal_log: f64,
    pub closed_log: f64,
    /// `|literal/closed − 1|`
    pub rel_diff: f64,
}

impl ComparisonProduct {
    pub fn literal(&self) -> f64 {
        self.literal_log.exp()
    }

    pub fn closed(&self) -> f64 {
        self.closed_log.exp()
    }
}

pub fn comparison_product(x: &FixedReal, n: u64) -> Result<ComparisonProduct> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let (ph, err) = x.phase_times_int(n as i64);
    let d = ph.dist();
    if d <= err {
        return Err(Error::ZeroProduct);
    }
    let closed_log = log_two_sin(d);
    let xp = x.phase();
    let mut acc = CompensatedSum::new();
    for j in 1..=n {
        let d = (xp - Phase::from_ratio(j, n)).dist();
        if d <= x.err.saturating_add(1) {
            return Err(Error::ZeroProduct);
        }
        acc += log_two_sin(d);
    }
    let literal_log = acc.value();
    Ok(ComparisonProduct {
        literal_log,
        closed_log,
        rel_diff: (literal_log - closed_log).exp_m1().abs(),
    })
}

/// `Σ_{n=1}^{N} ln|e(x) − e(nα)|`.
///
/// Phases are exact 128-bit reductions, so each factor is correct to f64
/// rounding; the compensated sum keeps the total within a few ulps per term.
pub fn alpha_product(x: &FixedReal, alpha: &RealNumber, n: u64) -> Result<f64> {
    let a = alpha.fixed();
    let xp = x.phase();
    let mut step = Phase::default();
    let mut acc = CompensatedSum::new();
    for j in 1..=n {
        step = step + a.phase();
        let d = (xp - step).dist();
        let err = x
            .err
            .saturating_add(a.err.saturating_mul(j as u128))
            .saturating_add(1);
        if d <= err {
            return Err(Error::ZeroFactor { n: j as i64 });
        }
        acc += log_two_sin(d);
    }
    Ok(acc.value())
}

/// The factors with `‖x − np/N‖ ≤ 100/N`, compared with their rational
/// counterparts.
#[derive(Clone, Debug, Serialize)]
pub struct NearCluster {
    pub count: usize,
    /// `Σ ln(|e(x) − e(nα)| / |e(x) − e(np/N)|)` over the cluster.
    pub log_ratio: f64,
    /// `3 ln δ` and `−ln δ`, the shape of the expected two-sided bound.
    pub log_lower_shape: f64,
    pub log_upper_shape: f64,
}

pub fn near_cluster(
    x: &FixedReal,
    alpha: &RealNumber,
    p: u64,
    n: u64,
    delta: &BigRational,
) -> Result<NearCluster> {
    let a = alpha.fixed();
    let thr = ulps_floor(&BigRational::new(BigInt::from(100), BigInt::from(n)));
    let xp = x.phase();
    let mut acc = CompensatedSum::new();
    let mut count = 0;
    for j in 1..=n {
        let r = ((j as u128 * p as u128) % n as u128) as u64;
        let dr = (xp - Phase::from_ratio(r, n)).dist();
        if dr > thr {
            continue;
        }
        count += 1;
        let da = (xp - a.phase().mul_int(j as i64)).dist();
        if da <= x.err.saturating_add(a.err.saturating_mul(j as u128)) + 1 {
            return Err(Error::ZeroFactor { n: j as i64 });
        }
        if dr <= x.err + 1 {
            return Err(Error::ZeroProduct);
        }
        acc += log_two_sin(da) - log_two_sin(dr);
    }
    let ld = delta.to_f64().unwrap_or(f64::NAN).ln();
    Ok(NearCluster {
        count,
        log_ratio: acc.value(),
        log_lower_shape: 3.0 * ld,
        log_upper_shape: -ld,
    })
}
