use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::contfrac::{frac_multiple, RealNumber};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{CompensatedSum, FixedReal, Fx};
use crate::unitprod::{Coef, TwoTermSymbol};

pub const DEFAULT_QUADRATURE_POINTS: usize = 4096;

/// Trapezoid value of `∫₀¹ ln|A + B·e(x)| dx` with the error estimate
/// `|T_n − T_{n/2}|` plus a rounding floor.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub points: usize,
}

fn trapezoid(ma: f64, mb: f64, offset: f64, n: usize) -> (f64, f64) {
    let mut acc = CompensatedSum::new();
    let mut peak = 0f64;
    for i in 0..n {
        let c = (2.0 * PI * (i as f64 / n as f64 + offset)).cos();
        let v = 0.5 * (ma * ma + mb * mb + 2.0 * ma * mb * c).ln();
        peak = peak.max(v.abs());
        acc += v;
    }
    (acc.value() / n as f64, peak)
}

pub fn mean_log_modulus(a: Coef, b: Coef, points: usize) -> Result<Quadrature> {
    let (ma, mb) = (a.modulus(), b.modulus());
    if ma == mb {
        return Err(Error::EqualModuli);
    }
    if points < 2 {
        return Err(Error::InvalidParameter("need at least 2 quadrature points".into()));
    }
    let offset = (b.phase() - a.phase()).to_f64();
    let (t, peak) = trapezoid(ma, mb, offset, points);
    let (half, _) = trapezoid(ma, mb, offset, points / 2);
    Ok(Quadrature {
        value: t,
        error: (t - half).abs() + 4.0 * f64::EPSILON * (1.0 + peak),
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannDeviation {
    #[serde(rename = "N")]
    pub n: u64,
    pub mean: f64,
    /// `|Σ_{n=0}^{N−1} ln|P(x+n)| − N·mean|`
    pub forward: f64,
    /// `|Σ_{n=−N}^{−1} ln|P(x+n)| − N·mean|`
    pub backward: f64,
    /// `N·‖Nα‖ ≤ 1`, decided exactly when α is exact.
    pub condition: bool,
    /// `∏_{−N}^{−1}|P(z+n)| / ∏_{0}^{N−1}|P(x+n)|` when `z` is given.
    pub matched_ratio: Option<f64>,
    pub warnings: Vec<String>,
}

const CONDITION_BITS: u32 = 256;

/// `N·‖Nα‖ ≤ 1`; `None` when an enclosure straddles the boundary.
pub fn riemann_condition(alpha: &RealNumber, n: u64) -> Result<Option<bool>> {
    let f = frac_multiple(alpha, n, CONDITION_BITS)?;
    let inv = BigRational::new(BigInt::from(1), BigInt::from(n));
    let one_minus = BigRational::from_integer(1.into()) - &inv;
    match (f.cmp_rational(&inv), f.cmp_rational(&one_minus)) {
        (Some(lo), Some(hi)) => Ok(Some(lo.is_le() || hi.is_ge())),
        _ => Ok(None),
    }
}

pub fn riemann_deviation(
    sym: &TwoTermSymbol,
    x: &FixedReal,
    n: u64,
    z: Option<&FixedReal>,
    quadrature_points: usize,
) -> Result<RiemannDeviation> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let q = mean_log_modulus(sym.a(), sym.b(), quadrature_points)?;
    let mut warnings = Vec::new();
    let condition = match riemann_condition(sym.omega(), n)? {
        Some(c) => c,
        None => {
            warnings.push("N·‖Nα‖ ≤ 1 undecided at working precision".to_string());
            false
        }
    };
    if !condition {
        warnings.push(format!("N = {n} does not satisfy N·‖Nα‖ ≤ 1"));
    }
    let nn = n as i64;
    let zero = |k| Error::ZeroFactor { n: k };
    let orbit = sym.orbit(x);
    let fwd = sym.log_product(&orbit, 0, nn - 1).map_err(zero)?;
    let back = sym.log_product(&orbit, -nn, -1).map_err(zero)?;
    let target = n as f64 * q.value;
    let matched_ratio = match z {
        Some(z) => {
            let oz = sym.orbit(z);
            Some((sym.log_product(&oz, -nn, -1).map_err(zero)? - fwd).exp())
        }
        None => None,
    };
    Ok(RiemannDeviation {
        n,
        mean: q.value,
        forward: (fwd - target).abs(),
        backward: (back - target).abs(),
        condition,
        matched_ratio,
        warnings,
    })
}

/// Largest forward or backward deviation over the base points `xs`.
pub fn sup_deviation(sym: &TwoTermSymbol, xs: &[Fx], n: u64, exec: Exec) -> Result<f64> {
    let devs = exec.map(xs, |&x| {
        riemann_deviation(sym, &FixedReal::exact(x), n, None, DEFAULT_QUADRATURE_POINTS)
            .map(|d| d.forward.max(d.backward))
    });
    devs.into_iter().try_fold(0f64, |m, d| Ok(m.max(d?)))
}
