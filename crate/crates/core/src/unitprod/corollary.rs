use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check, AdmissibilityParams, TwoTermSymbol};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{FixedReal, Fx};

/// `(ln ∏_{n=−N}^{−1}|P(y+n)|, ln ∏_{n=0}^{N−1}|P(y+n)|)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorollaryProducts {
    pub log_back: f64,
    pub log_fwd: f64,
    /// `|A| = |B| = 1`
    pub in_regime: bool,
}

pub fn corollary_products(sym: &TwoTermSymbol, n: u64, y: &FixedReal) -> Result<CorollaryProducts> {
    let n = n as i64;
    let orbit = sym.orbit(y);
    let zero = |n| Error::ZeroFactor { n };
    let log_back = if n == 0 {
        0.0
    } else {
        sym.log_product(&orbit, -n, -1).map_err(zero)?
    };
    let log_fwd = if n == 0 {
        0.0
    } else {
        sym.log_product(&orbit, 0, n - 1).map_err(zero)?
    };
    Ok(CorollaryProducts {
        log_back,
        log_fwd,
        in_regime: sym.a().modulus() == 1.0 && sym.b().modulus() == 1.0,
    })
}

/// Writing `|P(y+n)| = |A|·|e(x') − e(nα)|` with `x' = ½ − arg(B/A) − αy`,
/// the forward product is a comparison-band product at `x'` and the backward
/// one at `−x'`. Returns whether both points are admissible.
pub fn corollary_admissible(
    sym: &TwoTermSymbol,
    params: &AdmissibilityParams,
    y: Fx,
) -> Result<bool> {
    let alpha = sym.omega();
    let (py, err) = alpha.fixed().phase_times(&y);
    let phase = crate::numeric::Phase::HALF - sym.offset() - py;
    let xf = FixedReal {
        mid: Fx::from_parts(0, phase.0),
        err,
    };
    let shift = BigRational::new(BigInt::from(1), BigInt::from(2))
        - Fx::from_parts(0, sym.offset().0).to_rational();
    let exact = || {
        alpha
            .value()
            .mul_rational(&-y.to_rational())
            .add_rational(&shift)
    };
    if !check(&xf, params, exact)? {
        return Ok(false);
    }
    let neg = FixedReal {
        mid: Fx::from_parts(0, phase.0.wrapping_neg()),
        err,
    };
    check(&neg, params, || exact().mul_rational(&BigRational::from_integer((-1).into())))
}

/// One stratified grid point with its two one-sided log products; `None`
/// where a factor vanishes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorollarySample {
    pub y: Fx,
    pub log_back: Option<f64>,
    pub log_fwd: Option<f64>,
}

impl CorollarySample {
    pub fn log_min(&self) -> f64 {
        match (self.log_back, self.log_fwd) {
            (Some(a), Some(b)) => a.min(b),
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn log_max(&self) -> f64 {
        match (self.log_back, self.log_fwd) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => f64::NEG_INFINITY,
        }
    }

    pub fn within(&self, log_c1: f64, log_c2: f64) -> bool {
        self.log_min() >= log_c1 && self.log_max() <= log_c2 && self.log_min().is_finite()
    }
}

/// `y_i = (i + U_i)/G`, `U_i` uniform from the seeded stream.
pub fn stratified_points(grid_size: usize, seed: u64) -> Vec<Fx> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = BigInt::from(grid_size) << 64;
    (0..grid_size)
        .map(|i| {
            let u: u64 = rng.random();
            let num = (BigInt::from(i) << 64) + BigInt::from(u);
            Fx::from_ratio(&num, &den)
        })
        .collect()
}

pub fn sample_products(
    sym: &TwoTermSymbol,
    n: u64,
    points: &[Fx],
    exec: Exec,
) -> Vec<CorollarySample> {
    exec.map(points, |&y| {
        let yf = FixedReal::exact(y);
        let orbit = sym.orbit(&yf);
        let n = n as i64;
        let log_back = if n == 0 { Some(0.0) } else { sym.log_product(&orbit, -n, -1).ok() };
        let log_fwd = if n == 0 { Some(0.0) } else { sym.log_product(&orbit, 0, n - 1).ok() };
        CorollarySample {
            y,
            log_back,
            log_fwd,
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodSet {
    #[serde(rename = "N")]
    pub n: u64,
    pub c1: f64,
    pub c2: f64,
    pub fraction: f64,
    pub good: usize,
    pub grid_size: usize,
    #[serde(skip)]
    pub samples: Vec<CorollarySample>,
}

/// Fraction of a stratified grid whose two one-sided products lie in
/// `[c1, c2]`.
pub fn good_set_fraction(
    sym: &TwoTermSymbol,
    n: u64,
    c1: f64,
    c2: f64,
    grid_size: usize,
    seed: u64,
    exec: Exec,
) -> Result<GoodSet> {
    if grid_size < 100 {
        return Err(Error::InvalidParameter("grid_size must be at least 100".into()));
    }
    let samples = sample_products(sym, n, &stratified_points(grid_size, seed), exec);
    let (l1, l2) = (c1.ln(), c2.ln());
    let good = samples.iter().filter(|s| s.within(l1, l2)).count();
    Ok(GoodSet {
        n,
        c1,
        c2,
        fraction: good as f64 / grid_size as f64,
        good,
        grid_size,
        samples,
    })
}

/// Empirical stand-ins for `c1(ε)`, `c2(ε)`: the `ε/2` quantile of
/// `min(back, fwd)` and the `1 − ε/2` quantile of `max(back, fwd)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Calibration {
    #[serde(rename = "N")]
    pub n: u64,
    pub epsilon: f64,
    pub log_c1: f64,
    pub log_c2: f64,
}

impl Calibration {
    pub fn c1(&self) -> f64 {
        self.log_c1.exp()
    }

    pub fn c2(&self) -> f64 {
        self.log_c2.exp()
    }

    pub fn from_samples(n: u64, epsilon: f64, samples: &[CorollarySample]) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::EmptyGoodSet);
        }
        let mut mins: Vec<f64> = samples.iter().map(CorollarySample::log_min).collect();
        let mut maxs: Vec<f64> = samples.iter().map(CorollarySample::log_max).collect();
        mins.sort_by(f64::total_cmp);
        maxs.sort_by(f64::total_cmp);
        Ok(Self {
            n,
            epsilon,
            log_c1: quantile(&mins, epsilon / 2.0),
            log_c2: quantile(&maxs, 1.0 - epsilon / 2.0),
        })
    }
}

/// Nearest-rank quantile of sorted data.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

pub fn calibrate(
    sym: &TwoTermSymbol,
    n: u64,
    epsilon: f64,
    grid_size: usize,
    seed: u64,
    exec: Exec,
) -> Result<Calibration> {
    if grid_size < 100 {
        return Err(Error::InvalidParameter("grid_size must be at least 100".into()));
    }
    let samples = sample_products(sym, n, &stratified_points(grid_size, seed), exec);
    Calibration::from_samples(n, epsilon, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::RealNumber;
    use crate::unitprod::Coef;

    fn sym(a: f64, b: f64) -> TwoTermSymbol {
        TwoTermSymbol::new(Coef::real(a), Coef::real(b), RealNumber::golden()).unwrap()
    }

    #[test]
    fn empty_products() {
        let y = FixedReal::exact(Fx::from_f64(0.3));
        let p = corollary_products(&sym(1.0, 1.0), 0, &y).unwrap();
        assert_eq!((p.log_back, p.log_fwd), (0.0, 0.0));
    }

    #[test]
    fn trivial_good_set_bounds() {
        let s = sym(1.0, 1.0);
        let all = good_set_fraction(&s, 8, 0.0, f64::INFINITY, 200, 1, Exec::default()).unwrap();
        assert_eq!(all.fraction, 1.0);
        let none = good_set_fraction(&s, 8, 2.0, 1.0, 200, 1, Exec::default()).unwrap();
        assert_eq!(none.fraction, 0.0);
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 0.5), 2.0);
        assert_eq!(quantile(&v, 0.51), 3.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
    }
}
