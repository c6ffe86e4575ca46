use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    admissible_fx, alpha_product, comparison_product, convergent_warnings, AdmissibilityParams,
    Warning,
};
use crate::contfrac::{ConvergentTable, RealNumber};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{FixedReal, Fx};

/// Admissible points drawn from the grid `(2i+1)/(2G)`, `G = 16·N·count`.
#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub points: Vec<Fx>,
    /// Candidates examined up to the last accepted one.
    pub examined: u64,
    pub rejected: u64,
    pub rejection_rate: f64,
    #[serde(serialize_with = "ser_u128")]
    pub grid: u128,
}

fn ser_u128<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Rejection sampling of admissible points, deterministic in `seed`.
///
/// At most `16·count` distinct candidates are examined. Fewer than `count`
/// points may come back; none at all is an error.
pub fn sample_admissible(
    params: &AdmissibilityParams,
    count: usize,
    seed: u64,
    exec: Exec,
) -> Result<Sample> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let grid = 16u128 * params.n() as u128 * count as u128;
    let two_g = BigInt::from(2u32) * BigInt::from(grid);
    let cap = 16 * count as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(count);
    let (mut examined, mut rejected) = (0u64, 0u64);
    let mut drawn = 0u64;
    while points.len() < count && drawn < cap {
        let want = count - points.len();
        let batch = ((want + want / 4 + 8) as u64).min(cap - drawn) as usize;
        let mut cands = Vec::with_capacity(batch);
        while cands.len() < batch {
            let i: u128 = rng.random_range(0..grid);
            if seen.insert(i) {
                cands.push(Fx::from_ratio(&(BigInt::from(2 * i + 1)), &two_g));
            }
        }
        drawn += batch as u64;
        let verdicts = exec.map(&cands, |&x| admissible_fx(x, params));
        for (x, v) in cands.into_iter().zip(verdicts) {
            if points.len() == count {
                break;
            }
            examined += 1;
            if v? {
                points.push(x);
            } else {
                rejected += 1;
            }
        }
    }
    if points.is_empty() {
        return Err(Error::ExhaustedCandidates { draws: drawn });
    }
    Ok(Sample {
        points,
        examined,
        rejected,
        rejection_rate: rejected as f64 / examined as f64,
        grid,
    })
}

/// One sample of a product-ratio sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub k: Option<usize>,
    #[serde(rename = "N")]
    pub n: u64,
    pub x: Fx,
    pub log_alpha_product: f64,
    pub log_comparison: f64,
    pub ratio: f64,
    pub admissible: bool,
    pub warnings: Vec<Warning>,
}

impl ProductReport {
    pub fn evaluate(
        x: Fx,
        params: &AdmissibilityParams,
        warnings: Vec<Warning>,
    ) -> Result<Self> {
        let adm = admissible_fx(x, params)?;
        let xf = FixedReal::exact(x);
        let la = alpha_product(&xf, params.alpha(), params.n())?;
        let lc = comparison_product(&xf, params.n())?.closed_log;
        Ok(Self {
            k: params.k(),
            n: params.n(),
            x,
            log_alpha_product: la,
            log_comparison: lc,
            ratio: (la - lc).exp(),
            admissible: adm,
            warnings,
        })
    }
}

/// Range of `∏|e(x) − e(nα)| / |e(Nx) − 1|` over sampled admissible points.
#[derive(Clone, Debug, Serialize)]
pub struct PropositionBand {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub log_min: f64,
    pub log_max: f64,
    pub rejection_rate: f64,
    pub warnings: Vec<Warning>,
    pub reports: Vec<ProductReport>,
}

impl PropositionBand {
    /// `C/c`
    pub fn width(&self) -> f64 {
        (self.log_max - self.log_min).exp()
    }
}

pub fn proposition_band(
    alpha: &RealNumber,
    table: &ConvergentTable,
    delta: &BigRational,
    k: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<PropositionBand> {
    let params = AdmissibilityParams::for_convergent(alpha, table, delta.clone(), k)?;
    let warnings = convergent_warnings(table, k);
    let sample = sample_admissible(&params, samples, seed, exec)?;
    let reports: Vec<ProductReport> = exec
        .map(&sample.points, |&x| {
            ProductReport::evaluate(x, &params, warnings.clone())
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let log_min = reports
        .iter()
        .map(|r| r.log_alpha_product - r.log_comparison)
        .fold(f64::INFINITY, f64::min);
    let log_max = reports
        .iter()
        .map(|r| r.log_alpha_product - r.log_comparison)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PropositionBand {
        k,
        n: params.n(),
        min_ratio: log_min.exp(),
        max_ratio: log_max.exp(),
        log_min,
        log_max,
        rejection_rate: sample.rejection_rate,
        warnings,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::RealSpec;

    fn delta() -> BigRational {
        BigRational::new(1.into(), 128.into())
    }

    #[test]
    fn sampling_is_deterministic_and_policy_independent() {
        let p = AdmissibilityParams::new(RealNumber::golden(), delta(), 8, Some(5)).unwrap();
        let a = sample_admissible(&p, 50, 1, Exec::Sequential).unwrap();
        let b = sample_admissible(&p, 50, 1, Exec::Parallel).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.points.len(), 50);
        let c = sample_admissible(&p, 50, 2, Exec::Sequential).unwrap();
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn rational_stand_in_has_unit_band() {
        let alpha = RealNumber::new(RealSpec::rational(8, 13)).unwrap();
        // 8/13 = [0; 1, 1, 1, 1, 2], so N_5 = 13
        let table = ConvergentTable::build(&alpha, 5).unwrap();
        let k = 5;
        assert_eq!(table.n_u64(k), Some(13));
        let band = proposition_band(&alpha, &table, &delta(), k, 20, 3, Exec::default()).unwrap();
        assert!((band.min_ratio - 1.0).abs() < 1e-12);
        assert!((band.max_ratio - 1.0).abs() < 1e-12);
        assert!(band.warnings.contains(&Warning::RationalAlpha));
    }
}
