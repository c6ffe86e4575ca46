use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::orbit::{conjugate_identity_check, conjugate_selection, ConjugateSelection, SymbolPair};
use crate::contfrac::{ConvergentTable, RealNumber};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{FixedReal, Fx};
use crate::unitprod::{
    corollary_admissible, sample_products, stratified_points, AdmissibilityParams, Calibration,
    Coef, CorollarySample,
};

/// Bins of the good-set histogram on `[0, 1)`.
const HISTOGRAM_BINS: usize = 100;
/// The selection window `I` spans this many bins (width 0.1).
const WINDOW_BINS: usize = 10;
/// Slack on `Σ ln|P| ≤ (m+1)·ln(2|A|)` for rounding in the log evaluation.
pub const TAIL_SLACK: f64 = 1e-12;

fn ser_rat<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug)]
pub struct CertificateParams {
    pub alpha: RealNumber,
    pub beta: RealNumber,
    pub a: Coef,
    pub b: Coef,
    pub theta: BigRational,
    pub delta: BigRational,
    pub epsilon3: f64,
    pub k: usize,
    pub seed: u64,
    pub grid_size: usize,
    /// Largest `n′` tried by the conjugate selection.
    pub n_max: u64,
    /// Reuse a selection (and its window) instead of choosing one.
    pub selection: Option<ConjugateSelection>,
}

impl CertificateParams {
    pub fn new(alpha: RealNumber, beta: RealNumber, theta: BigRational, k: usize, seed: u64) -> Self {
        Self {
            alpha,
            beta,
            a: Coef::real(1.0),
            b: Coef::real(1.0),
            theta,
            delta: BigRational::new(1.into(), 128.into()),
            epsilon3: 0.2,
            k,
            seed,
            grid_size: 2000,
            n_max: 1_000_000,
            selection: None,
        }
    }
}

/// The bound with endpoint `N+m+2` and exponent `m+2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LiteralVariant {
    pub log_lhs: f64,
    pub log_lower_bound: f64,
    pub holds: bool,
    /// `Σ_{n=N}^{N+m+1} ln|P(x_N+n)|`
    pub log_tail: f64,
    pub tail_holds: bool,
}

/// All quantities of one contradiction certificate, logs in natural base.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub alpha: String,
    pub beta: String,
    #[serde(rename = "A")]
    pub a: Coef,
    #[serde(rename = "B")]
    pub b: Coef,
    #[serde(serialize_with = "ser_rat")]
    pub theta: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub delta: BigRational,
    pub epsilon3: f64,
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub seed: u64,
    pub version: &'static str,
    pub grid_size: usize,
    pub sample_size: usize,
    pub good_size: usize,
    pub paired_size: usize,
    pub selected_size: usize,
    pub selection: ConjugateSelection,
    #[serde(rename = "x_N")]
    pub x_n: f64,
    #[serde(rename = "z_N")]
    pub z_n: f64,
    pub m: u64,
    pub gamma: f64,
    pub log_epsilon2: f64,
    pub epsilon2: f64,
    pub log_c1_hat: f64,
    pub log_c2_hat: f64,
    pub c1_hat: f64,
    pub c2_hat: f64,
    /// `ln(|f(x_N+N+m+1)|·|f(z_N−N)|)` with `f ≡ 1` at `x_N`, `z_N`.
    pub log_lhs_product: f64,
    /// `ln(ε₂·ĉ₁ / ((2|A|)^{m+1}·ĉ₂))`
    pub log_lower_bound: f64,
    pub lhs_product: f64,
    pub lower_bound: f64,
    pub certified: bool,
    /// `Σ_{n=N}^{N+m} ln|P(x_N+n)|` against `(m+1)·ln(2|A|)`.
    pub log_tail: f64,
    pub tail_holds: bool,
    /// The product identity at `x_N` with `L = N` under both index readings.
    pub identity_corrected_matches: bool,
    pub identity_extra_factor_matches: bool,
    pub literal_variant: LiteralVariant,
}

/// Width-0.1 window maximizing the histogram autocorrelation `h∗h` of the
/// good points, i.e. where `{x ∈ G : γ − x ∈ G}` is expected to be largest.
pub fn densest_window(points: &[Fx]) -> (BigRational, BigRational) {
    let mut h = [0f64; HISTOGRAM_BINS];
    for p in points {
        let b = ((p.to_f64() * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        h[b] += 1.0;
    }
    let conv: Vec<f64> = (0..HISTOGRAM_BINS)
        .map(|b| (0..=b).map(|i| h[i] * h[b - i]).sum())
        .collect();
    let best = (0..=HISTOGRAM_BINS - WINDOW_BINS)
        .max_by(|&i, &j| {
            let s = |w: usize| conv[w..w + WINDOW_BINS].iter().sum::<f64>();
            s(i).total_cmp(&s(j)).then(j.cmp(&i))
        })
        .unwrap_or(0);
    let den = (HISTOGRAM_BINS as i64).into();
    (
        BigRational::new((best as i64).into(), den),
        BigRational::new(((best + WINDOW_BINS) as i64).into(), (HISTOGRAM_BINS as i64).into()),
    )
}

pub fn contradiction_certificate(params: &CertificateParams, exec: Exec) -> Result<Certificate> {
    let CertificateParams { alpha, beta, a, b, theta, delta, epsilon3, k, .. } = params;
    let k = *k;
    if a.modulus() != b.modulus() {
        return Err(Error::InvalidParameter("the certificate needs |A| = |B|".into()));
    }
    if k % 2 == 0 {
        return Err(Error::EvenIndex(k));
    }
    let table = ConvergentTable::build(alpha, k + 1)?;
    if !table.row(k).is_some_and(|r| r.in_e) {
        return Err(Error::InvalidParameter(format!("k = {k} is not in E")));
    }
    let adm = AdmissibilityParams::for_convergent(alpha, &table, delta.clone(), k)?;
    let n = adm.n();
    let pair = SymbolPair::new(*a, *b, alpha.clone(), beta.clone(), theta.clone())?;
    let p = &pair.p;

    let grid = stratified_points(params.grid_size, params.seed);
    let keep = exec.map(&grid, |&y| corollary_admissible(p, &adm, y));
    let mut s0 = Vec::new();
    for (y, ok) in grid.into_iter().zip(keep) {
        if ok? {
            s0.push(y);
        }
    }
    let samples = sample_products(p, n, &s0, exec);
    let cal = Calibration::from_samples(n, *epsilon3, &samples)?;
    let good: Vec<&CorollarySample> = samples
        .iter()
        .filter(|s| s.within(cal.log_c1, cal.log_c2))
        .collect();
    if good.is_empty() {
        return Err(Error::EmptyGoodSet);
    }

    let selection = match &params.selection {
        Some(s) => s.clone(),
        None => {
            let ys: Vec<Fx> = good.iter().map(|s| s.y).collect();
            conjugate_selection(beta, theta, densest_window(&ys), params.n_max)?
        }
    };
    let m = selection.m as i64;
    let gamma = selection.gamma_fixed();
    let ni = n as i64;

    // S′: good x whose partner γ − x is good too, with Σ_{0}^{m} ln|Q(x+n)|
    let paired: Vec<Option<(Fx, FixedReal, f64)>> = exec.map(&good, |s| {
        let x = FixedReal::exact(s.y);
        let z = gamma.sub(&x);
        if z.mid.to_f64() <= 0.0 {
            return None;
        }
        let oz = p.orbit(&z);
        let partner = CorollarySample {
            y: z.mid,
            log_back: p.log_product(&oz, -ni, -1).ok(),
            log_fwd: p.log_product(&oz, 0, ni - 1).ok(),
        };
        if !partner.within(cal.log_c1, cal.log_c2) {
            return None;
        }
        let lq = pair.q.log_product(&pair.q.orbit(&x), 0, m).ok()?;
        Some((s.y, z, lq))
    });
    let mut paired: Vec<(Fx, FixedReal, f64)> = paired.into_iter().flatten().collect();
    if paired.is_empty() {
        return Err(Error::EmptyGoodSet);
    }
    let paired_size = paired.len();
    // S″: upper half by the Q-product, kept in grid order
    let mut by_q: Vec<f64> = paired.iter().map(|t| t.2).collect();
    by_q.sort_by(|u, v| v.total_cmp(u));
    let cut = by_q[paired_size.div_ceil(2) - 1];
    paired.retain(|t| t.2 >= cut);
    let log_eps2 = paired.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    let (x_n, z_n, _) = paired[0];

    let xf = FixedReal::exact(x_n);
    let (op, oq) = (p.orbit(&xf), pair.q.orbit(&xf));
    let (zp, zq) = (p.orbit(&z_n), pair.q.orbit(&z_n));
    let zero_p = |n| Error::ZeroOnOrbit { n, symbol: 'P' };
    let zero_q = |n| Error::ZeroOnOrbit { n, symbol: 'Q' };
    let fwd = pair.q.log_product(&oq, 0, ni + m).map_err(zero_q)?
        - p.log_product(&op, 0, ni + m).map_err(zero_p)?;
    let back = p.log_product(&zp, -ni, -1).map_err(zero_p)?
        - pair.q.log_product(&zq, -ni, -1).map_err(zero_q)?;
    let log_lhs = fwd + back;
    let log_2a = (2.0 * a.modulus()).ln();
    let log_lower = log_eps2 + cal.log_c1 - cal.log_c2 - (m + 1) as f64 * log_2a;
    let log_tail = p.log_product(&op, ni, ni + m).map_err(zero_p)?;

    let extra = ni + m + 1;
    let lit_lhs = log_lhs + pair.q.log_abs_at(&oq, extra).ok_or(zero_q(extra))?
        - p.log_abs_at(&op, extra).ok_or(zero_p(extra))?;
    let lit_lower = log_lower - log_2a;
    let lit_tail = log_tail + p.log_abs_at(&op, extra).ok_or(zero_p(extra))?;
    let identity = conjugate_identity_check(&pair, &selection, &xf, n)?;

    Ok(Certificate {
        alpha: alpha.spec().to_string(),
        beta: beta.spec().to_string(),
        a: *a,
        b: *b,
        theta: theta.clone(),
        delta: delta.clone(),
        epsilon3: *epsilon3,
        k,
        n,
        seed: params.seed,
        version: crate::VERSION,
        grid_size: params.grid_size,
        sample_size: samples.len(),
        good_size: good.len(),
        paired_size,
        selected_size: paired.len(),
        x_n: x_n.to_f64(),
        z_n: z_n.to_f64(),
        m: selection.m,
        gamma: selection.gamma,
        selection,
        log_epsilon2: log_eps2,
        epsilon2: log_eps2.exp(),
        log_c1_hat: cal.log_c1,
        log_c2_hat: cal.log_c2,
        c1_hat: cal.c1(),
        c2_hat: cal.c2(),
        log_lhs_product: log_lhs,
        log_lower_bound: log_lower,
        lhs_product: log_lhs.exp(),
        lower_bound: log_lower.exp(),
        certified: log_lhs >= log_lower,
        log_tail,
        tail_holds: log_tail <= (m + 1) as f64 * log_2a + TAIL_SLACK,
        identity_corrected_matches: identity.corrected_matches,
        identity_extra_factor_matches: identity.extra_factor_matches,
        literal_variant: LiteralVariant {
            log_lhs: lit_lhs,
            log_lower_bound: lit_lower,
            holds: lit_lhs >= lit_lower,
            log_tail: lit_tail,
            tail_holds: lit_tail <= (m + 2) as f64 * log_2a + TAIL_SLACK,
        },
    })
}

/// Certificates for several `k`; the window, `γ` and `m` are fixed by the
/// first index and reused for the rest.
pub fn certificate_sweep(
    base: &CertificateParams,
    ks: &[usize],
    exec: Exec,
) -> Result<Vec<Result<Certificate>>> {
    let Some((&k0, rest)) = ks.split_first() else {
        return Ok(Vec::new());
    };
    let first = contradiction_certificate(&CertificateParams { k: k0, ..base.clone() }, exec)?;
    let selection = first.selection.clone();
    let mut out = vec![Ok(first)];
    out.extend(exec.map(rest, |&k| {
        let p = CertificateParams {
            k,
            selection: Some(selection.clone()),
            ..base.clone()
        };
        contradiction_certificate(&p, Exec::Sequential)
    }));
    Ok(out)
}
