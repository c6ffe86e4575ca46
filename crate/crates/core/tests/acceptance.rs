//! Desk-scale acceptance sweeps, one pass/fail line per criterion.
//!
//! Run with `cargo test -p hrtlab-core --test acceptance`; the process exits
//! non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use hrtlab_core::contfrac::{inverse_check, reversed_cf, ConvergentTable, RealNumber, RealSpec};
use hrtlab_core::fracsum::{
    band_decomposition, band_rows, separated_sum, residue_tail, BandConfig, Shift, SumContext,
};
use hrtlab_core::hrtlab::{
    certificate_sweep, classify_configuration, conjugate_identity_check, conjugate_selection,
    mean_log_modulus, normalize_to_special, sup_deviation, CertificateParams, PlanePoint,
    SymbolPair,
};
use hrtlab_core::numeric::{FixedReal, Fx};
use hrtlab_core::unitprod::{
    admissible_fx, alpha_product, comparison_product, proposition_band, AdmissibilityParams, Coef,
    TwoTermSymbol,
};
use hrtlab_core::Exec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and thresholds.
const COMPARISON_REL_TOL: f64 = 1e-10;
const PERMUTATION_REL_TOL: f64 = 1e-12;
const BAND_TREND_FACTOR: f64 = 2.0;
const SEPARATED_ORACLE_TOL: f64 = 1e-10;
const SEPARATED_TREND_FACTOR: f64 = 2.0;
const SEPARATED_BOUND: f64 = 1.0;
const BAND_ERROR_RATIO_BOUND: f64 = 1.0;
const L1_SCALE: f64 = 0.05;
const FACTOR_TOL: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-9;
const SPOT_CHECK_TOL: f64 = 1e-9;
const RIEMANN_GROWTH_FACTOR: f64 = 3.0;
const ROUND_TRIP_BITS: u32 = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn delta() -> BigRational {
    rat(1, 128)
}

// ---------------------------------------------------------------------------
// Oracles

/// Sign of `u + v√d` by integer comparisons only.
fn sign_quadratic(u: &BigInt, v: &BigInt, d: &BigInt) -> i32 {
    let s = |x: &BigInt| x.signum().to_i32().unwrap();
    let (su, sv) = (s(u), s(v));
    if su >= 0 && sv >= 0 {
        return (su + sv).signum();
    }
    if su <= 0 && sv <= 0 {
        return -((su + sv).abs().signum());
    }
    // opposite signs: compare u² with v²d
    let c = (u * u).cmp(&(v * v * d));
    match c {
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => su,
        std::cmp::Ordering::Less => sv,
    }
}

/// `|(p + q√d)/r − P/N| ≤ 1/(N·N')` decided with integer arithmetic.
fn quadratic_bound_holds(pqdr: &(BigInt, BigInt, BigInt, BigInt), pk: &BigInt, nk: &BigInt, nn: &BigInt) -> bool {
    let (p, q, d, r) = pqdr;
    let (p, q, r) = if r.is_negative() { (-p, -q, -r) } else { (p.clone(), q.clone(), r.clone()) };
    // (pN − P r + qN√d)·N' versus ±r
    let a = (&p * nk - pk * &r) * nn;
    let b = &q * nk * nn;
    sign_quadratic(&(&a - &r), &b, d) <= 0 && sign_quadratic(&(&a + &r), &b, d) >= 0
}

/// `⟨a_k, …, a_1⟩` by backward evaluation.
fn reversed_value(a: &[BigInt], k: usize) -> BigRational {
    let mut v = BigRational::from_integer(a[1].clone());
    for ai in &a[2..=k] {
        v = BigRational::from_integer(ai.clone()) + v.recip();
    }
    v
}

/// `ln|e(Nx) − 1|` from the exact rational value of `Nx`.
fn closed_log(x: Fx, n: u64) -> f64 {
    let v = x.to_rational() * BigRational::from_integer(n.into());
    let f = &v - v.floor();
    let d = f.clone().min(BigRational::one() - f);
    (2.0 * (PI * d.to_f64().unwrap()).sin()).ln()
}

/// Brute force of `(1/M)|Σ_{n∈A} (n/N)/(Nx − (np mod N))|` for `x = a/D`,
/// with `A = {n ≤ N : 100/N < ‖x − np/N‖ < 1/128}`.
fn separated_sum_oracle(a: i128, den: i128, n: u64, p: u64, m: f64) -> f64 {
    let nn = n as i128;
    let mut s = 0.0;
    for i in 1..=nn {
        let np = (i * p as i128) % nn;
        let t = (a * nn - np * den).rem_euclid(nn * den);
        let dist = t.min(nn * den - t);
        if dist > 100 * den && 128 * dist < nn * den {
            s += (i as f64 / n as f64) / ((a * nn - np * den) as f64 / den as f64);
        }
    }
    s.abs() / m
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> (RealNumber, (BigInt, BigInt, BigInt, BigInt)) {
    loop {
        let d: i64 = rng.random_range(2..500);
        let s = (d as f64).sqrt() as i64;
        if s * s == d || (s + 1) * (s + 1) == d {
            continue;
        }
        let p = rng.random_range(-60..60);
        let mut q = rng.random_range(1..20);
        if rng.random::<bool>() {
            q = -q;
        }
        let r = rng.random_range(1..60);
        if let Ok(x) = RealNumber::new(RealSpec::quadratic(p, q, d, r)) {
            return (x, (p.into(), q.into(), d.into(), r.into()));
        }
    }
}

// ---------------------------------------------------------------------------
// Criteria

fn exact_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for case in 0..10_000 {
        let depth = rng.random_range(2..=60);
        let (x, quad) = if case % 2 == 0 {
            let q: i64 = rng.random_range(1..1_000_000_000);
            let p: i64 = rng.random_range(-3 * q..3 * q);
            (RealNumber::new(RealSpec::rational(p, q)).unwrap(), None)
        } else {
            let (x, pqdr) = random_quadratic(&mut rng);
            (x, Some(pqdr))
        };
        // rationals may terminate before the requested depth
        let table = match ConvergentTable::build(&x, depth) {
            Err(hrtlab_core::Error::DepthUnavailable { available, .. }) => {
                ConvergentTable::build(&x, available).unwrap()
            }
            t => t.unwrap(),
        };
        let rows = table.rows();
        let a: Vec<BigInt> = rows.iter().map(|r| r.a.clone()).collect();
        for k in 1..rows.len() {
            let (pk, nk) = (&rows[k].p, &rows[k].n);
            let (pp, np) = (&rows[k - 1].p, &rows[k - 1].n);
            let det = pk * np - pp * nk;
            let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            if det != sign {
                failures.push(format!("determinant at case {case}, k {k}"));
            }
            if k + 1 < rows.len() {
                let nn = &rows[k + 1].n;
                let holds = match &quad {
                    Some(pqdr) => quadratic_bound_holds(pqdr, pk, nk, nn),
                    None => {
                        let v = match x.spec() {
                            RealSpec::Rational { p, q } => BigRational::new(p.clone(), q.clone()),
                            _ => unreachable!(),
                        };
                        (v - BigRational::new(pk.clone(), nk.clone())).abs()
                            <= BigRational::new(BigInt::one(), nk * nn)
                    }
                };
                if !holds {
                    failures.push(format!("approximation bound at case {case}, k {k}"));
                }
            }
            if k % 2 == 1 {
                let inv_ok = (pk * np).mod_floor(nk) == BigInt::one().mod_floor(nk);
                if !inv_ok || inverse_check(&table, k).ok().as_ref() != Some(np) {
                    failures.push(format!("inverse at case {case}, k {k}"));
                }
            }
            let rev = reversed_cf(&table, k).unwrap();
            let expected = BigRational::new(nk.clone(), np.clone());
            if reversed_value(&a, k) != expected || rev.value() != expected {
                failures.push(format!("reversed value at case {case}, k {k}"));
            }
            for i in 2..rev.rows.len() {
                if rev.rows[i].m < BigInt::from(2) * &rev.rows[i - 2].m {
                    failures.push(format!("reversed growth at case {case}, k {k}, i {i}"));
                }
            }
            checked += 1;
        }
    }
    failures.truncate(5);
    outcome(
        failures.is_empty(),
        format!("{checked} convergent rows over 10000 inputs; first failures: {failures:?}"),
    )
}

fn product_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_cmp = 0f64;
    let mut worst_perm = 0f64;
    for &n in &[1u64, 7, 100, 1_000, 10_000, 100_000] {
        for _ in 0..5 {
            let x = Fx::from_f64(rng.random::<f64>());
            let c = comparison_product(&FixedReal::exact(x), n).unwrap();
            let oracle = closed_log(x, n);
            worst_cmp = worst_cmp.max((c.literal_log - oracle).exp_m1().abs());
        }
    }
    for _ in 0..50 {
        let q: i64 = rng.random_range(2..5000);
        let p: i64 = rng.random_range(1..q);
        if p.gcd(&q) != 1 {
            continue;
        }
        let alpha = RealNumber::new(RealSpec::rational(p, q)).unwrap();
        let x = Fx::from_f64(rng.random::<f64>());
        let lp = alpha_product(&FixedReal::exact(x), &alpha, q as u64).unwrap();
        worst_perm = worst_perm.max((lp - closed_log(x, q as u64)).exp_m1().abs());
    }
    outcome(
        worst_cmp <= COMPARISON_REL_TOL && worst_perm <= PERMUTATION_REL_TOL,
        format!("comparison max rel err {worst_cmp:.2e}, rational permutation max rel err {worst_perm:.2e}"),
    )
}

fn odd_e_indices(table: &ConvergentTable, max_n: u64) -> Vec<usize> {
    (1..table.len())
        .step_by(2)
        .filter(|&k| table.rows()[k].in_e && table.n_u64(k).is_some_and(|n| n <= max_n))
        .collect()
}

fn proposition_stability() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, alpha) in [("golden", RealNumber::golden()), ("silver", RealNumber::silver())] {
        let table = ConvergentTable::build(&alpha, 30).unwrap();
        let ks = odd_e_indices(&table, 20_000);
        let bands: Vec<_> = ks
            .iter()
            .map(|&k| proposition_band(&alpha, &table, &delta(), k, 200, 7, Exec::Parallel).unwrap())
            .collect();
        if bands.iter().any(|b| b.reports.len() < 200) {
            pass = false;
            details.push(format!("{name}: fewer than 200 admissible samples"));
        }
        let stat = |bs: &[hrtlab_core::unitprod::PropositionBand]| {
            let hi = bs.iter().map(|b| b.log_max).fold(f64::NEG_INFINITY, f64::max);
            let lo = bs.iter().map(|b| b.log_min).fold(f64::INFINITY, f64::min);
            (hi - lo).exp()
        };
        let five = 5.min(bands.len());
        let bottom = stat(&bands[..five]);
        let top = stat(&bands[bands.len() - five..]);
        let factor = (top / bottom).max(bottom / top);
        pass &= factor < BAND_TREND_FACTOR;
        details.push(format!(
            "{name} k={:?}: C/c bottom five {bottom:.1}, top five {top:.1}, factor {factor:.3}",
            ks
        ));
    }
    outcome(pass, details.join("; "))
}

fn admissible_dyadics(params: &AdmissibilityParams, count: usize, rng: &mut ChaCha8Rng) -> Vec<i128> {
    let mut out = Vec::new();
    let den = 1i128 << 24;
    for _ in 0..count * 50 {
        let a = rng.random_range(0..den);
        if admissible_fx(Fx::from_ratio(&BigInt::from(a), &BigInt::from(den)), params).unwrap() {
            out.push(a);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

fn separated_sum_boundedness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut details = Vec::new();
    let mut pass = true;
    let den = 1i128 << 24;
    for (name, alpha, ks) in [
        ("golden", RealNumber::golden(), vec![21usize, 23, 25, 27, 29, 31]),
        ("silver", RealNumber::silver(), vec![11, 13, 15, 17]),
    ] {
        let table = ConvergentTable::build(&alpha, 34).unwrap();
        let mut values = Vec::new();
        let mut worst_oracle = 0f64;
        let mut worst_band = 0f64;
        let mut skipped = 0;
        for &k in &ks {
            let ctx = SumContext::new(&table, k).unwrap();
            let params = AdmissibilityParams::for_convergent(&alpha, &table, delta(), k).unwrap();
            let xs = admissible_dyadics(&params, 20, &mut rng);
            let mut sup = 0f64;
            for a in xs {
                let x = Fx::from_ratio(&BigInt::from(a), &BigInt::from(den));
                let r = separated_sum(&ctx, &alpha, x, &delta()).unwrap();
                let oracle = separated_sum_oracle(a, den, ctx.n, ctx.p, ctx.m);
                worst_oracle = worst_oracle.max((r.value - oracle).abs());
                sup = sup.max(r.value);
                let u = Shift::new(&r.derived_u).unwrap();
                match band_decomposition(&ctx, &delta(), &u, BandConfig { theta: 1.0, l1_scale: L1_SCALE }) {
                    Ok(dec) => {
                        for row in band_rows(&ctx, &dec, &u).unwrap() {
                            worst_band = worst_band.max(row.ratio_to_bound);
                        }
                    }
                    Err(_) => skipped += 1,
                }
            }
            values.push(sup);
        }
        let half = values.len() / 2;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let trend = mean(&values[values.len() - half..]) / mean(&values[..half]);
        let max = values.iter().cloned().fold(0.0, f64::max);
        pass &= worst_oracle <= SEPARATED_ORACLE_TOL
            && trend < SEPARATED_TREND_FACTOR
            && max <= SEPARATED_BOUND
            && worst_band <= BAND_ERROR_RATIO_BOUND;
        details.push(format!(
            "{name} k={ks:?}: sup values {:?}, upper/lower mean {trend:.3}, oracle max diff {worst_oracle:.1e}, band error ratio max {worst_band:.3} ({skipped} decompositions without l1)",
            values.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
        ));
    }
    outcome(pass, details.join("; "))
}

fn residue_tails() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst = 0f64;
    let p = 1_000_000u64;
    for _ in 0..100 {
        let modulus = rng.random_range(1..=1000u64);
        let r = rng.random_range(0..modulus);
        let a = (modulus as f64).powf(1.5);
        let t = residue_tail(modulus, r, a.floor() as u64, p).unwrap();
        worst = worst.max(t.sup * a / 2.0);
    }
    outcome(worst <= 1.0, format!("max sup·A/2 = {worst:.3} over 100 draws"))
}

fn conjugates_trick() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut worst_factor, mut worst_identity, mut worst_spot) = (0f64, 0f64, 0f64);
    let mut extra_factor_matches = 0;
    for _ in 0..100 {
        let beta = loop {
            let (b, _) = random_quadratic(&mut rng);
            if b.to_f64() > 0.05 && b.to_f64() < 20.0 {
                break b;
            }
        };
        let theta = rat(rng.random_range(0..97), 97);
        let x = Fx::from_f64(rng.random::<f64>());
        let l = rng.random_range(1..=50);
        let pair = SymbolPair::new(Coef::real(1.0), Coef::real(1.0), RealNumber::golden(), beta.clone(), theta.clone()).unwrap();
        let sel = conjugate_selection(&beta, &theta, (rat(0, 1), rat(1, 1)), 10_000).unwrap();
        let c = conjugate_identity_check(&pair, &sel, &FixedReal::exact(x), l).unwrap();
        worst_factor = worst_factor.max(c.factor_max_diff);
        worst_identity = worst_identity.max(c.corrected_discrepancy);
        extra_factor_matches += c.extra_factor_matches as usize;
        // independent spot check of one factor pair in complex f64
        let (b, t, xf) = (beta.to_f64(), theta.to_f64().unwrap(), x.to_f64());
        let v = (sel.n_prime as f64 - 2.0 * t) / b;
        let y = v - xf;
        let q = |s: f64| (1.0 + num_complex::Complex64::from_polar(1.0, 2.0 * PI * (t + b * s))).norm();
        worst_spot = worst_spot.max((q(y - 1.0) - q(xf + 1.0)).abs());
    }
    outcome(
        worst_factor <= FACTOR_TOL && worst_identity <= IDENTITY_TOL && worst_spot <= SPOT_CHECK_TOL,
        format!(
            "factor conjugacy max diff {worst_factor:.1e} (f64 spot check {worst_spot:.1e}); identity with upper limit L+m max rel err {worst_identity:.1e}; upper limit L+m+1 matched in {extra_factor_matches}/100"
        ),
    )
}

fn contradiction_certificates() -> Outcome {
    let base = CertificateParams::new(RealNumber::golden(), RealNumber::silver(), rat(1, 4), 11, 1);
    let table = ConvergentTable::build(&RealNumber::golden(), 30).unwrap();
    let ks: Vec<usize> = (11..=25).step_by(2).filter(|&k| table.rows()[k].in_e).collect();
    let certs: Vec<_> = match certificate_sweep(&base, &ks, Exec::Parallel) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("sweep failed: {e}")),
    };
    let mut bounds = Vec::new();
    let mut all = true;
    for c in &certs {
        match c {
            Ok(c) => {
                all &= c.certified && c.tail_holds;
                bounds.push(c.log_lower_bound);
            }
            Err(e) => return outcome(false, format!("certificate failed: {e}")),
        }
    }
    let half = bounds.len() / 2;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (bottom, top) = (mean(&bounds[..half]), mean(&bounds[bounds.len() - half..]));
    let no_decay = top >= bottom - 2f64.ln();
    let c0 = certs[0].as_ref().unwrap();
    outcome(
        all && no_decay,
        format!(
            "k={ks:?}, m={}, γ={:.4}: all certified {all}; ln lower bound mean {bottom:.3} (low k) vs {top:.3} (high k)",
            c0.m, c0.gamma
        ),
    )
}

fn riemann_case() -> Outcome {
    let alpha = RealNumber::golden();
    let sym = TwoTermSymbol::new(Coef::real(2.0), Coef::real(1.0), alpha.clone()).unwrap();
    let table = ConvergentTable::build(&alpha, 30).unwrap();
    let ns: Vec<u64> = (0..table.len())
        .filter_map(|k| table.n_u64(k))
        .filter(|&n| (8..=17_711).contains(&n))
        .collect();
    let xs: Vec<Fx> = (0..64).map(|i| Fx::from_f64((i as f64 + 0.5) / 64.0)).collect();
    let devs: Vec<f64> = ns.iter().map(|&n| sup_deviation(&sym, &xs, n, Exec::Parallel).unwrap()).collect();
    let max = devs.iter().cloned().fold(0.0, f64::max);
    let bounded = max < RIEMANN_GROWTH_FACTOR * devs[0];

    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut quad_ok = 0;
    for _ in 0..100 {
        let (ma, mb) = loop {
            let (u, v) = (rng.random_range(0.1..5.0), rng.random_range(0.1..5.0));
            if (u - v).abs() > 0.05 {
                break (u, v);
            }
        };
        let a = Coef::polar(ma, Fx::from_f64(rng.random::<f64>()).phase()).unwrap();
        let b = Coef::polar(mb, Fx::from_f64(rng.random::<f64>()).phase()).unwrap();
        let q = mean_log_modulus(a, b, 4096).unwrap();
        quad_ok += ((q.value - ma.max(mb).ln()).abs() <= q.error) as usize;
    }
    outcome(
        bounded && quad_ok == 100,
        format!(
            "N from {} to {}: sup deviation first {:.4}, max {max:.4}; quadrature within its error on {quad_ok}/100 pairs",
            ns[0],
            ns[ns.len() - 1],
            devs[0]
        ),
    )
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> [[BigRational; 2]; 2] {
    let mul = |a: &[[BigRational; 2]; 2], b: &[[BigRational; 2]; 2]| {
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let (u, v) = (rng.random_range(1..9i64), rng.random_range(0..9i64));
    let h = u * u + v * v;
    let rot = [[rat(u * u - v * v, h), rat(-2 * u * v, h)], [rat(2 * u * v, h), rat(u * u - v * v, h)]];
    let s = rat(rng.random_range(-20..20), rng.random_range(1..7));
    let shear = [[rat(1, 1), rat(0, 1)], [s, rat(1, 1)]];
    let l = rat(rng.random_range(1..9), rng.random_range(1..9));
    let scale = [[l.clone(), rat(0, 1)], [rat(0, 1), l.recip()]];
    mul(&mul(&rot, &shear), &scale)
}

fn normalization_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << ROUND_TRIP_BITS);
    let mut failures = 0;
    for _ in 0..1000 {
        let alpha = rat(rng.random_range(1..200), 201);
        // β ≠ 0 keeps the four points distinct
        let beta = rat(rng.random_range(1..500) * if rng.random::<bool>() { 1 } else { -1 }, rng.random_range(1..50));
        let special = [
            (rat(0, 1), rat(0, 1)),
            (rat(1, 1), rat(0, 1)),
            (rat(0, 1), alpha),
            (rat(1, 1), beta),
        ];
        let m = random_unimodular(&mut rng);
        let shift = (rat(rng.random_range(-50..50), 7), rat(rng.random_range(-50..50), 3));
        let mut pts: Vec<PlanePoint> = special
            .iter()
            .map(|(t, x)| {
                PlanePoint::rational(
                    &m[0][0] * t + &m[0][1] * x + &shift.0,
                    &m[1][0] * t + &m[1][1] * x + &shift.1,
                )
            })
            .collect();
        for i in (1..4).rev() {
            pts.swap(i, rng.random_range(0..=i));
        }
        let src: [PlanePoint; 4] = pts.try_into().unwrap();
        let ok = classify_configuration(src.clone()).is_ok_and(|c| c.flags.two_two)
            && normalize_to_special(src.clone()).is_ok_and(|s| {
                let back = s.recover();
                s.map.determinant() == BigRational::one()
                    && s.alpha >= BigRational::zero()
                    && s.alpha < BigRational::one()
                    && back.iter().zip(&src).all(|(a, b)| {
                        (&a.t - &b.t).abs() <= tol && (&a.xi - &b.xi).abs() <= tol
                    })
            });
        failures += !ok as usize;
    }
    outcome(failures == 0, format!("{failures} failures over 1000 configurations"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("exact identity suite", exact_identities),
        ("product identity suite", product_identities),
        ("product-ratio stability", proposition_stability),
        ("separated-index sum boundedness", separated_sum_boundedness),
        ("residue-tail bound", residue_tails),
        ("conjugates trick", conjugates_trick),
        ("contradiction certificate", contradiction_certificates),
        ("Riemann-sum case", riemann_case),
        ("normalization round-trip", normalization_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += !o.pass as usize;
        println!(
            "criterion {} {name}: {} ({:.1}s) {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
