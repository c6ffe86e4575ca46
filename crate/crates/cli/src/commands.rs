use hrtlab_core::contfrac::{balanced_set, parse_rational, ConvergentTable, RealNumber};
use hrtlab_core::fracsum::{
    band_decomposition, band_rows, periodic_band_sum, scale_growth_holds, separated_sum,
    BandConfig, Shift, SumContext,
};
use hrtlab_core::hrtlab::{
    certificate_sweep, conjugate_identity_check, conjugate_selection, normalize_to_special,
    orbit_trace, CertificateParams, PlanePoint, SymbolPair,
};
use hrtlab_core::numeric::{FixedReal, Fx};
use hrtlab_core::unitprod::{
    calibrate, good_set_fraction, proposition_band, sample_admissible, AdmissibilityParams, Coef,
    TwoTermSymbol, Warning,
};
use hrtlab_core::{Error, Exec, Result};
use num_rational::BigRational;
use serde_json::json;

use crate::report::{num, opt, Report, Schema};

/// Relative tolerance for the two evaluations of the separated sum.
const SUM_AGREEMENT_TOL: f64 = 1e-10;
/// Absolute tolerance for the periodic regrouping of a band.
const REGROUPING_TOL: f64 = 1e-12;

pub const CF_SCHEMA: Schema = &[
    ("k", "index of the convergent"),
    ("a", "partial quotient a_k"),
    ("p", "numerator p_k"),
    ("N", "denominator N_k"),
    ("err", "|alpha - p_k/N_k|"),
    ("M", "1/(N_k^2 err); empty when p_k/N_k equals alpha"),
    ("in_E", "k belongs to the balanced set E for the chosen D"),
];

pub const PROP1_SCHEMA: Schema = &[
    ("k", "convergent index"),
    ("N", "denominator N_k"),
    ("x", "sampled admissible point in [0,1)"),
    ("log_alpha_product", "ln prod_{n=1}^{N} |e(x) - e(n alpha)|"),
    ("log_comparison", "ln |e(Nx) - 1|"),
    ("ratio", "exp(log_alpha_product - log_comparison)"),
    ("admissible", "x passes the separation test"),
    ("warnings", "hypothesis warnings joined by '|'"),
];

pub const SUMS_SCHEMA: Schema = &[
    ("k", "convergent index"),
    ("l", "scale index of the reversed expansion"),
    ("M_l", "denominator of the l-th reversed convergent"),
    ("c_l", "numerator of the l-th reversed convergent"),
    ("band_lo", "smallest |j| in the band"),
    ("band_hi", "largest |j| in the band"),
    ("band_sum", "sum over the band of {u + N_{k-1} j/N}/j, paired over +-j"),
    ("band_error", "sum over the band of the error after replacing N_{k-1}/N by c_l/M_l"),
    ("ratio_to_bound", "band_error / (M^2 M_l^{-1/2})"),
    ("C_l_size", "number of j in the band far from the poles"),
    ("complement_size", "number of j in the band near the poles"),
];

pub const COROLLARY_SCHEMA: Schema = &[
    ("y", "stratified grid point in [0,1)"),
    ("log_back", "ln prod_{n=-N}^{-1} |P(y+n)|; empty at a zero"),
    ("log_fwd", "ln prod_{n=0}^{N-1} |P(y+n)|; empty at a zero"),
    ("good", "both products lie in [c1, c2]"),
];

pub const ORBIT_SCHEMA: Schema = &[
    ("n", "offset along the orbit x + n"),
    ("log_f", "ln|f(x+n)| - ln|f(x)|"),
    ("step", "ln|Q(x+n)| - ln|P(x+n)|; empty at the last offset"),
];

pub const NORMALIZE_SCHEMA: Schema = &[
    ("index", "position of the point in the input"),
    ("t", "input time coordinate"),
    ("xi", "input frequency coordinate"),
    ("image_t", "time coordinate after the affine map"),
    ("image_xi", "frequency coordinate after the affine map"),
    ("recovered", "inverse map returns the input point"),
];

pub const CERTIFY_SCHEMA: Schema = &[
    ("k", "convergent index"),
    ("N", "denominator N_k"),
    ("m", "shift chosen by the conjugate selection"),
    ("gamma", "fractional part chosen by the conjugate selection"),
    ("selected_size", "grid points x with x and gamma - x both good"),
    ("log_epsilon2", "ln of the selected fraction"),
    ("log_c1_hat", "ln of the lower product constant"),
    ("log_c2_hat", "ln of the upper product constant"),
    ("log_lhs_product", "ln(|f(x_N+N+m+1)| |f(z_N-N)|)"),
    ("log_lower_bound", "ln(eps2 c1 / ((2|A|)^{m+1} c2))"),
    ("certified", "log_lhs_product >= log_lower_bound"),
    ("tail_holds", "tail product stays below (2|A|)^{m+1}"),
];

pub const SCHEMAS: &[(&str, Schema)] = &[
    ("cf", CF_SCHEMA),
    ("prop1", PROP1_SCHEMA),
    ("sums", SUMS_SCHEMA),
    ("corollary", COROLLARY_SCHEMA),
    ("orbit", ORBIT_SCHEMA),
    ("normalize", NORMALIZE_SCHEMA),
    ("certify", CERTIFY_SCHEMA),
];

/// Reads a number spec; a `dec:` spec without `@bits` gets `default_bits`.
pub fn real(spec: &str, default_bits: u32) -> Result<RealNumber> {
    if spec.starts_with("dec:") && !spec.contains('@') {
        return format!("{spec}@{default_bits}").parse();
    }
    spec.parse()
}

/// A point of the line: a number spec when it has a tag, else an exact
/// rational or decimal.
pub fn point(s: &str, default_bits: u32) -> Result<FixedReal> {
    if s.contains(':') {
        Ok(*real(s, default_bits)?.fixed())
    } else {
        Ok(FixedReal::exact(Fx::from_rational(&parse_rational(s)?)))
    }
}

pub fn delta(s: &str) -> Result<BigRational> {
    let d = parse_rational(s)?;
    let hundredth = BigRational::new(1.into(), 100.into());
    if d <= BigRational::from_integer(0.into()) || d >= hundredth {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1/100), got {d}")));
    }
    Ok(d)
}

fn table_for(alpha: &RealNumber, k: usize) -> Result<ConvergentTable> {
    ConvergentTable::build(alpha, k + 1).or_else(|e| match e {
        Error::DepthUnavailable { available, .. } if available >= k => {
            ConvergentTable::build(alpha, k)
        }
        e => Err(e),
    })
}

pub fn cf(alpha: &RealNumber, depth: usize, balance: &BigRational, r: &mut Report) -> Result<()> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let table = match ConvergentTable::build(alpha, depth - 1) {
        Err(Error::DepthUnavailable { available, .. }) => {
            r.summarize("truncated", format!("expansion ends at k = {available}"));
            ConvergentTable::build(alpha, available)?
        }
        t => t?,
    }
    .with_balance(balance.clone());
    let set = balanced_set(&table, balance, 0);
    let mut det_ok = true;
    let mut bound_ok = true;
    for row in table.rows() {
        if let Some(d) = table.determinant(row.k) {
            let expected = if row.k % 2 == 1 { 1 } else { -1 };
            det_ok &= d == expected.into();
        }
        bound_ok &= table.approximation_bound(row.k) != Some(false);
        r.rows.push(vec![
            row.k.to_string(),
            row.a.to_string(),
            row.p.to_string(),
            row.n.to_string(),
            num(row.err.to_f64()),
            opt(row.m.as_ref().map(|m| m.to_f64())),
            row.in_e.to_string(),
        ]);
    }
    let odd: Vec<String> = set.odd_members().map(|k| k.to_string()).collect();
    r.summarize("rows", table.len());
    r.summarize("odd_in_E", if odd.is_empty() { "none".into() } else { odd.join(" ") });
    if let Some(d) = &set.minimal_d {
        r.summarize("minimal_D", d);
    }
    r.check("determinant", det_ok, "p_k N_{k-1} - p_{k-1} N_k = (-1)^{k-1}");
    r.check("approximation_bound", bound_ok, "|alpha - p_k/N_k| <= 1/(N_k N_{k+1})");
    r.result = json!({ "rows": table.rows(), "balanced": set });
    Ok(())
}

pub fn prop1(
    alpha: &RealNumber,
    delta: &BigRational,
    k: usize,
    samples: usize,
    seed: u64,
    r: &mut Report,
) -> Result<()> {
    let table = table_for(alpha, k)?;
    let band = proposition_band(alpha, &table, delta, k, samples, seed, Exec::default())?;
    for s in &band.reports {
        r.rows.push(vec![
            k.to_string(),
            s.n.to_string(),
            num(s.x.to_f64()),
            num(s.log_alpha_product),
            num(s.log_comparison),
            num(s.ratio),
            s.admissible.to_string(),
            Warning::join(&s.warnings),
        ]);
    }
    r.summarize("N", band.n);
    r.summarize("samples", band.reports.len());
    r.summarize("min_ratio", num(band.min_ratio));
    r.summarize("max_ratio", num(band.max_ratio));
    r.summarize("width", num(band.width()));
    r.summarize("rejection_rate", num(band.rejection_rate));
    r.summarize("warnings", Warning::join(&band.warnings));
    let finite = band.reports.iter().all(|s| s.ratio.is_finite() && s.ratio > 0.0);
    r.check(
        "admissible",
        band.reports.iter().all(|s| s.admissible),
        "every sampled point passes the separation test",
    );
    r.check("finite_ratios", finite, "every ratio is finite and positive");
    r.result = serde_json::to_value(&band).expect("serializable");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn sums(
    alpha: &RealNumber,
    delta: &BigRational,
    k: usize,
    x: Option<Fx>,
    config: BandConfig,
    seed: u64,
    r: &mut Report,
) -> Result<()> {
    let table = table_for(alpha, k)?;
    let ctx = SumContext::new(&table, k)?;
    let x = match x {
        Some(x) => x,
        None => {
            let params = AdmissibilityParams::for_convergent(alpha, &table, delta.clone(), k)?;
            sample_admissible(&params, 1, seed, Exec::default())?.points[0]
        }
    };
    let sum = separated_sum(&ctx, alpha, x, delta)?;
    let u = Shift::new(&sum.derived_u)?;
    r.summarize("N", ctx.n);
    r.summarize("M", num(ctx.m));
    r.summarize("x", num(x.to_f64()));
    r.summarize("u", &sum.derived_u);
    r.summarize("value", num(sum.value));
    r.summarize("terms", sum.terms);
    let agree = sum.discrepancy <= SUM_AGREEMENT_TOL * (1.0 + sum.raw_sum.abs());
    r.check(
        "reindexing",
        agree,
        format!("re-indexed and original sums differ by {:e}", sum.discrepancy),
    );
    r.check("scale_growth", scale_growth_holds(&ctx), "M_{l+1} <= (a_max + 1) M_l");
    let dec = match band_decomposition(&ctx, delta, &u, config) {
        Ok(dec) => dec,
        Err(e @ Error::NoValidL1 { .. }) => {
            r.check("decomposition", false, e.to_string());
            r.result = json!({ "sum": sum });
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let rows = band_rows(&ctx, &dec, &u)?;
    let mut worst_regroup = 0f64;
    for b in &dec.bands {
        worst_regroup = worst_regroup.max(periodic_band_sum(b, &u)?.diff);
    }
    let max_ratio = rows.iter().map(|b| b.ratio_to_bound).fold(0f64, f64::max);
    r.summarize("trivial", dec.trivial);
    r.summarize("bands", dec.bands.len());
    r.summarize("max_ratio_to_bound", num(max_ratio));
    r.check(
        "regrouping",
        worst_regroup <= REGROUPING_TOL,
        format!("periodic regrouping differs by at most {worst_regroup:e}"),
    );
    for b in &rows {
        r.rows.push(vec![
            b.k.to_string(),
            b.l.to_string(),
            b.m_l.to_string(),
            b.c_l.to_string(),
            b.band_lo.to_string(),
            b.band_hi.to_string(),
            num(b.band_sum),
            num(b.band_error),
            num(b.ratio_to_bound),
            b.c_set_size.to_string(),
            b.complement_size.to_string(),
        ]);
    }
    r.result = json!({ "sum": sum, "decomposition": dec, "rows": rows });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn corollary(
    alpha: &RealNumber,
    a: Coef,
    b: Coef,
    k: usize,
    epsilon: f64,
    grid: usize,
    seed: u64,
    r: &mut Report,
) -> Result<()> {
    let table = table_for(alpha, k)?;
    let n = table.n_u64(k).ok_or_else(|| Error::InvalidParameter(format!("N_{k} exceeds 64 bits")))?;
    let sym = TwoTermSymbol::new(a, b, alpha.clone())?;
    let cal = calibrate(&sym, n, epsilon, grid, seed, Exec::default())?;
    let good = good_set_fraction(&sym, n, cal.c1(), cal.c2(), grid, seed, Exec::default())?;
    let (l1, l2) = (cal.log_c1, cal.log_c2);
    for s in &good.samples {
        r.rows.push(vec![
            num(s.y.to_f64()),
            opt(s.log_back),
            opt(s.log_fwd),
            s.within(l1, l2).to_string(),
        ]);
    }
    let in_regime = a.modulus() == 1.0 && b.modulus() == 1.0;
    r.summarize("N", n);
    r.summarize("in_regime", in_regime);
    r.summarize("log_c1", num(l1));
    r.summarize("log_c2", num(l2));
    r.summarize("fraction", num(good.fraction));
    r.check(
        "good_fraction",
        good.fraction >= 1.0 - epsilon,
        format!("{} of {} grid points in [c1, c2]", good.good, good.grid_size),
    );
    r.result = json!({ "calibration": cal, "good_set": good, "in_regime": in_regime });
    Ok(())
}

pub struct OrbitArgs {
    pub pair: SymbolPair,
    pub beta: RealNumber,
    pub x: FixedReal,
    pub back: u64,
    pub fwd: u64,
    /// `(L, interval, n_max)` for the product identity.
    pub identity: Option<(u64, (BigRational, BigRational), u64)>,
}

pub fn orbit(args: &OrbitArgs, r: &mut Report) -> Result<()> {
    let t = orbit_trace(&args.pair, &args.x, args.back, args.fwd)?;
    for (i, n) in t.offsets().enumerate() {
        r.rows.push(vec![n.to_string(), num(t.log_f[i]), opt(t.steps.get(i).copied())]);
    }
    let (lo, hi) = t.log_f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
        (a.min(v), b.max(v))
    });
    r.summarize("min_log_f", num(lo));
    r.summarize("max_log_f", num(hi));
    let mut identity = None;
    if let Some((l, interval, n_max)) = &args.identity {
        let sel = conjugate_selection(&args.beta, &args.pair.theta, interval.clone(), *n_max)?;
        let id = conjugate_identity_check(&args.pair, &sel, &args.x, *l)?;
        r.summarize("n_prime", sel.n_prime);
        r.summarize("m", sel.m);
        r.summarize("gamma", num(sel.gamma));
        r.summarize("identity_upper_L_plus_m", num(id.corrected_discrepancy));
        r.summarize("identity_upper_L_plus_m_plus_1", num(id.extra_factor_discrepancy));
        r.check(
            "product_identity",
            id.corrected_matches,
            format!("relative discrepancy {:e} with upper limit L+m", id.corrected_discrepancy),
        );
        identity = Some(json!({ "selection": sel, "identity": id }));
    }
    r.result = json!({ "trace": t, "conjugates": identity });
    Ok(())
}

pub fn normalize(points: [PlanePoint; 4], r: &mut Report) -> Result<()> {
    let sc = normalize_to_special(points.clone())?;
    let recovered = sc.recover();
    let image = sc.image();
    let mut slots = image.clone();
    for (slot, &src) in sc.order.iter().enumerate() {
        slots[src] = image[slot].clone();
    }
    for i in 0..4 {
        r.rows.push(vec![
            i.to_string(),
            points[i].t.to_string(),
            points[i].xi.to_string(),
            slots[i].t.to_string(),
            slots[i].xi.to_string(),
            (recovered[i] == points[i]).to_string(),
        ]);
    }
    let det = sc.map.determinant();
    r.summarize("alpha", &sc.alpha);
    r.summarize("beta", &sc.beta);
    r.summarize("fold", sc.fold);
    r.summarize("exact", sc.exact);
    r.check("round_trip", recovered == points, "inverse map recovers every input point");
    r.check("unit_determinant", det == BigRational::from_integer(1.into()), format!("det = {det}"));
    r.result = serde_json::to_value(&sc).expect("serializable");
    Ok(())
}

pub fn certify(params: &CertificateParams, ks: &[usize], r: &mut Report) -> Result<()> {
    let certs: Vec<_> = certificate_sweep(params, ks, Exec::default())?
        .into_iter()
        .collect::<Result<_>>()?;
    let mut all = true;
    for c in &certs {
        all &= c.certified;
        r.rows.push(vec![
            c.k.to_string(),
            c.n.to_string(),
            c.m.to_string(),
            num(c.gamma),
            c.selected_size.to_string(),
            num(c.log_epsilon2),
            num(c.log_c1_hat),
            num(c.log_c2_hat),
            num(c.log_lhs_product),
            num(c.log_lower_bound),
            c.certified.to_string(),
            c.tail_holds.to_string(),
        ]);
    }
    r.check(
        "certified",
        all,
        format!("{} of {} certificates hold", certs.iter().filter(|c| c.certified).count(), certs.len()),
    );
    r.result = match certs.as_slice() {
        [one] => serde_json::to_value(one).expect("serializable"),
        many => serde_json::to_value(many).expect("serializable"),
    };
    Ok(())
}
