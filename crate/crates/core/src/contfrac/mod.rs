//! Continued-fraction engine: expansions, convergents, the quality measure
//! `M_k`, the balanced index set `E` and reversed continued fractions.

mod spec;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Quad, Real};

pub use spec::{
    parse_alpha_spec, parse_rational, RealNumber, RealSpec, DEFAULT_PRECISION_BITS,
};
#[allow(unused_imports)]
pub(crate) use spec::parse_decimal;

/// Balancing constant used when a table is built without an explicit `D`.
pub const DEFAULT_BALANCE: i64 = 2;

/// Iteration cap for period detection of quadratic irrationals.
const PERIOD_SEARCH_CAP: usize = 200_000;

/// Why an expansion stopped where it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    /// Rational input, expansion terminated.
    Complete,
    /// Quadratic input, periodic tail detected.
    Periodic,
    /// Requested depth reached before termination.
    Depth,
    /// The enclosure of a decimal input could not certify the next quotient.
    PrecisionExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period {
    pub start: usize,
    pub block: Vec<BigInt>,
}

/// Partial quotients `a_0; a_1, a_2, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    terms: Vec<BigInt>,
    period: Option<Period>,
    stop: Stop,
}

impl ContinuedFraction {
    /// Materialized quotients `a_0..=a_depth` (fewer when the expansion ended).
    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// `a_i`, following the periodic tail past the materialized prefix.
    pub fn term(&self, i: usize) -> Option<BigInt> {
        if let Some(t) = self.terms.get(i) {
            return Some(t.clone());
        }
        let p = self.period.as_ref()?;
        let j = (i - p.start) % p.block.len();
        Some(p.block[j].clone())
    }

    pub fn period(&self) -> Option<&Period> {
        self.period.as_ref()
    }

    /// True when the expansion is complete (rational) or periodic.
    pub fn exact(&self) -> bool {
        matches!(self.stop, Stop::Complete | Stop::Periodic)
    }

    pub fn stop(&self) -> Stop {
        self.stop
    }
}

/// Expands `x` to partial quotients `a_0..=a_depth`.
pub fn expand(x: &RealNumber, depth: usize) -> Result<ContinuedFraction> {
    match x.value() {
        Real::Exact(q) if q.is_rational() => Ok(expand_rational(q, depth)),
        Real::Exact(q) => Ok(expand_quadratic(q, depth)),
        Real::Approx(e) => expand_enclosure(e.lo().clone(), e.hi().clone(), depth),
    }
}

fn expand_rational(q: &Quad, depth: usize) -> ContinuedFraction {
    let r = q.to_rational().expect("rational");
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let mut terms = Vec::new();
    let mut stop = Stop::Complete;
    while !den.is_zero() {
        if terms.len() > depth {
            stop = Stop::Depth;
            break;
        }
        let (a, rem) = num.div_mod_floor(&den);
        terms.push(a);
        num = std::mem::replace(&mut den, rem);
    }
    ContinuedFraction {
        terms,
        period: None,
        stop,
    }
}

/// Classical `(P + √D)/Q` recurrence with `Q | D − P²`.
fn expand_quadratic(q: &Quad, depth: usize) -> ContinuedFraction {
    let (a, b, d, c) = q.parts();
    let s = if b.is_negative() { -BigInt::one() } else { BigInt::one() };
    let p0 = &s * a;
    let d0 = b * b * d;
    let q0 = &s * c;
    let mut p = &p0 * q0.abs();
    let dd = &d0 * &q0 * &q0;
    let mut qq = &q0 * q0.abs();
    let root = dd.sqrt();

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms: Vec<BigInt> = Vec::new();
    let mut period = None;
    let cap = depth + 1 + PERIOD_SEARCH_CAP;
    while terms.len() < cap {
        if let Some(&start) = seen.get(&(p.clone(), qq.clone())) {
            period = Some(Period {
                start,
                block: terms[start..].to_vec(),
            });
            break;
        }
        seen.insert((p.clone(), qq.clone()), terms.len());
        let a = if qq.is_positive() {
            (&p + &root).div_floor(&qq)
        } else {
            (-&p - &root - BigInt::one()).div_floor(&-&qq)
        };
        let p_next = &a * &qq - &p;
        let q_next = (&dd - &p_next * &p_next) / &qq;
        terms.push(a);
        p = p_next;
        qq = q_next;
    }
    let stop = if period.is_some() {
        Stop::Periodic
    } else {
        Stop::Depth
    };
    let mut cf = ContinuedFraction {
        terms,
        period,
        stop,
    };
    let materialized: Vec<BigInt> = (0..=depth).map_while(|i| cf.term(i)).collect();
    cf.terms = materialized;
    cf
}

fn expand_enclosure(
    mut lo: BigRational,
    mut hi: BigRational,
    depth: usize,
) -> Result<ContinuedFraction> {
    let mut terms = Vec::new();
    let mut stop = Stop::Depth;
    while terms.len() <= depth {
        let fl = lo.floor().to_integer();
        let fh = hi.floor().to_integer();
        if fl != fh {
            stop = Stop::PrecisionExhausted;
            break;
        }
        let f = BigRational::from_integer(fl.clone());
        let (l, h) = (&lo - &f, &hi - &f);
        terms.push(fl);
        if terms.len() > depth {
            break;
        }
        if l.is_zero() {
            stop = Stop::PrecisionExhausted;
            break;
        }
        lo = h.recip();
        hi = l.recip();
    }
    if terms.len() < 2 {
        return Err(Error::PrecisionExhausted(format!(
            "certified only {} partial quotient(s); raise precision_bits",
            terms.len()
        )));
    }
    Ok(ContinuedFraction {
        terms,
        period: None,
        stop,
    })
}

/// One convergent `p_k/N_k` with its approximation data.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergentRow {
    pub k: usize,
    #[serde(serialize_with = "ser_big")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub n: BigInt,
    /// `|α − p_k/N_k|`
    pub err: Real,
    /// `1/(N_k² err_k)`; `None` when the convergent equals α.
    pub m: Option<Real>,
    pub in_e: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug)]
pub struct ConvergentTable {
    rows: Vec<ConvergentRow>,
    /// `(p_{K+1}, N_{K+1})` past the last row, when the expansion continues.
    next: Option<(BigInt, BigInt)>,
    d: BigRational,
    alpha: Real,
}

/// Builds rows `k = 0..=depth` of convergents of `x` from its expansion `cf`.
pub fn convergents(
    cf: &ContinuedFraction,
    x: &RealNumber,
    depth: usize,
) -> Result<ConvergentTable> {
    if cf.term(depth).is_none() {
        return Err(Error::DepthUnavailable {
            requested: depth,
            available: cf.terms().len().saturating_sub(1),
        });
    }
    let alpha = x.value().clone();
    let (mut p1, mut p) = (BigInt::one(), BigInt::zero());
    let (mut n1, mut n) = (BigInt::zero(), BigInt::one());
    let mut rows = Vec::with_capacity(depth + 1);
    let mut next = None;
    for k in 0..=depth + 1 {
        let Some(a) = cf.term(k) else { break };
        // p_{-1} = 1, p_{-2} = 0; N_{-1} = 0, N_{-2} = 1
        let pk = &a * &p1 + &p;
        let nk = &a * &n1 + &n;
        p = std::mem::replace(&mut p1, pk.clone());
        n = std::mem::replace(&mut n1, nk.clone());
        if k == depth + 1 {
            next = Some((pk, nk));
            break;
        }
        let approx = BigRational::new(pk.clone(), nk.clone());
        let err = alpha.sub_rational(&approx).abs();
        let m = err.mul_int(&(&nk * &nk)).recip();
        rows.push(ConvergentRow {
            k,
            a,
            p: pk,
            n: nk,
            err,
            m,
            in_e: false,
        });
    }
    let mut table = ConvergentTable {
        rows,
        next,
        d: BigRational::from_integer(DEFAULT_BALANCE.into()),
        alpha,
    };
    table.mark_balanced(table.d.clone());
    Ok(table)
}

impl ConvergentTable {
    /// Expands `x` and tabulates convergents in one step.
    pub fn build(x: &RealNumber, depth: usize) -> Result<Self> {
        let cf = expand(x, depth + 1)?;
        convergents(&cf, x, depth)
    }

    pub fn rows(&self) -> &[ConvergentRow] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> Option<&ConvergentRow> {
        self.rows.get(k)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn balance(&self) -> &BigRational {
        &self.d
    }

    pub fn alpha(&self) -> &Real {
        &self.alpha
    }

    /// `N_k` as a machine integer.
    pub fn n_u64(&self, k: usize) -> Option<u64> {
        self.rows.get(k)?.n.to_u64()
    }

    /// `(p_k, N_k)` for any `k` up to one past the last row.
    pub fn pn(&self, k: usize) -> Option<(&BigInt, &BigInt)> {
        match self.rows.get(k) {
            Some(r) => Some((&r.p, &r.n)),
            None if k == self.rows.len() => self.next.as_ref().map(|(p, n)| (p, n)),
            None => None,
        }
    }

    /// `N_k / N_{k+1}`.
    pub fn ratio(&self, k: usize) -> Option<BigRational> {
        let (_, nk) = self.pn(k)?;
        let (_, nk1) = self.pn(k + 1)?;
        Some(BigRational::new(nk.clone(), nk1.clone()))
    }

    /// `p_k N_{k−1} − p_{k−1} N_k` for `k ≥ 1`.
    pub fn determinant(&self, k: usize) -> Option<BigInt> {
        if k == 0 {
            return None;
        }
        let (pk, nk) = self.pn(k)?;
        let (pj, nj) = self.pn(k - 1)?;
        Some(pk * nj - pj * nk)
    }

    /// Whether `|α − p_k/N_k| ≤ 1/(N_k N_{k+1})`; `None` when the next row is
    /// missing or the enclosure of α cannot decide.
    pub fn approximation_bound(&self, k: usize) -> Option<bool> {
        let row = self.rows.get(k)?;
        let (_, nk1) = self.pn(k + 1)?;
        let bound = BigRational::new(BigInt::one(), &row.n * nk1);
        row.err
            .cmp_rational(&bound)
            .map(|o| o != std::cmp::Ordering::Greater)
    }

    fn mark_balanced(&mut self, d: BigRational) {
        let set = balanced_set(self, &d, 0);
        for r in &mut self.rows {
            r.in_e = set.members.contains(&r.k);
        }
        self.d = d;
    }

    /// Same table with `in_e` flags recomputed for balancing constant `d`.
    pub fn with_balance(mut self, d: BigRational) -> Self {
        self.mark_balanced(d);
        self
    }
}

/// The balanced index set `E` restricted to a finite table.
#[derive(Clone, Debug, Serialize)]
pub struct BalancedSet {
    #[serde(serialize_with = "ser_rat")]
    pub d: BigRational,
    pub members: Vec<usize>,
    /// Smallest `D` for which some `k ≥ prefix` belongs to `E`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub minimal_d: Option<BigRational>,
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_rat<S: serde::Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl BalancedSet {
    pub fn odd_members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied().filter(|k| k % 2 == 1)
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.contains(&k)
    }
}

/// `k ∈ E` iff `N_k/N_{k+1} ≤ D·min_{j≤k} N_j/N_{j+1}`; the running minimum
/// includes `j = 0`. Rows without a successor are never members.
pub fn balanced_set(table: &ConvergentTable, d: &BigRational, prefix: usize) -> BalancedSet {
    let mut members = Vec::new();
    let mut running: Option<BigRational> = None;
    let mut minimal_d: Option<BigRational> = None;
    for k in 0..table.len() {
        let Some(r) = table.ratio(k) else { break };
        let m = match running.take() {
            Some(m) if m <= r => m,
            _ => r.clone(),
        };
        if r <= d * &m {
            members.push(k);
        }
        if k >= prefix {
            let need = &r / &m;
            minimal_d = Some(match minimal_d {
                Some(cur) if cur <= need => cur,
                _ => need,
            });
        }
        running = Some(m);
    }
    BalancedSet {
        d: d.clone(),
        members,
        minimal_d,
    }
}

/// For odd `k`, returns `p⁻¹ mod N_k`, which is `N_{k−1}`, after checking
/// `p_k N_{k−1} ≡ 1 (mod N_k)`.
pub fn inverse_check(table: &ConvergentTable, k: usize) -> Result<BigInt> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenIndex(k));
    }
    let (pk, nk) = table
        .pn(k)
        .ok_or(Error::DepthUnavailable {
            requested: k,
            available: table.len().saturating_sub(1),
        })?;
    let (_, nprev) = table.pn(k - 1).expect("k ≥ 1");
    let lhs = (pk * nprev).mod_floor(nk);
    if lhs != BigInt::one().mod_floor(nk) {
        return Err(Error::IdentityViolated(format!(
            "p_{k}·N_{} ≢ 1 (mod N_{k})",
            k - 1
        )));
    }
    Ok(nprev.clone())
}

/// Convergent `M_l / c_l` of the reversed expansion `⟨a_k, …, a_1⟩`.
#[derive(Clone, Debug, Serialize)]
pub struct ReversedRow {
    pub l: usize,
    #[serde(serialize_with = "ser_big")]
    pub m: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub c: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReversedCf {
    pub k: usize,
    /// `a_k, a_{k−1}, …, a_1`
    #[serde(skip)]
    pub quotients: Vec<BigInt>,
    pub rows: Vec<ReversedRow>,
    /// `M_{l+1}/M_l`
    pub growth: Vec<f64>,
    /// `max_l (M_{l+1}/M_l) / M_k`, the empirical constant of `M_{l+1} ≲ M·M_l`.
    pub max_growth_over_m: f64,
}

impl ReversedCf {
    /// `(M_l, c_l)` as machine integers.
    pub fn pair(&self, l: usize) -> Option<(u64, u64)> {
        let r = self.rows.get(l)?;
        Some((r.m.to_u64()?, r.c.to_u64()?))
    }

    /// Value of `⟨a_k, …, a_1⟩` as a reduced fraction.
    pub fn value(&self) -> BigRational {
        let last = self.rows.last().expect("k ≥ 1");
        BigRational::new(last.m.clone(), last.c.clone())
    }
}

/// Convergents of `⟨a_k, a_{k−1}, …, a_1⟩ = N_k/N_{k−1}`.
pub fn reversed_cf(table: &ConvergentTable, k: usize) -> Result<ReversedCf> {
    if k == 0 {
        return Err(Error::InvalidParameter("reversed expansion needs k ≥ 1".into()));
    }
    if k >= table.len() {
        return Err(Error::DepthUnavailable {
            requested: k,
            available: table.len().saturating_sub(1),
        });
    }
    let quotients: Vec<BigInt> = (1..=k).rev().map(|i| table.rows[i].a.clone()).collect();
    let (mut h1, mut h) = (BigInt::one(), BigInt::zero());
    let (mut g1, mut g) = (BigInt::zero(), BigInt::one());
    let mut rows = Vec::with_capacity(k);
    for (l, a) in quotients.iter().enumerate() {
        let hn = a * &h1 + &h;
        let gn = a * &g1 + &g;
        h = std::mem::replace(&mut h1, hn.clone());
        g = std::mem::replace(&mut g1, gn.clone());
        rows.push(ReversedRow { l, m: hn, c: gn });
    }
    let growth: Vec<f64> = rows
        .windows(2)
        .map(|w| ratio_f64(&w[1].m, &w[0].m))
        .collect();
    let mk = table.rows[k].m.as_ref().map_or(f64::NAN, Real::to_f64);
    let max_growth = growth.iter().cloned().fold(f64::NAN, f64::max);
    Ok(ReversedCf {
        k,
        quotients,
        rows,
        growth,
        max_growth_over_m: max_growth / mk,
    })
}

fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    BigRational::new(a.clone(), b.clone())
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// `{n·x}`: exact for exactly specified inputs, otherwise an enclosure of
/// width below `2^-bits`.
pub fn frac_multiple(x: &RealNumber, n: u64, bits: u32) -> Result<Real> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let v = x.value().mul_int(&BigInt::from(n));
    let f = v.fract().ok_or_else(|| {
        Error::PrecisionExhausted(format!("cannot certify ⌊{n}·x⌋ at the given precision"))
    })?;
    if let Real::Approx(e) = &f {
        let limit = BigRational::new(BigInt::one(), BigInt::one() << bits);
        if e.width() >= limit {
            return Err(Error::PrecisionExhausted(format!(
                "{{{n}·x}} is only known to width {:.3e}, need 2^-{bits}",
                e.width().to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rational_two_sevenths() {
        let x = RealNumber::new(RealSpec::rational(2, 7)).unwrap();
        let cf = expand(&x, 10).unwrap();
        assert_eq!(cf.terms(), big(&[0, 3, 2]).as_slice());
        assert!(cf.exact());
    }

    #[test]
    fn quadratic_expansions_are_periodic() {
        let g = expand(&RealNumber::golden(), 6).unwrap();
        assert_eq!(g.terms(), big(&[0, 1, 1, 1, 1, 1, 1]).as_slice());
        assert!(g.exact());
        assert_eq!(g.term(1000), Some(BigInt::one()));
        let s = expand(&RealNumber::silver(), 5).unwrap();
        assert_eq!(s.terms(), big(&[0, 2, 2, 2, 2, 2]).as_slice());
        let p = s.period().unwrap();
        assert_eq!((p.start, p.block.clone()), (1, big(&[2])));
    }

    #[test]
    fn sqrt_seven_has_period_four() {
        let x = RealNumber::new(RealSpec::quadratic(0, 1, 7, 1)).unwrap();
        let cf = expand(&x, 9).unwrap();
        assert_eq!(cf.terms(), big(&[2, 1, 1, 1, 4, 1, 1, 1, 4, 1]).as_slice());
    }

    #[test]
    fn decimal_truncates_when_precision_runs_out() {
        let x = RealNumber::new(RealSpec::Decimal {
            digits: "0.6180339887".into(),
            precision_bits: 64,
        })
        .unwrap();
        let cf = expand(&x, 100).unwrap();
        assert!(!cf.exact());
        assert_eq!(cf.stop(), Stop::PrecisionExhausted);
        assert!(cf.terms().len() > 5);
        assert!(cf.terms()[1..].iter().all(|a| a.is_one()));

        let coarse = RealNumber::new(RealSpec::Decimal {
            digits: "0.5".into(),
            precision_bits: 64,
        })
        .unwrap();
        assert!(matches!(expand(&coarse, 3), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn golden_convergent_rows() {
        let t = ConvergentTable::build(&RealNumber::golden(), 5).unwrap();
        let pn: Vec<(i64, i64)> = t
            .rows()
            .iter()
            .map(|r| (r.p.to_i64().unwrap(), r.n.to_i64().unwrap()))
            .collect();
        assert_eq!(pn, vec![(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]);
        assert_eq!(t.determinant(2), Some(BigInt::from(-1)));
    }

    #[test]
    fn golden_quality_tends_to_sqrt5() {
        let t = ConvergentTable::build(&RealNumber::golden(), 10).unwrap();
        let m = t.row(10).unwrap().m.as_ref().unwrap().to_f64();
        assert!((m - 5f64.sqrt()).abs() / 5f64.sqrt() < 0.01, "M_10 = {m}");
        assert!(t.rows().iter().all(|r| r.m.as_ref().unwrap().to_f64() >= 1.0));
    }

    #[test]
    fn rational_table_ends_with_infinite_quality() {
        let x = RealNumber::new(RealSpec::rational(2, 7)).unwrap();
        let cf = expand(&x, 10).unwrap();
        assert!(matches!(
            convergents(&cf, &x, 5),
            Err(Error::DepthUnavailable { available: 2, .. })
        ));
        let t = convergents(&cf, &x, 2).unwrap();
        assert!(t.row(2).unwrap().m.is_none());
        assert_eq!(t.approximation_bound(1), Some(true));
        assert_eq!(t.approximation_bound(2), None);
    }

    #[test]
    fn balanced_sets() {
        let two = BigRational::from_integer(2.into());
        let one = BigRational::one();
        let t = ConvergentTable::build(&RealNumber::golden(), 12).unwrap();
        let e = balanced_set(&t, &two, 0);
        assert_eq!(e.members, (0..t.len()).collect::<Vec<_>>());
        // With D = 1 only new running minima qualify.
        let e1 = balanced_set(&t, &one, 0);
        let mut expect = Vec::new();
        let mut best: Option<BigRational> = None;
        for k in 0..t.len() {
            let r = t.ratio(k).unwrap();
            if best.as_ref().is_none_or(|b| &r <= b) {
                expect.push(k);
                best = Some(r);
            }
        }
        assert_eq!(e1.members, expect);
        assert_eq!(e1.minimal_d.as_ref(), Some(&one));

        let s = ConvergentTable::build(&RealNumber::silver(), 12).unwrap();
        let e3 = balanced_set(&s, &BigRational::from_integer(3.into()), 0);
        assert!((1..s.len()).all(|k| e3.contains(k)));
    }

    #[test]
    fn inverses_of_odd_convergents() {
        let g = ConvergentTable::build(&RealNumber::golden(), 8).unwrap();
        assert_eq!(inverse_check(&g, 3).unwrap(), BigInt::from(2));
        assert_eq!(inverse_check(&g, 5).unwrap(), BigInt::from(5));
        assert!(matches!(inverse_check(&g, 4), Err(Error::EvenIndex(4))));
        let s = ConvergentTable::build(&RealNumber::silver(), 8).unwrap();
        assert_eq!(s.row(3).unwrap().p, BigInt::from(5));
        assert_eq!(s.row(3).unwrap().n, BigInt::from(12));
        assert_eq!(inverse_check(&s, 3).unwrap(), BigInt::from(5));
    }

    #[test]
    fn reversed_expansions() {
        let g = ConvergentTable::build(&RealNumber::golden(), 12).unwrap();
        let r = reversed_cf(&g, 5).unwrap();
        assert_eq!(r.value(), BigRational::new(8.into(), 5.into()));
        assert_eq!(r.quotients, big(&[1, 1, 1, 1, 1]));
        let r10 = reversed_cf(&g, 10).unwrap();
        for i in 2..r10.rows.len() {
            assert!(r10.rows[i].m >= BigInt::from(2) * &r10.rows[i - 2].m);
        }
        let s = ConvergentTable::build(&RealNumber::silver(), 6).unwrap();
        let rs = reversed_cf(&s, 3).unwrap();
        assert_eq!(rs.value(), BigRational::new(12.into(), 5.into()));
        assert_eq!(rs.quotients, big(&[2, 2, 2]));
    }

    #[test]
    fn fractional_multiples() {
        let third = RealNumber::new(RealSpec::rational(1, 3)).unwrap();
        let f = frac_multiple(&third, 5, 64).unwrap();
        assert_eq!(f.as_quad().unwrap(), &Quad::from_ratio(2.into(), 3.into()));
        let g = RealNumber::golden();
        let f2 = frac_multiple(&g, 2, 64).unwrap().to_f64();
        assert!((f2 - 0.2360679774997897).abs() < 1e-15);
        let f8 = frac_multiple(&g, 8, 64).unwrap().to_f64();
        assert!((f8 - 0.9442719099991588).abs() < 1e-15);
    }
}
