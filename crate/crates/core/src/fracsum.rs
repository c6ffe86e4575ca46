//! Fractional-part sums `Σ {u + c·j/N}/j`, their decomposition into scale
//! bands given by the reversed continued fraction `N_k/N_{k−1}`, and the
//! residue-class harmonic tails that control each band.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::contfrac::{inverse_check, reversed_cf, ConvergentTable, RealNumber, ReversedCf};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, Fx};
use crate::unitprod::{admissible_fx, AdmissibilityParams};

fn ser_rat<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// A rational shift `u = num/den` small enough for exact `i128` residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shift {
    num: i128,
    den: i128,
}

impl Shift {
    pub fn new(u: &BigRational) -> Result<Self> {
        let num = u.numer().to_i128();
        let den = u.denom().to_i128();
        match (num, den) {
            (Some(num), Some(den)) if den < 1 << 48 && num.abs() < 1 << 100 => {
                Ok(Self { num, den })
            }
            _ => Err(Error::InvalidParameter(format!(
                "shift {u} is too large for exact residue arithmetic"
            ))),
        }
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    /// `{u + c·j/m}` as `(r, q)` meaning `r/q` with `0 ≤ r < q`.
    fn frac(&self, c: i128, j: i128, m: i128) -> (i128, i128) {
        let q = self.den * m;
        ((self.num * m + self.den * c * j).rem_euclid(q), q)
    }

    pub fn frac_f64(&self, c: u64, j: i64, m: u64) -> f64 {
        let (r, q) = self.frac(c as i128, j as i128, m as i128);
        r as f64 / q as f64
    }

    /// `‖u + c·j/m‖`
    pub fn dist_f64(&self, c: u64, j: i64, m: u64) -> f64 {
        let (r, q) = self.frac(c as i128, j as i128, m as i128);
        r.min(q - r) as f64 / q as f64
    }

    /// `({u + cj/m} − {u − cj/m}) / j`, the paired contribution of `±j`.
    fn paired(&self, c: u64, j: u64, m: u64) -> f64 {
        let (r1, q) = self.frac(c as i128, j as i128, m as i128);
        let (r2, _) = self.frac(c as i128, -(j as i128), m as i128);
        (r1 - r2) as f64 / q as f64 / j as f64
    }
}

/// Data of an odd convergent index `k` shared by all sums: `N = N_k`,
/// `p = p_k`, `p⁻¹ = N_{k−1}`, `M = M_k` and the reversed expansion.
#[derive(Clone, Debug)]
pub struct SumContext {
    pub k: usize,
    pub n: u64,
    pub n_prev: u64,
    pub p: u64,
    pub m: f64,
    pub reversed: ReversedCf,
    /// Largest partial quotient among `a_1..a_k`.
    pub a_max: u64,
}

impl SumContext {
    pub fn new(table: &ConvergentTable, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EvenIndex(0));
        }
        let n_prev = inverse_check(table, k)?;
        let row = table.row(k).ok_or(Error::DepthUnavailable {
            requested: k,
            available: table.len().saturating_sub(1),
        })?;
        let too_big = || Error::InvalidParameter(format!("N_{k} does not fit in 64 bits"));
        let m = row
            .m
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter(format!("p_{k}/N_{k} equals α, M_{k} is infinite")))?
            .to_f64();
        let a_max = (1..=k)
            .map(|i| table.rows()[i].a.to_u64().unwrap_or(u64::MAX))
            .max()
            .unwrap_or(1);
        Ok(Self {
            k,
            n: row.n.to_u64().ok_or_else(too_big)?,
            n_prev: n_prev.to_u64().ok_or_else(too_big)?,
            p: row.p.to_u64().ok_or_else(too_big)?,
            m,
            reversed: reversed_cf(table, k)?,
            a_max,
        })
    }

    /// `(M_l, c_l)` of the reversed expansion.
    pub fn scale(&self, l: usize) -> (u64, u64) {
        self.reversed.pair(l).expect("reversed convergents fit in 64 bits")
    }

    pub fn scales(&self) -> usize {
        self.reversed.rows.len()
    }
}

/// `(1/M)·Σ_{0<|j|<J} {u + c·j/N}/j`.
pub fn weighted_fracpart_sum(u: &Shift, c: u64, n: u64, m: f64, j_lim: u64) -> Result<f64> {
    if n == 0 || c.gcd(&n) != 1 {
        return Err(Error::InvalidParameter(format!(
            "{c} and {n} must be coprime"
        )));
    }
    let s: CompensatedSum = (1..j_lim).map(|j| u.paired(c, j, n)).collect();
    Ok(s.value() / m)
}

/// The sum `(1/M)|Σ (n*/N)/(Nx − n)|` over `δ ≥ |x − n/N| ≥ 100/N`.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatedSumReport {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub x: Fx,
    /// `(1/M)|raw_sum|`
    pub value: f64,
    pub raw_sum: f64,
    pub terms: usize,
    /// `Σ_{n∈A} (n/N)/(Nx − (np mod N))` with `A` the indices with
    /// `100/N < ‖x − np/N‖ < δ`, i.e. the form before re-indexing.
    pub original_sum: f64,
    pub original_terms: usize,
    pub discrepancy: f64,
    /// `{N_{k−1}·⌊Nx⌋/N}`, the shift that turns the sum into `Σ {u + N_{k−1}j/N}/j`.
    #[serde(serialize_with = "ser_rat")]
    pub derived_u: BigRational,
}

pub fn separated_sum(
    ctx: &SumContext,
    alpha: &RealNumber,
    x: Fx,
    delta: &BigRational,
) -> Result<SeparatedSumReport> {
    let params = AdmissibilityParams::new(alpha.clone(), delta.clone(), ctx.n, Some(ctx.k))?;
    if !admissible_fx(x, &params)? {
        return Err(Error::InadmissibleX);
    }
    let n = ctx.n;
    let big_x = x.mul_int(n as i64);
    let xr = big_x.to_rational();
    let nd = delta * BigRational::from_integer(n.into());
    let hundred = BigRational::from_integer(100.into());
    let floor_i = |r: BigRational| r.floor().to_integer().to_i64().expect("range");
    let ceil_i = |r: BigRational| r.ceil().to_integer().to_i64().expect("range");
    let lo = ceil_i(&xr - &nd).max(1);
    let hi = floor_i(&xr + &nd).min(n as i64);
    let left = lo..=floor_i(&xr - &hundred).min(n as i64);
    let right = ceil_i(&xr + &hundred).max(1)..=hi;

    let term = |i: i64, weight: u64| {
        let d = (big_x - Fx::from_int(i)).to_f64();
        (weight as f64 / n as f64) / d
    };
    let mut raw = CompensatedSum::new();
    let mut terms = 0;
    for i in left.clone().chain(right.clone()) {
        let star = ((ctx.n_prev as u128 * i as u128) % n as u128) as u64;
        raw += term(i, star);
        terms += 1;
    }

    // Before re-indexing: n runs over 1..=N and the pole sits at n' = np mod N.
    let mut orig = CompensatedSum::new();
    let mut original_terms = 0;
    let near = floor_i(&xr - &nd)..=ceil_i(&xr + &nd);
    for mm in near {
        let gap = (&xr - BigRational::from_integer(mm.into())).abs();
        if gap >= nd || gap <= hundred {
            continue;
        }
        let np = mm.rem_euclid(n as i64);
        // n ≡ n'·p⁻¹ (mod N), with n = N when n' = 0
        let idx = ((ctx.n_prev as u128 * np as u128) % n as u128) as u64;
        let idx = if idx == 0 { n } else { idx };
        orig += term(np, idx);
        original_terms += 1;
    }

    let u_num = (ctx.n_prev as u128 * (floor_i(xr.clone()).rem_euclid(n as i64)) as u128)
        % n as u128;
    let raw_sum = raw.value();
    let original_sum = orig.value();
    Ok(SeparatedSumReport {
        k: ctx.k,
        n,
        x,
        value: raw_sum.abs() / ctx.m,
        raw_sum,
        terms,
        original_sum,
        original_terms,
        discrepancy: (original_sum - raw_sum).abs(),
        derived_u: BigRational::new(BigInt::from(u_num), BigInt::from(n)),
    })
}

/// Constants of the band decomposition.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BandConfig {
    /// `C_l` keeps `j` with `‖u + c_l j/M_l‖ ≥ θ·M^{1/2}·M_l^{−1/2}`.
    pub theta: f64,
    /// `l_1` is the first scale with `M_{l_1} ≥ l1_scale·M⁴`.
    pub l1_scale: f64,
}

impl Default for BandConfig {
    fn default() -> Self {
        Self {
            theta: 1.0,
            l1_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleBand {
    pub l: usize,
    pub m_l: u64,
    pub c_l: u64,
    pub m_next: u64,
    /// The band is `lo ≤ |j| ≤ hi`.
    pub lo: u64,
    pub hi: u64,
    pub c_set_size: u64,
    pub complement_size: u64,
    /// `complement_size / (M_{l+1}^{3/2} M^{1/2} M_l^{−1/2})`
    pub kappa: f64,
}

impl ScaleBand {
    pub fn size(&self) -> u64 {
        2 * (self.hi + 1 - self.lo)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BandDecomposition {
    pub k: usize,
    pub m: f64,
    pub l0: Option<usize>,
    pub l1: Option<usize>,
    /// `M⁵ > N`: the whole sum is bounded directly and no bands are formed.
    pub trivial: bool,
    pub config: BandConfig,
    pub bands: Vec<ScaleBand>,
}

fn ceil_pow_3_2(m: u64) -> u64 {
    let c = m as u128 * m as u128 * m as u128;
    let r = c.sqrt();
    (if r * r == c { r } else { r + 1 }) as u64
}

fn floor_pow_3_2(m: u64) -> u64 {
    (m as u128 * m as u128 * m as u128).sqrt() as u64
}

pub fn band_decomposition(
    ctx: &SumContext,
    delta: &BigRational,
    u: &Shift,
    config: BandConfig,
) -> Result<BandDecomposition> {
    let m = ctx.m;
    // l0: largest l with M_l^{3/2} < Nδ, i.e. M_l³·q² < N²·p² for δ = p/q
    let (dp, dq) = (delta.numer(), delta.denom());
    let rhs = BigInt::from(ctx.n).pow(2) * dp * dp;
    let l0 = (0..ctx.scales())
        .take_while(|&l| BigInt::from(ctx.scale(l).0).pow(3) * dq * dq < rhs)
        .last();
    let mut out = BandDecomposition {
        k: ctx.k,
        m,
        l0,
        l1: None,
        trivial: m.powi(5) > ctx.n as f64,
        config,
        bands: Vec::new(),
    };
    if out.trivial {
        return Ok(out);
    }
    let required = config.l1_scale * m.powi(4);
    let l1 = (0..ctx.scales()).find(|&l| ctx.scale(l).0 as f64 >= required);
    let (l0, l1) = match (l0, l1) {
        (Some(l0), Some(l1)) if l1 < l0 => (l0, l1),
        _ => {
            return Err(Error::NoValidL1 {
                m_l0: l0.map_or("none".into(), |l| ctx.scale(l).0.to_string()),
                required,
            })
        }
    };
    out.l1 = Some(l1);
    for l in l1..l0 {
        let (m_l, c_l) = ctx.scale(l);
        let (m_next, _) = ctx.scale(l + 1);
        let lo = ceil_pow_3_2(m_l);
        let hi = if l + 1 == l0 {
            floor_pow_3_2(m_next)
        } else {
            ceil_pow_3_2(m_next) - 1
        };
        if hi < lo {
            continue;
        }
        let tau = config.theta * (m / m_l as f64).sqrt();
        let mut c_set = 0u64;
        for j in lo..=hi {
            for s in [j as i64, -(j as i64)] {
                if u.dist_f64(c_l, s, m_l) >= tau {
                    c_set += 1;
                }
            }
        }
        let total = 2 * (hi + 1 - lo);
        let complement = total - c_set;
        let scale = (m_next as f64).powf(1.5) * m.sqrt() / (m_l as f64).sqrt();
        out.bands.push(ScaleBand {
            l,
            m_l,
            c_l,
            m_next,
            lo,
            hi,
            c_set_size: c_set,
            complement_size: complement,
            kappa: complement as f64 / scale,
        });
    }
    Ok(out)
}

/// `|Σ_band {u + N_{k−1}j/N}/j − Σ_band {u + c_l j/M_l}/j|` against
/// `M²·M_l^{−1/2}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BandError {
    pub l: usize,
    pub error: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn band_error(band: &ScaleBand, u: &Shift, n_prev: u64, n: u64, m: f64) -> BandError {
    let s: CompensatedSum = (band.lo..=band.hi)
        .map(|j| u.paired(n_prev, j, n) - u.paired(band.c_l, j, band.m_l))
        .collect();
    let error = s.value().abs();
    let bound = m * m / (band.m_l as f64).sqrt();
    BandError {
        l: band.l,
        error,
        bound,
        ratio: error / bound,
    }
}

/// `Σ_{A<|j|≤P, j≡r (mod Mod)} 1/j` and the supremum of `|·|` over the
/// partial sums `P' ∈ (A, P]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResidueTail {
    pub sum: f64,
    pub sup: f64,
}

pub fn residue_tail(modulus: u64, r: u64, a: u64, p: u64) -> Result<ResidueTail> {
    if modulus == 0 || r >= modulus {
        return Err(Error::InvalidParameter(format!(
            "need 0 ≤ r < Mod, got r = {r}, Mod = {modulus}"
        )));
    }
    let zero = ResidueTail { sum: 0.0, sup: 0.0 };
    // −j ≡ r  ⇔  j ≡ −r; when r ≡ −r the two halves cancel term by term
    let neg = (modulus - r) % modulus;
    if a >= p || neg == r {
        return Ok(zero);
    }
    let first = |res: u64| {
        let base = a + 1;
        base + (res + modulus - base % modulus) % modulus
    };
    let (mut i, mut k) = (first(r), first(neg));
    let mut acc = CompensatedSum::new();
    let mut sup = 0f64;
    while i <= p || k <= p {
        if i <= k {
            acc += 1.0 / i as f64;
            i += modulus;
        } else {
            acc += -1.0 / k as f64;
            k += modulus;
        }
        sup = sup.max(acc.value().abs());
    }
    Ok(ResidueTail {
        sum: acc.value(),
        sup,
    })
}

/// The band sum `Σ_band {u + c_l j/M_l}/j`, computed directly and regrouped
/// by residue class mod `M_l`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PeriodicBandSum {
    pub l: usize,
    pub direct: f64,
    pub regrouped: f64,
    pub diff: f64,
    /// `|regrouped| / M_l^{−1/2}`
    pub ratio_to_bound: f64,
}

pub fn periodic_band_sum(band: &ScaleBand, u: &Shift) -> Result<PeriodicBandSum> {
    let (c, m) = (band.c_l, band.m_l);
    if c == 0 || c.gcd(&m) != 1 {
        return Err(Error::InvalidConvergent {
            c: c.to_string(),
            m: m.to_string(),
        });
    }
    let direct: CompensatedSum = (band.lo..=band.hi).map(|j| u.paired(c, j, m)).collect();
    let mut regrouped = CompensatedSum::new();
    for r in 1..=m {
        let t = residue_tail(m, r % m, band.lo - 1, band.hi)?;
        regrouped += u.frac_f64(c, r as i64, m) * t.sum;
    }
    let (direct, regrouped) = (direct.value(), regrouped.value());
    Ok(PeriodicBandSum {
        l: band.l,
        direct,
        regrouped,
        diff: (direct - regrouped).abs(),
        ratio_to_bound: regrouped.abs() * (m as f64).sqrt(),
    })
}

/// One line of the band report.
#[derive(Clone, Debug, Serialize)]
pub struct BandRow {
    pub k: usize,
    pub l: usize,
    #[serde(rename = "M_l")]
    pub m_l: u64,
    pub c_l: u64,
    pub band_lo: u64,
    pub band_hi: u64,
    pub band_sum: f64,
    pub band_error: f64,
    pub ratio_to_bound: f64,
    #[serde(rename = "C_l_size")]
    pub c_set_size: u64,
    pub complement_size: u64,
}

pub fn band_rows(ctx: &SumContext, dec: &BandDecomposition, u: &Shift) -> Result<Vec<BandRow>> {
    dec.bands
        .iter()
        .map(|b| {
            let s = periodic_band_sum(b, u)?;
            let e = band_error(b, u, ctx.n_prev, ctx.n, ctx.m);
            Ok(BandRow {
                k: ctx.k,
                l: b.l,
                m_l: b.m_l,
                c_l: b.c_l,
                band_lo: b.lo,
                band_hi: b.hi,
                band_sum: s.direct,
                band_error: e.error,
                ratio_to_bound: e.ratio,
                c_set_size: b.c_set_size,
                complement_size: b.complement_size,
            })
        })
        .collect()
}

/// Checks `M_{l+1} ≤ (a_max + 1)·M_l` on every consecutive pair of scales.
pub fn scale_growth_holds(ctx: &SumContext) -> bool {
    (1..ctx.scales()).all(|l| {
        let (a, _) = ctx.scale(l - 1);
        let (b, _) = ctx.scale(l);
        b as u128 <= (ctx.a_max as u128 + 1) * a as u128
    })
}
