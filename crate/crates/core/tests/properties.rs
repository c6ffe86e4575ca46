use std::f64::consts::PI;

use hrtlab_core::contfrac::{expand, ConvergentTable, RealNumber, RealSpec};
use hrtlab_core::fracsum::{periodic_band_sum, residue_tail, weighted_fracpart_sum, ScaleBand, Shift};
use hrtlab_core::hrtlab::{
    mean_log_modulus, normalize_to_special, orbit_trace, PlanePoint, SymbolPair,
};
use hrtlab_core::numeric::{FixedReal, Fx};
use hrtlab_core::unitprod::{admissible_fx, AdmissibilityParams, Coef};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cf_value(a0: &BigInt, terms: &[BigInt]) -> BigRational {
    let mut v: Option<BigRational> = None;
    for a in terms.iter().rev() {
        let t = BigRational::from_integer(a.clone());
        v = Some(match v {
            None => t,
            Some(v) => t + v.recip(),
        });
    }
    let head = BigRational::from_integer(a0.clone());
    match v {
        None => head,
        Some(v) => head + v.recip(),
    }
}

/// `‖x‖ ≥ δ` and `‖x − n/N‖, ‖x − np/q‖ ≥ δ/N` for `1 ≤ n ≤ N`, literally.
fn admissible_oracle(x: &BigRational, p: i64, q: i64, n: u64, delta: &BigRational) -> bool {
    let dist = |v: BigRational| {
        let f = &v - v.floor();
        f.clone().min(BigRational::one() - f)
    };
    let nr = BigRational::from_integer(n.into());
    let thr = delta / &nr;
    if dist(x.clone()) < *delta {
        return false;
    }
    (1..=n as i64).all(|i| {
        dist(x - rat(i, n as i64)) >= thr && dist(x - rat(i * p, q)) >= thr
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_expansion_reconstructs(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = RealNumber::new(RealSpec::rational(p, q)).unwrap();
        let cf = expand(&x, 100).unwrap();
        prop_assert!(cf.exact());
        let (a0, rest) = cf.terms().split_first().unwrap();
        prop_assert_eq!(cf_value(a0, rest), rat(p, q));
        if !rest.is_empty() {
            prop_assert!(rest.last().unwrap() >= &BigInt::from(2));
        }
    }

    #[test]
    fn convergent_recurrences(p in 1i64..1_000_000, q in 1i64..1_000_000) {
        let x = RealNumber::new(RealSpec::rational(p, q)).unwrap();
        let len = expand(&x, 100).unwrap().terms().len();
        let t = ConvergentTable::build(&x, len - 1).unwrap();
        let r = t.rows();
        for i in 2..r.len() {
            prop_assert_eq!(&r[i].p, &(&r[i].a * &r[i - 1].p + &r[i - 2].p));
            prop_assert_eq!(&r[i].n, &(&r[i].a * &r[i - 1].n + &r[i - 2].n));
        }
    }

    #[test]
    fn weighted_sum_is_periodic_in_u(num in -500i64..500, den in 1i64..200, c in 1u64..50, j in 1u64..200) {
        let n = 211; // prime, so any 1 ≤ c < n is coprime
        let u = Shift::new(&rat(num, den)).unwrap();
        let u1 = Shift::new(&(rat(num, den) + BigRational::one())).unwrap();
        let a = weighted_fracpart_sum(&u, c, n, 3.0, j).unwrap();
        let b = weighted_fracpart_sum(&u1, c, n, 3.0, j).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn residue_tail_matches_brute_force(m in 1u64..40, r in 0u64..40, a in 0u64..300, len in 0u64..2000) {
        let r = r % m;
        let p = a + len;
        let t = residue_tail(m, r, a, p).unwrap();
        let mut s = 0.0;
        let mut sup = 0f64;
        for j in a + 1..=p {
            if j % m == r { s += 1.0 / j as f64; }
            if (m - j % m) % m == r { s -= 1.0 / j as f64; }
            sup = sup.max(s.abs());
        }
        prop_assert!((t.sum - s).abs() < 1e-12);
        prop_assert!((t.sup - sup).abs() < 1e-12);
    }

    #[test]
    fn band_regrouping_is_exact(c in 1u64..60, m in 2u64..60, lo in 1u64..400, len in 0u64..400, num in 0i64..100) {
        prop_assume!(c.gcd(&m) == 1);
        let band = ScaleBand { l: 0, m_l: m, c_l: c, m_next: m, lo, hi: lo + len, c_set_size: 0, complement_size: 0, kappa: 0.0 };
        let s = periodic_band_sum(&band, &Shift::new(&rat(num, 101)).unwrap()).unwrap();
        prop_assert!(s.diff < 1e-12, "{:?}", s);
    }

    #[test]
    fn admissibility_matches_literal_check(num in 0i64..4096, p in 1i64..30, q in 2i64..31, n in 1u64..40) {
        prop_assume!(p < q && p.gcd(&q) == 1);
        let delta = rat(1, 128);
        let alpha = RealNumber::new(RealSpec::rational(p, q)).unwrap();
        let params = AdmissibilityParams::new(alpha, delta.clone(), n, None).unwrap();
        let x = rat(2 * num + 1, 8192);
        let fx = Fx::from_rational(&x);
        prop_assert_eq!(admissible_fx(fx, &params).unwrap(), admissible_oracle(&x, p, q, n, &delta));
    }

    #[test]
    fn orbit_profile_matches_direct_recurrence(x in 0.0f64..1.0, back in 0u64..60, fwd in 0u64..60, th in 0i64..16) {
        let theta = rat(th, 16);
        let pair = SymbolPair::new(Coef::real(1.0), Coef::real(1.0), RealNumber::golden(), RealNumber::silver(), theta.clone()).unwrap();
        let fx = Fx::from_f64(x);
        let Ok(t) = orbit_trace(&pair, &FixedReal::exact(fx), back, fwd) else { return Ok(()) };
        // phases reduced mod 1 in exact rational arithmetic before going to f64
        let approx = |r: &RealNumber| r.value().enclose(200).lo().clone();
        let (a, b) = (approx(&RealNumber::golden()), approx(&RealNumber::silver()));
        let xr = fx.to_rational();
        let frac = |v: BigRational| num_traits::ToPrimitive::to_f64(&(&v - v.floor())).unwrap();
        let e = |s: f64| Complex64::from_polar(1.0, 2.0 * PI * s);
        let step = |n: i64| {
            let y = &xr + rat(n, 1);
            let pb = frac(&b * &y + &theta);
            let pa = frac(&a * &y);
            (1.0 + e(pb)).norm().ln() - (1.0 + e(pa)).norm().ln()
        };
        let mut f = 0.0;
        for n in 0..fwd as i64 {
            f += step(n);
            prop_assert!((t.at(n + 1).unwrap() - f).abs() < 1e-10 * (1.0 + f.abs()));
        }
        let mut f = 0.0;
        for n in 1..=back as i64 {
            f -= step(-n);
            prop_assert!((t.at(-n).unwrap() - f).abs() < 1e-10 * (1.0 + f.abs()));
        }
        prop_assert_eq!(t.at(0), Some(0.0));
    }

    #[test]
    fn normalization_round_trip(a in 1i64..100, b in -100i64..100, s in -9i64..9, tx in -9i64..9, rot in 0usize..4) {
        prop_assume!(b != 0);
        let base = [(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(0, 1)), (rat(0, 1), rat(a, 101)), (rat(1, 1), rat(b, 7))];
        let pts: Vec<PlanePoint> = base.iter().map(|(t, x)| {
            let (t, x) = (t.clone(), x + rat(s, 1) * t);
            let (t, x) = match rot { 0 => (t, x), 1 => (-x, t), 2 => (-t, -x), _ => (x, -t) };
            PlanePoint::rational(t + rat(tx, 1), x)
        }).collect();
        let src: [PlanePoint; 4] = pts.try_into().unwrap();
        let sc = normalize_to_special(src.clone()).unwrap();
        prop_assert!(sc.map.determinant().is_one());
        prop_assert_eq!(sc.recover(), src);
        prop_assert!(!sc.alpha.is_negative() && sc.alpha < BigRational::one());
        prop_assert!(!sc.beta.is_zero() || b == 0);
    }

    #[test]
    fn mean_log_modulus_is_symmetric(u in 0.1f64..4.0, v in 0.1f64..4.0) {
        prop_assume!((u - v).abs() > 0.1);
        let a = mean_log_modulus(Coef::real(u), Coef::real(v), 2048).unwrap();
        let b = mean_log_modulus(Coef::real(v), Coef::real(u), 2048).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error + b.error);
        prop_assert!((a.value - u.max(v).ln()).abs() <= a.error);
    }
}
