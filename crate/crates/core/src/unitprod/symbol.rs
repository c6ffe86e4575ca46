use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::contfrac::{parse_rational, RealNumber};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, FixedReal, Fx, Phase};

/// Phases closer than this to a zero of an equal-moduli symbol are treated
/// as zeros (2^-64 turns).
pub const ZERO_GUARD: u128 = 1u128 << 64;

/// A complex coefficient stored in polar form, the argument as a phase in
/// turns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coef {
    modulus: f64,
    phase: Phase,
}

impl Coef {
    pub fn polar(modulus: f64, phase: Phase) -> Result<Self> {
        if !(modulus.is_finite() && modulus >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coefficient modulus must be finite and non-negative, got {modulus}"
            )));
        }
        Ok(Self { modulus, phase })
    }

    /// `e(turns)`.
    pub fn unit(phase: Phase) -> Self {
        Self {
            modulus: 1.0,
            phase,
        }
    }

    pub fn real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn from_complex(z: Complex64) -> Self {
        let modulus = z.norm();
        let phase = if modulus == 0.0 {
            Phase::default()
        } else {
            Phase::from_turns(z.im.atan2(z.re) / (2.0 * PI))
        };
        Self { modulus, phase }
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, 2.0 * PI * self.phase.to_f64())
    }
}

/// Accepts `re`, `re+imi`, `imi` (anything `Complex64` parses) and
/// `e:<turns>` for the unit coefficient `e(turns)` with rational `turns`.
impl FromStr for Coef {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(t) = s.strip_prefix("e:") {
            let r = parse_rational(t).map_err(|e| match e {
                Error::Parse { position, expected } => Error::Parse {
                    position: position + 2,
                    expected,
                },
                other => other,
            })?;
            return Ok(Coef::unit(Fx::from_rational(&r).phase()));
        }
        let z: Complex64 = s.parse().map_err(|_| Error::Parse {
            position: 0,
            expected: "a complex number like 1, 0.5-2i or e:1/4".into(),
        })?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("coefficient {s} is not finite")));
        }
        Ok(Coef::from_complex(z))
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex();
        write!(f, "{}{:+}i", z.re, z.im)
    }
}

impl Serialize for Coef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The symbol `x ↦ A + B·e(ωx)`.
#[derive(Clone, Debug)]
pub struct TwoTermSymbol {
    a: Coef,
    b: Coef,
    omega: RealNumber,
    /// `arg B − arg A` in turns.
    offset: Phase,
}

impl TwoTermSymbol {
    pub fn new(a: Coef, b: Coef, omega: RealNumber) -> Result<Self> {
        if b.modulus.is_zero() {
            return Err(Error::InvalidParameter("B must be nonzero".into()));
        }
        let offset = b.phase - a.phase;
        Ok(Self {
            a,
            b,
            omega,
            offset,
        })
    }

    pub fn a(&self) -> Coef {
        self.a
    }

    pub fn b(&self) -> Coef {
        self.b
    }

    /// `arg B − arg A` in turns.
    pub fn offset(&self) -> Phase {
        self.offset
    }

    pub fn omega(&self) -> &RealNumber {
        &self.omega
    }

    /// `|A| = |B|`, i.e. the symbol vanishes somewhere on every period.
    pub fn has_zeros(&self) -> bool {
        self.a.modulus == self.b.modulus
    }

    /// `ln|A + B·e(φ)|` for a phase known to within `err` ulps; `None` when a
    /// zero cannot be excluded.
    pub fn log_abs_phase(&self, phi: Phase, err: u128) -> Option<f64> {
        let (ma, mb) = (self.a.modulus, self.b.modulus);
        if ma == 0.0 {
            return Some(mb.ln());
        }
        // |A + B e(φ)|² = (|A| − |B|)² + 4|A||B| sin²(π‖φ + arg − ½‖)
        let d = (phi + self.offset - Phase::HALF).dist();
        let s = (PI * d as f64 * crate::numeric::ULP).sin();
        if self.has_zeros() {
            if d <= err.max(ZERO_GUARD) {
                return None;
            }
            Some((2.0 * ma).ln() + s.ln())
        } else {
            let diff = ma - mb;
            Some(0.5 * (diff * diff + 4.0 * ma * mb * s * s).ln())
        }
    }

    /// Phases of `ω(x + n)` along the orbit `x + ℤ`.
    pub fn orbit(&self, x: &FixedReal) -> Orbit {
        let w = self.omega.fixed();
        let (base, base_err) = w.phase_times_fixed(x);
        Orbit {
            base,
            base_err,
            step: w.phase(),
            step_err: w.err,
        }
    }

    /// `ln|P(x + n)|`; `None` at (possible) zeros.
    pub fn log_abs_at(&self, orbit: &Orbit, n: i64) -> Option<f64> {
        let (phi, err) = orbit.phase(n);
        self.log_abs_phase(phi, err)
    }

    /// `Σ_{n=lo}^{hi} ln|P(x + n)|`, or the first offset where a zero cannot be
    /// excluded.
    pub fn log_product(&self, orbit: &Orbit, lo: i64, hi: i64) -> std::result::Result<f64, i64> {
        let mut acc = CompensatedSum::new();
        for n in lo..=hi {
            acc += self.log_abs_at(orbit, n).ok_or(n)?;
        }
        Ok(acc.value())
    }
}

/// Phase data of `ω(x + n)` for a fixed base point.
#[derive(Clone, Copy, Debug)]
pub struct Orbit {
    base: Phase,
    base_err: u128,
    step: Phase,
    step_err: u128,
}

impl Orbit {
    pub fn phase(&self, n: i64) -> (Phase, u128) {
        let p = self.base + self.step.mul_int(n);
        let e = self
            .base_err
            .saturating_add(self.step_err.saturating_mul(n.unsigned_abs() as u128));
        (p, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::RealSpec;

    fn golden_symbol(a: &str, b: &str) -> TwoTermSymbol {
        TwoTermSymbol::new(a.parse().unwrap(), b.parse().unwrap(), RealNumber::golden()).unwrap()
    }

    #[test]
    fn coefficient_forms() {
        let c: Coef = "-1".parse().unwrap();
        assert_eq!(c.modulus(), 1.0);
        assert_eq!(c.phase(), Phase::HALF);
        let u: Coef = "e:1/4".parse().unwrap();
        assert!((u.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let z: Coef = "3+4i".parse().unwrap();
        assert_eq!(z.modulus(), 5.0);
        assert!(matches!("e:1/".parse::<Coef>(), Err(Error::Parse { position: 4, .. })));
    }

    #[test]
    fn matches_direct_complex_evaluation() {
        let sym = golden_symbol("2", "1-1i");
        let x = FixedReal::exact(Fx::from_f64(0.3));
        let orbit = sym.orbit(&x);
        let alpha = RealNumber::golden().to_f64();
        for n in -5..5 {
            let t = alpha * (0.3 + n as f64);
            let direct = (Complex64::new(2.0, 0.0)
                + Complex64::new(1.0, -1.0) * Complex64::from_polar(1.0, 2.0 * PI * t))
            .norm()
            .ln();
            let v = sym.log_abs_at(&orbit, n).unwrap();
            assert!((v - direct).abs() < 1e-12, "n={n}: {v} vs {direct}");
        }
    }

    #[test]
    fn zeros_are_detected() {
        let half = RealNumber::new(RealSpec::rational(1, 2)).unwrap();
        let sym = TwoTermSymbol::new(Coef::real(1.0), Coef::real(1.0), half).unwrap();
        assert!(sym.has_zeros());
        let orbit = sym.orbit(&FixedReal::exact(Fx::from_int(1)));
        // 1 + e(1/2) = 0
        assert_eq!(sym.log_abs_at(&orbit, 0), None);
        assert_eq!(sym.log_product(&orbit, -2, 2), Err(-2));
        assert!(sym.log_abs_at(&orbit, 1).is_some());
    }

    #[test]
    fn zero_b_is_rejected() {
        let r = TwoTermSymbol::new(Coef::real(1.0), Coef::real(0.0), RealNumber::golden());
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }
}
