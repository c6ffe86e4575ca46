//! Configurations of four time-frequency shifts, the recurrence
//! `f(x+1)·P(x) = f(x)·Q(x)` along integer orbits, the conjugates trick and
//! the resulting lower bound, plus the Riemann-sum estimate for `|A| ≠ |B|`.

mod certificate;
mod config;
mod orbit;
mod riemann;

pub use certificate::{
    certificate_sweep, contradiction_certificate, densest_window, Certificate, CertificateParams,
    LiteralVariant, TAIL_SLACK,
};
pub use config::{
    classify_configuration, normalize_to_special, AffineMap, Configuration, Flags, PlanePoint,
    SpecialConfig, COORDINATE_BITS,
};
pub use orbit::{
    conjugate_identity_check, conjugate_selection, orbit_trace, ConjugateIdentity,
    ConjugateSelection, OrbitTrace, SymbolPair, IDENTITY_TOLERANCE,
};
pub use riemann::{
    mean_log_modulus, riemann_condition, riemann_deviation, sup_deviation, Quadrature,
    RiemannDeviation, DEFAULT_QUADRATURE_POINTS,
};
