//! Exact and certified numerics for products of unit-circle differences
//! `∏|e(x) − e(nα)|` along convergent denominators, fractional sums, and the
//! orbit experiments for two-term symbols on configurations of four points.

pub mod contfrac;
pub mod error;
pub mod exec;
pub mod fracsum;
pub mod hrtlab;
pub mod numeric;
pub mod unitprod;

pub use error::{Error, Result};
pub use exec::Exec;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
