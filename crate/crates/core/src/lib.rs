//! Accessory-parameter polynomials of Heun-class equations.
//!
//! The holomorphic solution `y = Σ c_k(B) z^k` of the Heun, confluent Heun and
//! reduced confluent Heun equations has coefficients that are polynomials of
//! degree `k` in the accessory parameter `B`. This crate builds them exactly,
//! finds their zeros in arbitrary precision, evaluates the closed-form
//! perturbative expansions of those zeros in the deformation parameter `s`,
//! and estimates the connection coefficient `d₂(B)` whose zeros the
//! polynomial zeros approximate.

pub mod error;
pub mod families;
pub mod oracle;
pub mod perturbation;
pub mod poly;
pub mod recurrence;
pub mod report;
pub mod rootfind;
pub mod scalar;
pub mod special;
pub mod tracking;
pub mod verify;

pub use error::{HeunError, Result};
pub use families::{FamilyKind, RecurrenceSpec};
pub use poly::Polynomial;
pub use recurrence::PolynomialFamily;
pub use scalar::{BigFloat, Exact, Field, FieldTag, GaussRational, Scalar, DEFAULT_PRECISION};
