//! Irrationality certification, denominator growth, reference constants and
//! limit verification.

pub mod growth;
pub mod oracle;
pub mod tietze;
pub mod verify;

pub use growth::{growth_diagnostics, GrowthBound, GrowthKind};
pub use oracle::reference_constant;
pub use tietze::{tietze_check, TietzeMethod, TietzeReport};
pub use verify::{verify_limit, Verdict, VerificationReport};
