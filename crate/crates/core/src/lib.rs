//! Exact construction, transformation and evaluation of polynomial
//! continued fractions.

pub mod analysis;
pub mod cf;
pub mod error;
pub mod eval;
pub mod float;
pub mod generators;
pub mod poly;
pub mod rational;
pub mod transforms;

pub use cf::{brouncker_cf, e_cf, ApproximantSequence, CfSpec, Convergent, Tail, Term};
pub use error::{Error, Result};
pub use eval::{evaluate, evaluate_terms, EvalConfig, EvalMode, LimitEstimate};
pub use float::BigFloat;
pub use generators::{preset, FamilyMember, Hypothesis, LimitClaim, NamedConstant};
pub use poly::{Degree, IntPolynomial, RationalFunction};
