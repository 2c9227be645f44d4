//! Optimal stopping on the last success of independent Bernoulli trials with
//! index-dependent payoffs.
//!
//! The crate solves an instance by backward induction ([`dp`]), evaluates the
//! weighted odds threshold ([`odds`]), decides whether the optimal rule is a
//! threshold rule ([`monotone`]), and checks all of it against exhaustive
//! enumeration ([`oracle`]) and seeded simulation ([`montecarlo`]). Every
//! solver is generic over [`Scalar`], so the same code runs on exact
//! fractions or on floats.

pub mod dp;
pub mod error;
pub mod families;
pub mod instance;
pub mod monotone;
pub mod montecarlo;
pub mod odds;
pub mod oracle;
pub mod scalar;
pub mod special;

pub use dp::{e_stop, solve, Decision, DpSolution};
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilySpec};
pub use instance::{validate, Entry, InstanceFile, ProblemInstance};
pub use monotone::{certify, Certificate, MonotonicityVerdict};
pub use montecarlo::SimulationResult;
pub use odds::{classic_odds, odds, odds_index, odds_value, OddsResult};
pub use oracle::StopSetEvaluation;
pub use scalar::{ExtendedReal, NumericMode, Scalar, EPS_CMP};

pub use num_rational::BigRational;
