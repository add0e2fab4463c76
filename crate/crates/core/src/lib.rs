//! Rewriting differential equations with radical coefficients into
//! rational-coefficient form by a rational change of the independent
//! variables.
//!
//! The pipeline: parse an ODE/PDE/linear system whose coefficients contain
//! (possibly nested) radicals of the independent variables, normalize the
//! radicals into a tower, try to parametrize the tower rationally, rewrite
//! the equation through the substitution, and return the substitution, its
//! inverse, the transformed equation and diagnostics — or a certified
//! impossibility / no-answer verdict.

pub mod error;
pub mod frontend;
pub mod kernel;
pub mod oracle;
pub mod par;
pub mod testkit;
pub mod parametrize;
pub mod tower;
pub mod transform;
