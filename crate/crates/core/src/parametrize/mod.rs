//! Rational parametrization of tower varieties by a strategy pipeline, with
//! conic machinery and inversion of proper parametrizations.

pub mod conic;
pub mod engine;
pub mod invert;
pub mod types;

pub use conic::{parametrize_conic, ConicFailure, ConicParam};
pub use engine::parametrize_tower;
pub use invert::{invert_parametrization, invert_curve_parametrization};
pub use types::{NonRationalWitness, ParamOutcome, Parametrization};
