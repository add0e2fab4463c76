//! Radical towers: defining equations, canonical element arithmetic, exact
//! field degrees, tracing indices, simplification, and parametrization
//! verification.

pub mod analysis;
pub mod def;
pub mod elem;
pub mod simplify;
pub mod verify;

pub use analysis::{field_degree, minpoly_degree, numeric_fibre_count, tracing_index, TracingReport};
pub use def::{RadicalTower, TowerStep};
pub use elem::TowerElem;
pub use simplify::{simplify_radicals, Simplified};
pub use verify::{jacobian, ratfunc_determinant, verify_parametrization, VerifyFailure};
