//! Change of variables on equations: jet substitution tables, coefficient
//! substitution, canonical normalization, rationality checks,
//! back-substitution rendering, and the end-to-end pipeline.

pub mod apply;
pub mod jets;
pub mod pipeline;
pub mod render;

pub use apply::{admissibility_warnings, normalize_equation, rationality_check, transform_equation};
pub use jets::{compose_is_identity, forward_jet_table, inverse_jet_table, JetRow, JetTable};
pub use pipeline::{
    run_pipeline, PipelineOptions, Status, SuppliedSubstitution, TransformOutcome,
};
pub use render::{
    diffpoly_expr, poly_expr, radical_expr, radical_render, ratfunc_expr,
    transformed_unknown_names, VarRender,
};
