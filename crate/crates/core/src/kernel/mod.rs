//! Exact-arithmetic foundation: rationals, sparse multivariate polynomials,
//! rational functions, elimination primitives and guarded complex numerics.

pub mod complex;
pub mod float;
pub mod gcd;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod vars;

pub use complex::{all_nth_roots, CNum};
pub use float::BigFloat;
pub use gcd::{
    content_in, gcd_many, perfect_power, poly_gcd, power_split, primitive_part_in, resultant,
    squarefree_part, sylvester_resultant, yun_decomposition,
};
pub use poly::{MPoly, Mono};
pub use rat::{rat, rat_i, rat_nth_root_exact, rat_power_split, Rat};
pub use ratfunc::{compose_poly, eval_poly_complex, eval_ratfunc_complex, RatFunc};
pub use vars::{join_registries, VarId, VarKind, VarRegistry};
