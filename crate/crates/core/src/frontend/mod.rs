//! Parsing of textual equations, radical-tower extraction, and jet
//! polynomials.

pub mod ast;
pub mod diffpoly;
pub mod extract;
pub mod parse;

pub use ast::Expr;
pub use diffpoly::{DiffPoly, JetMono, JetVar};
pub use extract::{eval_expr_numeric, extract_tower, Extraction};
pub use parse::{parse_equation, SymbolTable};
