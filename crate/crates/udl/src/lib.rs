//! Dimensional analysis with integer-packed dimension codes.
//!
//! The crate has three layers. [`dim`] implements the dimension algebra
//! twice, once on exponent vectors and once on single-integer packed codes,
//! with strict and compat capacity policies. [`quantity`] and [`system`]
//! build dimension-checked values and unit registries on top. [`lang`]
//! implements UDL, a small declaration language for units and quantities,
//! with a dimension checker and two evaluators: a checked one that does full
//! dimension bookkeeping at runtime and a stripped one that runs on bare
//! floats after the program has been checked. [`instrument`] counts
//! dimension operations so the stripped evaluator can prove it performs
//! none, and [`corpus`] generates random well-dimensioned programs for the
//! benchmark harness and the equivalence tests.

pub mod corpus;
pub mod dim;
pub mod instrument;
pub mod lang;
pub mod quantity;
pub mod system;

pub use dim::{ConfigError, DimError, DimVector, EncodingConfig, PackedDim};
pub use lang::check::{check, CheckOptions, DimEncoding, NodeInfo, TypedProgram};
pub use lang::diag::{DiagCode, Diagnostic};
pub use lang::eval::{eval_checked, eval_fast, format_output, OutputRecord};
pub use lang::{analyze, parse_source};
pub use quantity::{pow_value, Precision, Quantity, QuantityError};
pub use system::{SystemError, UnitDef, UnitExpr, UnitSystem};
