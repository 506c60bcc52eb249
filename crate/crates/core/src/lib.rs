//! Exact arithmetic on the Escherian numbers and the hyperoperation ladder
//! built on their incrementation.

pub mod ackermann;
pub mod arith;
pub mod bounds;
pub mod cxe;
pub mod error;
pub mod expr;
pub mod hyper;
pub mod laws;
pub mod numeric;
pub mod plot;
pub mod rank0;
pub mod scalar;

pub use ackermann::{ackermann, ackermann_mod};
pub use arith::{add, div_by_rational, mul, negate, sub};
pub use cxe::{pseudo_cmp, stigma, stigmamodulo, CxE, PseudoCmp, Region, Window};
pub use error::{EscherError, Result};
pub use expr::{parse, Expr, Outcome, Session, Value};
pub use hyper::{
    hyper_apply, hyper_linv, hyper_rinv, iter_left, iter_right, rank_recursion_check, HyperRank,
};
pub use numeric::Numeric;
pub use rank0::{kis, kis_with, sik, sik_by_cases, zeration_reference, TieBreak, ValueSet};
pub use scalar::{ExactScalar, PrecisionConfig};
