//! Pattern expressions and families.
//!
//! A [`PatternExpr`] is an abstract syntax tree over variables, positive
//! integer constants, `+`, `*`, and positive integer powers. Expressions
//! are kept in a canonical form: nested sums and products are flattened,
//! operands are sorted by a fixed total order, and adjacent constants are
//! folded. Canonicalization is purely syntactic — `a*(b+c)` and
//! `a*b + a*c` stay distinct; value-level deduplication happens only when
//! a family is instantiated.
//!
//! A [`PatternFamily`] is a list of expressions together with an ordered
//! variable table. Each variable carries a role (`anchor` variables are
//! the ones shared-anchor search treats specially) and a multiplicity:
//! multiplicity `m` means the variable stands for `m` independent copies
//! `v1..vm`, and every expression mentioning it is replicated over all
//! copies when the family is expanded.

mod builders;
mod expr;
mod family;
mod parse;

pub use builders::{
    ap_family, build_bracketings, build_double_vdw, build_fs_fp, build_iterated,
    build_mixed_fsfp, build_sum_product, build_vdw_mixed, product_schur_family, schur_family,
};
pub use expr::PatternExpr;
pub use family::{Assignment, CopyVar, ExpandedFamily, PatternFamily, VarDecl, VarRole};
pub use parse::parse_family;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("duplicate annotation for variable `{0}`")]
    DuplicateAnnotation(String),
    #[error("annotated variable `{0}` does not occur in any expression")]
    UnusedVariable(String),
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("arithmetic overflow while evaluating")]
    Overflow,
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid builder parameter: {0}")]
    InvalidParameter(String),
    #[error("assignment values must be positive")]
    NonPositiveValue,
    #[error("distinctness flag set but copies {0} and {1} share value {2}")]
    DistinctnessViolated(String, String, u64),
}
