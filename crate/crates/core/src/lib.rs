//! Pattern-family engine for nonlinear Ramsey problems over the positive
//! integers.
//!
//! The crate is organized around four subsystems:
//!
//! * [`pattern`] — an expression DSL for families like `{x, y, x+y}` or
//!   `{a+b, a*b}`, with builders for sum-product sets, iterated
//!   sum-product expressions, mixed arithmetic/geometric progressions,
//!   finite sums/products, and bracketings.
//! * [`rado`] — partition regularity of integer linear systems via the
//!   columns condition, a brute-force coloring oracle, and the additive
//!   to multiplicative lift `c1*x1 + ... + ck*xk  ->  x1^c1 * ... * xk^ck`.
//! * [`search`] — monochromatic-witness search under a fixed coloring,
//!   extremal (witness-free) coloring search, forcing thresholds with
//!   verifiable certificates, and DIMACS CNF export.
//! * [`focusing`] — finite color-focusing trees: per-level monochromatic
//!   selectors chained by a pigeonhole step that extracts a combined
//!   witness, together with an independent witness checker.
//!
//! Everything is deterministic by default; batch operations and the
//! relaxed search mode parallelize with rayon when the `parallel`
//! feature (on by default) is enabled, and fall back to sequential
//! execution otherwise.

pub mod focusing;
pub mod pattern;
pub mod rado;
pub mod search;

pub use pattern::{Assignment, PatternError, PatternExpr, PatternFamily, VarRole};
pub use search::{Budget, Coloring, SearchOptions};
