//! Finite color-focusing trees.
//!
//! A focusing tree hangs a word tree off a list of label levels: the
//! nodes at level `i` are the words whose `j`-th letter comes from level
//! `j`'s ground set, and every node carries one of `r` colors. Each
//! level also carries a selector — a finite monochromatic guarantee such
//! as "every 2-coloring of `{1..5}` contains a monochromatic `(i, j,
//! i+j)`". Labels are opaque formal symbols: witness combinations are
//! label multisets under a formal product, never numbers.
//!
//! [`run_focusing`] executes the deduction those ingredients support:
//! descend along step labels, select monochromatic tuples level by
//! level, pigeonhole the path colors, and emit a [`FocusWitness`] whose
//! target nodes all share one color. [`verify_focus_witness`] checks a
//! witness against the node colors with no reference to how it was
//! produced, and [`check_all_colorings`] proves totality exhaustively on
//! desk-sized trees.

mod run;
mod selector;

pub use run::{
    build_tree, check_all_colorings, run_focusing, run_focusing_traced, verify_focus_witness,
    FocusTrace, FocusTree, FocusWitness, SlotLabel, TraceStep, TreeSkeleton, MAX_TREE_NODES,
};
pub use selector::{
    constant_selector, normalize_colors, recompute_schur_guarantee, schur_selector,
    table_selector, table_selector_unchecked, tabulate_schur, Label, Selection, SelectorSpec,
    UNBOUNDED,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FocusingError {
    #[error("invalid selector: {0}")]
    BadSelector(String),
    #[error("{levels} levels cannot pigeonhole {r} colors; need at least r levels")]
    TooFewLevels { levels: usize, r: u8 },
    #[error("level {level} has {have} slots, expected {want}")]
    SlotMismatch { level: usize, have: usize, want: usize },
    #[error("selector too weak at level {level}: guarantees {have} colors, needs {base}^{exponent}")]
    SelectorTooWeak { level: usize, have: u32, base: u8, exponent: u128 },
    #[error("tree would have {0} nodes, over the cap")]
    TreeTooLarge(u128),
    #[error("invalid node coloring: {0}")]
    BadColoring(String),
    #[error("selectors do not match the tree's levels")]
    GroundMismatch,
    #[error("selector violated its guarantee at level {level} on coloring {palette:?}: {reason}")]
    SelectorViolation { level: usize, palette: Vec<u8>, reason: String },
    #[error("focusing failed on coloring {coloring_index}: {reason}")]
    Totality { coloring_index: u64, reason: String },
}
