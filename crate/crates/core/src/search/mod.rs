//! Monochromatic instance search, extremal colorings, thresholds,
//! certificates, and CNF export.
//!
//! Finite convention used throughout: an instance whose value set
//! contains anything larger than `N` (or overflows 64-bit arithmetic) is
//! treated as absent, never as forbidden. This is the standard
//! finitization for Schur/van der Waerden style numbers and it is what
//! makes the reported thresholds well-defined.

mod certificate;
mod cnf;
mod coloring;
pub(crate) mod dfs;
mod extremal;
mod instances;
mod verify;
mod witness;

pub use certificate::{Certificate, CertificateKind, ForcedStats};
pub use cnf::{build_cnf, export_cnf, CnfDocument};
pub use coloring::{Coloring, MAX_COLORS};
pub use extremal::{
    extremal_search, threshold, threshold_with, ExtremalResult, LevelReport, ThresholdOutcome,
    ThresholdResult,
};
pub use instances::{InstanceStats, InstanceTable};
pub use verify::{verify_certificate, ReplayBudget, VerifyMode, VerifyReport};
pub use witness::{
    find_shared_anchor_witnesses, find_witness, find_witness_with_stats, AnchorWitness, Witness,
    WitnessStats,
};

use std::time::Instant;

use thiserror::Error;

/// Explicit search budget. Exhausting it is always an explicit outcome,
/// never a silent truncation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes), deadline: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BudgetExceeded {
    #[error("node budget exceeded after {0} nodes")]
    Nodes(u64),
    #[error("wall-clock budget exceeded")]
    WallClock,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("color count {0} outside 1..=16")]
    InvalidColorCount(u8),
    #[error("color {color} out of range for r={r}")]
    ColorOutOfRange { color: u8, r: u8 },
    #[error("invalid coloring digit `{0}`")]
    BadColoringDigit(char),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("family has no anchor variable")]
    NoAnchor,
    #[error("family must have exactly one anchor copy, found {0}")]
    AmbiguousAnchor(usize),
    #[error("coloring has N={have}, expected {want}")]
    ColoringSizeMismatch { have: u32, want: u32 },
    #[error("certificate malformed: {0}")]
    MalformedCertificate(String),
    #[error("pattern error: {0}")]
    Pattern(#[from] crate::pattern::PatternError),
}

/// Execution options shared by the search entry points.
///
/// `parallel: false` (the default) runs strictly sequentially and all
/// results are lexicographically least and bit-identical across runs and
/// thread counts. `parallel: true` relaxes found colorings to "any valid
/// certificate"; exhaustive refutations remain exact either way.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub budget: Budget,
    pub symmetry: bool,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: Budget::default(), symmetry: true, parallel: false }
    }
}
