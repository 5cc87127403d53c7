//! Extremal (witness-free) coloring search and forcing thresholds.

use std::time::{Duration, Instant};

use crate::pattern::PatternFamily;

use super::dfs::{find_avoiding_par, find_avoiding_seq, AvoidOutcome, DfsConfig};
use super::{Coloring, InstanceStats, InstanceTable, SearchError, SearchOptions};

/// Result of one extremal search at a fixed range.
#[derive(Debug, Clone)]
pub struct ExtremalResult {
    /// Witness-free coloring, or `None` when `[1..N]` is forced.
    pub coloring: Option<Coloring>,
    pub nodes: u64,
    pub instances: InstanceStats,
}

/// Depth-first search for a coloring of `[1..N]` with no monochromatic
/// in-range instance. Sequential mode returns the lexicographically
/// least such coloring; symmetry breaking (element 1 gets color 0, color
/// `c+1` may appear only after color `c`) does not change existence.
pub fn extremal_search(
    family: &PatternFamily,
    r: u8,
    n: u32,
    options: &SearchOptions,
) -> Result<ExtremalResult, SearchError> {
    let table = InstanceTable::build(family, n);
    extremal_search_with_table(&table, r, options)
}

pub(crate) fn extremal_search_with_table(
    table: &InstanceTable,
    r: u8,
    options: &SearchOptions,
) -> Result<ExtremalResult, SearchError> {
    if r == 0 || r > super::MAX_COLORS {
        return Err(SearchError::InvalidColorCount(r));
    }
    let config = DfsConfig { r, symmetry: options.symmetry };
    let (outcome, stats) = if options.parallel {
        find_avoiding_par(&table.sets, config, &options.budget)?
    } else {
        find_avoiding_seq(&table.sets, config, &options.budget)?
    };
    Ok(ExtremalResult {
        coloring: match outcome {
            AvoidOutcome::Found(c) => Some(c),
            AvoidOutcome::Exhausted => None,
        },
        nodes: stats.nodes,
        instances: table.stats(),
    })
}

/// Minimal range that forces the family, with the extremal coloring one
/// step below as refutation evidence.
#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub forcing_n: u32,
    /// Extremal coloring of `[1..forcing_n - 1]`; empty when forcing_n is 1.
    pub extremal: Coloring,
    pub nodes: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub enum ThresholdOutcome {
    Forced(ThresholdResult),
    /// The cap was reached with an extremal coloring still in hand.
    Unknown { n_max: u32, extremal: Coloring, nodes: u64 },
}

/// Per-range progress report for long threshold runs.
#[derive(Debug, Clone, Copy)]
pub struct LevelReport {
    pub n: u32,
    pub forced: bool,
    pub nodes: u64,
    pub total_nodes: u64,
}

pub fn threshold(
    family: &PatternFamily,
    r: u8,
    n_max: u32,
    options: &SearchOptions,
) -> Result<ThresholdOutcome, SearchError> {
    threshold_with(family, r, n_max, options, |_| {})
}

/// Searches ranges `N = 1, 2, ...` in order; the first exhausted range is
/// the forcing threshold (forcing is monotone in `N`, so the scan is
/// sound). Emits a [`LevelReport`] after each range.
pub fn threshold_with(
    family: &PatternFamily,
    r: u8,
    n_max: u32,
    options: &SearchOptions,
    mut on_level: impl FnMut(LevelReport),
) -> Result<ThresholdOutcome, SearchError> {
    if n_max < 1 {
        return Err(SearchError::MalformedCertificate("n_max must be at least 1".into()));
    }
    let started = Instant::now();
    let mut total_nodes = 0u64;
    let mut extremal = Coloring::new(0, r)?;
    for n in 1..=n_max {
        let result = extremal_search(family, r, n, options)?;
        total_nodes += result.nodes;
        on_level(LevelReport {
            n,
            forced: result.coloring.is_none(),
            nodes: result.nodes,
            total_nodes,
        });
        match result.coloring {
            Some(coloring) => extremal = coloring,
            None => {
                return Ok(ThresholdOutcome::Forced(ThresholdResult {
                    forcing_n: n,
                    extremal,
                    nodes: total_nodes,
                    wall: started.elapsed(),
                }));
            }
        }
    }
    Ok(ThresholdOutcome::Unknown { n_max, extremal, nodes: total_nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{ap_family, parse_family, schur_family};
    use crate::search::find_witness;

    fn default_options() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn schur_extremal_examples() {
        let family = schur_family();
        let found = extremal_search(&family, 2, 4, &default_options()).unwrap();
        assert_eq!(found.coloring.unwrap().digits(), "0110");
        let forced = extremal_search(&family, 2, 5, &default_options()).unwrap();
        assert_eq!(forced.coloring, None);
    }

    #[test]
    fn out_of_range_family_gets_trivial_coloring() {
        // Every instance of {x+y} has a value above 1.
        let family = parse_family("x+y").unwrap();
        let result = extremal_search(&family, 2, 1, &default_options()).unwrap();
        assert_eq!(result.coloring.unwrap().digits(), "0");
    }

    #[test]
    fn schur_threshold_is_five() {
        match threshold(&schur_family(), 2, 100, &default_options()).unwrap() {
            ThresholdOutcome::Forced(result) => {
                assert_eq!(result.forcing_n, 5);
                assert_eq!(result.extremal.digits(), "0110");
            }
            other => panic!("expected forced outcome, got {other:?}"),
        }
    }

    #[test]
    fn three_ap_threshold_is_nine() {
        match threshold(&ap_family(3).unwrap(), 2, 100, &default_options()).unwrap() {
            ThresholdOutcome::Forced(result) => assert_eq!(result.forcing_n, 9),
            other => panic!("expected forced outcome, got {other:?}"),
        }
    }

    #[test]
    fn capped_threshold_reports_unknown() {
        match threshold(&schur_family(), 2, 3, &default_options()).unwrap() {
            ThresholdOutcome::Unknown { n_max, extremal, .. } => {
                assert_eq!(n_max, 3);
                // Lexicographically least witness-free coloring of [1..3]:
                // only {1,2} and {1,2,3} are in range, so 010 avoids both.
                assert_eq!(extremal.digits(), "010");
            }
            other => panic!("expected unknown outcome, got {other:?}"),
        }
    }

    #[test]
    fn duality_with_full_enumeration() {
        // extremal none <=> every coloring has a witness, checked by brute
        // force while r^N stays tiny.
        let family = schur_family();
        for n in 1..=6u32 {
            let extremal_exists = extremal_search(&family, 2, n, &default_options())
                .unwrap()
                .coloring
                .is_some();
            let mut all_have_witness = true;
            for bits in 0u32..(1 << n) {
                let colors: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                let coloring = Coloring::from_colors(2, &colors).unwrap();
                if find_witness(&family, &coloring).is_none() {
                    all_have_witness = false;
                    break;
                }
            }
            assert_eq!(extremal_exists, !all_have_witness, "N={n}");
        }
    }

    #[test]
    fn forcing_is_monotone() {
        for (family, forced_at) in [(schur_family(), 5u32), (ap_family(3).unwrap(), 9)] {
            for n in forced_at..=forced_at + 3 {
                let result = extremal_search(&family, 2, n, &default_options()).unwrap();
                assert_eq!(result.coloring, None, "N={n} should stay forced");
            }
        }
    }

    #[test]
    fn symmetry_breaking_preserves_existence() {
        let family = schur_family();
        for n in 1..=7u32 {
            let with = extremal_search(&family, 2, n, &default_options()).unwrap();
            let without = extremal_search(
                &family,
                2,
                n,
                &SearchOptions { symmetry: false, ..Default::default() },
            )
            .unwrap();
            assert_eq!(with.coloring.is_some(), without.coloring.is_some(), "N={n}");
        }
    }
}
