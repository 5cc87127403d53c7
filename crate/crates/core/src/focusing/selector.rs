//! Per-level monochromatic selectors.
//!
//! A selector owns a finite ground set of opaque labels and guarantees:
//! for every coloring of the ground set with at most `guarantee` colors,
//! it returns a fixed-arity tuple of labels that the coloring makes
//! monochromatic, together with a distinguished step slot used for
//! descent. Guarantees are established by exhausting set partitions of
//! the ground set — a coloring with at most K colors is, up to renaming,
//! a partition into at most K blocks, and selectors only ever see
//! colorings normalized to first-occurrence ids.

use std::collections::BTreeMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;

use super::FocusingError;

pub type Label = String;

/// Guarantee value meaning "valid under every coloring whatsoever".
pub const UNBOUNDED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// Indices into the selector's ground set, one per slot.
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone)]
enum SelectRule {
    /// Monochromatic `{i, j, i+j}` inside `{1..s}`; slots are (i, j, i+j).
    Schur,
    /// A fixed label repeated in every slot; trivially monochromatic.
    Constant(usize),
    /// Explicit table keyed by normalized coloring.
    Table(BTreeMap<Vec<u8>, Vec<usize>>),
}

#[derive(Debug, Clone)]
pub struct SelectorSpec {
    ground: Vec<Label>,
    slots: usize,
    step_slot: usize,
    guarantee: u32,
    rule: SelectRule,
}

impl SelectorSpec {
    pub fn ground(&self) -> &[Label] {
        &self.ground
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn step_slot(&self) -> usize {
        self.step_slot
    }

    /// Largest color count the selector is total for (`UNBOUNDED` when it
    /// never fails); 0 means no guarantee at all.
    pub fn guarantee(&self) -> u32 {
        self.guarantee
    }

    /// Applies the rule to a normalized coloring of the ground set.
    pub fn select(&self, colors: &[u8]) -> Option<Selection> {
        debug_assert_eq!(colors.len(), self.ground.len());
        match &self.rule {
            SelectRule::Schur => schur_triple(colors).map(|labels| Selection { labels }),
            SelectRule::Constant(idx) => Some(Selection { labels: vec![*idx; self.slots] }),
            SelectRule::Table(table) => {
                table.get(colors).map(|labels| Selection { labels: labels.clone() })
            }
        }
    }
}

/// First-occurrence normalization: the first element gets id 0, each new
/// color the next id. Monochromaticity is invariant under it.
pub fn normalize_colors<T: Eq + Clone>(raw: &[T]) -> Vec<u8> {
    let mut ids: Vec<T> = Vec::new();
    raw.iter()
        .map(|c| match ids.iter().position(|k| k == c) {
            Some(i) => i as u8,
            None => {
                ids.push(c.clone());
                (ids.len() - 1) as u8
            }
        })
        .collect()
}

/// Least monochromatic `(i, j, i+j)` with `i <= j`, as 0-based indices.
fn schur_triple(colors: &[u8]) -> Option<Vec<usize>> {
    let s = colors.len();
    for i in 1..=s {
        for j in i..=s {
            let k = i + j;
            if k > s {
                break;
            }
            if colors[i - 1] == colors[j - 1] && colors[j - 1] == colors[k - 1] {
                return Some(vec![i - 1, j - 1, k - 1]);
            }
        }
    }
    None
}

/// Enumerates all set partitions of `{0..n-1}` as restricted growth
/// strings (the normalized colorings).
fn partitions(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = vec![0u8; n];
    fn rec(current: &mut Vec<u8>, pos: usize, max_used: u8, out: &mut Vec<Vec<u8>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for id in 0..=max_used + 1 {
            current[pos] = id;
            rec(current, pos + 1, max_used.max(id), out);
        }
    }
    if n > 0 {
        rec(&mut current, 1, 0, &mut out);
    } else {
        out.push(Vec::new());
    }
    out
}

/// Largest K such that every partition of the ground set into at most K
/// blocks admits a valid monochromatic selection; `UNBOUNDED` if all do.
fn compute_guarantee(
    ground_len: usize,
    slots: usize,
    select: impl Fn(&[u8]) -> Option<Selection>,
) -> u32 {
    let mut worst: Option<u32> = None;
    for partition in partitions(ground_len) {
        let blocks = partition.iter().copied().max().map_or(1, |m| u32::from(m) + 1);
        let ok = match select(&partition) {
            Some(sel) => {
                sel.labels.len() == slots
                    && sel.labels.iter().all(|&i| i < ground_len)
                    && sel
                        .labels
                        .windows(2)
                        .all(|w| partition[w[0]] == partition[w[1]])
            }
            None => false,
        };
        if !ok {
            worst = Some(worst.map_or(blocks, |w: u32| w.min(blocks)));
        }
    }
    match worst {
        Some(blocks) => blocks - 1,
        None => UNBOUNDED,
    }
}

static SCHUR_GUARANTEES: Lazy<Mutex<BTreeMap<u32, u32>>> = Lazy::new(Mutex::default);

/// The three-slot selector on ground set `{1..s}` picking a
/// monochromatic `(i, j, i+j)` of exponents; the step slot is `i`. Its
/// guarantee is computed by exhausting the partitions of `{1..s}` once
/// and cached for the process lifetime.
pub fn schur_selector(s: u32) -> SelectorSpec {
    let guarantee = *SCHUR_GUARANTEES
        .lock()
        .expect("guarantee cache")
        .entry(s)
        .or_insert_with(|| {
            compute_guarantee(s as usize, 3, |colors| {
                schur_triple(colors).map(|labels| Selection { labels })
            })
        });
    SelectorSpec {
        ground: (1..=s).map(|i| i.to_string()).collect(),
        slots: 3,
        step_slot: 0,
        guarantee,
        rule: SelectRule::Schur,
    }
}

/// Re-derives a Schur guarantee without touching the cache (used to check
/// cache soundness).
pub fn recompute_schur_guarantee(s: u32) -> u32 {
    compute_guarantee(s as usize, 3, |colors| {
        schur_triple(colors).map(|labels| Selection { labels })
    })
}

/// A selector that always picks the same ground label in every slot;
/// monochromatic under any coloring, hence an unbounded guarantee.
pub fn constant_selector(
    ground: Vec<Label>,
    slots: usize,
    pick: usize,
) -> Result<SelectorSpec, FocusingError> {
    if ground.is_empty() || slots == 0 || pick >= ground.len() {
        return Err(FocusingError::BadSelector("constant selector out of range".into()));
    }
    Ok(SelectorSpec {
        ground,
        slots,
        step_slot: 0,
        guarantee: UNBOUNDED,
        rule: SelectRule::Constant(pick),
    })
}

/// A table-driven selector. Keys are normalized colorings of the ground
/// set; the guarantee is derived by exhausting partitions, so a partial
/// table simply earns a smaller guarantee.
pub fn table_selector(
    ground: Vec<Label>,
    slots: usize,
    step_slot: usize,
    table: BTreeMap<Vec<u8>, Vec<usize>>,
) -> Result<SelectorSpec, FocusingError> {
    if ground.is_empty() || slots == 0 || step_slot >= slots {
        return Err(FocusingError::BadSelector("empty ground or bad slot counts".into()));
    }
    let guarantee = compute_guarantee(ground.len(), slots, |colors| {
        table.get(colors).map(|labels| Selection { labels: labels.clone() })
    });
    Ok(SelectorSpec { ground, slots, step_slot, guarantee, rule: SelectRule::Table(table) })
}

/// A table selector with a *claimed* guarantee, skipping verification.
/// Exists so tests can hand the tree builder a selector that lies about
/// its guarantee and watch the runtime violation surface.
pub fn table_selector_unchecked(
    ground: Vec<Label>,
    slots: usize,
    step_slot: usize,
    table: BTreeMap<Vec<u8>, Vec<usize>>,
    claimed_guarantee: u32,
) -> SelectorSpec {
    SelectorSpec { ground, slots, step_slot, guarantee: claimed_guarantee, rule: SelectRule::Table(table) }
}

/// Builds the complete selection table a rule induces over all partitions
/// it can serve, which is how the mock selectors in the test suites are
/// constructed (table-driven, but derived from a real search).
pub fn tabulate_schur(s: u32) -> BTreeMap<Vec<u8>, Vec<usize>> {
    let mut table = BTreeMap::new();
    for partition in partitions(s as usize) {
        if let Some(labels) = schur_triple(&partition) {
            table.insert(partition, labels);
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schur_guarantees_match_known_values() {
        // Any 2-coloring of {1..5} has a monochromatic (i, j, i+j); the
        // split {1,4}/{2,3} defeats {1..4}; {1} has no triple at all.
        assert_eq!(schur_selector(5).guarantee(), 2);
        assert_eq!(schur_selector(4).guarantee(), 1);
        assert_eq!(schur_selector(1).guarantee(), 0);
    }

    #[test]
    fn cached_guarantee_matches_recomputation() {
        for s in 1..=6 {
            assert_eq!(schur_selector(s).guarantee(), recompute_schur_guarantee(s));
        }
    }

    #[test]
    fn schur_selection_is_monochromatic() {
        let spec = schur_selector(5);
        // Coloring {1,2} -> 0, {3,4,5} -> 1: triple (1,1,2) works.
        let sel = spec.select(&[0, 0, 1, 1, 1]).unwrap();
        assert_eq!(sel.labels, vec![0, 0, 1]);
        // The defeating coloring of {1..4} yields nothing.
        assert_eq!(schur_selector(4).select(&[0, 1, 1, 0]), None);
    }

    #[test]
    fn normalization_is_first_occurrence() {
        assert_eq!(normalize_colors(&[7, 7, 3, 7, 9]), vec![0, 0, 1, 0, 2]);
        assert_eq!(normalize_colors::<u8>(&[]), Vec::<u8>::new());
    }

    #[test]
    fn constant_selector_is_unbounded() {
        let spec =
            constant_selector(vec!["p".into(), "q".into()], 3, 0).unwrap();
        assert_eq!(spec.guarantee(), UNBOUNDED);
        let sel = spec.select(&[0, 1]).unwrap();
        assert_eq!(sel.labels, vec![0, 0, 0]);
    }

    #[test]
    fn table_guarantee_reflects_coverage() {
        // Serve only the all-same partition of two labels.
        let mut table = BTreeMap::new();
        table.insert(vec![0, 0], vec![0, 1]);
        let spec =
            table_selector(vec!["p".into(), "q".into()], 2, 0, table).unwrap();
        assert_eq!(spec.guarantee(), 1);

        // Serve both partitions of two labels.
        let mut table = BTreeMap::new();
        table.insert(vec![0, 0], vec![0, 1]);
        table.insert(vec![0, 1], vec![1, 1]);
        let spec =
            table_selector(vec!["p".into(), "q".into()], 2, 0, table).unwrap();
        assert_eq!(spec.guarantee(), UNBOUNDED);
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        assert_eq!(partitions(3).len(), 5);
        assert_eq!(partitions(5).len(), 52);
    }
}
