//! Tree construction, the focusing run itself, and independent witness
//! verification.
//!
//! The run follows the deduction shape: descend along distinguished step
//! labels; at each level color the labels by the full color pattern of
//! the subtree hanging under them, select a monochromatic tuple; then
//! pigeonhole the colors along the step path to find two node levels
//! `i < j` of equal color, and combine the slot labels of the levels
//! between them into the witness products.

use serde::{Deserialize, Serialize};

use super::selector::{normalize_colors, Selection, SelectorSpec, UNBOUNDED};
use super::{FocusingError, Label};

/// Validated uncolored tree: level `l` labels connect node level `l` to
/// node level `l+1`; node level `i` holds all words of length `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSkeleton {
    levels: Vec<Vec<Label>>,
    r: u8,
}

/// Cap on total node count; focusing trees are small by design and the
/// exhaustive totality checks iterate over all node colorings.
pub const MAX_TREE_NODES: u128 = 1 << 20;

impl TreeSkeleton {
    pub fn levels(&self) -> &[Vec<Label>] {
        &self.levels
    }

    pub fn colors(&self) -> u8 {
        self.r
    }

    /// Nodes per node level: `counts[0] = 1` (the root).
    pub fn node_counts(&self) -> Vec<usize> {
        let mut counts = vec![1usize];
        for level in &self.levels {
            counts.push(counts.last().unwrap() * level.len());
        }
        counts
    }

    pub fn total_nodes(&self) -> usize {
        self.node_counts().iter().sum()
    }

    pub fn colored(&self, colors: Vec<Vec<u8>>) -> Result<FocusTree, FocusingError> {
        let counts = self.node_counts();
        if colors.len() != counts.len()
            || colors.iter().zip(&counts).any(|(c, &n)| c.len() != n)
        {
            return Err(FocusingError::BadColoring("node count mismatch".into()));
        }
        if colors.iter().flatten().any(|&c| c >= self.r) {
            return Err(FocusingError::BadColoring("color out of range".into()));
        }
        Ok(FocusTree { skeleton: self.clone(), colors })
    }

    pub fn constant_coloring(&self, color: u8) -> Result<FocusTree, FocusingError> {
        self.colored(self.node_counts().into_iter().map(|n| vec![color; n]).collect())
    }

    /// Decodes coloring index `idx` in `0..r^total_nodes` (mixed radix,
    /// node-major). Used by the exhaustive totality sweeps.
    pub fn coloring_from_index(&self, mut idx: u128) -> Result<FocusTree, FocusingError> {
        let mut colors = Vec::new();
        for count in self.node_counts() {
            let mut level = Vec::with_capacity(count);
            for _ in 0..count {
                level.push((idx % u128::from(self.r)) as u8);
                idx /= u128::from(self.r);
            }
            colors.push(level);
        }
        self.colored(colors)
    }

    pub fn random_coloring(&self, rng: &mut impl rand::Rng) -> Result<FocusTree, FocusingError> {
        let colors = self
            .node_counts()
            .into_iter()
            .map(|n| (0..n).map(|_| rng.gen_range(0..self.r)).collect())
            .collect();
        self.colored(colors)
    }
}

/// Fully colored focusing tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusTree {
    skeleton: TreeSkeleton,
    /// `colors[i][rank]` is the color of the rank-th node at node level i.
    colors: Vec<Vec<u8>>,
}

impl FocusTree {
    pub fn skeleton(&self) -> &TreeSkeleton {
        &self.skeleton
    }

    pub fn node_color(&self, word: &[usize]) -> Option<u8> {
        let rank = self.rank_of(word)?;
        Some(self.colors[word.len()][rank])
    }

    fn rank_of(&self, word: &[usize]) -> Option<usize> {
        if word.len() >= self.colors.len() {
            return None;
        }
        let mut rank = 0usize;
        for (i, &letter) in word.iter().enumerate() {
            if letter >= self.skeleton.levels[i].len() {
                return None;
            }
            rank = rank * self.skeleton.levels[i].len() + letter;
        }
        Some(rank)
    }

    fn label_index(&self, level: usize, label: &str) -> Option<usize> {
        self.skeleton.levels.get(level)?.iter().position(|l| l == label)
    }
}

/// Builds and validates the skeleton for the given selectors and color
/// count. Level `l`'s selector must guarantee `r^(subtree size)` colors,
/// where the subtree size counts a node at node level `l+1` together with
/// all of its descendants — that is exactly the auxiliary palette the
/// focusing run feeds it. The last level needs `r` colors.
pub fn build_tree(specs: &[SelectorSpec], r: u8) -> Result<TreeSkeleton, FocusingError> {
    if r == 0 {
        return Err(FocusingError::BadSelector("need at least one color".into()));
    }
    if specs.is_empty() {
        return Err(FocusingError::BadSelector("need at least one level".into()));
    }
    if specs.len() < r as usize {
        return Err(FocusingError::TooFewLevels { levels: specs.len(), r });
    }
    let slots = specs[0].slots();
    for (level, spec) in specs.iter().enumerate() {
        if spec.ground().is_empty() {
            return Err(FocusingError::BadSelector(format!("level {level} has an empty ground set")));
        }
        if spec.slots() != slots {
            return Err(FocusingError::SlotMismatch { level, have: spec.slots(), want: slots });
        }
    }

    let sizes: Vec<usize> = specs.iter().map(|s| s.ground().len()).collect();
    let mut total: u128 = 1;
    let mut acc: u128 = 1;
    for &s in &sizes {
        acc = acc.saturating_mul(s as u128);
        total = total.saturating_add(acc);
    }
    if total > MAX_TREE_NODES {
        return Err(FocusingError::TreeTooLarge(total));
    }

    for (level, spec) in specs.iter().enumerate() {
        // Subtree node count under one node at node level `level + 1`.
        let mut subtree: u128 = 1;
        let mut layer: u128 = 1;
        for &s in &sizes[level + 1..] {
            layer = layer.saturating_mul(s as u128);
            subtree = subtree.saturating_add(layer);
        }
        let needed_exponent = subtree;
        if !guarantee_covers(spec.guarantee(), r, needed_exponent) {
            return Err(FocusingError::SelectorTooWeak {
                level,
                have: spec.guarantee(),
                base: r,
                exponent: needed_exponent,
            });
        }
    }

    Ok(TreeSkeleton { levels: specs.iter().map(|s| s.ground().to_vec()).collect(), r })
}

/// Does a guarantee of `k` colors cover `r^exponent` colors?
fn guarantee_covers(k: u32, r: u8, exponent: u128) -> bool {
    if k == UNBOUNDED {
        return true;
    }
    if u32::from(r) <= 1 {
        return k >= 1;
    }
    // Largest t with r^t <= k fits in a handful of iterations.
    let mut t = 0u128;
    let mut acc: u64 = 1;
    while acc.saturating_mul(u64::from(r)) <= u64::from(k) {
        acc *= u64::from(r);
        t += 1;
    }
    exponent <= t
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotLabel {
    pub level: usize,
    pub label: Label,
}

/// The object the focusing run emits: a base node whose subtree realizes
/// the witness, per-slot label multisets over a consecutive level
/// interval, and the target nodes whose shared color certifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusWitness {
    /// Step-label word of length `i`.
    pub base: Vec<Label>,
    /// Node levels `(i, j)` found by the pigeonhole, `i < j`.
    pub pair: (usize, usize),
    pub color: u8,
    /// `slots[k]` lists the labels whose formal product forms the k-th
    /// combined witness element, one label per level in `i..j`.
    pub slots: Vec<Vec<SlotLabel>>,
    /// Sorted node words (base and the slot paths) that all carry `color`.
    pub targets: Vec<Vec<Label>>,
}

/// One level of the run, for demo traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: usize,
    /// Normalized auxiliary coloring fed to the selector.
    pub palette: Vec<u8>,
    pub selected: Vec<Label>,
    pub step_label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct FocusTrace {
    pub steps: Vec<TraceStep>,
    /// Colors of the nodes along the step path, root first.
    pub path_colors: Vec<u8>,
}

pub fn run_focusing(
    tree: &FocusTree,
    specs: &[SelectorSpec],
) -> Result<FocusWitness, FocusingError> {
    run_focusing_traced(tree, specs).map(|(witness, _)| witness)
}

pub fn run_focusing_traced(
    tree: &FocusTree,
    specs: &[SelectorSpec],
) -> Result<(FocusWitness, FocusTrace), FocusingError> {
    let skeleton = tree.skeleton();
    if specs.len() != skeleton.levels().len()
        || specs
            .iter()
            .zip(skeleton.levels())
            .any(|(spec, level)| spec.ground() != level.as_slice())
    {
        return Err(FocusingError::GroundMismatch);
    }

    let mut trace = FocusTrace::default();
    let mut step_word: Vec<usize> = Vec::new();
    let mut selections: Vec<Selection> = Vec::new();

    for (level, spec) in specs.iter().enumerate() {
        // Auxiliary palette: for each label, the color pattern of the
        // whole subtree under the corresponding child node.
        let patterns: Vec<Vec<u8>> = (0..spec.ground().len())
            .map(|letter| {
                let mut word = step_word.clone();
                word.push(letter);
                subtree_pattern(tree, &word)
            })
            .collect();
        let palette = normalize_colors(&patterns);
        let selection = spec.select(&palette).ok_or_else(|| FocusingError::SelectorViolation {
            level,
            palette: palette.clone(),
            reason: "selector returned nothing for a coloring within its guarantee".into(),
        })?;
        validate_selection(spec, &palette, &selection, level)?;
        let step = selection.labels[spec.step_slot()];
        trace.steps.push(TraceStep {
            level,
            palette: palette.clone(),
            selected: selection
                .labels
                .iter()
                .map(|&i| spec.ground()[i].clone())
                .collect(),
            step_label: spec.ground()[step].clone(),
        });
        selections.push(selection);
        step_word.push(step);
    }

    // Colors along the step path, node levels 0..=L+1.
    let path_colors: Vec<u8> = (0..=step_word.len())
        .map(|i| tree.node_color(&step_word[..i]).expect("path stays in tree"))
        .collect();
    trace.path_colors = path_colors.clone();

    // Pigeonhole: with at least r+1 node levels two of them share a color.
    let (i, j) = least_equal_pair(&path_colors).expect("validated trees have enough levels");
    let color = path_colors[i];

    let slots = specs[0].slots();
    let mut slot_labels = Vec::with_capacity(slots);
    let mut targets: std::collections::BTreeSet<Vec<Label>> = std::collections::BTreeSet::new();
    let base: Vec<Label> = step_word[..i]
        .iter()
        .enumerate()
        .map(|(l, &letter)| specs[l].ground()[letter].clone())
        .collect();
    targets.insert(base.clone());
    for k in 0..slots {
        let mut labels = Vec::with_capacity(j - i);
        let mut word = step_word[..i].to_vec();
        for level in i..j {
            let letter = selections[level].labels[k];
            labels.push(SlotLabel { level, label: specs[level].ground()[letter].clone() });
            word.push(letter);
        }
        let target: Vec<Label> = word
            .iter()
            .enumerate()
            .map(|(l, &letter)| specs[l].ground()[letter].clone())
            .collect();
        debug_assert_eq!(tree.node_color(&word), Some(color));
        targets.insert(target);
        slot_labels.push(labels);
    }

    let witness = FocusWitness {
        base,
        pair: (i, j),
        color,
        slots: slot_labels,
        targets: targets.into_iter().collect(),
    };
    Ok((witness, trace))
}

/// Color pattern of the node at `word` and all its descendants, in
/// (level, rank) order. Identical patterns mean identical colored
/// subtrees, which is what the monochromatic selection propagates.
fn subtree_pattern(tree: &FocusTree, word: &[usize]) -> Vec<u8> {
    let skeleton = tree.skeleton();
    let sizes: Vec<usize> = skeleton.levels().iter().map(Vec::len).collect();
    let mut rank = 0usize;
    for (i, &letter) in word.iter().enumerate() {
        rank = rank * sizes[i] + letter;
    }
    let mut pattern = Vec::new();
    let mut lo = rank;
    let mut width = 1usize;
    for level in word.len()..tree.colors.len() {
        pattern.extend_from_slice(&tree.colors[level][lo..lo + width]);
        if level < sizes.len() {
            lo *= sizes[level];
            width *= sizes[level];
        }
    }
    pattern
}

fn validate_selection(
    spec: &SelectorSpec,
    palette: &[u8],
    selection: &Selection,
    level: usize,
) -> Result<(), FocusingError> {
    let violation = |reason: &str| FocusingError::SelectorViolation {
        level,
        palette: palette.to_vec(),
        reason: reason.into(),
    };
    if selection.labels.len() != spec.slots() {
        return Err(violation("selection has the wrong number of slots"));
    }
    if selection.labels.iter().any(|&i| i >= spec.ground().len()) {
        return Err(violation("selection leaves the ground set"));
    }
    if selection
        .labels
        .windows(2)
        .any(|w| palette[w[0]] != palette[w[1]])
    {
        return Err(violation("selection is not monochromatic"));
    }
    Ok(())
}

fn least_equal_pair(colors: &[u8]) -> Option<(usize, usize)> {
    for i in 0..colors.len() {
        for j in i + 1..colors.len() {
            if colors[i] == colors[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Checks a witness directly against the node colors, independently of
/// the run that produced it: consecutive slot levels starting at the base
/// depth, targets recomputed from base and slots, and one common color on
/// the base and every target.
pub fn verify_focus_witness(tree: &FocusTree, witness: &FocusWitness) -> bool {
    let (i, j) = witness.pair;
    let skeleton = tree.skeleton();
    if !(i < j && j <= skeleton.levels().len()) {
        return false;
    }
    if witness.base.len() != i || witness.slots.is_empty() {
        return false;
    }
    let base_word: Option<Vec<usize>> = witness
        .base
        .iter()
        .enumerate()
        .map(|(l, label)| tree.label_index(l, label))
        .collect();
    let Some(base_word) = base_word else { return false };

    let mut expected_targets: std::collections::BTreeSet<Vec<Label>> =
        std::collections::BTreeSet::new();
    expected_targets.insert(witness.base.clone());
    for slot in &witness.slots {
        if slot.len() != j - i {
            return false;
        }
        let mut word = base_word.clone();
        for (offset, slot_label) in slot.iter().enumerate() {
            // Levels must be consecutive i, i+1, ..., j-1.
            if slot_label.level != i + offset {
                return false;
            }
            match tree.label_index(slot_label.level, &slot_label.label) {
                Some(letter) => word.push(letter),
                None => return false,
            }
        }
        if tree.node_color(&word) != Some(witness.color) {
            return false;
        }
        expected_targets.insert(
            word.iter()
                .enumerate()
                .map(|(l, &letter)| skeleton.levels()[l][letter].clone())
                .collect(),
        );
    }
    if tree.node_color(&base_word) != Some(witness.color) {
        return false;
    }
    let listed: std::collections::BTreeSet<Vec<Label>> =
        witness.targets.iter().cloned().collect();
    listed == expected_targets
}

/// Runs focusing plus verification over every node coloring of the
/// skeleton (there are `r^total_nodes`). Returns the number of colorings
/// checked; the first failure aborts with its coloring index. Parallel
/// when enabled and requested, deterministic either way.
pub fn check_all_colorings(
    skeleton: &TreeSkeleton,
    specs: &[SelectorSpec],
    parallel: bool,
) -> Result<u64, FocusingError> {
    let total_nodes = skeleton.total_nodes();
    let count = (u128::from(skeleton.colors())).checked_pow(total_nodes as u32);
    let Some(count) = count.filter(|&c| c <= 1 << 26) else {
        return Err(FocusingError::TreeTooLarge(u128::MAX));
    };
    let count = count as u64;
    let check = |idx: u64| -> Result<(), FocusingError> {
        let tree = skeleton.coloring_from_index(u128::from(idx))?;
        let witness = run_focusing(&tree, specs).map_err(|e| {
            FocusingError::Totality { coloring_index: idx, reason: e.to_string() }
        })?;
        if !verify_focus_witness(&tree, &witness) {
            return Err(FocusingError::Totality {
                coloring_index: idx,
                reason: "witness failed verification".into(),
            });
        }
        Ok(())
    };

    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let failure = (0..count)
            .into_par_iter()
            .find_map_first(|idx| check(idx).err());
        return match failure {
            Some(e) => Err(e),
            None => Ok(count),
        };
    }
    let _ = parallel;
    for idx in 0..count {
        check(idx)?;
    }
    Ok(count)
}
