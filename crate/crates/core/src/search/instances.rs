//! Instance precomputation: for a fixed family and range `[1..N]`, every
//! in-range instance value set is enumerated once, deduplicated, and
//! indexed by its maximum element, so DFS pruning at element `n` touches
//! only instances completed by `n`.

use std::collections::BTreeSet;

use crate::pattern::{ExpandedFamily, PatternExpr, PatternFamily};

use super::dfs::ValueSets;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InstanceStats {
    /// Assignment-tree nodes visited during enumeration.
    pub nodes: u64,
    /// Subtrees cut because a determined value exceeded `N`.
    pub out_of_range_pruned: u64,
    /// Subtrees cut because a determined value overflowed 64 bits.
    pub overflow_pruned: u64,
    /// Complete in-range assignments.
    pub in_range_assignments: u64,
    /// Distinct value sets after deduplication.
    pub distinct_sets: usize,
}

/// All distinct in-range instance value sets of a family over `[1..N]`.
pub struct InstanceTable {
    pub(crate) sets: ValueSets,
    stats: InstanceStats,
}

/// Expressions grouped by the last variable copy they mention, so each
/// becomes checkable as soon as that copy is assigned.
pub(crate) struct ExprBuckets {
    /// `buckets[i]` holds the expressions fully determined once copy `i`
    /// is bound; constant expressions land in `constants`.
    pub buckets: Vec<Vec<PatternExpr>>,
    pub constants: Vec<PatternExpr>,
}

impl ExprBuckets {
    pub fn build(family: &ExpandedFamily) -> Self {
        let mut buckets = vec![Vec::new(); family.copies.len()];
        let mut constants = Vec::new();
        for expr in &family.exprs {
            let mut vars = BTreeSet::new();
            expr.variables(&mut vars);
            let last = family
                .copies
                .iter()
                .rposition(|copy| vars.contains(&copy.name));
            match last {
                Some(i) => buckets[i].push(expr.clone()),
                None => constants.push(expr.clone()),
            }
        }
        ExprBuckets { buckets, constants }
    }
}

impl InstanceTable {
    pub fn build(family: &PatternFamily, n: u32) -> Self {
        let expanded = family.expanded();
        let buckets = ExprBuckets::build(&expanded);
        let mut stats = InstanceStats::default();
        let mut collected: BTreeSet<Box<[u32]>> = BTreeSet::new();

        let mut base_values: Vec<u32> = Vec::new();
        let mut base_ok = true;
        for expr in &buckets.constants {
            match eval_in_range(expr, &crate::pattern::Assignment::new(), n, &mut stats) {
                Some(v) => base_values.push(v),
                None => {
                    base_ok = false;
                    break;
                }
            }
        }
        if base_ok {
            let mut asg = crate::pattern::Assignment::new();
            let mut values = base_values;
            enumerate(
                &expanded,
                &buckets,
                n,
                0,
                &mut asg,
                &mut values,
                &mut collected,
                &mut stats,
            );
        }

        let sets: Vec<Box<[u32]>> = collected.into_iter().collect();
        stats.distinct_sets = sets.len();
        InstanceTable { sets: ValueSets::from_sets(sets, n), stats }
    }

    pub fn stats(&self) -> InstanceStats {
        self.stats
    }

    pub fn n(&self) -> u32 {
        self.sets.n
    }

    pub fn len(&self) -> usize {
        self.sets.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.sets.is_empty()
    }

    /// Value sets in deterministic (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.sets.sets.iter().map(|s| &**s)
    }

    /// Index of the first monochromatic instance under `coloring`, if any.
    pub fn find_monochromatic(&self, coloring: &super::Coloring) -> Option<&[u32]> {
        self.sets.find_mono(coloring).map(|i| &*self.sets.sets[i])
    }
}

fn eval_in_range(
    expr: &PatternExpr,
    asg: &crate::pattern::Assignment,
    n: u32,
    stats: &mut InstanceStats,
) -> Option<u32> {
    match expr.eval(asg) {
        Ok(v) if v <= u64::from(n) => Some(v as u32),
        Ok(_) => {
            stats.out_of_range_pruned += 1;
            None
        }
        Err(_) => {
            stats.overflow_pruned += 1;
            None
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    family: &ExpandedFamily,
    buckets: &ExprBuckets,
    n: u32,
    depth: usize,
    asg: &mut crate::pattern::Assignment,
    values: &mut Vec<u32>,
    out: &mut BTreeSet<Box<[u32]>>,
    stats: &mut InstanceStats,
) {
    if depth == family.copies.len() {
        stats.in_range_assignments += 1;
        let mut set: Vec<u32> = values.clone();
        set.sort_unstable();
        set.dedup();
        out.insert(set.into_boxed_slice());
        return;
    }
    let name = family.copies[depth].name.clone();
    for v in 1..=u64::from(n) {
        stats.nodes += 1;
        if family.distinct
            && (0..depth).any(|j| asg.value(&family.copies[j].name) == Some(v))
        {
            continue;
        }
        asg.bind_str(&name, v).expect("positive");
        let mark = values.len();
        let mut ok = true;
        for expr in &buckets.buckets[depth] {
            match eval_in_range(expr, asg, n, stats) {
                Some(value) => values.push(value),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            enumerate(family, buckets, n, depth + 1, asg, values, out, stats);
        }
        values.truncate(mark);
    }
}
