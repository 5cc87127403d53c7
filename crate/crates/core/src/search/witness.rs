//! Witness search under a fixed coloring.
//!
//! Assignments of the variable copies are enumerated over `[1..N]` in
//! lexicographic order (declared copy order). A prefix is abandoned as
//! soon as a determined expression leaves the range — such instances are
//! absent by convention — or as soon as two determined values carry
//! different colors.

use serde::{Deserialize, Serialize};

use crate::pattern::{Assignment, ExpandedFamily, PatternFamily, VarRole};

use super::instances::ExprBuckets;
use super::{Coloring, SearchError};

/// A verified monochromatic instance: the assignment, its value set, and
/// the common color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub assignment: Vec<(String, u64)>,
    pub values: Vec<u32>,
    pub color: u8,
}

impl Witness {
    /// Re-checks the witness against the family and coloring it claims to
    /// witness, independently of how it was found.
    pub fn verify(&self, family: &PatternFamily, coloring: &Coloring) -> bool {
        let mut asg = Assignment::new();
        for (name, value) in &self.assignment {
            if asg.bind(name.clone(), *value).is_err() {
                return false;
            }
        }
        let Ok(values) = family.instantiate(&asg) else { return false };
        let recomputed: Vec<u32> = values
            .iter()
            .filter(|&&v| v <= u64::from(coloring.n()))
            .map(|&v| v as u32)
            .collect();
        if recomputed.len() != values.len() {
            return false; // some value out of range
        }
        recomputed == self.values
            && coloring.monochromatic(&recomputed) == Some(self.color)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WitnessStats {
    pub nodes: u64,
    pub out_of_range_skipped: u64,
    pub overflow_skipped: u64,
}

/// Lexicographically least monochromatic witness, or `None` when every
/// in-range instance is polychromatic.
pub fn find_witness(family: &PatternFamily, coloring: &Coloring) -> Option<Witness> {
    find_witness_with_stats(family, coloring).0
}

pub fn find_witness_with_stats(
    family: &PatternFamily,
    coloring: &Coloring,
) -> (Option<Witness>, WitnessStats) {
    let expanded = family.expanded();
    let buckets = ExprBuckets::build(&expanded);
    let mut stats = WitnessStats::default();

    let mut base_values = Vec::new();
    for expr in &buckets.constants {
        match eval_clamped(expr, &Assignment::new(), coloring.n(), &mut stats) {
            Some(v) => base_values.push(v),
            None => return (None, stats), // constant instance out of range everywhere
        }
    }

    let mut search = WitnessSearch { expanded: &expanded, buckets: &buckets, coloring, stats };
    let mut asg = Assignment::new();
    let mut values = base_values;
    let found = search.run(0, &mut asg, &mut values);
    let stats = search.stats;
    (found, stats)
}

struct WitnessSearch<'a> {
    expanded: &'a ExpandedFamily,
    buckets: &'a ExprBuckets,
    coloring: &'a Coloring,
    stats: WitnessStats,
}

impl WitnessSearch<'_> {
    fn run(
        &mut self,
        depth: usize,
        asg: &mut Assignment,
        values: &mut Vec<u32>,
    ) -> Option<Witness> {
        if depth == self.expanded.copies.len() {
            let color = match values.first() {
                Some(&v) => self.coloring.get(v),
                None => return None, // no expressions in range; cannot happen for valid families
            };
            let mut sorted = values.clone();
            sorted.sort_unstable();
            sorted.dedup();
            return Some(Witness {
                assignment: self
                    .expanded
                    .copies
                    .iter()
                    .map(|c| (c.name.clone(), asg.value(&c.name).expect("bound")))
                    .collect(),
                values: sorted,
                color,
            });
        }
        let name = self.expanded.copies[depth].name.clone();
        for v in 1..=u64::from(self.coloring.n()) {
            self.stats.nodes += 1;
            if self.expanded.distinct
                && (0..depth)
                    .any(|j| asg.value(&self.expanded.copies[j].name) == Some(v))
            {
                continue;
            }
            asg.bind_str(&name, v).expect("positive");
            let mark = values.len();
            let mut viable = true;
            for expr in &self.buckets.buckets[depth] {
                match eval_clamped(expr, asg, self.coloring.n(), &mut self.stats) {
                    Some(value) => {
                        // Prune as soon as two determined values disagree.
                        if !values.is_empty()
                            && self.coloring.get(value) != self.coloring.get(values[0])
                        {
                            viable = false;
                        }
                        values.push(value);
                    }
                    None => {
                        viable = false;
                    }
                }
                if !viable {
                    break;
                }
            }
            if viable {
                if let Some(w) = self.run(depth + 1, asg, values) {
                    return Some(w);
                }
            }
            values.truncate(mark);
        }
        None
    }
}

fn eval_clamped(
    expr: &crate::pattern::PatternExpr,
    asg: &Assignment,
    n: u32,
    stats: &mut WitnessStats,
) -> Option<u32> {
    match expr.eval(asg) {
        Ok(v) if v <= u64::from(n) => Some(v as u32),
        Ok(_) => {
            stats.out_of_range_skipped += 1;
            None
        }
        Err(_) => {
            stats.overflow_skipped += 1;
            None
        }
    }
}

/// A shared-anchor witness: one generator assignment under which at least
/// `m` anchor values all produce instances of one common color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorWitness {
    pub generators: Vec<(String, u64)>,
    pub anchors: Vec<u64>,
    pub color: u8,
}

impl AnchorWitness {
    pub fn verify(&self, family: &PatternFamily, coloring: &Coloring, m: usize) -> bool {
        if self.anchors.len() < m {
            return false;
        }
        let expanded = family.expanded();
        let anchor_name = match single_anchor(&expanded) {
            Ok(name) => name,
            Err(_) => return false,
        };
        let mut asg = Assignment::new();
        for (name, value) in &self.generators {
            if asg.bind(name.clone(), *value).is_err() {
                return false;
            }
        }
        for &anchor in &self.anchors {
            if asg.bind_str(&anchor_name, anchor).is_err() {
                return false;
            }
            let Ok(values) = expanded.instantiate(&asg) else { return false };
            for v in values {
                if v > u64::from(coloring.n()) || coloring.get(v as u32) != self.color {
                    return false;
                }
            }
        }
        true
    }
}

fn single_anchor(expanded: &ExpandedFamily) -> Result<String, SearchError> {
    let anchors: Vec<&str> = expanded
        .copies
        .iter()
        .filter(|c| c.role == VarRole::Anchor)
        .map(|c| c.name.as_str())
        .collect();
    match anchors.len() {
        0 => Err(SearchError::NoAnchor),
        1 => Ok(anchors[0].to_owned()),
        k => Err(SearchError::AmbiguousAnchor(k)),
    }
}

/// Searches for a generator assignment `B` and at least `m` anchor values
/// `x` such that every instance over every `(x, B)` is monochromatic in
/// one common color. Generator assignments are enumerated in
/// lexicographic order; the first admissible one wins, with the anchor
/// list truncated to the `m` smallest qualifying values (ties between
/// colors go to the smaller first anchor, then the smaller color id).
pub fn find_shared_anchor_witnesses(
    family: &PatternFamily,
    coloring: &Coloring,
    m: usize,
) -> Result<Option<AnchorWitness>, SearchError> {
    let expanded = family.expanded();
    let anchor_name = single_anchor(&expanded)?;
    let generators: Vec<String> = expanded
        .copies
        .iter()
        .filter(|c| c.role != VarRole::Anchor)
        .map(|c| c.name.clone())
        .collect();
    let n = coloring.n();
    let m = m.max(1);

    let mut gen_values = vec![1u64; generators.len()];
    loop {
        let mut asg = Assignment::new();
        let mut ok = true;
        for (name, &value) in generators.iter().zip(&gen_values) {
            if expanded.distinct {
                // Pairwise distinct generator copies when the flag is set.
                if generators
                    .iter()
                    .zip(&gen_values)
                    .filter(|(other, _)| *other != name)
                    .any(|(_, &v)| v == value)
                {
                    ok = false;
                    break;
                }
            }
            asg.bind_str(name, value).expect("positive");
        }
        if ok {
            if let Some(witness) =
                anchors_for(&expanded, &anchor_name, &asg, coloring, m, &generators, &gen_values)
            {
                return Ok(Some(witness));
            }
        }
        // Advance the generator tuple lexicographically.
        let mut i = gen_values.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if gen_values[i] < u64::from(n) {
                gen_values[i] += 1;
                for v in &mut gen_values[i + 1..] {
                    *v = 1;
                }
                break;
            }
        }
    }
}

fn anchors_for(
    expanded: &ExpandedFamily,
    anchor_name: &str,
    generator_asg: &Assignment,
    coloring: &Coloring,
    m: usize,
    generators: &[String],
    gen_values: &[u64],
) -> Option<AnchorWitness> {
    let mut by_color: Vec<Vec<u64>> = vec![Vec::new(); usize::from(coloring.r())];
    let mut asg = generator_asg.clone();
    'anchors: for x in 1..=u64::from(coloring.n()) {
        if expanded.distinct && gen_values.contains(&x) {
            continue;
        }
        asg.bind_str(anchor_name, x).expect("positive");
        let mut color: Option<u8> = None;
        for expr in &expanded.exprs {
            match expr.eval(&asg) {
                Ok(v) if v <= u64::from(coloring.n()) => {
                    let c = coloring.get(v as u32);
                    match color {
                        None => color = Some(c),
                        Some(prev) if prev != c => continue 'anchors,
                        Some(_) => {}
                    }
                }
                // Out of range or overflow: the (x, B) instance is absent.
                _ => continue 'anchors,
            }
        }
        if let Some(c) = color {
            by_color[usize::from(c)].push(x);
        }
    }
    // Smallest first anchor wins; the color id breaks exact ties.
    let mut best: Option<(u64, u8)> = None;
    for (c, anchors) in by_color.iter().enumerate() {
        if anchors.len() >= m {
            let key = (anchors[0], c as u8);
            if best.is_none() || key < best.unwrap() {
                best = Some(key);
            }
        }
    }
    best.map(|(_, c)| AnchorWitness {
        generators: generators
            .iter()
            .zip(gen_values)
            .map(|(name, &v)| (name.clone(), v))
            .collect(),
        anchors: by_color[usize::from(c)][..m].to_vec(),
        color: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{build_sum_product, parse_family, schur_family};

    #[test]
    fn lexicographically_least_schur_witness() {
        let coloring = Coloring::from_colors(2, &[0, 1, 1, 0, 1]).unwrap();
        let w = find_witness(&schur_family(), &coloring).unwrap();
        assert_eq!(w.assignment, [("x".into(), 2), ("y".into(), 3)]);
        assert_eq!(w.values, [2, 3, 5]);
        assert_eq!(w.color, 1);
        assert!(w.verify(&schur_family(), &coloring));
    }

    #[test]
    fn schur_avoider_has_no_witness() {
        let coloring = Coloring::from_colors(2, &[0, 1, 1, 0]).unwrap();
        assert_eq!(find_witness(&schur_family(), &coloring), None);
    }

    #[test]
    fn constant_coloring_gives_smallest_assignment() {
        let coloring = Coloring::from_colors(1, &[0; 6]).unwrap();
        let family = parse_family("a+b ; a*b").unwrap();
        let w = find_witness(&family, &coloring).unwrap();
        assert_eq!(w.assignment, [("a".into(), 1), ("b".into(), 1)]);
        assert_eq!(w.values, [1, 2]);
        assert_eq!(w.color, 0);
    }

    #[test]
    fn witness_agrees_with_naive_enumeration_on_all_small_colorings() {
        // Completeness at small scale: [1..8], all 256 two-colorings.
        let family = schur_family();
        for bits in 0u32..256 {
            let colors: Vec<u8> = (0..8).map(|i| ((bits >> i) & 1) as u8).collect();
            let coloring = Coloring::from_colors(2, &colors).unwrap();
            let naive = naive_schur_witness(&coloring);
            let found = find_witness(&family, &coloring);
            assert_eq!(found.is_some(), naive, "coloring {}", coloring.digits());
            if let Some(w) = found {
                assert!(w.verify(&family, &coloring));
            }
        }
    }

    fn naive_schur_witness(coloring: &Coloring) -> bool {
        let n = coloring.n();
        for x in 1..=n {
            for y in 1..=n {
                if x + y <= n {
                    let c = coloring.get(x);
                    if coloring.get(y) == c && coloring.get(x + y) == c {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn shared_anchors_on_constant_coloring() {
        let coloring = Coloring::from_colors(1, &[0; 20]).unwrap();
        let family = build_sum_product(1, 1).unwrap();
        let w = find_shared_anchor_witnesses(&family, &coloring, 3).unwrap().unwrap();
        assert_eq!(w.generators, [("b".into(), 1)]);
        assert_eq!(w.anchors, [1, 2, 3]);
        assert_eq!(w.color, 0);
        assert!(w.verify(&family, &coloring, 3));
    }

    #[test]
    fn shared_anchor_on_schur_avoider() {
        // {1,4} color 0, {2,3} color 1 on [1..4]; a=2,b=1 gives {2,3}
        // inside color 1, and b=1 is the least generator assignment.
        let coloring = Coloring::from_colors(2, &[0, 1, 1, 0]).unwrap();
        let family = build_sum_product(1, 1).unwrap();
        let w = find_shared_anchor_witnesses(&family, &coloring, 1).unwrap().unwrap();
        assert_eq!(w.generators, [("b".into(), 1)]);
        assert_eq!(w.anchors, [2]);
        assert_eq!(w.color, 1);
        assert!(w.verify(&family, &coloring, 1));
    }

    #[test]
    fn anchor_search_requires_an_anchor() {
        let coloring = Coloring::from_colors(2, &[0, 1]).unwrap();
        let err = find_shared_anchor_witnesses(&schur_family(), &coloring, 1).unwrap_err();
        assert_eq!(err, SearchError::NoAnchor);
    }
}
