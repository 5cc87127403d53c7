//! Depth-first search for colorings of `[1..N]` avoiding a list of
//! monochromatic value sets.
//!
//! This is the engine behind extremal coloring search and the
//! brute-force partition-regularity oracle: elements are colored in
//! increasing order and a branch is pruned as soon as some fully
//! determined value set becomes monochromatic. Indexing the sets by
//! their maximum element makes that check touch only the sets completed
//! by the current element.

use std::time::Instant;

use super::{Budget, BudgetExceeded, Coloring};

/// Deduplicated value sets over `[1..N]`, each sorted ascending, indexed
/// by maximum element.
#[derive(Debug, Clone)]
pub(crate) struct ValueSets {
    pub sets: Vec<Box<[u32]>>,
    /// `by_max[v]` lists the indices of sets whose maximum is `v`.
    pub by_max: Vec<Vec<u32>>,
    pub n: u32,
}

impl ValueSets {
    pub fn from_sets(mut sets: Vec<Box<[u32]>>, n: u32) -> Self {
        sets.sort();
        sets.dedup();
        let mut by_max = vec![Vec::new(); n as usize + 1];
        for (i, set) in sets.iter().enumerate() {
            let max = *set.last().expect("value sets are nonempty");
            by_max[max as usize].push(i as u32);
        }
        ValueSets { sets, by_max, n }
    }

    /// True if the partial coloring (elements `1..=limit` assigned) makes
    /// some set ending at `limit` monochromatic in `color`.
    #[inline]
    fn completes_mono(&self, colors: &[u8], limit: u32, color: u8) -> bool {
        self.by_max[limit as usize].iter().any(|&idx| {
            self.sets[idx as usize]
                .iter()
                .all(|&v| colors[v as usize] == color)
        })
    }

    /// Scans a full coloring for any monochromatic set.
    pub fn find_mono(&self, coloring: &Coloring) -> Option<usize> {
        self.sets
            .iter()
            .position(|set| coloring.monochromatic(set).is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum AvoidOutcome {
    /// Lexicographically least avoiding coloring in sequential mode; any
    /// avoiding coloring in relaxed parallel mode.
    Found(Coloring),
    /// Every coloring (modulo the enabled symmetry breaking) contains a
    /// monochromatic set.
    Exhausted,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct DfsConfig {
    pub r: u8,
    pub symmetry: bool,
}

pub(crate) struct DfsStats {
    pub nodes: u64,
}

struct Dfs<'a> {
    sets: &'a ValueSets,
    config: DfsConfig,
    colors: Vec<u8>,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
}

impl<'a> Dfs<'a> {
    fn new(sets: &'a ValueSets, config: DfsConfig, budget: &Budget) -> Self {
        Dfs {
            sets,
            config,
            colors: vec![0; sets.n as usize + 1],
            nodes: 0,
            node_limit: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.deadline,
        }
    }

    fn check_budget(&self) -> Result<(), BudgetExceeded> {
        if self.nodes >= self.node_limit {
            return Err(BudgetExceeded::Nodes(self.nodes));
        }
        if self.nodes % 4096 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(BudgetExceeded::WallClock);
                }
            }
        }
        Ok(())
    }

    /// Colors elements `depth..=N`; `max_used` is the largest color id in
    /// `1..depth`. Returns the first avoiding completion in color order.
    fn run(&mut self, depth: u32, max_used: i16) -> Result<Option<Coloring>, BudgetExceeded> {
        if depth > self.sets.n {
            let coloring = Coloring::from_colors(self.config.r, &self.colors[1..])
                .expect("colors stay in range");
            return Ok(Some(coloring));
        }
        let cap = if self.config.symmetry {
            std::cmp::min(max_used + 1, i16::from(self.config.r) - 1)
        } else {
            i16::from(self.config.r) - 1
        };
        for color in 0..=cap {
            self.nodes += 1;
            self.check_budget()?;
            let color = color as u8;
            self.colors[depth as usize] = color;
            if self.sets.completes_mono(&self.colors, depth, color) {
                continue;
            }
            if let Some(found) = self.run(depth + 1, std::cmp::max(max_used, i16::from(color)))? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Sequential search for the lexicographically least avoiding coloring.
pub(crate) fn find_avoiding_seq(
    sets: &ValueSets,
    config: DfsConfig,
    budget: &Budget,
) -> Result<(AvoidOutcome, DfsStats), BudgetExceeded> {
    let mut dfs = Dfs::new(sets, config, budget);
    let result = dfs.run(1, -1)?;
    let stats = DfsStats { nodes: dfs.nodes };
    Ok((
        match result {
            Some(coloring) => AvoidOutcome::Found(coloring),
            None => AvoidOutcome::Exhausted,
        },
        stats,
    ))
}

/// Relaxed parallel search: workers take disjoint prefix subtrees and the
/// first hit anywhere wins, so the returned coloring is *some* avoiding
/// coloring, not necessarily the least. Falls back to the sequential
/// search when the `parallel` feature is disabled.
pub(crate) fn find_avoiding_par(
    sets: &ValueSets,
    config: DfsConfig,
    budget: &Budget,
) -> Result<(AvoidOutcome, DfsStats), BudgetExceeded> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        use std::sync::atomic::{AtomicU64, Ordering};

        let threads = rayon::current_num_threads();
        if threads <= 1 || sets.n < 4 {
            return find_avoiding_seq(sets, config, budget);
        }
        // Enough prefixes to keep the pool busy without drowning in them.
        let target = (threads * 16) as usize;
        let mut depth = 1u32;
        let mut prefixes: Vec<Vec<u8>> = vec![Vec::new()];
        while depth <= sets.n && prefixes.len() < target {
            let mut next = Vec::new();
            for prefix in &prefixes {
                let mut colors = vec![0u8; sets.n as usize + 1];
                for (i, &c) in prefix.iter().enumerate() {
                    colors[i + 1] = c;
                }
                let max_used =
                    prefix.iter().map(|&c| i16::from(c)).max().unwrap_or(-1);
                let cap = if config.symmetry {
                    std::cmp::min(max_used + 1, i16::from(config.r) - 1)
                } else {
                    i16::from(config.r) - 1
                };
                for color in 0..=cap {
                    let color = color as u8;
                    colors[depth as usize] = color;
                    if sets.completes_mono(&colors, depth, color) {
                        continue;
                    }
                    let mut extended = prefix.clone();
                    extended.push(color);
                    next.push(extended);
                }
            }
            prefixes = next;
            depth += 1;
            if prefixes.is_empty() {
                return Ok((AvoidOutcome::Exhausted, DfsStats { nodes: 0 }));
            }
        }
        if depth > sets.n {
            // The prefixes are complete avoiding colorings already.
            let coloring = Coloring::from_colors(config.r, &prefixes[0])
                .expect("colors stay in range");
            return Ok((AvoidOutcome::Found(coloring), DfsStats { nodes: 0 }));
        }

        let nodes = AtomicU64::new(0);
        let result: Option<Result<Coloring, BudgetExceeded>> = prefixes
            .par_iter()
            .find_map_any(|prefix| {
                let mut dfs = Dfs::new(sets, config, budget);
                for (i, &c) in prefix.iter().enumerate() {
                    dfs.colors[i + 1] = c;
                }
                let max_used = prefix.iter().map(|&c| i16::from(c)).max().unwrap_or(-1);
                let outcome = dfs.run(depth, max_used);
                nodes.fetch_add(dfs.nodes, Ordering::Relaxed);
                match outcome {
                    Ok(Some(coloring)) => Some(Ok(coloring)),
                    Ok(None) => None,
                    Err(e) => Some(Err(e)),
                }
            });
        let stats = DfsStats { nodes: nodes.load(Ordering::Relaxed) };
        match result {
            Some(Ok(coloring)) => Ok((AvoidOutcome::Found(coloring), stats)),
            Some(Err(e)) => Err(e),
            None => Ok((AvoidOutcome::Exhausted, stats)),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_avoiding_seq(sets, config, budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schur_sets(n: u32) -> ValueSets {
        let mut sets = Vec::new();
        for x in 1..=n {
            for y in x..=n {
                if x + y <= n {
                    let mut s = vec![x, y, x + y];
                    s.sort_unstable();
                    s.dedup();
                    sets.push(s.into_boxed_slice());
                }
            }
        }
        ValueSets::from_sets(sets, n)
    }

    #[test]
    fn schur_avoider_at_four() {
        let sets = schur_sets(4);
        let (outcome, _) = find_avoiding_seq(
            &sets,
            DfsConfig { r: 2, symmetry: true },
            &Budget::default(),
        )
        .unwrap();
        match outcome {
            AvoidOutcome::Found(c) => assert_eq!(c.digits(), "0110"),
            AvoidOutcome::Exhausted => panic!("expected an avoiding coloring"),
        }
    }

    #[test]
    fn schur_forced_at_five() {
        let sets = schur_sets(5);
        let (outcome, _) = find_avoiding_seq(
            &sets,
            DfsConfig { r: 2, symmetry: true },
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(outcome, AvoidOutcome::Exhausted);
    }

    #[test]
    fn node_budget_is_an_error() {
        let sets = schur_sets(9);
        let err = find_avoiding_seq(
            &sets,
            DfsConfig { r: 2, symmetry: true },
            &Budget { max_nodes: Some(3), deadline: None },
        )
        .unwrap_err();
        assert!(matches!(err, BudgetExceeded::Nodes(_)));
    }

    #[test]
    fn parallel_agrees_on_existence() {
        for n in [4u32, 5, 6] {
            let sets = schur_sets(n);
            let config = DfsConfig { r: 2, symmetry: true };
            let (seq, _) = find_avoiding_seq(&sets, config, &Budget::default()).unwrap();
            let (par, _) = find_avoiding_par(&sets, config, &Budget::default()).unwrap();
            match (seq, par) {
                (AvoidOutcome::Found(a), AvoidOutcome::Found(b)) => {
                    assert!(sets.find_mono(&a).is_none());
                    assert!(sets.find_mono(&b).is_none());
                }
                (AvoidOutcome::Exhausted, AvoidOutcome::Exhausted) => {}
                (a, b) => panic!("existence mismatch: {a:?} vs {b:?}"),
            }
        }
    }
}
