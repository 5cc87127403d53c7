//! Brute-force oracle for partition regularity: exhaustively refute (or
//! exhibit) witness-free colorings at a fixed range. Shares nothing with
//! the columns-condition decision procedure — the two cross-check each
//! other.

use serde::{Deserialize, Serialize};

use crate::search::dfs::{find_avoiding_par, find_avoiding_seq, AvoidOutcome, DfsConfig, ValueSets};
use crate::search::{Coloring, SearchOptions};

use super::{LinearSystem, RadoError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BruteForceOutcome {
    /// Every r-coloring of `[1..N]` contains a monochromatic solution.
    AllSolvable { nodes: u64, solution_sets: usize },
    /// A coloring with no monochromatic solution; lexicographically least
    /// in sequential mode.
    Counterexample(Coloring),
}

/// Value sets of all solutions of `A·x = 0` with `x` in `[1..N]^k`.
pub fn solution_sets(sys: &LinearSystem, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut x = vec![0i64; sys.unknowns()];
    // Per-variable bounds on the remaining row sums let us prune early.
    enumerate_solutions(sys, n, 0, &mut x, &mut out);
    out
}

fn enumerate_solutions(
    sys: &LinearSystem,
    n: u32,
    depth: usize,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<u32>>,
) {
    let k = sys.unknowns();
    if depth == k {
        let mut set: Vec<u32> = x.iter().map(|&v| v as u32).collect();
        set.sort_unstable();
        set.dedup();
        out.push(set);
        return;
    }
    'values: for v in 1..=i64::from(n) {
        x[depth] = v;
        // Feasibility: each row's partial sum plus the attainable range of
        // the remaining coefficients must straddle zero.
        for row in sys.rows() {
            let partial: i128 = row[..=depth]
                .iter()
                .zip(x.iter())
                .map(|(&c, &v)| i128::from(c) * i128::from(v))
                .sum();
            let mut lo = partial;
            let mut hi = partial;
            for &c in &row[depth + 1..] {
                let c = i128::from(c);
                if c >= 0 {
                    lo += c;
                    hi += c * i128::from(n);
                } else {
                    lo += c * i128::from(n);
                    hi += c;
                }
            }
            if lo > 0 || hi < 0 {
                continue 'values;
            }
        }
        enumerate_solutions(sys, n, depth + 1, x, out);
    }
}

/// Iterates the r-colorings of `[1..N]` (color-symmetry broken, pruned as
/// soon as a partial coloring completes a monochromatic solution) and
/// reports either that all of them contain a monochromatic solution or
/// the least coloring containing none.
pub fn brute_force_regular(
    sys: &LinearSystem,
    r: u8,
    n: u32,
    options: &SearchOptions,
) -> Result<BruteForceOutcome, RadoError> {
    let solutions = solution_sets(sys, n);
    let count = solutions.len();
    let sets = ValueSets::from_sets(
        solutions.into_iter().map(Vec::into_boxed_slice).collect(),
        n,
    );
    let config = DfsConfig { r, symmetry: options.symmetry };
    let (outcome, stats) = if options.parallel {
        find_avoiding_par(&sets, config, &options.budget)?
    } else {
        find_avoiding_seq(&sets, config, &options.budget)?
    };
    Ok(match outcome {
        AvoidOutcome::Found(coloring) => BruteForceOutcome::Counterexample(coloring),
        AvoidOutcome::Exhausted => {
            BruteForceOutcome::AllSolvable { nodes: stats.nodes, solution_sets: count }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: Vec<Vec<i64>>) -> LinearSystem {
        LinearSystem::new(rows).unwrap()
    }

    #[test]
    fn schur_solvable_at_five() {
        let outcome =
            brute_force_regular(&sys(vec![vec![1, 1, -1]]), 2, 5, &SearchOptions::default())
                .unwrap();
        assert!(matches!(outcome, BruteForceOutcome::AllSolvable { .. }));
    }

    #[test]
    fn schur_counterexample_at_four() {
        let outcome =
            brute_force_regular(&sys(vec![vec![1, 1, -1]]), 2, 4, &SearchOptions::default())
                .unwrap();
        match outcome {
            BruteForceOutcome::Counterexample(c) => assert_eq!(c.digits(), "0110"),
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn identity_solution_with_one_color() {
        // 2x - 2y = 0 is solved by x = y = 1.
        let outcome =
            brute_force_regular(&sys(vec![vec![2, -2]]), 1, 1, &SearchOptions::default())
                .unwrap();
        assert!(matches!(outcome, BruteForceOutcome::AllSolvable { .. }));
    }

    #[test]
    fn solution_enumeration_matches_direct_check() {
        let system = sys(vec![vec![1, 1, -1]]);
        let sets = solution_sets(&system, 6);
        let mut expected = Vec::new();
        for x in 1..=6u32 {
            for y in 1..=6u32 {
                if x + y <= 6 {
                    let mut s = vec![x, y, x + y];
                    s.sort_unstable();
                    s.dedup();
                    expected.push(s);
                }
            }
        }
        expected.sort();
        expected.dedup();
        let mut got = sets;
        got.sort();
        got.dedup();
        assert_eq!(got, expected);
    }
}
