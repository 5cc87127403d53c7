//! The columns condition, decided by a depth-first search over ordered
//! column partitions with memoized span checks.
//!
//! The rational span of the columns placed so far depends only on the
//! *set* of placed columns, so the search runs over subsets: from a
//! placed set `U`, any unplaced nonempty block `B` whose column sum lies
//! in span(U) may come next (for `U = {}` the span is `{0}`, which is the
//! first-block zero-sum requirement). Dead subsets are memoized, which
//! bounds the work well below the ordered-Bell blowup.

use std::collections::{HashMap, HashSet};

use num::rational::BigRational;
use num::{BigInt, Zero};

use super::{ColumnsVerdict, LinearSystem, RadoError, DEFAULT_COLUMN_CAP};

pub fn columns_condition(sys: &LinearSystem) -> Result<ColumnsVerdict, RadoError> {
    columns_condition_with_cap(sys, DEFAULT_COLUMN_CAP)
}

pub fn columns_condition_with_cap(
    sys: &LinearSystem,
    cap: usize,
) -> Result<ColumnsVerdict, RadoError> {
    let n = sys.unknowns();
    if n > cap {
        return Err(RadoError::TooManyColumns { n, cap });
    }
    let mut search = Search {
        sys,
        full: (1u32 << n) - 1,
        bases: HashMap::new(),
        dead: HashSet::new(),
        checked: 0,
    };
    let blocks = search.run(0);
    Ok(ColumnsVerdict {
        regular: blocks.is_some(),
        blocks: blocks
            .map(|masks| masks.iter().map(|&m| mask_to_indices(m)).collect())
            .unwrap_or_default(),
        checked_partitions: search.checked,
    })
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

struct Search<'a> {
    sys: &'a LinearSystem,
    full: u32,
    /// Reduced echelon bases of the column spans, keyed by placed set.
    bases: HashMap<u32, Vec<Vec<BigRational>>>,
    dead: HashSet<u32>,
    checked: u64,
}

impl Search<'_> {
    /// Returns the block masks of the lexicographically least certificate
    /// continuing from `placed`, if any.
    fn run(&mut self, placed: u32) -> Option<Vec<u32>> {
        if placed == self.full {
            return Some(Vec::new());
        }
        if self.dead.contains(&placed) {
            return None;
        }
        let free = self.full & !placed;
        // Ascending mask order makes the certificate deterministic.
        let mut block = free;
        let mut candidates = Vec::new();
        while block != 0 {
            candidates.push(block);
            block = (block - 1) & free;
        }
        candidates.sort_unstable();
        for block in candidates {
            self.checked += 1;
            if !self.sum_in_span(placed, block) {
                continue;
            }
            if let Some(mut rest) = self.run(placed | block) {
                rest.insert(0, block);
                return Some(rest);
            }
        }
        self.dead.insert(placed);
        None
    }

    fn sum_in_span(&mut self, placed: u32, block: u32) -> bool {
        let m = self.sys.equations();
        let mut sum: Vec<BigRational> = vec![BigRational::zero(); m];
        for j in 0..self.sys.unknowns() {
            if block & (1 << j) != 0 {
                for (i, s) in sum.iter_mut().enumerate() {
                    *s += BigRational::from(BigInt::from(self.sys.rows()[i][j]));
                }
            }
        }
        let basis = self.basis_for(placed);
        reduce(&mut sum, basis);
        sum.iter().all(Zero::is_zero)
    }

    fn basis_for(&mut self, placed: u32) -> &Vec<Vec<BigRational>> {
        if !self.bases.contains_key(&placed) {
            let mut basis: Vec<Vec<BigRational>> = Vec::new();
            for j in 0..self.sys.unknowns() {
                if placed & (1 << j) != 0 {
                    let mut col: Vec<BigRational> = self
                        .sys
                        .column(j)
                        .into_iter()
                        .map(|v| BigRational::from(BigInt::from(v)))
                        .collect();
                    reduce(&mut col, &basis);
                    if let Some(pivot) = col.iter().position(|v| !v.is_zero()) {
                        let lead = col[pivot].clone();
                        for v in &mut col {
                            *v /= lead.clone();
                        }
                        basis.push(col);
                    }
                }
            }
            self.bases.insert(placed, basis);
        }
        &self.bases[&placed]
    }
}

/// Subtracts basis components; afterwards `v` is zero iff it was in the
/// span. Basis vectors are normalized with a leading 1.
fn reduce(v: &mut [BigRational], basis: &[Vec<BigRational>]) {
    for b in basis {
        let pivot = b.iter().position(|x| !x.is_zero()).expect("basis vectors are nonzero");
        if v[pivot].is_zero() {
            continue;
        }
        let factor = v[pivot].clone();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= &factor * bi;
        }
    }
}

/// Independent certificate check: recomputes both span facts with
/// fraction-free integer elimination (Bareiss) over big integers, sharing
/// nothing with the search path above.
pub fn verify_columns_certificate(sys: &LinearSystem, blocks: &[Vec<usize>]) -> bool {
    let n = sys.unknowns();
    let mut seen = vec![false; n];
    for block in blocks {
        if block.is_empty() {
            return false;
        }
        for &j in block {
            if j == 0 || j > n || seen[j - 1] {
                return false;
            }
            seen[j - 1] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return false;
    }

    let sum_of = |block: &[usize]| -> Vec<BigInt> {
        let m = sys.equations();
        let mut sum = vec![BigInt::zero(); m];
        for &j in block {
            for (i, s) in sum.iter_mut().enumerate() {
                *s += BigInt::from(sys.rows()[i][j - 1]);
            }
        }
        sum
    };

    // First block: columns sum to the zero vector.
    match blocks.first() {
        Some(first) => {
            if !sum_of(first).iter().all(Zero::is_zero) {
                return false;
            }
        }
        None => return false,
    }
    // Later blocks: sum lies in the span of all earlier columns, tested
    // as rank(A) == rank(A | sum).
    let mut earlier: Vec<usize> = blocks[0].clone();
    for block in &blocks[1..] {
        let cols: Vec<Vec<BigInt>> = earlier
            .iter()
            .map(|&j| sys.column(j - 1).into_iter().map(BigInt::from).collect())
            .collect();
        let target = sum_of(block);
        if rational_rank(&cols) != rational_rank(&with_column(&cols, &target)) {
            return false;
        }
        earlier.extend_from_slice(block);
    }
    true
}

fn with_column(cols: &[Vec<BigInt>], extra: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = cols.to_vec();
    out.push(extra.to_vec());
    out
}

/// Rank by exact rational row echelon over the transposed column matrix.
fn rational_rank(cols: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = cols
        .iter()
        .map(|c| c.iter().map(|v| BigRational::from(v.clone())).collect())
        .collect();
    let width = cols.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &lead;
            for j in col..width {
                let delta = &factor * &rows[rank][j];
                rows[i][j] -= delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(rows: Vec<Vec<i64>>) -> LinearSystem {
        LinearSystem::new(rows).unwrap()
    }

    #[test]
    fn schur_equation_is_regular() {
        // x + y = z as [1, 1, -1].
        let verdict = columns_condition(&system(vec![vec![1, 1, -1]])).unwrap();
        assert!(verdict.regular);
        assert_eq!(verdict.blocks, vec![vec![1, 3], vec![2]]);
        assert!(verify_columns_certificate(&system(vec![vec![1, 1, -1]]), &verdict.blocks));
    }

    #[test]
    fn x_plus_y_equals_3z_is_not_regular() {
        let verdict = columns_condition(&system(vec![vec![1, 1, -3]])).unwrap();
        assert!(!verdict.regular);
        assert!(verdict.blocks.is_empty());
    }

    #[test]
    fn three_term_ap_system_is_regular() {
        // x + z = 2y as [1, -2, 1]: all three columns sum to zero.
        let verdict = columns_condition(&system(vec![vec![1, -2, 1]])).unwrap();
        assert!(verdict.regular);
        assert_eq!(verdict.blocks, vec![vec![1, 2, 3]]);
    }

    #[test]
    fn multi_row_system() {
        // x + y = z, y = w: regular (Schur with a duplicated variable).
        let sys = system(vec![vec![1, 1, -1, 0], vec![0, 1, 0, -1]]);
        let verdict = columns_condition(&sys).unwrap();
        assert!(verdict.regular);
        assert!(verify_columns_certificate(&sys, &verdict.blocks));
    }

    #[test]
    fn column_cap_is_enforced() {
        let rows = vec![vec![1i64; 11]];
        let sys = system(rows);
        assert_eq!(
            columns_condition(&sys),
            Err(RadoError::TooManyColumns { n: 11, cap: 10 })
        );
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let sys = system(vec![vec![1, 1, -1]]);
        assert!(!verify_columns_certificate(&sys, &[vec![1, 2], vec![3]]));
        assert!(!verify_columns_certificate(&sys, &[vec![1, 3]]));
        assert!(!verify_columns_certificate(&sys, &[vec![1, 3], vec![2], vec![2]]));
    }
}
