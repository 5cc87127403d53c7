//! Partition regularity of integer linear systems.
//!
//! A system `A·x = 0` is partition regular over the positive integers
//! exactly when its columns admit an ordered partition `B1..Bt` where the
//! columns of `B1` sum to zero and each later block's column sum lies in
//! the rational span of all earlier columns (Rado's columns condition).
//! [`columns_condition`] decides this with exact rational arithmetic;
//! [`brute_force_regular`] is the independent coloring-search oracle; and
//! [`geometric_lift`] transports additive families to multiplicative ones
//! along `n -> 2^n`.

mod brute;
mod columns;
mod lift;

pub use brute::{brute_force_regular, solution_sets, BruteForceOutcome};
pub use columns::{columns_condition, columns_condition_with_cap, verify_columns_certificate};
pub use lift::geometric_lift;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::search::BudgetExceeded;

/// Default cap on column count: the block-partition state space is
/// exponential in columns, and the engine refuses rather than guesses.
pub const DEFAULT_COLUMN_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadoError {
    #[error("matrix is empty or ragged")]
    BadMatrix,
    #[error("column {0} is all zeros")]
    ZeroColumn(usize),
    #[error("{n} columns exceed the configured cap of {cap}")]
    TooManyColumns { n: usize, cap: usize },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("expression `{0}` is not a nonnegative integer combination of variables")]
    NotLinear(String),
    #[error("coefficient {0} too large to lift into an exponent")]
    CoefficientTooLarge(u64),
    #[error("search error: {0}")]
    Search(String),
}

/// Integer matrix of the homogeneous system `A·x = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    rows: Vec<Vec<i64>>,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, RadoError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(RadoError::BadMatrix);
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(RadoError::BadMatrix);
        }
        for j in 0..width {
            if rows.iter().all(|r| r[j] == 0) {
                return Err(RadoError::ZeroColumn(j + 1));
            }
        }
        Ok(LinearSystem { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    pub fn unknowns(&self) -> usize {
        self.rows[0].len()
    }

    /// Column `j`, 0-based.
    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Outcome of [`columns_condition`]. Block entries are 1-based column
/// indices; `checked_partitions` counts the span-membership tests the
/// search performed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnsVerdict {
    pub regular: bool,
    pub blocks: Vec<Vec<usize>>,
    pub checked_partitions: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_matrices() {
        assert_eq!(LinearSystem::new(vec![]), Err(RadoError::BadMatrix));
        assert_eq!(
            LinearSystem::new(vec![vec![1, 2], vec![1]]),
            Err(RadoError::BadMatrix)
        );
        assert_eq!(
            LinearSystem::new(vec![vec![1, 0], vec![2, 0]]),
            Err(RadoError::ZeroColumn(2))
        );
    }
}
