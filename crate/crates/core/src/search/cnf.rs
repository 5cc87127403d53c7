//! DIMACS CNF export.
//!
//! Variable `v(n, c) = (n-1)*r + c + 1` asserts that element `n` has
//! color `c`. The formula conjoins exactly-one constraints per element
//! with one blocking clause per (instance value set, color) pair, so it
//! is satisfiable exactly when a witness-free coloring of `[1..N]`
//! exists, and every model decodes to one.

use std::fmt::Write as _;

use crate::pattern::PatternFamily;

use super::{Coloring, InstanceTable, SearchError};

#[derive(Debug, Clone)]
pub struct CnfDocument {
    pub vars: u32,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
    pub n: u32,
    pub r: u8,
}

impl CnfDocument {
    /// 1-based DIMACS variable for "element `n` has color `c`".
    pub fn var(&self, n: u32, c: u8) -> i32 {
        debug_assert!(1 <= n && n <= self.n && c < self.r);
        ((n - 1) * u32::from(self.r) + u32::from(c) + 1) as i32
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for comment in &self.comments {
            writeln!(out, "c {comment}").unwrap();
        }
        writeln!(out, "p cnf {} {}", self.vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            writeln!(out, "0").unwrap();
        }
        out
    }

    /// Evaluates every clause under the coloring-induced assignment:
    /// `v(n, c)` is true iff the coloring gives element `n` color `c`.
    pub fn satisfied_by(&self, coloring: &Coloring) -> bool {
        if coloring.n() != self.n || coloring.r() != self.r {
            return false;
        }
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() - 1;
                let element = var / u32::from(self.r) + 1;
                let color = (var % u32::from(self.r)) as u8;
                let value = coloring.get(element) == color;
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    /// Decodes a model (true literal per variable index, 0-based) into a
    /// coloring; returns `None` if some element has no color set.
    pub fn decode_model(&self, truth: &[bool]) -> Option<Coloring> {
        let mut colors = Vec::with_capacity(self.n as usize);
        for n in 1..=self.n {
            let mut found = None;
            for c in 0..self.r {
                if truth[(self.var(n, c) - 1) as usize] {
                    found = Some(c);
                    break;
                }
            }
            colors.push(found?);
        }
        Coloring::from_colors(self.r, &colors).ok()
    }
}

pub fn build_cnf(family: &PatternFamily, r: u8, n: u32) -> Result<CnfDocument, SearchError> {
    if r == 0 || r > super::MAX_COLORS {
        return Err(SearchError::InvalidColorCount(r));
    }
    let table = InstanceTable::build(family, n);
    let mut clauses = Vec::new();
    // Exactly-one color per element: one at-least-one clause and pairwise
    // at-most-one clauses.
    let var = |elem: u32, c: u8| ((elem - 1) * u32::from(r) + u32::from(c) + 1) as i32;
    for elem in 1..=n {
        clauses.push((0..r).map(|c| var(elem, c)).collect());
        for c1 in 0..r {
            for c2 in c1 + 1..r {
                clauses.push(vec![-var(elem, c1), -var(elem, c2)]);
            }
        }
    }
    // Block each instance from being monochromatic in each color.
    for set in table.iter() {
        for c in 0..r {
            clauses.push(set.iter().map(|&v| -var(v, c)).collect());
        }
    }
    Ok(CnfDocument {
        vars: n * u32::from(r),
        clauses,
        comments: vec![
            format!("family: {family}"),
            format!("r = {r}, N = {n}; v(n,c) = (n-1)*r + c + 1"),
            "satisfiable iff a witness-free coloring of [1..N] exists".into(),
        ],
        n,
        r,
    })
}

/// DIMACS text for the family at the given color count and range.
pub fn export_cnf(family: &PatternFamily, r: u8, n: u32) -> Result<String, SearchError> {
    Ok(build_cnf(family, r, n)?.to_dimacs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::schur_family;

    #[test]
    fn empty_range_header() {
        let text = export_cnf(&schur_family(), 2, 0).unwrap();
        assert!(text.contains("p cnf 0 0"));
        assert!(text.lines().last().unwrap().starts_with("p cnf"));
    }

    #[test]
    fn schur_extremal_satisfies_every_clause() {
        let doc = build_cnf(&schur_family(), 2, 4).unwrap();
        let extremal = Coloring::from_colors(2, &[0, 1, 1, 0]).unwrap();
        assert!(doc.satisfied_by(&extremal));
    }

    #[test]
    fn forced_range_falsifies_every_coloring() {
        let doc = build_cnf(&schur_family(), 2, 5).unwrap();
        for bits in 0u32..32 {
            let colors: Vec<u8> = (0..5).map(|i| ((bits >> i) & 1) as u8).collect();
            let coloring = Coloring::from_colors(2, &colors).unwrap();
            assert!(!doc.satisfied_by(&coloring), "coloring {}", coloring.digits());
        }
    }

    #[test]
    fn clause_count_matches_header() {
        let doc = build_cnf(&schur_family(), 2, 4).unwrap();
        let text = doc.to_dimacs();
        let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
        let parts: Vec<&str> = header.split_whitespace().collect();
        assert_eq!(parts[2].parse::<u32>().unwrap(), doc.vars);
        assert_eq!(parts[3].parse::<usize>().unwrap(), doc.clauses.len());
        let clause_lines = text.lines().filter(|l| l.ends_with(" 0")).count();
        assert_eq!(clause_lines, doc.clauses.len());
    }
}
