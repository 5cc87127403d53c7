use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{PatternError, PatternExpr};

/// Role of a family variable. Anchor variables are the ones the
/// shared-anchor search extends to several values at once; everything
/// else is a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    Generator,
    Anchor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub role: VarRole,
    pub multiplicity: u32,
}

impl VarDecl {
    pub fn generator(name: impl Into<String>) -> Self {
        VarDecl { name: name.into(), role: VarRole::Generator, multiplicity: 1 }
    }

    pub fn anchor(name: impl Into<String>) -> Self {
        VarDecl { name: name.into(), role: VarRole::Anchor, multiplicity: 1 }
    }

    pub fn with_multiplicity(mut self, m: u32) -> Self {
        self.multiplicity = m;
        self
    }
}

/// A set of pattern expressions over a declared, ordered variable table.
///
/// The expression list may contain canonically equal duplicates (several
/// builders produce them by construction); duplicates only disappear at
/// instantiation, where the result is a value set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFamily {
    exprs: Vec<PatternExpr>,
    vars: Vec<VarDecl>,
    distinct: bool,
}

/// One variable copy of an expanded family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyVar {
    pub name: String,
    pub role: VarRole,
}

/// A family with all multiplicities expanded away: every copy is an
/// ordinary variable, and every expression mentions copies only.
#[derive(Debug, Clone)]
pub struct ExpandedFamily {
    pub copies: Vec<CopyVar>,
    pub exprs: Vec<PatternExpr>,
    pub distinct: bool,
}

impl PatternFamily {
    /// Validates and canonicalizes. Every variable occurring in an
    /// expression must be declared and vice versa; copy names produced by
    /// multiplicity expansion must not collide with declared names.
    pub fn new(
        exprs: Vec<PatternExpr>,
        vars: Vec<VarDecl>,
        distinct: bool,
    ) -> Result<Self, PatternError> {
        if exprs.is_empty() {
            return Err(PatternError::InvalidFamily("family has no expressions".into()));
        }
        let exprs: Vec<PatternExpr> = exprs.into_iter().map(PatternExpr::canonicalize).collect();
        for e in &exprs {
            if e.has_zero_constant() {
                return Err(PatternError::InvalidFamily(
                    "constants and exponents must be at least 1".into(),
                ));
            }
        }

        let mut occurring = BTreeSet::new();
        for e in &exprs {
            e.variables(&mut occurring);
        }
        let mut seen = BTreeSet::new();
        for decl in &vars {
            if decl.multiplicity == 0 {
                return Err(PatternError::InvalidFamily(format!(
                    "variable `{}` has zero multiplicity",
                    decl.name
                )));
            }
            if !seen.insert(decl.name.clone()) {
                return Err(PatternError::InvalidFamily(format!(
                    "variable `{}` declared twice",
                    decl.name
                )));
            }
            if !occurring.contains(&decl.name) {
                return Err(PatternError::UnusedVariable(decl.name.clone()));
            }
        }
        for name in &occurring {
            if !seen.contains(name) {
                return Err(PatternError::InvalidFamily(format!(
                    "variable `{name}` occurs but is not declared"
                )));
            }
        }

        let family = PatternFamily { exprs, vars, distinct };
        // Copy names must be unambiguous: `a` with multiplicity 2 expands
        // to `a1`, `a2`, which must not shadow declared variables.
        let mut copy_names = BTreeSet::new();
        for copy in family.copy_table() {
            if !copy_names.insert(copy.name.clone()) {
                return Err(PatternError::InvalidFamily(format!(
                    "expanded copy name `{}` collides with another variable",
                    copy.name
                )));
            }
        }
        Ok(family)
    }

    pub fn expressions(&self) -> &[PatternExpr] {
        &self.exprs
    }

    pub fn variables(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn distinct(&self) -> bool {
        self.distinct
    }

    pub fn set_distinct(&mut self, distinct: bool) {
        self.distinct = distinct;
    }

    fn copy_names(decl: &VarDecl) -> Vec<String> {
        if decl.multiplicity == 1 {
            vec![decl.name.clone()]
        } else {
            (1..=decl.multiplicity).map(|i| format!("{}{}", decl.name, i)).collect()
        }
    }

    fn copy_table(&self) -> Vec<CopyVar> {
        let mut copies = Vec::new();
        for decl in &self.vars {
            for name in Self::copy_names(decl) {
                copies.push(CopyVar { name, role: decl.role });
            }
        }
        copies
    }

    /// Expands multiplicities: each expression mentioning variables
    /// `v, w, ...` is replicated over every combination of their copies,
    /// in declared variable order.
    pub fn expanded(&self) -> ExpandedFamily {
        let copies = self.copy_table();
        let mut exprs = Vec::new();
        for template in &self.exprs {
            let mut mentioned = BTreeSet::new();
            template.variables(&mut mentioned);
            // Declared order, not alphabetical.
            let decls: Vec<&VarDecl> =
                self.vars.iter().filter(|d| mentioned.contains(&d.name)).collect();
            let mut stack = vec![(template.clone(), 0usize)];
            while let Some((expr, idx)) = stack.pop() {
                if idx == decls.len() {
                    exprs.push(expr.canonicalize());
                    continue;
                }
                let decl = decls[idx];
                // Push in reverse so copies come out in ascending order.
                for name in Self::copy_names(decl).into_iter().rev() {
                    let substituted = expr.substitute(&decl.name, &PatternExpr::Var(name));
                    stack.push((substituted, idx + 1));
                }
            }
        }
        ExpandedFamily { copies, exprs, distinct: self.distinct }
    }

    /// Evaluates every expanded expression and returns the deduplicated
    /// value set. Overflow propagates as an error here (search treats
    /// overflowing instances as out of range instead).
    pub fn instantiate(&self, asg: &Assignment) -> Result<BTreeSet<u64>, PatternError> {
        self.expanded().instantiate(asg)
    }
}

impl ExpandedFamily {
    pub fn instantiate(&self, asg: &Assignment) -> Result<BTreeSet<u64>, PatternError> {
        if self.distinct {
            self.check_distinct(asg)?;
        }
        let mut values = BTreeSet::new();
        for e in &self.exprs {
            values.insert(e.eval(asg)?);
        }
        Ok(values)
    }

    pub fn check_distinct(&self, asg: &Assignment) -> Result<(), PatternError> {
        for (i, a) in self.copies.iter().enumerate() {
            let va = asg.value(&a.name).ok_or_else(|| PatternError::Unbound(a.name.clone()))?;
            for b in &self.copies[i + 1..] {
                let vb =
                    asg.value(&b.name).ok_or_else(|| PatternError::Unbound(b.name.clone()))?;
                if va == vb {
                    return Err(PatternError::DistinctnessViolated(
                        a.name.clone(),
                        b.name.clone(),
                        va,
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn anchor_copies(&self) -> Vec<usize> {
        self.copies
            .iter()
            .enumerate()
            .filter(|(_, c)| c.role == VarRole::Anchor)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A total map from variable copy names to positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, u64>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut asg = Assignment::new();
        for (name, value) in pairs {
            asg.bind(name, value)?;
        }
        Ok(asg)
    }

    /// Parses the CLI form `a=2,b=3,c=4`.
    pub fn parse_list(text: &str) -> Result<Self, PatternError> {
        let mut asg = Assignment::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, value) = part.split_once('=').ok_or_else(|| PatternError::Syntax {
                offset: 0,
                message: format!("expected `name=value`, got `{part}`"),
            })?;
            let value: u64 = value.trim().parse().map_err(|_| PatternError::Syntax {
                offset: 0,
                message: format!("bad integer in `{part}`"),
            })?;
            asg.bind(name.trim().to_owned(), value)?;
        }
        Ok(asg)
    }

    pub fn bind(&mut self, name: impl Into<String>, value: u64) -> Result<(), PatternError> {
        if value == 0 {
            return Err(PatternError::NonPositiveValue);
        }
        self.0.insert(name.into(), value);
        Ok(())
    }

    /// Rebinds without allocating when the key is already present; the
    /// enumeration loops rebind the same copies millions of times.
    pub fn bind_str(&mut self, name: &str, value: u64) -> Result<(), PatternError> {
        if value == 0 {
            return Err(PatternError::NonPositiveValue);
        }
        match self.0.get_mut(name) {
            Some(slot) => *slot = value,
            None => {
                self.0.insert(name.to_owned(), value);
            }
        }
        Ok(())
    }

    pub fn unbind(&mut self, name: &str) {
        self.0.remove(name);
    }

    pub fn value(&self, name: &str) -> Option<u64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl fmt::Display for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, piece: &str| -> fmt::Result {
            if !first {
                write!(f, " ; ")?;
            }
            first = false;
            write!(f, "{piece}")
        };
        for decl in &self.vars {
            let keyword = match decl.role {
                VarRole::Anchor => "@anchor",
                VarRole::Generator => "@gen",
            };
            // Default declarations (generator, multiplicity 1) are implied.
            if decl.role == VarRole::Generator && decl.multiplicity == 1 {
                continue;
            }
            if decl.multiplicity == 1 {
                emit(f, &format!("{keyword} {}", decl.name))?;
            } else {
                emit(f, &format!("{keyword} {} {}", decl.name, decl.multiplicity))?;
            }
        }
        if self.distinct {
            emit(f, "@distinct")?;
        }
        for e in &self.exprs {
            emit(f, &e.to_string())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> PatternExpr {
        PatternExpr::var(name)
    }

    #[test]
    fn expansion_replicates_over_copies() {
        // {a+b, a*b} with a duplicated twice.
        let family = PatternFamily::new(
            vec![
                PatternExpr::sum(vec![v("a"), v("b")]),
                PatternExpr::product(vec![v("a"), v("b")]),
            ],
            vec![VarDecl::anchor("a").with_multiplicity(2), VarDecl::generator("b")],
            false,
        )
        .unwrap();
        let expanded = family.expanded();
        let names: Vec<&str> = expanded.copies.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["a1", "a2", "b"]);
        let shown: Vec<String> = expanded.exprs.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["a1 + b", "a2 + b", "a1*b", "a2*b"]);
    }

    #[test]
    fn instantiate_value_sets() {
        let family = PatternFamily::new(
            vec![
                PatternExpr::sum(vec![v("a"), v("b")]),
                PatternExpr::product(vec![v("a"), v("b")]),
            ],
            vec![VarDecl::anchor("a").with_multiplicity(2), VarDecl::generator("b")],
            false,
        )
        .unwrap();
        let asg = Assignment::from_pairs([("a1", 1), ("a2", 2), ("b", 3)]).unwrap();
        let values: Vec<u64> = family.instantiate(&asg).unwrap().into_iter().collect();
        assert_eq!(values, [3, 4, 5, 6]);
    }

    #[test]
    fn undeclared_and_unused_variables_rejected() {
        let err = PatternFamily::new(
            vec![PatternExpr::sum(vec![v("a"), v("b")])],
            vec![VarDecl::generator("a")],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, PatternError::InvalidFamily(_)));

        let err = PatternFamily::new(
            vec![v("a")],
            vec![VarDecl::generator("a"), VarDecl::generator("b")],
            false,
        )
        .unwrap_err();
        assert_eq!(err, PatternError::UnusedVariable("b".into()));
    }

    #[test]
    fn copy_name_collision_rejected() {
        // `a` with multiplicity 2 expands to a1/a2, which collides with a
        // literal variable named a1.
        let err = PatternFamily::new(
            vec![PatternExpr::sum(vec![v("a"), v("a1")])],
            vec![
                VarDecl::generator("a").with_multiplicity(2),
                VarDecl::generator("a1"),
            ],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, PatternError::InvalidFamily(_)));
    }

    #[test]
    fn distinctness_flag_enforced() {
        let mut family = PatternFamily::new(
            vec![PatternExpr::sum(vec![v("x"), v("y")])],
            vec![VarDecl::generator("x"), VarDecl::generator("y")],
            false,
        )
        .unwrap();
        family.set_distinct(true);
        let asg = Assignment::from_pairs([("x", 2), ("y", 2)]).unwrap();
        assert!(matches!(
            family.instantiate(&asg),
            Err(PatternError::DistinctnessViolated(_, _, 2))
        ));
    }
}
