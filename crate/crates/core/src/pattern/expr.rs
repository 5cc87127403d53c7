use std::collections::BTreeSet;
use std::fmt;

use super::{family::Assignment, PatternError};

/// Expression tree over positive integers.
///
/// Canonical form (maintained by [`PatternExpr::canonicalize`]):
/// * `Sum`/`Product` operands are flattened (no sum directly under a sum,
///   no product directly under a product), sorted by the derived total
///   order, and hold at least two operands;
/// * adjacent constants are folded into one (`2*(3*a)` becomes `6*a`);
/// * `e^1` collapses to `e`, constant powers are folded.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternExpr {
    Const(u64),
    Var(String),
    Sum(Vec<PatternExpr>),
    Product(Vec<PatternExpr>),
    Power(Box<PatternExpr>, u32),
}

impl PatternExpr {
    pub fn var(name: impl Into<String>) -> Self {
        PatternExpr::Var(name.into())
    }

    pub fn constant(value: u64) -> Self {
        debug_assert!(value >= 1);
        PatternExpr::Const(value)
    }

    /// Canonical sum of `ops`. Accepts any number of operands; a single
    /// operand is returned as-is.
    pub fn sum(ops: Vec<PatternExpr>) -> Self {
        PatternExpr::Sum(ops).canonicalize()
    }

    /// Canonical product of `ops`.
    pub fn product(ops: Vec<PatternExpr>) -> Self {
        PatternExpr::Product(ops).canonicalize()
    }

    pub fn power(base: PatternExpr, exp: u32) -> Self {
        PatternExpr::Power(Box::new(base), exp).canonicalize()
    }

    /// Rewrites the expression into canonical form. Idempotent, and
    /// value-preserving under [`PatternExpr::eval`].
    pub fn canonicalize(self) -> Self {
        match self {
            e @ (PatternExpr::Const(_) | PatternExpr::Var(_)) => e,
            PatternExpr::Power(base, exp) => canonicalize_power(base.canonicalize(), exp),
            PatternExpr::Sum(ops) => canonicalize_nary(ops, NaryKind::Sum),
            PatternExpr::Product(ops) => canonicalize_nary(ops, NaryKind::Product),
        }
    }

    /// Evaluates under checked 64-bit arithmetic; overflow is an error,
    /// never a wrapped value.
    pub fn eval(&self, asg: &Assignment) -> Result<u64, PatternError> {
        match self {
            PatternExpr::Const(c) => Ok(*c),
            PatternExpr::Var(name) => asg
                .value(name)
                .ok_or_else(|| PatternError::Unbound(name.clone())),
            PatternExpr::Sum(ops) => ops.iter().try_fold(0u64, |acc, op| {
                acc.checked_add(op.eval(asg)?).ok_or(PatternError::Overflow)
            }),
            PatternExpr::Product(ops) => ops.iter().try_fold(1u64, |acc, op| {
                acc.checked_mul(op.eval(asg)?).ok_or(PatternError::Overflow)
            }),
            PatternExpr::Power(base, exp) => base
                .eval(asg)?
                .checked_pow(*exp)
                .ok_or(PatternError::Overflow),
        }
    }

    /// Collects the names of all variables occurring in the expression.
    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            PatternExpr::Const(_) => {}
            PatternExpr::Var(name) => {
                out.insert(name.clone());
            }
            PatternExpr::Sum(ops) | PatternExpr::Product(ops) => {
                for op in ops {
                    op.variables(out);
                }
            }
            PatternExpr::Power(base, _) => base.variables(out),
        }
    }

    /// Replaces every occurrence of `name` with `replacement`.
    pub fn substitute(&self, name: &str, replacement: &PatternExpr) -> PatternExpr {
        match self {
            PatternExpr::Const(c) => PatternExpr::Const(*c),
            PatternExpr::Var(v) if v == name => replacement.clone(),
            PatternExpr::Var(v) => PatternExpr::Var(v.clone()),
            PatternExpr::Sum(ops) => {
                PatternExpr::Sum(ops.iter().map(|op| op.substitute(name, replacement)).collect())
            }
            PatternExpr::Product(ops) => PatternExpr::Product(
                ops.iter().map(|op| op.substitute(name, replacement)).collect(),
            ),
            PatternExpr::Power(base, exp) => {
                PatternExpr::Power(Box::new(base.substitute(name, replacement)), *exp)
            }
        }
    }

    /// True if any constant in the tree is zero (rejected by family
    /// validation; values live in the positive integers).
    pub(crate) fn has_zero_constant(&self) -> bool {
        match self {
            PatternExpr::Const(c) => *c == 0,
            PatternExpr::Var(_) => false,
            PatternExpr::Sum(ops) | PatternExpr::Product(ops) => {
                ops.iter().any(|op| op.has_zero_constant())
            }
            PatternExpr::Power(base, exp) => *exp == 0 || base.has_zero_constant(),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum NaryKind {
    Sum,
    Product,
}

fn canonicalize_power(base: PatternExpr, exp: u32) -> PatternExpr {
    if exp == 1 {
        return base;
    }
    match base {
        PatternExpr::Const(c) => match c.checked_pow(exp) {
            Some(v) => PatternExpr::Const(v),
            None => PatternExpr::Power(Box::new(PatternExpr::Const(c)), exp),
        },
        PatternExpr::Power(inner, e2) => match e2.checked_mul(exp) {
            Some(e) => PatternExpr::Power(inner, e),
            None => PatternExpr::Power(Box::new(PatternExpr::Power(inner, e2)), exp),
        },
        other => PatternExpr::Power(Box::new(other), exp),
    }
}

fn canonicalize_nary(ops: Vec<PatternExpr>, kind: NaryKind) -> PatternExpr {
    // Canonicalize children and splice same-kind operands flat.
    let mut flat = Vec::with_capacity(ops.len());
    for op in ops {
        match (op.canonicalize(), kind) {
            (PatternExpr::Sum(inner), NaryKind::Sum) => flat.extend(inner),
            (PatternExpr::Product(inner), NaryKind::Product) => flat.extend(inner),
            (other, _) => flat.push(other),
        }
    }

    let mut consts: Vec<u64> = Vec::new();
    let mut rest: Vec<PatternExpr> = Vec::new();
    for op in flat {
        match op {
            PatternExpr::Const(c) => consts.push(c),
            other => rest.push(other),
        }
    }
    let folded = fold_constants(consts, kind);
    for c in folded {
        // A multiplicative identity contributes nothing next to other factors.
        if kind == NaryKind::Product && c == 1 && !rest.is_empty() {
            continue;
        }
        rest.push(PatternExpr::Const(c));
    }
    rest.sort();

    match rest.len() {
        0 => match kind {
            // Only reachable from an all-ones product.
            NaryKind::Product => PatternExpr::Const(1),
            NaryKind::Sum => PatternExpr::Const(0),
        },
        1 => rest.pop().unwrap(),
        _ => match kind {
            NaryKind::Sum => PatternExpr::Sum(rest),
            NaryKind::Product => PatternExpr::Product(rest),
        },
    }
}

/// Folds a list of constants with checked arithmetic. Sorting first and
/// folding greedily keeps the result stable under repetition, so
/// canonicalization stays idempotent even in the (degenerate) case where
/// the fold would overflow and constants must be left split.
fn fold_constants(mut consts: Vec<u64>, kind: NaryKind) -> Vec<u64> {
    if consts.len() <= 1 {
        return consts;
    }
    consts.sort_unstable();
    let combine = |a: u64, b: u64| match kind {
        NaryKind::Sum => a.checked_add(b),
        NaryKind::Product => a.checked_mul(b),
    };
    let mut out = Vec::with_capacity(1);
    let mut acc = consts[0];
    for &c in &consts[1..] {
        match combine(acc, c) {
            Some(v) => acc = v,
            None => {
                out.push(acc);
                acc = c;
            }
        }
    }
    out.push(acc);
    out
}

impl fmt::Display for PatternExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternExpr::Const(c) => write!(f, "{c}"),
            PatternExpr::Var(name) => write!(f, "{name}"),
            PatternExpr::Sum(ops) => {
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{op}")?;
                }
                Ok(())
            }
            PatternExpr::Product(ops) => {
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if matches!(op, PatternExpr::Sum(_)) {
                        write!(f, "({op})")?;
                    } else {
                        write!(f, "{op}")?;
                    }
                }
                Ok(())
            }
            PatternExpr::Power(base, exp) => {
                if matches!(**base, PatternExpr::Var(_)) {
                    write!(f, "{base}^{exp}")
                } else {
                    write!(f, "({base})^{exp}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> PatternExpr {
        PatternExpr::var(name)
    }

    #[test]
    fn flattens_and_sorts() {
        // (b+a)+c -> a+b+c
        let e = PatternExpr::Sum(vec![
            PatternExpr::Sum(vec![v("b"), v("a")]),
            v("c"),
        ])
        .canonicalize();
        assert_eq!(e, PatternExpr::Sum(vec![v("a"), v("b"), v("c")]));
    }

    #[test]
    fn folds_constants_in_products() {
        // 2*(3*a) -> 6*a
        let e = PatternExpr::Product(vec![
            PatternExpr::Const(2),
            PatternExpr::Product(vec![PatternExpr::Const(3), v("a")]),
        ])
        .canonicalize();
        assert_eq!(e, PatternExpr::Product(vec![PatternExpr::Const(6), v("a")]));
    }

    #[test]
    fn no_ring_normalization() {
        // a*(b+c) keeps its shape.
        let e = PatternExpr::Product(vec![v("a"), PatternExpr::Sum(vec![v("b"), v("c")])]);
        assert_eq!(e.clone().canonicalize(), e);
    }

    #[test]
    fn drops_unit_factor_and_trivial_power() {
        let e = PatternExpr::Product(vec![PatternExpr::Const(1), v("a")]).canonicalize();
        assert_eq!(e, v("a"));
        let p = PatternExpr::Power(Box::new(v("x")), 1).canonicalize();
        assert_eq!(p, v("x"));
    }

    #[test]
    fn eval_examples() {
        let asg = Assignment::from_pairs([("a", 2), ("b", 3), ("c", 4)]).unwrap();
        // a*b + c = 10
        let e = PatternExpr::sum(vec![PatternExpr::product(vec![v("a"), v("b")]), v("c")]);
        assert_eq!(e.eval(&asg).unwrap(), 10);

        let asg2 = Assignment::from_pairs([("x", 3), ("y", 2)]).unwrap();
        let e2 = PatternExpr::product(vec![v("x"), PatternExpr::power(v("y"), 2)]);
        assert_eq!(e2.eval(&asg2).unwrap(), 12);

        // Unbound variable reported by name.
        let partial = Assignment::from_pairs([("a", 1)]).unwrap();
        let e3 = PatternExpr::sum(vec![v("a"), v("b")]);
        assert_eq!(e3.eval(&partial), Err(PatternError::Unbound("b".into())));
    }

    #[test]
    fn eval_overflow_is_an_error() {
        let asg = Assignment::from_pairs([("x", u64::MAX / 2)]).unwrap();
        let e = PatternExpr::product(vec![v("x"), PatternExpr::Const(3)]);
        assert_eq!(e.eval(&asg), Err(PatternError::Overflow));
    }
}
