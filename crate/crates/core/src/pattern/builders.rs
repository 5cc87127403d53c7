//! Builders for the pattern families the engine searches for.
//!
//! Builders produce expression *lists*; canonically equal duplicates are
//! kept unless noted otherwise, since deduplication is a value-set
//! notion that belongs to instantiation.

use super::{PatternError, PatternExpr, PatternFamily, VarDecl};

fn letter_vars(n: u32) -> Result<Vec<String>, PatternError> {
    if n > 26 {
        return Err(PatternError::InvalidParameter(format!(
            "at most 26 variables supported, requested {n}"
        )));
    }
    Ok((0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect())
}

fn require(cond: bool, msg: &str) -> Result<(), PatternError> {
    if cond {
        Ok(())
    } else {
        Err(PatternError::InvalidParameter(msg.into()))
    }
}

/// `{x, y, x+y}` — the additive Schur family.
pub fn schur_family() -> PatternFamily {
    let x = PatternExpr::var("x");
    let y = PatternExpr::var("y");
    PatternFamily::new(
        vec![x.clone(), y.clone(), PatternExpr::sum(vec![x, y])],
        vec![VarDecl::generator("x"), VarDecl::generator("y")],
        false,
    )
    .expect("static family")
}

/// `{x, y, x*y}` — the multiplicative Schur family.
pub fn product_schur_family() -> PatternFamily {
    let x = PatternExpr::var("x");
    let y = PatternExpr::var("y");
    PatternFamily::new(
        vec![x.clone(), y.clone(), PatternExpr::product(vec![x, y])],
        vec![VarDecl::generator("x"), VarDecl::generator("y")],
        false,
    )
    .expect("static family")
}

/// `{x, x+d, ..., x+(k-1)*d}` — a k-term arithmetic progression.
pub fn ap_family(k: u32) -> Result<PatternFamily, PatternError> {
    require(k >= 2, "progression length must be at least 2")?;
    let x = PatternExpr::var("x");
    let d = PatternExpr::var("d");
    let mut exprs = vec![x.clone()];
    for i in 1..k {
        let step = if i == 1 {
            d.clone()
        } else {
            PatternExpr::product(vec![PatternExpr::constant(u64::from(i)), d.clone()])
        };
        exprs.push(PatternExpr::sum(vec![x.clone(), step]));
    }
    PatternFamily::new(exprs, vec![VarDecl::generator("x"), VarDecl::generator("d")], false)
}

/// `{a_i + b_j, a_i * b_j}` over `anchor_mult` copies of the anchor `a`
/// and `gen_mult` copies of the generator `b`.
pub fn build_sum_product(anchor_mult: u32, gen_mult: u32) -> Result<PatternFamily, PatternError> {
    require(anchor_mult >= 1 && gen_mult >= 1, "multiplicities must be at least 1")?;
    let a = PatternExpr::var("a");
    let b = PatternExpr::var("b");
    PatternFamily::new(
        vec![
            PatternExpr::sum(vec![a.clone(), b.clone()]),
            PatternExpr::product(vec![a, b]),
        ],
        vec![
            VarDecl::anchor("a").with_multiplicity(anchor_mult),
            VarDecl::generator("b").with_multiplicity(gen_mult),
        ],
        false,
    )
}

/// All `2^(n-1)` increasing bracketings `a1 o1 (a2 o2 (... o(n-1) an))`
/// with each `oi` in `{+, *}`, every variable carrying multiplicity `k`.
/// Operator words are emitted in lexicographic order with `+` before `*`.
pub fn build_iterated(n: u32, k: u32) -> Result<PatternFamily, PatternError> {
    require(n >= 2, "depth must be at least 2")?;
    require(k >= 1, "multiplicity must be at least 1")?;
    let names = letter_vars(n)?;
    let slots = (n - 1) as usize;
    let mut exprs = Vec::with_capacity(1 << slots);
    for word in 0u32..(1 << slots) {
        // Bit i (from the most significant operator slot) picks + or *.
        let mut expr = PatternExpr::var(&names[n as usize - 1]);
        for i in (0..slots).rev() {
            let lhs = PatternExpr::var(&names[i]);
            let bit = (word >> (slots - 1 - i)) & 1;
            expr = if bit == 0 {
                PatternExpr::sum(vec![lhs, expr])
            } else {
                PatternExpr::product(vec![lhs, expr])
            };
        }
        exprs.push(expr);
    }
    let vars = names
        .into_iter()
        .map(|name| VarDecl::generator(name).with_multiplicity(k))
        .collect();
    PatternFamily::new(exprs, vars, false)
}

/// `{x + i*y : i} U {x*y} U {z*x*y^i : i}` — matching arithmetic and
/// geometric progressions with multiplicatively shifted starts.
///
/// By default the index `i` ranges over `0..=k`, which keeps the plain
/// `x` and `z*x` terms in the family; pass `from_one = true` for `1..=k`.
pub fn build_vdw_mixed(k: u32, from_one: bool) -> Result<PatternFamily, PatternError> {
    require(k >= 1, "progression length must be at least 1")?;
    let x = PatternExpr::var("x");
    let y = PatternExpr::var("y");
    let z = PatternExpr::var("z");
    let lo = u32::from(from_one);
    let mut exprs = Vec::new();
    for i in lo..=k {
        exprs.push(arith_term(&x, &y, i));
    }
    exprs.push(PatternExpr::product(vec![x.clone(), y.clone()]));
    for i in lo..=k {
        exprs.push(geom_term(&[z.clone(), x.clone()], &y, i));
    }
    PatternFamily::new(
        exprs,
        vec![VarDecl::anchor("x"), VarDecl::generator("y"), VarDecl::generator("z")],
        false,
    )
}

/// `{x + i*y, x*y^i : i}` — the double van der Waerden family. The
/// expression list is deduplicated (at `i = 0` both forms reduce to `x`).
pub fn build_double_vdw(k: u32, from_one: bool) -> Result<PatternFamily, PatternError> {
    require(k >= 1, "progression length must be at least 1")?;
    let x = PatternExpr::var("x");
    let y = PatternExpr::var("y");
    let lo = u32::from(from_one);
    let mut exprs: Vec<PatternExpr> = Vec::new();
    let mut push_dedup = |e: PatternExpr| {
        if !exprs.contains(&e) {
            exprs.push(e);
        }
    };
    for i in lo..=k {
        push_dedup(arith_term(&x, &y, i));
    }
    for i in lo..=k {
        push_dedup(geom_term(&[x.clone()], &y, i));
    }
    PatternFamily::new(exprs, vec![VarDecl::anchor("x"), VarDecl::generator("y")], false)
}

fn arith_term(x: &PatternExpr, y: &PatternExpr, i: u32) -> PatternExpr {
    match i {
        0 => x.clone(),
        1 => PatternExpr::sum(vec![x.clone(), y.clone()]),
        _ => PatternExpr::sum(vec![
            x.clone(),
            PatternExpr::product(vec![PatternExpr::constant(u64::from(i)), y.clone()]),
        ]),
    }
}

fn geom_term(prefix: &[PatternExpr], y: &PatternExpr, i: u32) -> PatternExpr {
    let mut factors = prefix.to_vec();
    match i {
        0 => {}
        1 => factors.push(y.clone()),
        _ => factors.push(PatternExpr::power(y.clone(), i)),
    }
    PatternExpr::product(factors)
}

/// All nonempty subset sums followed by all nonempty subset products of
/// `n` variables, `2*(2^n - 1)` expressions in subset-bitmask order.
/// Singleton subsets appear in both halves.
pub fn build_fs_fp(n: u32) -> Result<PatternFamily, PatternError> {
    require(n >= 2, "need at least 2 variables")?;
    require(n <= 16, "subset families beyond 16 variables are not supported")?;
    let names = letter_vars(n)?;
    let mut exprs = Vec::new();
    for product in [false, true] {
        for mask in 1u32..(1 << n) {
            exprs.push(subset_expr(&names, mask, product));
        }
    }
    let vars = names.into_iter().map(VarDecl::generator).collect();
    PatternFamily::new(exprs, vars, false)
}

/// `FS(a1..an) U FP(a1..an) U (a1 + FP(a2..an)) U (a1 * FS(a2..an))`,
/// deduplicated as a union (the display overlaps itself).
pub fn build_mixed_fsfp(n: u32) -> Result<PatternFamily, PatternError> {
    require(n >= 2, "need at least 2 variables")?;
    require(n <= 16, "subset families beyond 16 variables are not supported")?;
    let names = letter_vars(n)?;
    let mut exprs: Vec<PatternExpr> = Vec::new();
    let mut push_union = |e: PatternExpr| {
        if !exprs.contains(&e) {
            exprs.push(e);
        }
    };
    for product in [false, true] {
        for mask in 1u32..(1 << n) {
            push_union(subset_expr(&names, mask, product));
        }
    }
    let head = PatternExpr::var(&names[0]);
    // Masks over the remaining n-1 variables, shifted past the head.
    for rest_mask in 1u32..(1 << (n - 1)) {
        let mask = rest_mask << 1;
        push_union(PatternExpr::sum(vec![head.clone(), subset_expr(&names, mask, true)]));
        push_union(PatternExpr::product(vec![head.clone(), subset_expr(&names, mask, false)]));
    }
    let vars = names.into_iter().map(VarDecl::generator).collect();
    PatternFamily::new(exprs, vars, false)
}

fn subset_expr(names: &[String], mask: u32, product: bool) -> PatternExpr {
    let members: Vec<PatternExpr> = (0..names.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| PatternExpr::var(&names[i]))
        .collect();
    if product {
        PatternExpr::product(members)
    } else {
        PatternExpr::sum(members)
    }
}

/// Every bracketing of `n` variables with `+`/`*` at each internal node:
/// `Catalan(n-1) * 2^(n-1)` expressions before any deduplication. With
/// `balanced_only`, `n` must be a power of two and only the perfectly
/// balanced shape is used (8 expressions of the form `(a o b) o (c o d)`
/// at `n = 4`).
pub fn build_bracketings(n: u32, balanced_only: bool) -> Result<PatternFamily, PatternError> {
    require(n >= 2, "need at least 2 variables")?;
    require(n <= 8, "bracketing families beyond 8 variables are not supported")?;
    if balanced_only {
        require(n.is_power_of_two(), "balanced bracketings require a power-of-two variable count")?;
    }
    let names = letter_vars(n)?;
    let shapes = if balanced_only {
        vec![balanced_shape(0, n as usize)]
    } else {
        all_shapes(0, n as usize)
    };
    let ops = (n - 1) as usize;
    let mut exprs = Vec::new();
    for shape in &shapes {
        for word in 0u32..(1 << ops) {
            let mut next_op = 0usize;
            exprs.push(apply_ops(shape, &names, word, ops, &mut next_op));
        }
    }
    let vars = names.into_iter().map(VarDecl::generator).collect();
    PatternFamily::new(exprs, vars, false)
}

#[derive(Clone)]
enum Shape {
    Leaf(usize),
    Node(Box<Shape>, Box<Shape>),
}

fn all_shapes(lo: usize, hi: usize) -> Vec<Shape> {
    if hi - lo == 1 {
        return vec![Shape::Leaf(lo)];
    }
    let mut out = Vec::new();
    for mid in lo + 1..hi {
        let rights = all_shapes(mid, hi);
        for left in all_shapes(lo, mid) {
            for right in &rights {
                out.push(Shape::Node(Box::new(left.clone()), Box::new(right.clone())));
            }
        }
    }
    out
}

fn balanced_shape(lo: usize, hi: usize) -> Shape {
    if hi - lo == 1 {
        return Shape::Leaf(lo);
    }
    let mid = (lo + hi) / 2;
    Shape::Node(Box::new(balanced_shape(lo, mid)), Box::new(balanced_shape(mid, hi)))
}

/// Assigns operators to internal nodes in pre-order; bit 0 of `word` is
/// the most significant operator slot so words enumerate lexicographically
/// with `+` before `*`.
fn apply_ops(
    shape: &Shape,
    names: &[String],
    word: u32,
    total_ops: usize,
    next_op: &mut usize,
) -> PatternExpr {
    match shape {
        Shape::Leaf(i) => PatternExpr::var(&names[*i]),
        Shape::Node(l, r) => {
            let slot = *next_op;
            *next_op += 1;
            let lhs = apply_ops(l, names, word, total_ops, next_op);
            let rhs = apply_ops(r, names, word, total_ops, next_op);
            if (word >> (total_ops - 1 - slot)) & 1 == 0 {
                PatternExpr::sum(vec![lhs, rhs])
            } else {
                PatternExpr::product(vec![lhs, rhs])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Assignment;

    fn shown(family: &PatternFamily) -> Vec<String> {
        family.expressions().iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn sum_product_shapes() {
        assert_eq!(shown(&build_sum_product(1, 1).unwrap()), ["a + b", "a*b"]);
        let f12 = build_sum_product(1, 2).unwrap();
        let expanded: Vec<String> =
            f12.expanded().exprs.iter().map(|e| e.to_string()).collect();
        assert_eq!(expanded, ["a + b1", "a + b2", "a*b1", "a*b2"]);
        let f21 = build_sum_product(2, 1).unwrap();
        let expanded: Vec<String> =
            f21.expanded().exprs.iter().map(|e| e.to_string()).collect();
        assert_eq!(expanded, ["a1 + b", "a2 + b", "a1*b", "a2*b"]);
        assert!(build_sum_product(0, 1).is_err());
    }

    #[test]
    fn iterated_shapes() {
        assert_eq!(shown(&build_iterated(2, 1).unwrap()), ["a + b", "a*b"]);
        assert_eq!(
            shown(&build_iterated(3, 1).unwrap()),
            ["a + b + c", "a + b*c", "a*(b + c)", "a*b*c"]
        );
        assert_eq!(build_iterated(4, 1).unwrap().expressions().len(), 8);
        assert!(build_iterated(1, 1).is_err());
    }

    #[test]
    fn iterated_counts() {
        for n in 2..=6 {
            let family = build_iterated(n, 1).unwrap();
            assert_eq!(family.expressions().len(), 1 << (n - 1));
        }
    }

    #[test]
    fn iterated_instantiates_to_theorem_values() {
        let family = build_iterated(3, 1).unwrap();
        let asg = Assignment::from_pairs([("a", 2), ("b", 3), ("c", 4)]).unwrap();
        let values: Vec<u64> = family.instantiate(&asg).unwrap().into_iter().collect();
        // a+bc = a(b+c) = 14 collapses the four expressions to three values.
        assert_eq!(values, [9, 14, 24]);
    }

    #[test]
    fn vdw_mixed_shapes() {
        assert_eq!(
            shown(&build_vdw_mixed(1, false).unwrap()),
            ["x", "x + y", "x*y", "x*z", "x*y*z"]
        );
        let k2 = shown(&build_vdw_mixed(2, false).unwrap());
        assert!(k2.contains(&"x + 2*y".to_string()));
        assert!(k2.contains(&"x*z*y^2".to_string()));
        let asg = Assignment::from_pairs([("x", 2), ("y", 3), ("z", 5)]).unwrap();
        let values: Vec<u64> =
            build_vdw_mixed(1, false).unwrap().instantiate(&asg).unwrap().into_iter().collect();
        assert_eq!(values, [2, 5, 6, 10, 30]);
        assert_eq!(shown(&build_vdw_mixed(1, true).unwrap()), ["x + y", "x*y", "x*y*z"]);
    }

    #[test]
    fn double_vdw_shapes() {
        assert_eq!(shown(&build_double_vdw(1, false).unwrap()), ["x", "x + y", "x*y"]);
        assert_eq!(
            shown(&build_double_vdw(2, false).unwrap()),
            ["x", "x + y", "x + 2*y", "x*y", "x*y^2"]
        );
        let asg = Assignment::from_pairs([("x", 4), ("y", 2)]).unwrap();
        let values: Vec<u64> =
            build_double_vdw(2, false).unwrap().instantiate(&asg).unwrap().into_iter().collect();
        // 4*2 = 8 collides with 4+2*2.
        assert_eq!(values, [4, 6, 8, 16]);
    }

    #[test]
    fn fs_fp_counts() {
        let f2 = build_fs_fp(2).unwrap();
        assert_eq!(f2.expressions().len(), 6);
        let asg = Assignment::from_pairs([("a", 2), ("b", 3)]).unwrap();
        let values: Vec<u64> = f2.instantiate(&asg).unwrap().into_iter().collect();
        assert_eq!(values, [2, 3, 5, 6]);
        // 7 subset sums plus 7 subset products.
        assert_eq!(build_fs_fp(3).unwrap().expressions().len(), 14);
        assert!(build_fs_fp(1).is_err());
    }

    #[test]
    fn mixed_fsfp_is_a_deduplicated_union() {
        let f = build_mixed_fsfp(3).unwrap();
        let shown = shown(&f);
        // FS and FP of {a,b,c} plus the genuinely new a+bc and a(b+c).
        for expected in ["a", "a + b + c", "a*b*c", "a + b*c", "a*(b + c)"] {
            assert!(shown.contains(&expected.to_string()), "missing {expected}");
        }
        assert_eq!(shown.len(), 13);
    }

    #[test]
    fn bracketing_counts() {
        assert_eq!(shown(&build_bracketings(2, false).unwrap()), ["a + b", "a*b"]);
        // Catalan(2) * 4 — the list keeps canonically equal duplicates.
        assert_eq!(build_bracketings(3, false).unwrap().expressions().len(), 8);
        assert_eq!(build_bracketings(4, false).unwrap().expressions().len(), 40);
        assert_eq!(build_bracketings(4, true).unwrap().expressions().len(), 8);
        assert!(build_bracketings(3, true).is_err());
    }

    #[test]
    fn balanced_bracketing_shape() {
        let f = build_bracketings(4, true).unwrap();
        let shown = shown(&f);
        assert!(shown.contains(&"(a + b)*(c + d)".to_string()));
        assert!(shown.contains(&"a + b + c + d".to_string()));
    }
}
