//! Recursive-descent parser for the family DSL.
//!
//! ```text
//! family   = segment { ";" segment } ;
//! segment  = annotation | expr ;
//! expr     = term { "+" term } ;
//! term     = factor { "*" factor } ;
//! factor   = INT | VAR [ "^" INT ] | "(" expr ")" [ "^" INT ] ;
//! VAR      = lowercase letter, then letters/digits/underscore ;
//! INT      = positive decimal ;
//! ```
//!
//! Annotations declare variable roles and multiplicities and start with
//! `@`, which cannot begin an expression: `@anchor a 2` (anchor with two
//! copies), `@gen b 3`, `@distinct`. Unannotated variables are inferred
//! as generators with multiplicity 1, ordered by first occurrence.
//! Whitespace is insignificant. Printing a family yields text that
//! reparses to an equal family.

use std::collections::BTreeMap;

use super::{PatternError, PatternExpr, PatternFamily, VarDecl, VarRole};

pub fn parse_family(text: &str) -> Result<PatternFamily, PatternError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut exprs = Vec::new();
    let mut annotations: BTreeMap<String, (VarRole, u32)> = BTreeMap::new();
    let mut distinct = false;

    loop {
        p.skip_ws();
        if p.peek() == Some(b'@') {
            p.parse_annotation(&mut annotations, &mut distinct)?;
        } else {
            exprs.push(p.parse_expr()?.canonicalize());
        }
        p.skip_ws();
        match p.peek() {
            Some(b';') => {
                p.pos += 1;
            }
            None => break,
            Some(c) => {
                return Err(p.error(format!("expected `;` or end of input, found `{}`", c as char)))
            }
        }
    }

    let mut order = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for e in &exprs {
        // First-occurrence order, left to right within each expression.
        collect_in_order(e, &mut order, &mut seen);
    }
    for name in annotations.keys() {
        if !seen.contains(name) {
            return Err(PatternError::UnusedVariable(name.clone()));
        }
    }
    let vars = order
        .into_iter()
        .map(|name| match annotations.get(&name) {
            Some(&(role, multiplicity)) => VarDecl { name, role, multiplicity },
            None => VarDecl::generator(name),
        })
        .collect();
    PatternFamily::new(exprs, vars, distinct)
}

fn collect_in_order(
    e: &PatternExpr,
    order: &mut Vec<String>,
    seen: &mut std::collections::BTreeSet<String>,
) {
    match e {
        PatternExpr::Const(_) => {}
        PatternExpr::Var(name) => {
            if seen.insert(name.clone()) {
                order.push(name.clone());
            }
        }
        PatternExpr::Sum(ops) | PatternExpr::Product(ops) => {
            for op in ops {
                collect_in_order(op, order, seen);
            }
        }
        PatternExpr::Power(base, _) => collect_in_order(base, order, seen),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: String) -> PatternError {
        PatternError::Syntax { offset: self.pos, message }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_annotation(
        &mut self,
        annotations: &mut BTreeMap<String, (VarRole, u32)>,
        distinct: &mut bool,
    ) -> Result<(), PatternError> {
        self.pos += 1; // '@'
        let keyword = self.parse_ident().map_err(|_| self.error("expected annotation keyword".into()))?;
        match keyword.as_str() {
            "distinct" => {
                if *distinct {
                    return Err(PatternError::DuplicateAnnotation("@distinct".into()));
                }
                *distinct = true;
                Ok(())
            }
            "anchor" | "gen" => {
                let role = if keyword == "anchor" { VarRole::Anchor } else { VarRole::Generator };
                self.skip_ws();
                let name = self.parse_ident()?;
                self.skip_ws();
                let multiplicity = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    let m = self.parse_int()?;
                    u32::try_from(m).map_err(|_| self.error("multiplicity too large".into()))?
                } else {
                    1
                };
                if annotations.insert(name.clone(), (role, multiplicity)).is_some() {
                    return Err(PatternError::DuplicateAnnotation(name));
                }
                Ok(())
            }
            other => Err(self.error(format!("unknown annotation `@{other}`"))),
        }
    }

    fn parse_expr(&mut self) -> Result<PatternExpr, PatternError> {
        let mut terms = vec![self.parse_term()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b'+') {
                self.pos += 1;
                terms.push(self.parse_term()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { PatternExpr::Sum(terms) })
    }

    fn parse_term(&mut self) -> Result<PatternExpr, PatternError> {
        let mut factors = vec![self.parse_factor()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                factors.push(self.parse_factor()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { PatternExpr::Product(factors) })
    }

    fn parse_factor(&mut self) -> Result<PatternExpr, PatternError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(PatternExpr::Const(self.parse_int()?)),
            Some(c) if c.is_ascii_lowercase() => {
                let name = self.parse_ident()?;
                let base = PatternExpr::Var(name);
                self.parse_optional_power(base)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`".into()));
                }
                self.pos += 1;
                self.parse_optional_power(inner)
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn parse_optional_power(&mut self, base: PatternExpr) -> Result<PatternExpr, PatternError> {
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp = self.parse_int()?;
            let exp = u32::try_from(exp).map_err(|_| self.error("exponent too large".into()))?;
            Ok(PatternExpr::Power(Box::new(base), exp))
        } else {
            Ok(base)
        }
    }

    fn parse_int(&mut self) -> Result<u64, PatternError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or_else(|| PatternError::Syntax {
                    offset: start,
                    message: "integer literal too large".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer".into()));
        }
        if value == 0 {
            return Err(PatternError::Syntax {
                offset: start,
                message: "integers must be positive".into(),
            });
        }
        Ok(value)
    }

    fn parse_ident(&mut self) -> Result<String, PatternError> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return Err(self.error("expected variable name".into())),
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_expression_family() {
        let family = parse_family("a+b ; a*b").unwrap();
        assert_eq!(family.expressions().len(), 2);
        let names: Vec<&str> = family.variables().iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["a", "b"]);
    }

    #[test]
    fn parses_coefficients_and_powers() {
        let family = parse_family("x + 2*y ; x*y^2").unwrap();
        let shown: Vec<String> =
            family.expressions().iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["x + 2*y", "x*y^2"]);
    }

    #[test]
    fn syntax_error_carries_byte_offset() {
        let err = parse_family("a++b").unwrap_err();
        assert_eq!(err, PatternError::Syntax { offset: 2, message: "unexpected `+`".into() });
    }

    #[test]
    fn duplicate_annotation_rejected() {
        let err = parse_family("@anchor a ; @gen a ; a+b").unwrap_err();
        assert_eq!(err, PatternError::DuplicateAnnotation("a".into()));
    }

    #[test]
    fn annotation_for_missing_variable_rejected() {
        let err = parse_family("@anchor q ; a+b").unwrap_err();
        assert_eq!(err, PatternError::UnusedVariable("q".into()));
    }

    #[test]
    fn annotations_round_trip() {
        let family = parse_family("@anchor a 2 ; @distinct ; a+b ; a*b").unwrap();
        let printed = family.to_string();
        let reparsed = parse_family(&printed).unwrap();
        assert_eq!(reparsed, family);
    }

    #[test]
    fn print_parse_round_trip() {
        for text in ["x ; y ; x+y", "x + 2*y ; x*y^2", "a*(b+c) ; (a+b)*(c+d)"] {
            let family = parse_family(text).unwrap();
            let reparsed = parse_family(&family.to_string()).unwrap();
            assert_eq!(reparsed, family);
        }
    }
}
