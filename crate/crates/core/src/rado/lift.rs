//! The additive-to-multiplicative lift along `n -> 2^n`: a linear
//! expression `c1*x1 + ... + ck*xk` becomes `x1^c1 * ... * xk^ck`, so a
//! coloring of the powers of two transports monochromatic additive
//! patterns to monochromatic multiplicative ones.

use crate::pattern::{PatternError, PatternExpr, PatternFamily};

use super::RadoError;

/// Lifts a linear family. Every expression must be a nonnegative integer
/// combination of variables — a variable, a constant times a variable, or
/// a sum of such terms; anything else (stand-alone constants included) is
/// rejected as nonlinear.
pub fn geometric_lift(family: &PatternFamily) -> Result<PatternFamily, RadoError> {
    let mut lifted = Vec::with_capacity(family.expressions().len());
    for expr in family.expressions() {
        lifted.push(lift_expr(expr)?);
    }
    PatternFamily::new(lifted, family.variables().to_vec(), family.distinct())
        .map_err(|e: PatternError| RadoError::Search(e.to_string()))
}

fn lift_expr(expr: &PatternExpr) -> Result<PatternExpr, RadoError> {
    let terms = linear_terms(expr)?;
    let factors: Vec<PatternExpr> = terms
        .into_iter()
        .map(|(coefficient, name)| {
            let exp = u32::try_from(coefficient)
                .map_err(|_| RadoError::CoefficientTooLarge(coefficient))?;
            Ok(if exp == 1 {
                PatternExpr::var(name)
            } else {
                PatternExpr::power(PatternExpr::var(name), exp)
            })
        })
        .collect::<Result<_, RadoError>>()?;
    Ok(PatternExpr::product(factors))
}

/// Decomposes a canonical linear expression into `(coefficient, variable)`
/// terms. Repeated variables stay as separate terms; the lift multiplies
/// their images, which matches pointwise exponent addition.
fn linear_terms(expr: &PatternExpr) -> Result<Vec<(u64, String)>, RadoError> {
    match expr {
        PatternExpr::Var(name) => Ok(vec![(1, name.clone())]),
        PatternExpr::Product(_) => Ok(vec![product_term(expr)?]),
        PatternExpr::Sum(ops) => ops
            .iter()
            .map(|op| match op {
                PatternExpr::Var(name) => Ok((1, name.clone())),
                PatternExpr::Product(_) => product_term(op),
                other => Err(RadoError::NotLinear(other.to_string())),
            })
            .collect(),
        other => Err(RadoError::NotLinear(other.to_string())),
    }
}

fn product_term(expr: &PatternExpr) -> Result<(u64, String), RadoError> {
    if let PatternExpr::Product(factors) = expr {
        if let [PatternExpr::Const(c), PatternExpr::Var(name)] = factors.as_slice() {
            return Ok((*c, name.clone()));
        }
    }
    Err(RadoError::NotLinear(expr.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{parse_family, schur_family};

    fn shown(family: &PatternFamily) -> Vec<String> {
        family.expressions().iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn lifts_schur_to_products() {
        let lifted = geometric_lift(&schur_family()).unwrap();
        assert_eq!(shown(&lifted), ["x", "y", "x*y"]);
    }

    #[test]
    fn lifts_progressions_to_geometric() {
        let family = parse_family("x ; x+d ; x+2*d").unwrap();
        let lifted = geometric_lift(&family).unwrap();
        assert_eq!(shown(&lifted), ["x", "d*x", "x*d^2"]);
    }

    #[test]
    fn lifts_coefficients_to_exponents() {
        let family = parse_family("x + 2*y").unwrap();
        let lifted = geometric_lift(&family).unwrap();
        assert_eq!(shown(&lifted), ["x*y^2"]);
    }

    #[test]
    fn rejects_nonlinear_input() {
        for text in ["x*y", "x^2", "x + 1", "x*(y+z)", "5"] {
            let family = parse_family(text);
            let family = match family {
                Ok(f) => f,
                Err(_) => continue, // "5" alone has no variables and fails family validation
            };
            assert!(geometric_lift(&family).is_err(), "{text} should be nonlinear");
        }
    }
}
