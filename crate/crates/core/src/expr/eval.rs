use super::{BinOp, Expr, Func};

/// Domain error raised while evaluating; `node` is the canonical print of
/// the offending subexpression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("domain error in `{node}`: {reason}")]
pub struct EvalError {
    pub node: String,
    pub reason: String,
}

fn domain(e: &Expr, reason: impl Into<String>) -> EvalError {
    EvalError {
        node: e.to_string(),
        reason: reason.into(),
    }
}

/// n! for integer n >= 0 as a plain product.
pub(crate) fn factorial(n: f64) -> Option<f64> {
    if n < 0.0 || n.fract() != 0.0 || !n.is_finite() {
        return None;
    }
    let mut acc = 1.0_f64;
    let mut k = 2.0;
    while k <= n {
        acc *= k;
        if acc.is_infinite() {
            break;
        }
        k += 1.0;
    }
    Some(acc)
}

pub(super) fn eval(e: &Expr, r: f64) -> Result<f64, EvalError> {
    match e {
        Expr::Num(v) => Ok(*v),
        Expr::Var => Ok(r),
        Expr::Neg(a) => Ok(-eval(a, r)?),
        Expr::Bin(op, a, b) => {
            let x = eval(a, r)?;
            let y = eval(b, r)?;
            match op {
                BinOp::Add => Ok(x + y),
                BinOp::Sub => Ok(x - y),
                BinOp::Mul => Ok(x * y),
                BinOp::Div => {
                    if y == 0.0 {
                        Err(domain(e, "division by zero"))
                    } else {
                        Ok(x / y)
                    }
                }
                BinOp::Pow => power(e, x, y),
            }
        }
        Expr::Call(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval(a, r))
                .collect::<Result<Vec<_>, _>>()?;
            match f {
                Func::Exp => Ok(vals[0].exp()),
                Func::Log => {
                    if vals[0] <= 0.0 {
                        Err(domain(e, format!("log of nonpositive value {}", vals[0])))
                    } else {
                        Ok(vals[0].ln())
                    }
                }
                Func::Sqrt => {
                    if vals[0] < 0.0 {
                        Err(domain(e, format!("sqrt of negative value {}", vals[0])))
                    } else {
                        Ok(vals[0].sqrt())
                    }
                }
                Func::Abs => Ok(vals[0].abs()),
                Func::Min => Ok(vals[0].min(vals[1])),
                Func::Max => Ok(vals[0].max(vals[1])),
                Func::Pow => power(e, vals[0], vals[1]),
                Func::Fact => factorial(vals[0]).ok_or_else(|| {
                    domain(e, format!("factorial of {} (needs an integer >= 0)", vals[0]))
                }),
            }
        }
    }
}

fn power(e: &Expr, x: f64, y: f64) -> Result<f64, EvalError> {
    if x == 0.0 && y < 0.0 {
        return Err(domain(e, "zero raised to a negative power"));
    }
    let v = x.powf(y);
    if v.is_nan() {
        return Err(domain(e, format!("{x}^{y} is not real")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    fn at(src: &str, r: i64) -> f64 {
        parse(src).unwrap().eval(r).unwrap()
    }

    #[test]
    fn golden_values() {
        assert_eq!(at("2^-r", 3), 0.125);
        assert_eq!(at("1/(r*r)", 2), 0.25);
        assert_eq!(at("max(1, r-1)", 0), 1.0);
        assert_eq!(at("fact(5)", 0), 120.0);
        assert_eq!(at("1/fact(r)^2", 3), 1.0 / 36.0);
        assert_eq!(at("-2^2", 0), -4.0);
    }

    #[test]
    fn domain_errors_name_the_node() {
        let err = parse("1 + log(r - 2)").unwrap().eval(1).unwrap_err();
        assert_eq!(err.node, "log((r - 2))");
        assert!(parse("1/(r-1)").unwrap().eval(1).is_err());
        assert!(parse("fact(r-3)").unwrap().eval(1).is_err());
        assert!(parse("fact(0.5)").unwrap().eval(1).is_err());
        assert!(parse("sqrt(-r)").unwrap().eval(1).is_err());
        assert!(parse("(-2)^0.5").unwrap().eval(1).is_err());
        assert!(parse("0^-1").unwrap().eval(1).is_err());
    }
}
