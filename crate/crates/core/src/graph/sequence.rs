use std::fmt;
use std::sync::Arc;

use super::GraphError;
use crate::expr::Expr;
use crate::numeric::DoubleF64;

/// A real sequence indexed by radius, used for radial weights and measures.
#[derive(Clone)]
pub enum Sequence {
    Const(f64),
    Formula(Arc<Expr>),
    /// Precomputed values for `r = 0..len`; stored in split form so that
    /// consecutive differences can be recovered without cancellation.
    Table(Arc<[DoubleF64]>),
}

impl Sequence {
    pub fn formula(e: Expr) -> Self {
        Sequence::Formula(Arc::new(e))
    }

    pub fn parse(src: &str) -> Result<Self, crate::expr::ParseError> {
        Ok(Sequence::formula(crate::expr::parse(src)?))
    }

    pub fn table(values: Vec<DoubleF64>) -> Self {
        Sequence::Table(values.into())
    }

    pub fn from_values(values: &[f64]) -> Self {
        Sequence::table(values.iter().map(|&v| DoubleF64::new(v)).collect())
    }

    pub fn at(&self, r: i64, what: &str) -> Result<f64, GraphError> {
        self.at_split(r, what).map(DoubleF64::value)
    }

    pub fn at_split(&self, r: i64, what: &str) -> Result<DoubleF64, GraphError> {
        match self {
            Sequence::Const(v) => Ok(DoubleF64::new(*v)),
            Sequence::Formula(e) => e.eval(r).map(DoubleF64::new).map_err(|source| GraphError::Expr {
                what: format!("{what} at r={r}"),
                source,
            }),
            Sequence::Table(t) => usize::try_from(r)
                .ok()
                .and_then(|i| t.get(i).copied())
                .ok_or_else(|| GraphError::OutOfRange {
                    what: what.to_string(),
                    max: t.len() as i64 - 1,
                }),
        }
    }

    /// Value at `r`, rejecting nonpositive or non-finite results.
    pub fn positive_at(&self, r: i64, what: &str) -> Result<f64, GraphError> {
        let v = self.at(r, what)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(GraphError::NonPositive {
                what: format!("{what} at r={r}"),
                value: v,
            })
        }
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Const(v) => write!(f, "{v}"),
            Sequence::Formula(e) => write!(f, "{e}"),
            Sequence::Table(t) => write!(f, "table[{}]", t.len()),
        }
    }
}

impl From<f64> for Sequence {
    fn from(v: f64) -> Self {
        Sequence::Const(v)
    }
}

impl From<Expr> for Sequence {
    fn from(e: Expr) -> Self {
        Sequence::formula(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let s = Sequence::parse("r+1").unwrap();
        assert_eq!(s.at(4, "b").unwrap(), 5.0);
        let t = Sequence::from_values(&[1.0, 2.0]);
        assert_eq!(t.at(1, "m").unwrap(), 2.0);
        assert!(matches!(t.at(2, "m"), Err(GraphError::OutOfRange { max: 1, .. })));
        assert!(Sequence::parse("r-1").unwrap().positive_at(1, "b").is_err());
    }
}
