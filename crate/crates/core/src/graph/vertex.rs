use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

/// Vertex label: a fixed-arity tuple of integers.
///
/// Explicit graphs use arity 1 with nonnegative labels; lattices and product
/// graphs concatenate the coordinates of their factors. The textual form is
/// the coordinates joined by `:` (for example `3` or `0:-2:1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(SmallVec<[i64; 4]>);

impl VertexId {
    pub fn new(coords: &[i64]) -> Self {
        VertexId(SmallVec::from_slice(coords))
    }

    pub fn scalar(v: i64) -> Self {
        VertexId(SmallVec::from_slice(&[v]))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// First coordinate; the label itself for arity-1 vertices.
    pub fn head(&self) -> i64 {
        self.0[0]
    }

    pub fn concat(parts: &[&VertexId]) -> Self {
        let mut out = SmallVec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        VertexId(out)
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        VertexId(SmallVec::from_slice(&self.0[start..start + len]))
    }

    pub fn with_coord(&self, i: usize, value: i64) -> Self {
        let mut c = self.0.clone();
        c[i] = value;
        VertexId(c)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({self})")
    }
}

impl From<i64> for VertexId {
    fn from(v: i64) -> Self {
        VertexId::scalar(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid vertex label `{0}`")]
pub struct ParseVertexError(pub String);

impl FromStr for VertexId {
    type Err = ParseVertexError;

    /// Accepts `3`, `1:2:3`, `1,2,3` and `(1,2,3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Err(ParseVertexError(s.to_string()));
        }
        let coords: Result<SmallVec<[i64; 4]>, _> = t
            .split([':', ','])
            .map(|p| p.trim().parse::<i64>())
            .collect();
        coords
            .map(VertexId)
            .map_err(|_| ParseVertexError(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let v: VertexId = "(1, -2,3)".parse().unwrap();
        assert_eq!(v.coords(), &[1, -2, 3]);
        assert_eq!(v.to_string(), "1:-2:3");
        assert_eq!("7".parse::<VertexId>().unwrap(), VertexId::scalar(7));
        assert!("a".parse::<VertexId>().is_err());
        assert!("".parse::<VertexId>().is_err());
    }

    #[test]
    fn concat_and_slice() {
        let a = VertexId::new(&[1, 2]);
        let b = VertexId::scalar(5);
        let c = VertexId::concat(&[&a, &b]);
        assert_eq!(c.coords(), &[1, 2, 5]);
        assert_eq!(c.slice(1, 2).coords(), &[2, 5]);
    }
}
