//! Built-in infinite and periodic graph families.

use super::{Graph, GraphError, Sequence, VertexId};

fn scalar_of(g: &dyn Graph, x: &VertexId) -> Result<i64, GraphError> {
    if g.contains(x) {
        Ok(x.head())
    } else {
        Err(GraphError::UnknownVertex(x.clone()))
    }
}

/// Birth-death chain on `{0, 1, 2, ...}` with `b(r, r+1)` and `m(r)` given by
/// sequences.
#[derive(Debug, Clone)]
pub struct BirthDeath {
    pub b: Sequence,
    pub m: Sequence,
}

impl BirthDeath {
    pub fn new(b: impl Into<Sequence>, m: impl Into<Sequence>) -> Self {
        BirthDeath { b: b.into(), m: m.into() }
    }

    /// Standard half-line: unit weights and measure.
    pub fn standard() -> Self {
        BirthDeath::new(1.0, 1.0)
    }

    pub fn edge_weight(&self, r: i64) -> Result<f64, GraphError> {
        self.b.positive_at(r, "b(r,r+1)")
    }

    pub fn vertex_measure(&self, r: i64) -> Result<f64, GraphError> {
        self.m.positive_at(r, "m(r)")
    }
}

impl Graph for BirthDeath {
    fn root(&self) -> VertexId {
        VertexId::scalar(0)
    }

    fn arity(&self) -> usize {
        1
    }

    fn contains(&self, x: &VertexId) -> bool {
        x.arity() == 1 && x.head() >= 0
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        self.vertex_measure(scalar_of(self, x)?)
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let r = scalar_of(self, x)?;
        let mut out = Vec::with_capacity(2);
        if r > 0 {
            out.push((VertexId::scalar(r - 1), self.edge_weight(r - 1)?));
        }
        out.push((VertexId::scalar(r + 1), self.edge_weight(r)?));
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("birth-death chain b(r,r+1) = {}, m(r) = {}", self.b, self.m)
    }
}

/// Two-sided line on the integers, symmetric about 0: `m(x) = m(|x|)` and
/// `b(x, x+1) = b(min(|x|, |x+1|))`.
#[derive(Debug, Clone)]
pub struct Line {
    pub b: Sequence,
    pub m: Sequence,
}

impl Line {
    pub fn new(b: impl Into<Sequence>, m: impl Into<Sequence>) -> Self {
        Line { b: b.into(), m: m.into() }
    }

    pub fn standard() -> Self {
        Line::new(1.0, 1.0)
    }

    fn edge_weight(&self, x: i64) -> Result<f64, GraphError> {
        let r = x.abs().min((x + 1).abs());
        self.b.positive_at(r, "b(r,r+1)")
    }
}

impl Graph for Line {
    fn root(&self) -> VertexId {
        VertexId::scalar(0)
    }

    fn arity(&self) -> usize {
        1
    }

    fn contains(&self, x: &VertexId) -> bool {
        x.arity() == 1
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        self.m.positive_at(scalar_of(self, x)?.abs(), "m(r)")
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let n = scalar_of(self, x)?;
        Ok(vec![
            (VertexId::scalar(n - 1), self.edge_weight(n - 1)?),
            (VertexId::scalar(n + 1), self.edge_weight(n)?),
        ])
    }

    fn describe(&self) -> String {
        format!("line b = {}, m = {}", self.b, self.m)
    }
}

/// Weights repeating with a fixed period: `b(j, j+1) = b[j mod p]`,
/// `m(j) = m[j mod q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodic {
    pub b: Vec<f64>,
    pub m: Vec<f64>,
}

impl Periodic {
    fn standard() -> Self {
        Periodic { b: vec![1.0], m: vec![1.0] }
    }

    fn b(&self, j: i64) -> f64 {
        self.b[j.rem_euclid(self.b.len() as i64) as usize]
    }

    fn m(&self, j: i64) -> f64 {
        self.m[j.rem_euclid(self.m.len() as i64) as usize]
    }

    fn check(&self) -> Result<(), GraphError> {
        if self.b.is_empty() || self.m.is_empty() {
            return Err(GraphError::Invalid("empty weight pattern".into()));
        }
        Ok(())
    }

    fn is_standard(&self) -> bool {
        self.b.iter().chain(&self.m).all(|&v| v == 1.0)
    }
}

/// Cycle `C_n` on `{0, ..., n-1}`.
#[derive(Debug, Clone)]
pub struct Cycle {
    n: usize,
    weights: Periodic,
}

impl Cycle {
    pub fn standard(n: usize) -> Result<Self, GraphError> {
        Cycle::weighted(n, vec![1.0], vec![1.0])
    }

    /// Cycle whose edge weights and measures repeat with the given patterns;
    /// both pattern lengths must divide `n`.
    pub fn weighted(n: usize, b: Vec<f64>, m: Vec<f64>) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::Invalid(format!("cycle length {n} < 3")));
        }
        let weights = Periodic { b, m };
        weights.check()?;
        if !n.is_multiple_of(weights.b.len()) || !n.is_multiple_of(weights.m.len()) {
            return Err(GraphError::Invalid(format!(
                "weight pattern periods {} and {} must divide {n}",
                weights.b.len(),
                weights.m.len()
            )));
        }
        Ok(Cycle { n, weights })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &Periodic {
        &self.weights
    }
}

impl Graph for Cycle {
    fn root(&self) -> VertexId {
        VertexId::scalar(0)
    }

    fn arity(&self) -> usize {
        1
    }

    fn contains(&self, x: &VertexId) -> bool {
        x.arity() == 1 && (0..self.n as i64).contains(&x.head())
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        Ok(self.weights.m(scalar_of(self, x)?))
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let j = scalar_of(self, x)?;
        let n = self.n as i64;
        Ok(vec![
            (VertexId::scalar((j - 1).rem_euclid(n)), self.weights.b(j - 1)),
            (VertexId::scalar((j + 1) % n), self.weights.b(j)),
        ])
    }

    fn finite_vertices(&self) -> Option<Vec<VertexId>> {
        Some((0..self.n as i64).map(VertexId::scalar).collect())
    }

    fn describe(&self) -> String {
        if self.weights.is_standard() {
            format!("C_{}", self.n)
        } else {
            format!("weighted C_{} b = {:?}, m = {:?}", self.n, self.weights.b, self.weights.m)
        }
    }
}

/// The integers with periodic weights; the universal cover of a weighted
/// cycle with the same pattern.
#[derive(Debug, Clone)]
pub struct PeriodicLine {
    weights: Periodic,
}

impl PeriodicLine {
    pub fn standard() -> Self {
        PeriodicLine { weights: Periodic::standard() }
    }

    pub fn weighted(b: Vec<f64>, m: Vec<f64>) -> Result<Self, GraphError> {
        let weights = Periodic { b, m };
        weights.check()?;
        Ok(PeriodicLine { weights })
    }
}

impl Graph for PeriodicLine {
    fn root(&self) -> VertexId {
        VertexId::scalar(0)
    }

    fn arity(&self) -> usize {
        1
    }

    fn contains(&self, x: &VertexId) -> bool {
        x.arity() == 1
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        Ok(self.weights.m(scalar_of(self, x)?))
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let j = scalar_of(self, x)?;
        Ok(vec![
            (VertexId::scalar(j - 1), self.weights.b(j - 1)),
            (VertexId::scalar(j + 1), self.weights.b(j)),
        ])
    }

    fn describe(&self) -> String {
        if self.weights.is_standard() {
            "Z".into()
        } else {
            format!("periodic Z b = {:?}, m = {:?}", self.weights.b, self.weights.m)
        }
    }
}

/// Standard lattice `Z^d` with unit weights and measure.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    dims: usize,
}

impl Lattice {
    pub fn new(dims: usize) -> Result<Self, GraphError> {
        if dims == 0 {
            return Err(GraphError::Invalid("lattice dimension must be >= 1".into()));
        }
        Ok(Lattice { dims })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }
}

impl Graph for Lattice {
    fn root(&self) -> VertexId {
        VertexId::new(&vec![0; self.dims])
    }

    fn arity(&self) -> usize {
        self.dims
    }

    fn contains(&self, x: &VertexId) -> bool {
        x.arity() == self.dims
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        super::check_vertex(self, x)?;
        Ok(1.0)
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        super::check_vertex(self, x)?;
        let mut out = Vec::with_capacity(2 * self.dims);
        for i in 0..self.dims {
            let c = x.coords()[i];
            out.push((x.with_coord(i, c - 1), 1.0));
            out.push((x.with_coord(i, c + 1), 1.0));
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("Z^{}", self.dims)
    }
}

/// Standard `d`-regular tree. Vertices are numbered breadth-first: the root
/// is 0 with children `1..=d`, and vertex `v >= 1` has the `d - 1` children
/// `d + (v-1)(d-1) + 1 ..= d + v(d-1)`.
#[derive(Debug, Clone, Copy)]
pub struct RegularTree {
    degree: i64,
}

impl RegularTree {
    pub fn new(degree: usize) -> Result<Self, GraphError> {
        if degree < 2 {
            return Err(GraphError::Invalid("tree degree must be >= 2".into()));
        }
        Ok(RegularTree { degree: degree as i64 })
    }

    fn parent(&self, v: i64) -> i64 {
        let d = self.degree;
        if v <= d {
            0
        } else {
            (v - d - 1) / (d - 1) + 1
        }
    }
}

impl Graph for RegularTree {
    fn root(&self) -> VertexId {
        VertexId::scalar(0)
    }

    fn arity(&self) -> usize {
        1
    }

    fn contains(&self, x: &VertexId) -> bool {
        x.arity() == 1 && x.head() >= 0
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        super::check_vertex(self, x)?;
        Ok(1.0)
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let v = scalar_of(self, x)?;
        let d = self.degree;
        let mut out = Vec::with_capacity(d as usize);
        if v == 0 {
            out.extend((1..=d).map(|c| (VertexId::scalar(c), 1.0)));
        } else {
            out.push((VertexId::scalar(self.parent(v)), 1.0));
            let first = d + (v - 1) * (d - 1) + 1;
            out.extend((first..first + d - 1).map(|c| (VertexId::scalar(c), 1.0)));
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("{}-regular tree", self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nbrs(g: &dyn Graph, x: i64) -> Vec<(i64, f64)> {
        g.neighbors(&VertexId::scalar(x))
            .unwrap()
            .into_iter()
            .map(|(v, w)| (v.head(), w))
            .collect()
    }

    #[test]
    fn birth_death_neighbors() {
        let g = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
        assert_eq!(nbrs(&g, 0), vec![(1, 1.0)]);
        assert_eq!(nbrs(&g, 3), vec![(2, 3.0), (4, 4.0)]);
        assert!(g.neighbors(&VertexId::scalar(-1)).is_err());
    }

    #[test]
    fn line_is_symmetric_about_zero() {
        let g = Line::new(Sequence::parse("r+1").unwrap(), Sequence::parse("2^-r").unwrap());
        assert_eq!(nbrs(&g, 0), vec![(-1, 1.0), (1, 1.0)]);
        assert_eq!(nbrs(&g, -2), vec![(-3, 3.0), (-1, 2.0)]);
        assert_eq!(nbrs(&g, 2), vec![(1, 2.0), (3, 3.0)]);
        assert_eq!(g.measure(&VertexId::scalar(-3)).unwrap(), 0.125);
    }

    #[test]
    fn cycle_wraps() {
        let g = Cycle::standard(9).unwrap();
        assert_eq!(nbrs(&g, 0), vec![(8, 1.0), (1, 1.0)]);
        assert!(Cycle::standard(2).is_err());
        assert!(Cycle::weighted(9, vec![1.0, 2.0], vec![1.0]).is_err());
        let w = Cycle::weighted(6, vec![1.0, 2.0, 3.0], vec![1.0, 5.0]).unwrap();
        assert_eq!(nbrs(&w, 0), vec![(5, 3.0), (1, 1.0)]);
        assert_eq!(w.measure(&VertexId::scalar(3)).unwrap(), 5.0);
    }

    #[test]
    fn tree_parent_child_consistency() {
        let t = RegularTree::new(3).unwrap();
        for v in 0..200 {
            let ns = nbrs(&t, v);
            assert_eq!(ns.len(), 3);
            for (u, _) in ns {
                assert!(nbrs(&t, u).iter().any(|&(w, _)| w == v), "{v} <-> {u}");
            }
        }
    }

    #[test]
    fn lattice_degree() {
        let g = Lattice::new(3).unwrap();
        assert_eq!(g.neighbors(&g.root()).unwrap().len(), 6);
    }
}
