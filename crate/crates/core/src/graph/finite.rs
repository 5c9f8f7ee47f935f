use std::collections::{BTreeMap, HashMap};

use super::{Graph, GraphError, VertexId};

/// Explicit finite graph.
///
/// Edge weights are stored as directed arcs so that asymmetric input can be
/// represented and reported by validation; well-formed graphs have
/// `b(x, y) = b(y, x)` for every arc.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    measure: Vec<f64>,
    adj: Vec<Vec<(usize, f64)>>,
    name: String,
}

impl FiniteGraph {
    pub fn builder() -> FiniteGraphBuilder {
        FiniteGraphBuilder::default()
    }

    /// Graph on labels `0..measure.len()` with symmetric edges `(x, y, b)`.
    pub fn from_edges(measure: &[f64], edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut b = FiniteGraph::builder();
        for (i, &m) in measure.iter().enumerate() {
            b = b.vertex(VertexId::scalar(i as i64), m);
        }
        for &(x, y, w) in edges {
            b = b.edge(VertexId::scalar(x as i64), VertexId::scalar(y as i64), w);
        }
        b.build()
    }

    /// Standard path on `n` vertices, `b = m = 1`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        FiniteGraph::from_edges(&vec![1.0; n], &edges).expect("valid path")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn index_of(&self, x: &VertexId) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn measure_at(&self, i: usize) -> f64 {
        self.measure[i]
    }

    /// Outgoing arcs `(j, b(i, j))` of vertex index `i`.
    pub fn arcs(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl Graph for FiniteGraph {
    fn root(&self) -> VertexId {
        self.ids[0].clone()
    }

    fn arity(&self) -> usize {
        self.ids.first().map_or(1, VertexId::arity)
    }

    fn contains(&self, x: &VertexId) -> bool {
        self.index.contains_key(x)
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        self.index_of(x)
            .map(|i| self.measure[i])
            .ok_or_else(|| GraphError::UnknownVertex(x.clone()))
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let i = self.index_of(x).ok_or_else(|| GraphError::UnknownVertex(x.clone()))?;
        Ok(self.adj[i]
            .iter()
            .map(|&(j, w)| (self.ids[j].clone(), w))
            .collect())
    }

    fn finite_vertices(&self) -> Option<Vec<VertexId>> {
        Some(self.ids.clone())
    }

    fn describe(&self) -> String {
        if self.name.is_empty() {
            format!("explicit graph on {} vertices", self.len())
        } else {
            self.name.clone()
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct FiniteGraphBuilder {
    measure: BTreeMap<VertexId, f64>,
    arcs: BTreeMap<(VertexId, VertexId), f64>,
    name: String,
}

impl FiniteGraphBuilder {
    pub fn vertex(mut self, x: VertexId, m: f64) -> Self {
        self.measure.insert(x, m);
        self
    }

    /// Sets `b(x, y) = w`. If the reverse arc is never set explicitly it is
    /// mirrored on build, so a single call declares a symmetric edge.
    pub fn edge(mut self, x: VertexId, y: VertexId, w: f64) -> Self {
        self.arcs.insert((x, y), w);
        self
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn build(self) -> Result<FiniteGraph, GraphError> {
        if self.measure.is_empty() {
            return Err(GraphError::Invalid("graph has no vertices".into()));
        }
        let ids: Vec<VertexId> = self.measure.keys().cloned().collect();
        let arity = ids[0].arity();
        if let Some(bad) = ids.iter().find(|v| v.arity() != arity) {
            return Err(GraphError::Invalid(format!(
                "vertex {bad} has arity {}, expected {arity}",
                bad.arity()
            )));
        }
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let measure: Vec<f64> = self.measure.values().copied().collect();

        let mut arcs = self.arcs.clone();
        for ((x, y), w) in &self.arcs {
            arcs.entry((y.clone(), x.clone())).or_insert(*w);
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for ((x, y), w) in arcs {
            let i = *index.get(&x).ok_or(GraphError::UnknownVertex(x.clone()))?;
            let j = *index.get(&y).ok_or(GraphError::UnknownVertex(y.clone()))?;
            if w != 0.0 {
                adj[i].push((j, w));
            }
        }
        Ok(FiniteGraph {
            ids,
            index,
            measure,
            adj,
            name: self.name,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirrors_single_edges() {
        let g = FiniteGraph::from_edges(&[1.0, 2.0], &[(0, 1, 3.0)]).unwrap();
        assert_eq!(g.neighbors(&VertexId::scalar(1)).unwrap(), vec![(VertexId::scalar(0), 3.0)]);
        assert_eq!(g.measure(&VertexId::scalar(1)).unwrap(), 2.0);
    }

    #[test]
    fn keeps_explicit_asymmetry() {
        let g = FiniteGraph::builder()
            .vertex(0.into(), 1.0)
            .vertex(1.into(), 1.0)
            .edge(0.into(), 1.into(), 1.0)
            .edge(1.into(), 0.into(), 2.0)
            .build()
            .unwrap();
        assert_eq!(g.neighbors(&0.into()).unwrap()[0].1, 1.0);
        assert_eq!(g.neighbors(&1.into()).unwrap()[0].1, 2.0);
    }

    #[test]
    fn rejects_undeclared_endpoint() {
        let r = FiniteGraph::builder().vertex(0.into(), 1.0).edge(0.into(), 5.into(), 1.0).build();
        assert!(matches!(r, Err(GraphError::UnknownVertex(_))));
    }
}
