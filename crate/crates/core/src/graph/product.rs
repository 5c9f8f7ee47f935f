use super::{Graph, GraphError, GraphOracle, VertexId};

/// How edge weights of a Cartesian product are formed from its factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductWeights {
    /// `b((x,u),(y,u)) = b1(x,y)·m2(u)`, `b((x,u),(x,v)) = m1(x)·b2(u,v)`;
    /// the product Laplacian is the sum of the factor Laplacians.
    #[default]
    Laplacian,
    /// Each edge keeps its factor weight: `b((x,u),(y,u)) = b1(x,y)`.
    Plain,
}

/// Cartesian product of graphs with measure `m = m1·m2·...`.
///
/// Vertex labels concatenate the factor labels in order.
#[derive(Clone)]
pub struct Product {
    factors: Vec<GraphOracle>,
    offsets: Vec<usize>,
    weights: ProductWeights,
}

impl Product {
    pub fn new(factors: Vec<GraphOracle>, weights: ProductWeights) -> Result<Self, GraphError> {
        if factors.is_empty() {
            return Err(GraphError::Invalid("product needs at least one factor".into()));
        }
        let mut offsets = Vec::with_capacity(factors.len() + 1);
        let mut acc = 0;
        for f in &factors {
            offsets.push(acc);
            acc += f.arity();
        }
        offsets.push(acc);
        Ok(Product { factors, offsets, weights })
    }

    pub fn factors(&self) -> &[GraphOracle] {
        &self.factors
    }

    pub fn weights(&self) -> ProductWeights {
        self.weights
    }

    /// Label of factor `i` inside the product label `x`.
    pub fn component(&self, x: &VertexId, i: usize) -> VertexId {
        x.slice(self.offsets[i], self.offsets[i + 1] - self.offsets[i])
    }

    pub fn split(&self, x: &VertexId) -> Vec<VertexId> {
        (0..self.factors.len()).map(|i| self.component(x, i)).collect()
    }

    pub fn join(parts: &[VertexId]) -> VertexId {
        let refs: Vec<&VertexId> = parts.iter().collect();
        VertexId::concat(&refs)
    }

    fn check(&self, x: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        if x.arity() != self.arity() {
            return Err(GraphError::UnknownVertex(x.clone()));
        }
        let parts = self.split(x);
        for (f, p) in self.factors.iter().zip(&parts) {
            if !f.contains(p) {
                return Err(GraphError::UnknownVertex(x.clone()));
            }
        }
        Ok(parts)
    }
}

impl Graph for Product {
    fn root(&self) -> VertexId {
        let parts: Vec<VertexId> = self.factors.iter().map(|f| f.root()).collect();
        Product::join(&parts)
    }

    fn arity(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn contains(&self, x: &VertexId) -> bool {
        self.check(x).is_ok()
    }

    fn measure(&self, x: &VertexId) -> Result<f64, GraphError> {
        let parts = self.check(x)?;
        let mut m = 1.0;
        for (f, p) in self.factors.iter().zip(&parts) {
            m *= f.measure(p)?;
        }
        Ok(m)
    }

    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError> {
        let parts = self.check(x)?;
        let measures = match self.weights {
            ProductWeights::Laplacian => self
                .factors
                .iter()
                .zip(&parts)
                .map(|(f, p)| f.measure(p))
                .collect::<Result<Vec<_>, _>>()?,
            ProductWeights::Plain => vec![1.0; parts.len()],
        };
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let others: f64 = measures
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, m)| m)
                .product();
            for (y, w) in f.neighbors(&parts[i])? {
                let mut next = parts.clone();
                next[i] = y;
                out.push((Product::join(&next), w * others));
            }
        }
        Ok(out)
    }

    fn finite_vertices(&self) -> Option<Vec<VertexId>> {
        let mut acc: Vec<Vec<VertexId>> = vec![Vec::new()];
        for f in &self.factors {
            let vs = f.finite_vertices()?;
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    vs.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        Some(acc.iter().map(|p| Product::join(p)).collect())
    }

    fn describe(&self) -> String {
        let names: Vec<String> = self.factors.iter().map(|f| f.describe()).collect();
        let sep = match self.weights {
            ProductWeights::Laplacian => " x ",
            ProductWeights::Plain => " x' ",
        };
        names.join(sep)
    }
}
