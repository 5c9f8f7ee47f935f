use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::MetricError;
use crate::graph::{ball, weighted_degree, Ball, Graph, GraphError, VertexId};

type CustomLength = Arc<dyn Fn(&VertexId, &VertexId) -> f64 + Send + Sync>;

#[derive(Clone)]
enum EdgeLength {
    Degree,
    Custom(CustomLength),
}

/// Path metric generated by positive edge lengths `σ(x, y)`.
#[derive(Clone)]
pub struct IntrinsicMetric {
    length: EdgeLength,
    scale: f64,
}

impl fmt::Debug for IntrinsicMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.length {
            EdgeLength::Degree => "degree",
            EdgeLength::Custom(_) => "custom",
        };
        write!(f, "IntrinsicMetric({kind}, scale {})", self.scale)
    }
}

/// `σ(x, y) = max(Deg(x), Deg(y))^(-1/2)`.
pub fn degree_metric() -> IntrinsicMetric {
    IntrinsicMetric { length: EdgeLength::Degree, scale: 1.0 }
}

impl IntrinsicMetric {
    pub fn custom(length: impl Fn(&VertexId, &VertexId) -> f64 + Send + Sync + 'static) -> Self {
        IntrinsicMetric { length: EdgeLength::Custom(Arc::new(length)), scale: 1.0 }
    }

    /// Multiplies every edge length by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }

    /// Edge length `σ(x, y)` of an edge of `g`.
    pub fn edge_length(&self, g: &dyn Graph, x: &VertexId, y: &VertexId) -> Result<f64, GraphError> {
        let raw = match &self.length {
            EdgeLength::Degree => weighted_degree(g, x)?.max(weighted_degree(g, y)?).powf(-0.5),
            EdgeLength::Custom(f) => f(x, y),
        };
        Ok(raw * self.scale)
    }

    /// Distances `ρ(x0, ·)` by shortest paths inside `B_hops(x0)`.
    ///
    /// Paths leaving the ball are ignored, so the values can only
    /// overestimate the metric of the whole graph.
    pub fn distances_from(&self, g: &dyn Graph, x0: &VertexId, hops: usize) -> Result<MetricBall, MetricError> {
        let region = ball(g, x0, hops)?;
        let mut degree_cache: HashMap<VertexId, f64> = HashMap::new();
        let mut length = |x: &VertexId, y: &VertexId| -> Result<f64, GraphError> {
            let raw = match &self.length {
                EdgeLength::Degree => {
                    let mut deg = |v: &VertexId| -> Result<f64, GraphError> {
                        if let Some(&d) = degree_cache.get(v) {
                            return Ok(d);
                        }
                        let d = weighted_degree(g, v)?;
                        degree_cache.insert(v.clone(), d);
                        Ok(d)
                    };
                    deg(x)?.max(deg(y)?).powf(-0.5)
                }
                EdgeLength::Custom(f) => f(x, y),
            };
            Ok(raw * self.scale)
        };
        let mut dist: HashMap<VertexId, f64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        heap.push(Entry(0.0, x0.clone()));
        while let Some(Entry(d, x)) = heap.pop() {
            if dist.contains_key(&x) {
                continue;
            }
            dist.insert(x.clone(), d);
            for (y, _) in g.neighbors(&x)? {
                if region.distance(&y).is_none() || dist.contains_key(&y) {
                    continue;
                }
                let s = length(&x, &y)?;
                if !(s > 0.0) {
                    return Err(MetricError::InvalidParameter(format!("edge length σ({x}, {y}) = {s} is not positive")));
                }
                heap.push(Entry(d + s, y));
            }
        }
        Ok(MetricBall { region, dist })
    }

    /// `ρ(x, y)` through paths inside `B_{d+2}(x)`, `d` the combinatorial
    /// distance, searched up to `max_hops`.
    pub fn distance(&self, g: &dyn Graph, x: &VertexId, y: &VertexId, max_hops: usize) -> Result<f64, MetricError> {
        let d = crate::graph::graph_distance(g, x, y, max_hops)?;
        let mb = self.distances_from(g, x, d + 2)?;
        Ok(mb.get(y).expect("target inside its own ball"))
    }
}

/// Min-heap entry ordered by distance.
struct Entry(f64, VertexId);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Metric distances from a center over a combinatorial ball.
#[derive(Debug, Clone)]
pub struct MetricBall {
    pub region: Ball,
    dist: HashMap<VertexId, f64>,
}

impl MetricBall {
    pub fn get(&self, y: &VertexId) -> Option<f64> {
        self.dist.get(y).copied()
    }

    /// `min ρ(x0, y)` over the combinatorial sphere of radius `r`.
    pub fn sphere_min(&self, r: usize) -> Option<f64> {
        self.region
            .sphere(r)
            .iter()
            .filter_map(|y| self.get(y))
            .min_by(f64::total_cmp)
    }
}

/// `max_x (Σ_y b(x, y) ρ(x, y)^2 - m(x))` over `B_radius(center)`; the metric
/// is intrinsic there iff the result is `<= 0`.
///
/// `ρ` between neighbors is computed through paths inside `B_2(x)`.
pub fn verify_intrinsic(
    g: &dyn Graph,
    metric: &IntrinsicMetric,
    center: &VertexId,
    radius: usize,
) -> Result<f64, MetricError> {
    let region = ball(g, center, radius)?;
    let mut worst = f64::NEG_INFINITY;
    for x in region.vertices() {
        let local = metric.distances_from(g, x, 2)?;
        let mut sum = 0.0;
        for (y, b) in g.neighbors(x)? {
            let rho = local.get(&y).expect("neighbor inside B_2");
            sum += b * rho * rho;
        }
        worst = worst.max(sum - g.measure(x)?);
    }
    Ok(worst)
}

/// Largest edge length over edges with an endpoint in `B_radius(center)`.
pub fn jump_size(g: &dyn Graph, metric: &IntrinsicMetric, center: &VertexId, radius: usize) -> Result<f64, MetricError> {
    let region = ball(g, center, radius)?;
    let mut jump: f64 = 0.0;
    for x in region.vertices() {
        for (y, _) in g.neighbors(x)? {
            jump = jump.max(metric.edge_length(g, x, &y)?);
        }
    }
    Ok(jump)
}

/// `min ρ(x0, ·)` on each combinatorial sphere up to `radius`; growth to
/// infinity is the operational evidence that metric balls are finite.
pub fn properness_profile(
    g: &dyn Graph,
    metric: &IntrinsicMetric,
    x0: &VertexId,
    radius: usize,
) -> Result<Vec<f64>, MetricError> {
    let mb = metric.distances_from(g, x0, radius + 2)?;
    Ok((0..=mb.region.radius().min(radius)).filter_map(|r| mb.sphere_min(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BirthDeath, FiniteGraph, Line, Sequence};

    fn v(x: i64) -> VertexId {
        VertexId::scalar(x)
    }

    #[test]
    fn line_degree_metric() {
        let z = Line::standard();
        let m = degree_metric();
        let mb = m.distances_from(&z, &v(0), 12).unwrap();
        for r in 0..=10 {
            assert!((mb.get(&v(r)).unwrap() - r as f64 / 2f64.sqrt()).abs() < 1e-14);
        }
        assert!(verify_intrinsic(&z, &m, &v(0), 5).unwrap().abs() < 1e-14);
        assert!((jump_size(&z, &m, &v(0), 5).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let doubled = degree_metric().scaled(2.0);
        assert!((verify_intrinsic(&z, &doubled, &v(0), 5).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_graph() {
        let k2 = FiniteGraph::from_edges(&[1.0, 1.0], &[(0, 1, 1.0)]).unwrap();
        let m = degree_metric();
        assert_eq!(m.edge_length(&k2, &v(0), &v(1)).unwrap(), 1.0);
        assert_eq!(jump_size(&k2, &m, &v(0), 1).unwrap(), 1.0);
        assert_eq!(verify_intrinsic(&k2, &m, &v(0), 1).unwrap(), 0.0);
    }

    #[test]
    fn first_edge_carries_the_jump() {
        let lin = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
        let j = jump_size(&lin, &degree_metric(), &v(0), 20).unwrap();
        assert!((j - 3f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn logarithmic_growth() {
        let g = BirthDeath::new(1.0, Sequence::parse("1/(r+1)^2").unwrap());
        let m = degree_metric();
        let mb = m.distances_from(&g, &v(0), 102).unwrap();
        let ratios: Vec<f64> = (10..=100).map(|r| mb.get(&v(r)).unwrap() / (r as f64).ln()).collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(lo > 0.3 && hi < 1.0, "{lo} {hi}");
        assert!(verify_intrinsic(&g, &m, &v(0), 30).unwrap() <= 1e-12);
        let prof = properness_profile(&g, &m, &v(0), 50).unwrap();
        assert!(prof.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn custom_lengths_and_shortcuts() {
        // Triangle with one long edge: the path metric takes the detour.
        let tri = FiniteGraph::from_edges(&[1.0; 3], &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let m = IntrinsicMetric::custom(|x, y| if x.head().min(y.head()) == 0 && x.head().max(y.head()) == 2 { 5.0 } else { 1.0 });
        let mb = m.distances_from(&tri, &v(0), 2).unwrap();
        assert_eq!(mb.get(&v(2)), Some(2.0));
    }
}
