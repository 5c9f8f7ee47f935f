use std::collections::{HashMap, HashSet};

use super::{check_vertex, Graph, GraphError, VertexId};

/// `Deg(x) = (1/m(x)) Σ_y b(x, y)`.
pub fn weighted_degree(g: &dyn Graph, x: &VertexId) -> Result<f64, GraphError> {
    let total: f64 = g.neighbors(x)?.iter().map(|(_, w)| w).sum();
    Ok(total / g.measure(x)?)
}

/// Formal Laplacian `(1/m(x)) Σ_y b(x, y)(f(x) - f(y))`.
pub fn apply_laplacian<F>(g: &dyn Graph, f: &F, x: &VertexId) -> Result<f64, GraphError>
where
    F: Fn(&VertexId) -> Option<f64> + ?Sized,
{
    let fx = f(x).ok_or_else(|| GraphError::MissingValue(x.clone()))?;
    let mut acc = 0.0;
    for (y, w) in g.neighbors(x)? {
        let fy = f(&y).ok_or(GraphError::MissingValue(y))?;
        acc += w * (fx - fy);
    }
    Ok(acc / g.measure(x)?)
}

/// Combinatorial ball around a center, stored by distance layers. Layers are
/// sorted so that every traversal order derived from a ball is canonical.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: VertexId,
    pub layers: Vec<Vec<VertexId>>,
    dist: HashMap<VertexId, usize>,
}

impl Ball {
    pub fn distance(&self, x: &VertexId) -> Option<usize> {
        self.dist.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Radius actually reached; smaller than requested when a finite graph
    /// was exhausted.
    pub fn radius(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn sphere(&self, r: usize) -> &[VertexId] {
        self.layers.get(r).map_or(&[], Vec::as_slice)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.layers.iter().flatten()
    }
}

/// Breadth-first ball `B_radius(center)`; stops early once the graph is
/// exhausted.
pub fn ball(g: &dyn Graph, center: &VertexId, radius: usize) -> Result<Ball, GraphError> {
    check_vertex(g, center)?;
    let mut dist = HashMap::new();
    dist.insert(center.clone(), 0);
    let mut layers = vec![vec![center.clone()]];
    for d in 1..=radius {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for x in &layers[d - 1] {
            for (y, _) in g.neighbors(x)? {
                if !dist.contains_key(&y) && seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        for y in &next {
            dist.insert(y.clone(), d);
        }
        layers.push(next);
    }
    Ok(Ball { center: center.clone(), layers, dist })
}

/// Degree data of a combinatorial sphere `S_r(x0)`: maxima and minima of
/// `Deg`, the inner degree `Deg_-` (weight towards `S_{r-1}`) and the outer
/// degree `Deg_+` (weight towards `S_{r+1}`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereProfile {
    pub radius: usize,
    pub degree_max: f64,
    pub inner_max: f64,
    pub outer_max: f64,
    pub inner_min: f64,
    pub outer_min: f64,
}

pub fn sphere_profile(g: &dyn Graph, x0: &VertexId, r: usize) -> Result<SphereProfile, GraphError> {
    let b = ball(g, x0, r + 1)?;
    sphere_profile_in(g, &b, r)
}

pub(crate) fn sphere_profile_in(g: &dyn Graph, b: &Ball, r: usize) -> Result<SphereProfile, GraphError> {
    let sphere = b.sphere(r);
    if sphere.is_empty() {
        return Err(GraphError::EmptySphere { radius: r });
    }
    let mut p = SphereProfile {
        radius: r,
        degree_max: f64::NEG_INFINITY,
        inner_max: f64::NEG_INFINITY,
        outer_max: f64::NEG_INFINITY,
        inner_min: f64::INFINITY,
        outer_min: f64::INFINITY,
    };
    for x in sphere {
        let m = g.measure(x)?;
        let (mut total, mut inner, mut outer) = (0.0, 0.0, 0.0);
        for (y, w) in g.neighbors(x)? {
            total += w;
            match b.distance(&y) {
                Some(d) if d + 1 == r => inner += w,
                Some(d) if d == r + 1 => outer += w,
                _ => {}
            }
        }
        p.degree_max = p.degree_max.max(total / m);
        p.inner_max = p.inner_max.max(inner / m);
        p.inner_min = p.inner_min.min(inner / m);
        p.outer_max = p.outer_max.max(outer / m);
        p.outer_min = p.outer_min.min(outer / m);
    }
    debug_assert!(r == 0 || p.inner_min > 0.0, "vertex on S_{r} without inner neighbor");
    Ok(p)
}

/// Combinatorial distance, searching at most `max_radius` steps from `x`.
pub fn graph_distance(
    g: &dyn Graph,
    x: &VertexId,
    y: &VertexId,
    max_radius: usize,
) -> Result<usize, GraphError> {
    check_vertex(g, y)?;
    let b = ball(g, x, max_radius)?;
    b.distance(y).ok_or_else(|| GraphError::Unreachable {
        source_vertex: x.clone(),
        target: y.clone(),
        radius: max_radius,
    })
}

/// Finite truncation of a graph with an interior/boundary split.
///
/// Interior vertices have all their neighbors inside the truncation; the
/// Dirichlet operator acts on functions supported on the interior.
#[derive(Debug, Clone)]
pub struct DirichletDomain {
    pub center: VertexId,
    pub radius: usize,
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    measure: Vec<f64>,
    degree: Vec<f64>,
    arcs: Vec<Vec<(usize, f64)>>,
    interior: Vec<usize>,
    interior_pos: Vec<Option<usize>>,
}

impl DirichletDomain {
    fn from_ball(g: &dyn Graph, b: Ball, radius: usize) -> Result<Self, GraphError> {
        let ids: Vec<VertexId> = b.vertices().cloned().collect();
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut measure = Vec::with_capacity(ids.len());
        let mut degree = Vec::with_capacity(ids.len());
        let mut arcs = Vec::with_capacity(ids.len());
        let mut interior = Vec::new();
        let mut interior_pos = vec![None; ids.len()];
        for (i, x) in ids.iter().enumerate() {
            let m = g.measure(x)?;
            if !(m > 0.0 && m.is_finite()) {
                return Err(GraphError::NonPositive { what: format!("m({x})"), value: m });
            }
            let mut total = 0.0;
            let mut inside = true;
            let mut row = Vec::new();
            for (y, w) in g.neighbors(x)? {
                if !(w > 0.0 && w.is_finite()) {
                    return Err(GraphError::NonPositive { what: format!("b({x},{y})"), value: w });
                }
                total += w;
                match index.get(&y) {
                    Some(&j) => row.push((j, w)),
                    None => inside = false,
                }
            }
            if inside {
                interior_pos[i] = Some(interior.len());
                interior.push(i);
            }
            measure.push(m);
            degree.push(total / m);
            arcs.push(row);
        }
        Ok(DirichletDomain {
            center: b.center,
            radius,
            ids,
            index,
            measure,
            degree,
            arcs,
            interior,
            interior_pos,
        })
    }

    /// Whole finite graph as a domain without boundary.
    pub fn whole(g: &dyn Graph) -> Result<Self, GraphError> {
        let b = ball(g, &g.root(), usize::MAX)?;
        let r = b.radius();
        DirichletDomain::from_ball(g, b, r)
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

    pub fn measure(&self, i: usize) -> f64 {
        self.measure[i]
    }

    /// Weighted degree in the full graph.
    pub fn degree(&self, i: usize) -> f64 {
        self.degree[i]
    }

    /// Arcs `(j, b)` from vertex `i` to vertices of the truncation.
    pub fn arcs(&self, i: usize) -> &[(usize, f64)] {
        &self.arcs[i]
    }

    /// Indices of interior vertices in canonical order.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Position of vertex `i` within [`Self::interior`].
    pub fn interior_pos(&self, i: usize) -> Option<usize> {
        self.interior_pos[i]
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.interior_pos[i].is_some()
    }

    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.is_interior(i))
    }

    pub fn has_boundary(&self) -> bool {
        self.interior.len() < self.ids.len()
    }

    pub fn interior_ids(&self) -> Vec<VertexId> {
        self.interior.iter().map(|&i| self.ids[i].clone()).collect()
    }
}

/// The truncation `B_R(x0)` with interior = vertices whose neighbors all lie
/// in `B_R(x0)`.
pub fn ball_truncation(g: &dyn Graph, x0: &VertexId, radius: usize) -> Result<DirichletDomain, GraphError> {
    let b = ball(g, x0, radius)?;
    DirichletDomain::from_ball(g, b, radius)
}

/// Exhaustion step of radius `R`: the truncation of radius `R + 1`, whose
/// interior is exactly `B_R(x0)` on graphs that extend past it.
pub fn exhaustion_domain(g: &dyn Graph, x0: &VertexId, radius: usize) -> Result<DirichletDomain, GraphError> {
    ball_truncation(g, x0, radius + 1)
}
