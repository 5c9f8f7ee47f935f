use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::CoverError;
use crate::graph::{
    ball, graph_distance, Cycle, GraphError, GraphOracle, PeriodicLine, Product, ProductWeights,
    VertexId,
};

/// Fiber cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheets {
    Finite(usize),
    Infinite,
}

impl Sheets {
    pub fn finite(self) -> Option<usize> {
        match self {
            Sheets::Finite(n) => Some(n),
            Sheets::Infinite => None,
        }
    }
}

impl fmt::Display for Sheets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sheets::Finite(n) => write!(f, "{n}"),
            Sheets::Infinite => f.write_str("inf"),
        }
    }
}

/// How cover labels map to base labels.
#[derive(Clone)]
pub enum Projection {
    /// Same graph on both sides.
    Identity(GraphOracle),
    /// Scalar labels reduced mod `k`; the cover is the integers
    /// (`period = None`) or a cycle of length `period`.
    Modulo { k: i64, period: Option<i64> },
    /// Componentwise on concatenated labels.
    Product(Vec<Projection>),
}

impl fmt::Debug for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projection::Identity(g) => write!(f, "Identity({})", g.describe()),
            Projection::Modulo { k, period } => write!(f, "Modulo {{ k: {k}, period: {period:?} }}"),
            Projection::Product(parts) => f.debug_tuple("Product").field(parts).finish(),
        }
    }
}

/// Deck transformation adding `by` to one label coordinate, reduced mod
/// `period` when the coordinate lives on a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeckShift {
    pub coord: usize,
    pub by: i64,
    pub period: Option<i64>,
}

impl DeckShift {
    pub fn apply(&self, x: &VertexId) -> VertexId {
        let v = x.coords()[self.coord] + self.by;
        x.with_coord(self.coord, self.period.map_or(v, |p| v.rem_euclid(p)))
    }

    pub fn inverse(&self) -> DeckShift {
        DeckShift { by: -self.by, ..*self }
    }
}

impl Projection {
    fn arity(&self) -> usize {
        match self {
            Projection::Identity(g) => g.arity(),
            Projection::Modulo { .. } => 1,
            Projection::Product(parts) => parts.iter().map(Projection::arity).sum(),
        }
    }

    fn parts_of<'a>(parts: &'a [Projection], x: &VertexId) -> impl Iterator<Item = (&'a Projection, VertexId)> + 'a {
        let mut offset = 0;
        let x = x.clone();
        parts.iter().map(move |p| {
            let a = p.arity();
            let piece = x.slice(offset, a);
            offset += a;
            (p, piece)
        })
    }

    pub fn project(&self, x: &VertexId) -> VertexId {
        match self {
            Projection::Identity(_) => x.clone(),
            Projection::Modulo { k, .. } => VertexId::scalar(x.head().rem_euclid(*k)),
            Projection::Product(parts) => {
                let pieces: Vec<VertexId> = Projection::parts_of(parts, x).map(|(p, piece)| p.project(&piece)).collect();
                Product::join(&pieces)
            }
        }
    }

    /// Canonical preimage: base labels are already cover labels.
    pub fn lift(&self, x: &VertexId) -> VertexId {
        x.clone()
    }

    pub fn sheets(&self) -> Sheets {
        match self {
            Projection::Identity(_) => Sheets::Finite(1),
            Projection::Modulo { k, period: Some(n) } => Sheets::Finite((n / k) as usize),
            Projection::Modulo { period: None, .. } => Sheets::Infinite,
            Projection::Product(parts) => parts.iter().fold(Sheets::Finite(1), |acc, p| match (acc, p.sheets()) {
                (Sheets::Finite(a), Sheets::Finite(b)) => Sheets::Finite(a * b),
                _ => Sheets::Infinite,
            }),
        }
    }

    pub fn generators(&self) -> Vec<DeckShift> {
        self.generators_at(0)
    }

    fn generators_at(&self, offset: usize) -> Vec<DeckShift> {
        match self {
            Projection::Identity(_) => Vec::new(),
            Projection::Modulo { k, period } => {
                if period == &Some(*k) {
                    Vec::new()
                } else {
                    vec![DeckShift { coord: offset, by: *k, period: *period }]
                }
            }
            Projection::Product(parts) => {
                let mut out = Vec::new();
                let mut off = offset;
                for p in parts {
                    out.extend(p.generators_at(off));
                    off += p.arity();
                }
                out
            }
        }
    }

    /// Points of the fiber over `x` within combinatorial distance `radius`
    /// of `center`, with their distances.
    pub fn fiber(&self, x: &VertexId, center: &VertexId, radius: usize) -> Result<Vec<(VertexId, usize)>, GraphError> {
        match self {
            Projection::Identity(g) => match graph_distance(g.as_ref(), center, x, radius) {
                Ok(d) => Ok(vec![(x.clone(), d)]),
                Err(GraphError::Unreachable { .. }) => Ok(Vec::new()),
                Err(e) => Err(e),
            },
            Projection::Modulo { k, period } => {
                let (base, c, r) = (x.head().rem_euclid(*k), center.head(), radius as i64);
                let mut out = Vec::new();
                match period {
                    None => {
                        // Smallest j with base + jk >= c - r.
                        let mut j = (c - r - base).div_euclid(*k);
                        while base + j * k <= c + r {
                            let p = base + j * k;
                            if (p - c).abs() <= r {
                                out.push((VertexId::scalar(p), (p - c).unsigned_abs() as usize));
                            }
                            j += 1;
                        }
                    }
                    Some(n) => {
                        for j in 0..n / k {
                            let p = base + j * k;
                            let d = (p - c).rem_euclid(*n);
                            let d = d.min(n - d);
                            if d <= r {
                                out.push((VertexId::scalar(p), d as usize));
                            }
                        }
                    }
                }
                Ok(out)
            }
            Projection::Product(parts) => {
                let xs: Vec<(&Projection, VertexId)> = Projection::parts_of(parts, x).collect();
                let cs: Vec<VertexId> = Projection::parts_of(parts, center).map(|(_, c)| c).collect();
                let mut acc: Vec<(Vec<VertexId>, usize)> = vec![(Vec::new(), 0)];
                for ((p, xi), ci) in xs.iter().zip(&cs) {
                    let pts = p.fiber(xi, ci, radius)?;
                    let mut next = Vec::new();
                    for (prefix, d) in &acc {
                        for (pt, dp) in &pts {
                            if d + dp <= radius {
                                let mut v = prefix.clone();
                                v.push(pt.clone());
                                next.push((v, d + dp));
                            }
                        }
                    }
                    acc = next;
                }
                let mut out: Vec<(VertexId, usize)> = acc.into_iter().map(|(v, d)| (Product::join(&v), d)).collect();
                out.sort();
                Ok(out)
            }
        }
    }
}

/// A regular covering `π: cover -> base` with arithmetic fibers.
#[derive(Clone)]
pub struct CoveringMap {
    pub base: GraphOracle,
    pub cover: GraphOracle,
    pub projection: Projection,
    name: String,
}

impl fmt::Debug for CoveringMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoveringMap({})", self.name)
    }
}

impl CoveringMap {
    pub fn new(base: GraphOracle, cover: GraphOracle, projection: Projection) -> Result<Self, CoverError> {
        if base.arity() != cover.arity() || projection.arity() != cover.arity() {
            return Err(CoverError::Invalid(format!(
                "arity mismatch: base {}, cover {}, projection {}",
                base.arity(),
                cover.arity(),
                projection.arity()
            )));
        }
        let name = format!("{} -> {}", cover.describe(), base.describe());
        Ok(CoveringMap { base, cover, projection, name })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn project(&self, x: &VertexId) -> VertexId {
        self.projection.project(x)
    }

    pub fn lift(&self, x: &VertexId) -> Result<VertexId, CoverError> {
        if !self.base.contains(x) {
            return Err(GraphError::UnknownVertex(x.clone()).into());
        }
        Ok(self.projection.lift(x))
    }

    pub fn sheets(&self) -> Sheets {
        self.projection.sheets()
    }

    /// Fiber over `x` inside `B_radius(center)`, sorted, with distances.
    pub fn fiber(&self, x: &VertexId, center: &VertexId, radius: usize) -> Result<Vec<(VertexId, usize)>, CoverError> {
        let mut pts = self.projection.fiber(x, center, radius)?;
        pts.sort();
        Ok(pts)
    }

    pub fn deck_generators(&self) -> Vec<DeckShift> {
        self.projection.generators()
    }
}

/// `Z -> C_k`, `n ↦ n mod k`.
pub fn line_over_cycle(k: usize) -> Result<CoveringMap, CoverError> {
    line_over_cycle_weighted(k, vec![1.0], vec![1.0])
}

/// Periodic weights on both sides; pattern lengths must divide `k`.
pub fn line_over_cycle_weighted(k: usize, b: Vec<f64>, m: Vec<f64>) -> Result<CoveringMap, CoverError> {
    let base = Cycle::weighted(k, b.clone(), m.clone())?;
    let cover = PeriodicLine::weighted(b, m)?;
    CoveringMap::new(Arc::new(base), Arc::new(cover), Projection::Modulo { k: k as i64, period: None })
}

/// `C_n -> C_k`, `j ↦ j mod k`, with `n/k` sheets.
pub fn cyclic_cover(n: usize, k: usize) -> Result<CoveringMap, CoverError> {
    cyclic_cover_weighted(n, k, vec![1.0], vec![1.0])
}

pub fn cyclic_cover_weighted(n: usize, k: usize, b: Vec<f64>, m: Vec<f64>) -> Result<CoveringMap, CoverError> {
    if k < 3 || !n.is_multiple_of(k) {
        return Err(CoverError::Invalid(format!("C_{n} does not cover C_{k}: need k >= 3 dividing n")));
    }
    let base = Cycle::weighted(k, b.clone(), m.clone())?;
    let cover = Cycle::weighted(n, b, m)?;
    CoveringMap::new(Arc::new(base), Arc::new(cover), Projection::Modulo { k: k as i64, period: Some(n as i64) })
}

/// Factor of a product covering.
#[derive(Clone)]
pub enum CoverFactor {
    Cover(CoveringMap),
    Identity(GraphOracle),
}

impl fmt::Debug for CoverFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverFactor::Cover(c) => c.fmt(f),
            CoverFactor::Identity(g) => write!(f, "Identity({})", g.describe()),
        }
    }
}

/// Componentwise covering of Cartesian products.
pub fn product_cover(factors: Vec<CoverFactor>, weights: ProductWeights) -> Result<CoveringMap, CoverError> {
    let mut bases = Vec::new();
    let mut covers = Vec::new();
    let mut parts = Vec::new();
    for f in factors {
        match f {
            CoverFactor::Cover(c) => {
                bases.push(c.base);
                covers.push(c.cover);
                parts.push(c.projection);
            }
            CoverFactor::Identity(g) => {
                bases.push(g.clone());
                covers.push(g.clone());
                parts.push(Projection::Identity(g));
            }
        }
    }
    let base = Product::new(bases, weights)?;
    let cover = Product::new(covers, weights)?;
    CoveringMap::new(Arc::new(base), Arc::new(cover), Projection::Product(parts))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverViolation {
    Projection { vertex: VertexId, image: VertexId },
    Measure { vertex: VertexId, cover: f64, base: f64 },
    Neighborhood { vertex: VertexId, detail: String },
    Weight { vertex: VertexId, neighbor: VertexId, cover: f64, base: f64 },
    Surjectivity { missing: VertexId },
    Deck { shift: DeckShift, vertex: VertexId, detail: String },
    Transitivity { fiber_of: VertexId, unreached: Vec<VertexId> },
    Oracle { message: String },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::Projection { vertex, image } => write!(f, "projection: {vertex} maps to {image} outside the base"),
            CoverViolation::Measure { vertex, cover, base } => {
                write!(f, "measure: m~({vertex}) = {cover} but m(π) = {base}")
            }
            CoverViolation::Neighborhood { vertex, detail } => write!(f, "local isomorphism at {vertex}: {detail}"),
            CoverViolation::Weight { vertex, neighbor, cover, base } => {
                write!(f, "weight: b~({vertex},{neighbor}) = {cover} but base weight is {base}")
            }
            CoverViolation::Surjectivity { missing } => write!(f, "surjectivity: {missing} has no preimage in the explored ball"),
            CoverViolation::Deck { shift, vertex, detail } => {
                write!(f, "deck shift by {} on coordinate {} at {vertex}: {detail}", shift.by, shift.coord)
            }
            CoverViolation::Transitivity { fiber_of, unreached } => {
                write!(f, "transitivity: {} point(s) over {fiber_of} not reached by deck shifts", unreached.len())
            }
            CoverViolation::Oracle { message } => write!(f, "oracle error: {message}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverReport {
    pub checked: usize,
    pub violations: Vec<CoverViolation>,
}

impl CoverReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "checked {} cover vertices, {} violation(s)", self.checked, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn check_vertex(c: &CoveringMap, x: &VertexId, out: &mut Vec<CoverViolation>) -> Result<(), GraphError> {
    let px = c.project(x);
    if !c.base.contains(&px) {
        out.push(CoverViolation::Projection { vertex: x.clone(), image: px });
        return Ok(());
    }
    let (mc, mb) = (c.cover.measure(x)?, c.base.measure(&px)?);
    if !close(mc, mb) {
        out.push(CoverViolation::Measure { vertex: x.clone(), cover: mc, base: mb });
    }
    let mut up: Vec<(VertexId, VertexId, f64)> =
        c.cover.neighbors(x)?.into_iter().map(|(y, w)| (c.project(&y), y, w)).collect();
    let mut down = c.base.neighbors(&px)?;
    up.sort_by(|a, b| a.0.cmp(&b.0));
    down.sort_by(|a, b| a.0.cmp(&b.0));
    let images: Vec<&VertexId> = up.iter().map(|(p, _, _)| p).collect();
    let targets: Vec<&VertexId> = down.iter().map(|(y, _)| y).collect();
    if images != targets {
        out.push(CoverViolation::Neighborhood {
            vertex: x.clone(),
            detail: format!("neighbors project to {images:?}, base neighbors are {targets:?}"),
        });
        return Ok(());
    }
    for ((_, y, wc), (_, wb)) in up.iter().zip(&down) {
        if !close(*wc, *wb) {
            out.push(CoverViolation::Weight { vertex: x.clone(), neighbor: y.clone(), cover: *wc, base: *wb });
        }
    }
    for shift in c.deck_generators() {
        let sx = shift.apply(x);
        if c.project(&sx) != px {
            out.push(CoverViolation::Deck { shift, vertex: x.clone(), detail: "does not preserve fibers".into() });
            continue;
        }
        let mut moved: Vec<(VertexId, f64)> = c.cover.neighbors(x)?.into_iter().map(|(y, w)| (shift.apply(&y), w)).collect();
        let mut actual = c.cover.neighbors(&sx)?;
        moved.sort_by(|a, b| a.0.cmp(&b.0));
        actual.sort_by(|a, b| a.0.cmp(&b.0));
        let same = moved.len() == actual.len()
            && moved.iter().zip(&actual).all(|(a, b)| a.0 == b.0 && close(a.1, b.1))
            && close(c.cover.measure(&sx)?, mc);
        if !same {
            out.push(CoverViolation::Deck { shift, vertex: x.clone(), detail: "is not a weighted automorphism".into() });
        }
    }
    Ok(())
}

/// Structural checks on `B_radius` around the cover root: measures and
/// weights are preserved, neighborhoods map bijectively, the projection
/// is onto the base ball, and deck shifts are automorphisms acting
/// transitively on the fiber of the base root.
pub fn validate_covering(c: &CoveringMap, radius: usize) -> CoverReport {
    let mut report = CoverReport::default();
    if let Err(e) = validate_into(c, radius, &mut report) {
        report.violations.push(CoverViolation::Oracle { message: e.to_string() });
    }
    report
}

fn validate_into(c: &CoveringMap, radius: usize, report: &mut CoverReport) -> Result<(), CoverError> {
    let root = c.cover.root();
    let explored = ball(c.cover.as_ref(), &root, radius)?;
    let mut images = HashSet::new();
    for x in explored.vertices() {
        check_vertex(c, x, &mut report.violations)?;
        images.insert(c.project(x));
        report.checked += 1;
    }
    let base_root = c.project(&root);
    for y in ball(c.base.as_ref(), &base_root, radius)?.vertices() {
        if !images.contains(y) {
            report.violations.push(CoverViolation::Surjectivity { missing: y.clone() });
        }
    }
    // Orbit of the root under the deck generators, inside a doubled ball.
    let fiber = c.fiber(&base_root, &root, radius)?;
    let allowed: HashSet<VertexId> = c.fiber(&base_root, &root, 2 * radius)?.into_iter().map(|(v, _)| v).collect();
    let gens: Vec<DeckShift> = c.deck_generators().into_iter().flat_map(|g| [g, g.inverse()]).collect();
    let mut seen = HashSet::from([root.clone()]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let w = g.apply(&v);
            if allowed.contains(&w) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    let unreached: Vec<VertexId> = fiber.into_iter().map(|(v, _)| v).filter(|v| !seen.contains(v)).collect();
    if !unreached.is_empty() {
        report.violations.push(CoverViolation::Transitivity { fiber_of: base_root, unreached });
    }
    Ok(())
}
