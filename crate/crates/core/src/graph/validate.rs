use std::fmt;

use super::{ball, Graph, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Asymmetric { x: VertexId, y: VertexId, forward: f64, backward: f64 },
    NonPositiveMeasure { x: VertexId, value: f64 },
    NonPositiveWeight { x: VertexId, y: VertexId, value: f64 },
    SelfLoop { x: VertexId },
    Disconnected { reached: usize, total: usize },
    Oracle { message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Asymmetric { x, y, forward, backward } => {
                write!(f, "symmetry: b({x},{y}) = {forward} but b({y},{x}) = {backward}")
            }
            Violation::NonPositiveMeasure { x, value } => write!(f, "positivity: m({x}) = {value}"),
            Violation::NonPositiveWeight { x, y, value } => {
                write!(f, "positivity: b({x},{y}) = {value}")
            }
            Violation::SelfLoop { x } => write!(f, "self-loop at {x}"),
            Violation::Disconnected { reached, total } => {
                write!(f, "connectivity: only {reached} of {total} vertices reachable from the root")
            }
            Violation::Oracle { message } => write!(f, "oracle error: {message}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "checked {} vertices, {} violation(s)", self.checked, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Checks measure positivity, weight positivity and symmetry, self-loops and
/// connectivity. Finite graphs are checked exhaustively; infinite ones on the
/// ball of radius `sample_radius` around the root.
pub fn validate_graph(g: &dyn Graph, sample_radius: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    let finite = g.finite_vertices();
    let radius = if finite.is_some() { usize::MAX } else { sample_radius };
    let reached = match ball(g, &g.root(), radius) {
        Ok(b) => b,
        Err(e) => {
            report.violations.push(Violation::Oracle { message: e.to_string() });
            return report;
        }
    };
    let vertices: Vec<VertexId> = match &finite {
        Some(all) => {
            if reached.len() < all.len() {
                report.violations.push(Violation::Disconnected {
                    reached: reached.len(),
                    total: all.len(),
                });
            }
            all.clone()
        }
        None => reached.vertices().cloned().collect(),
    };
    for x in &vertices {
        report.checked += 1;
        check_vertex(g, x, &mut report.violations);
    }
    report
}

fn check_vertex(g: &dyn Graph, x: &VertexId, out: &mut Vec<Violation>) {
    match g.measure(x) {
        Ok(m) if m > 0.0 && m.is_finite() => {}
        Ok(m) => out.push(Violation::NonPositiveMeasure { x: x.clone(), value: m }),
        Err(e) => out.push(Violation::Oracle { message: e.to_string() }),
    }
    let nbrs = match g.neighbors(x) {
        Ok(n) => n,
        Err(e) => {
            out.push(Violation::Oracle { message: e.to_string() });
            return;
        }
    };
    for (y, w) in nbrs {
        if &y == x {
            out.push(Violation::SelfLoop { x: x.clone() });
            continue;
        }
        if !(w > 0.0 && w.is_finite()) {
            out.push(Violation::NonPositiveWeight { x: x.clone(), y: y.clone(), value: w });
        }
        // Report each asymmetric pair once, from its smaller endpoint.
        let back = match g.neighbors(&y) {
            Ok(n) => n.into_iter().find(|(z, _)| z == x).map_or(0.0, |(_, w)| w),
            Err(e) => {
                out.push(Violation::Oracle { message: e.to_string() });
                continue;
            }
        };
        if back != w && (x < &y || back == 0.0) {
            out.push(Violation::Asymmetric { x: x.clone(), y, forward: w, backward: back });
        }
    }
}
