use std::collections::HashMap;
use std::fmt;

use nalgebra::DVector;

use super::estimate::{Direction, MonotoneEstimate, RadiusSchedule, Verdict};
use super::kernel::DENSE_LIMIT;
use super::linalg::{conjugate_gradient, SymCsr};
use super::HeatError;
use crate::graph::{exhaustion_domain, DirichletDomain, Graph, GraphError, VertexId};
use crate::numeric::{classify_tail, TailClass};

/// Energy `(1/2) Σ_{x,y} b(x,y)(φ(x) - φ(y))^2` of a finitely supported
/// function; `φ` is zero off the keys of the map. Summed in vertex order so
/// the result does not depend on hashing.
pub fn energy(g: &dyn Graph, phi: &HashMap<VertexId, f64>) -> Result<f64, GraphError> {
    let value = |v: &VertexId| phi.get(v).copied().unwrap_or(0.0);
    let mut support: Vec<(&VertexId, f64)> = phi.iter().map(|(x, &f)| (x, f)).collect();
    support.sort_by(|a, b| a.0.cmp(b.0));
    let mut q = 0.0;
    for (x, fx) in support {
        for (y, b) in g.neighbors(x)? {
            let d = fx - value(&y);
            // Pairs inside the support are visited twice.
            q += if phi.contains_key(&y) { 0.5 } else { 1.0 } * b * d * d;
        }
    }
    Ok(q)
}

/// Solves `(D_b - B) u = e_x` on the interior, i.e. `L_D u = 1_x / m(x)`.
/// Returns `u` indexed by interior position.
pub fn green_on_domain(d: &DirichletDomain, x: &VertexId) -> Result<Vec<f64>, HeatError> {
    let pos = d
        .index_of(x)
        .and_then(|i| d.interior_pos(i))
        .ok_or_else(|| HeatError::OutsideBall { vertex: x.clone(), radius: d.radius })?;
    assert!(d.has_boundary(), "Dirichlet problem without boundary is singular");
    let rows: Vec<Vec<(usize, f64)>> = d
        .interior()
        .iter()
        .map(|&i| {
            let mut row = vec![(d.interior_pos(i).unwrap(), d.degree(i) * d.measure(i))];
            for &(j, b) in d.arcs(i) {
                if let Some(q) = d.interior_pos(j) {
                    if j != i {
                        row.push((q, -b));
                    }
                }
            }
            row
        })
        .collect();
    let n = rows.len();
    let csr = SymCsr::from_rows(rows);
    let mut rhs = vec![0.0; n];
    rhs[pos] = 1.0;
    if n <= DENSE_LIMIT {
        let chol = csr
            .to_dense()
            .cholesky()
            .ok_or_else(|| HeatError::Solver("Dirichlet matrix not positive definite".into()))?;
        Ok(chol.solve(&DVector::from_vec(rhs)).iter().copied().collect())
    } else {
        conjugate_gradient(&csr, &rhs, 1e-14).map_err(|e| HeatError::Solver(e.to_string()))
    }
}

/// Verdict from the growth of an increasing estimate: per-unit-radius
/// increments classified as a series.
fn growth_verdict(est: &MonotoneEstimate) -> Verdict {
    let n = est.values.len();
    if n < 2 {
        return Verdict::Inconclusive;
    }
    let (mut r, mut a) = (Vec::new(), Vec::new());
    for k in 1..n {
        let step = (est.radii[k] - est.radii[k - 1]) as f64;
        r.push(est.radii[k] as f64);
        a.push((est.values[k] - est.values[k - 1]).abs() / step);
    }
    let last = (est.values[n - 1] - est.values[n - 2]).abs();
    match classify_tail(&r, &a).class {
        TailClass::Diverges if last >= est.tol => Verdict::Diverging,
        TailClass::Diverges => Verdict::Inconclusive,
        _ if est.settled() => Verdict::Converged,
        _ => Verdict::Inconclusive,
    }
}

/// Green's function `g(x, y)` as the increasing limit of Dirichlet Green's
/// functions on `B_R(x)`.
///
/// Converged means transient-suspected; diverging means the increments
/// behave like a divergent series (recurrent-suspected). On a finite graph
/// the value is `+inf`.
pub fn green(
    g: &dyn Graph,
    x: &VertexId,
    y: &VertexId,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<MonotoneEstimate, HeatError> {
    let mut est = MonotoneEstimate::new(Direction::Increasing, tol);
    for &r in schedule.radii() {
        let d = exhaustion_domain(g, x, r)?;
        if !d.has_boundary() {
            est.push(r, f64::INFINITY);
            est.exact = true;
            est.verdict = Verdict::Diverging;
            est.limit = Some(f64::INFINITY);
            return Ok(est);
        }
        let Some(py) = d.index_of(y).and_then(|i| d.interior_pos(i)) else {
            continue;
        };
        let u = green_on_domain(&d, x)?;
        est.push(r, u[py]);
        if est.settled() && growth_verdict(&est) == Verdict::Converged {
            break;
        }
    }
    if est.values.is_empty() {
        return Err(HeatError::OutsideBall { vertex: y.clone(), radius: schedule.max() });
    }
    est.verdict = growth_verdict(&est);
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UtVerdict {
    Positive,
    ZeroSuspected,
    Inconclusive,
}

impl fmt::Display for UtVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UtVerdict::Positive => "positive",
            UtVerdict::ZeroSuspected => "zero-suspected",
            UtVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub x: VertexId,
    /// `cap_R(x)`, decreasing in `R`.
    pub capacity: MonotoneEstimate,
    /// `g_R(x, x)`, increasing in `R`.
    pub green: MonotoneEstimate,
    pub verdict: UtVerdict,
}

impl CapacityReport {
    /// `cap_R(x)·g_R(x, x)` at the last radius; 1 up to rounding.
    pub fn reciprocity(&self) -> f64 {
        self.capacity.last().unwrap_or(f64::NAN) * self.green.last().unwrap_or(f64::NAN)
    }
}

/// Capacity of `x` along the exhaustion: for each `R` the minimal energy of
/// `φ` supported in `B_R(x)` with `φ(x) = 1`, attained by the normalized
/// Dirichlet Green's function.
pub fn capacity(
    g: &dyn Graph,
    x: &VertexId,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<CapacityReport, HeatError> {
    let mut cap = MonotoneEstimate::new(Direction::Decreasing, tol);
    let mut gr = MonotoneEstimate::new(Direction::Increasing, tol);
    for &r in schedule.radii() {
        let d = exhaustion_domain(g, x, r)?;
        if !d.has_boundary() {
            cap.push(r, 0.0);
            cap.finish_exact();
            gr.push(r, f64::INFINITY);
            gr.exact = true;
            gr.verdict = Verdict::Diverging;
            return Ok(CapacityReport { x: x.clone(), capacity: cap, green: gr, verdict: UtVerdict::ZeroSuspected });
        }
        let u = green_on_domain(&d, x)?;
        let px = d.interior_pos(d.index_of(x).unwrap()).unwrap();
        let gxx = u[px];
        let phi: HashMap<VertexId, f64> = d
            .interior()
            .iter()
            .zip(&u)
            .map(|(&i, &v)| (d.ids()[i].clone(), v / gxx))
            .collect();
        cap.push(r, energy(g, &phi)?);
        gr.push(r, gxx);
        if cap.settled() && growth_verdict(&gr) == Verdict::Converged {
            break;
        }
    }
    gr.verdict = growth_verdict(&gr);
    cap.verdict = if gr.verdict == Verdict::Diverging {
        Verdict::Inconclusive
    } else if cap.settled() {
        Verdict::Converged
    } else {
        Verdict::Inconclusive
    };
    if gr.verdict == Verdict::Diverging {
        cap.limit = Some(0.0);
    }
    let verdict = match (gr.verdict, cap.verdict) {
        (Verdict::Diverging, _) => UtVerdict::ZeroSuspected,
        (_, Verdict::Converged) if cap.last().unwrap_or(0.0) > 10.0 * tol => UtVerdict::Positive,
        (_, Verdict::Converged) => UtVerdict::ZeroSuspected,
        _ => UtVerdict::Inconclusive,
    };
    Ok(CapacityReport { x: x.clone(), capacity: cap, green: gr, verdict })
}

/// Capacities over a vertex sample; uniform transience needs their infimum
/// to stay positive.
#[derive(Debug, Clone, PartialEq)]
pub struct UtProbe {
    pub reports: Vec<CapacityReport>,
    pub min_capacity: f64,
    pub verdict: UtVerdict,
}

pub fn uniform_transience_probe(
    g: &dyn Graph,
    sample: &[VertexId],
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<UtProbe, HeatError> {
    let reports = sample
        .iter()
        .map(|x| capacity(g, x, tol, schedule))
        .collect::<Result<Vec<_>, _>>()?;
    let min_capacity = reports
        .iter()
        .filter_map(|r| r.capacity.last())
        .fold(f64::INFINITY, f64::min);
    let verdict = if reports.iter().any(|r| r.verdict == UtVerdict::ZeroSuspected) {
        UtVerdict::ZeroSuspected
    } else if !reports.is_empty() && reports.iter().all(|r| r.verdict == UtVerdict::Positive) {
        UtVerdict::Positive
    } else {
        UtVerdict::Inconclusive
    };
    Ok(UtProbe { reports, min_capacity, verdict })
}
