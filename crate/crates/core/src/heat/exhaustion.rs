use std::fmt;

use super::estimate::{Direction, MonotoneEstimate, RadiusSchedule, Verdict};
use super::kernel::DirichletOperator;
use super::HeatError;
use crate::graph::{exhaustion_domain, Graph, VertexId};

/// Minimal heat kernel value approached from below.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatKernelValue {
    pub x: VertexId,
    pub y: VertexId,
    pub t: f64,
    pub estimate: MonotoneEstimate,
}

fn check_tol(tol: f64) -> Result<(), HeatError> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(HeatError::InvalidParameter(format!("tolerance must be positive, got {tol}")))
    }
}

/// `p_t(x, y)` as the increasing limit of Dirichlet kernels on `B_R(x)`.
///
/// Radii at which `y` is not yet interior are skipped. Stops early once two
/// consecutive increments are below `tol` or the graph is exhausted.
pub fn heat_kernel(
    g: &dyn Graph,
    x: &VertexId,
    y: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<HeatKernelValue, HeatError> {
    check_tol(tol)?;
    if !(t >= 0.0) {
        return Err(HeatError::NegativeTime(t));
    }
    let mut est = MonotoneEstimate::new(Direction::Increasing, tol);
    for &r in schedule.radii() {
        let d = exhaustion_domain(g, x, r)?;
        let op = DirichletOperator::new(&d);
        let (Some(px), Some(py)) = (op.position(x), op.position(y)) else {
            if !d.has_boundary() {
                return Err(HeatError::Graph(crate::graph::GraphError::UnknownVertex(y.clone())));
            }
            continue;
        };
        let row = op.kernel_row(px, t)?;
        est.push(r, row[py]);
        if !d.has_boundary() {
            est.finish_exact();
            break;
        }
        if est.settled() {
            est.verdict = Verdict::Converged;
            break;
        }
    }
    if est.values.is_empty() {
        return Err(HeatError::OutsideBall { vertex: y.clone(), radius: schedule.max() });
    }
    Ok(HeatKernelValue { x: x.clone(), y: y.clone(), t, estimate: est })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassVerdict {
    SiSuspected,
    CompleteSuspected,
    Inconclusive,
}

impl fmt::Display for MassVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MassVerdict::SiSuspected => "SI-suspected",
            MassVerdict::CompleteSuspected => "complete-suspected",
            MassVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassReport {
    pub x: VertexId,
    pub t: f64,
    pub estimate: MonotoneEstimate,
    /// Fitted ratio of consecutive mass increments, when geometric.
    pub ratio: Option<f64>,
    pub verdict: MassVerdict,
}

impl MassReport {
    /// `1 - mass`, from the extrapolated limit when available.
    pub fn deficit(&self) -> f64 {
        1.0 - self.estimate.best().unwrap_or(0.0)
    }
}

/// Increments below this are treated as exhausted tails in the geometric fit.
const NEGLIGIBLE_INCREMENT: f64 = 1e-15;

/// Geometric tail fit on the last three increments: returns `(ratio, limit)`
/// when the increments decay geometrically.
fn geometric_extrapolation(values: &[f64]) -> Option<(f64, f64)> {
    let n = values.len();
    if n < 4 {
        return None;
    }
    let last = values[n - 1];
    let d: Vec<f64> = values[n - 4..]
        .windows(2)
        .map(|w| w[1] - w[0])
        .map(|x| if x.abs() <= NEGLIGIBLE_INCREMENT { 0.0 } else { x })
        .collect();
    if d.iter().any(|&x| x < 0.0) || d[1] > d[0] || d[2] > d[1] {
        return None;
    }
    if d[2] == 0.0 {
        return Some((0.0, last));
    }
    if !(d[2] < d[1] && d[1] < d[0]) {
        return None;
    }
    let q = (d[2] / d[0]).sqrt();
    Some((q, last + d[2] * q / (1.0 - q)))
}

/// Heat mass `Σ_y p_t(x, y) m(y)` along the exhaustion with a geometric
/// extrapolation of the tail.
///
/// SI-suspected when the extrapolated limit is below `1 - 10·tol`,
/// complete-suspected when it is within `tol` of 1.
pub fn heat_mass(
    g: &dyn Graph,
    x: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<MassReport, HeatError> {
    check_tol(tol)?;
    if !(t >= 0.0) {
        return Err(HeatError::NegativeTime(t));
    }
    let mut est = MonotoneEstimate::new(Direction::Increasing, tol);
    for &r in schedule.radii() {
        let d = exhaustion_domain(g, x, r)?;
        let op = DirichletOperator::new(&d);
        let px = op
            .position(x)
            .ok_or_else(|| HeatError::OutsideBall { vertex: x.clone(), radius: r })?;
        est.push(r, op.mass(px, t)?);
        if !d.has_boundary() {
            est.finish_exact();
            break;
        }
        if est.settled() && est.values.len() >= 4 {
            est.verdict = Verdict::Converged;
            break;
        }
    }
    let mut ratio = None;
    if !est.exact {
        if let Some((q, limit)) = geometric_extrapolation(&est.values) {
            ratio = Some(q);
            est.limit = Some(limit.min(1.0));
        }
    }
    let verdict = match est.best() {
        _ if est.exact => {
            if (est.last().unwrap() - 1.0).abs() <= tol {
                MassVerdict::CompleteSuspected
            } else {
                MassVerdict::Inconclusive
            }
        }
        Some(limit) if ratio.is_some() && limit < 1.0 - 10.0 * tol => MassVerdict::SiSuspected,
        Some(limit) if ratio.is_some() && (limit - 1.0).abs() <= tol => MassVerdict::CompleteSuspected,
        _ => MassVerdict::Inconclusive,
    };
    Ok(MassReport { x: x.clone(), t, estimate: est, ratio, verdict })
}

/// Bottom of the spectrum via Dirichlet eigenvalues on `B_R(x0)`.
///
/// The values decrease in `R`. For infinite graphs the limit is
/// extrapolated from the last two radii with the model
/// `λ(R) ≈ λ + c/(R+1)^2`, the rate of a Dirichlet path.
pub fn lambda0(
    g: &dyn Graph,
    x0: &VertexId,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<MonotoneEstimate, HeatError> {
    check_tol(tol)?;
    let mut est = MonotoneEstimate::new(Direction::Decreasing, tol);
    for &r in schedule.radii() {
        let d = exhaustion_domain(g, x0, r)?;
        if d.interior().is_empty() {
            return Err(HeatError::InvalidParameter("empty interior".into()));
        }
        let op = DirichletOperator::new(&d);
        let lam = op.bottom_eigenvalue().max(0.0);
        est.push(r, lam);
        if !d.has_boundary() {
            est.finish_exact();
            return Ok(est);
        }
        if est.settled() {
            est.verdict = Verdict::Converged;
            break;
        }
    }
    let n = est.values.len();
    if n >= 2 {
        let (ra, rb) = ((est.radii[n - 2] + 1) as f64, (est.radii[n - 1] + 1) as f64);
        let (la, lb) = (est.values[n - 2], est.values[n - 1]);
        let extrapolated = (lb * rb * rb - la * ra * ra) / (rb * rb - ra * ra);
        est.limit = Some(extrapolated.clamp(0.0, lb));
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BirthDeath, Cycle, Line, RegularTree, Sequence};

    fn v(x: i64) -> VertexId {
        VertexId::scalar(x)
    }

    /// `e^{-x} I_n(x)` by direct power series.
    fn scaled_bessel(n: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = 0.0;
        for k in 0..200u32 {
            sum += term;
            term *= (x / 2.0).powi(2) / (f64::from(k + 1) * f64::from(k + 1 + n));
        }
        sum * (-x).exp()
    }

    #[test]
    fn cycle_is_exact() {
        let c3 = Cycle::standard(3).unwrap();
        let h = heat_kernel(&c3, &v(0), &v(0), 1.0, 1e-10, &RadiusSchedule::up_to(24)).unwrap();
        assert!(h.estimate.exact);
        assert!((h.estimate.last().unwrap() - (1.0 + 2.0 * (-3f64).exp()) / 3.0).abs() < 1e-13);
    }

    #[test]
    fn line_kernel_matches_bessel() {
        let z = Line::standard();
        let h = heat_kernel(&z, &v(0), &v(0), 1.0, 1e-12, &RadiusSchedule::up_to(24)).unwrap();
        assert_eq!(h.estimate.verdict, Verdict::Converged);
        assert!((h.estimate.last().unwrap() - scaled_bessel(0, 2.0)).abs() < 1e-12);
        assert!(h.estimate.is_monotone(1e-12));
        let far = heat_kernel(&z, &v(0), &v(9), 0.0, 1e-12, &RadiusSchedule::up_to(24)).unwrap();
        assert_eq!(far.estimate.last().unwrap(), 0.0);
    }

    #[test]
    fn mass_on_line_and_explosive_chain() {
        let z = Line::standard();
        let m = heat_mass(&z, &v(0), 1.0, 1e-8, &RadiusSchedule::up_to(24)).unwrap();
        assert!((m.estimate.last().unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(m.verdict, MassVerdict::CompleteSuspected);

        let chain = BirthDeath::new(Sequence::parse("4^r").unwrap(), 1.0);
        let m = heat_mass(&chain, &v(0), 1.0, 1e-8, &RadiusSchedule::up_to(24)).unwrap();
        assert_eq!(m.verdict, MassVerdict::SiSuspected, "{m:?}");
        assert!(m.deficit() > 1e-3);

        let c = heat_mass(&Cycle::standard(5).unwrap(), &v(0), 1.0, 1e-8, &RadiusSchedule::up_to(8)).unwrap();
        assert!(c.estimate.exact);
        assert!((c.estimate.last().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda0_examples() {
        let c = lambda0(&Cycle::standard(9).unwrap(), &v(0), 1e-8, &RadiusSchedule::up_to(8)).unwrap();
        assert!(c.exact && c.last().unwrap() < 1e-12);

        let z = Line::standard();
        let l = lambda0(&z, &v(0), 1e-10, &RadiusSchedule::arithmetic(5, 5, 30)).unwrap();
        for (r, lam) in l.radii.iter().zip(&l.values) {
            let exact = 2.0 * (1.0 - (std::f64::consts::PI / (2.0 * *r as f64 + 2.0)).cos());
            assert!((lam - exact).abs() < 1e-12, "R={r}: {lam} vs {exact}");
        }
        assert!(l.is_monotone(1e-12));
        assert!(l.last().unwrap() < 0.01);
    }

    #[test]
    fn lambda0_tree_extrapolates() {
        let tree = RegularTree::new(3).unwrap();
        let l = lambda0(&tree, &v(0), 1e-10, &RadiusSchedule::up_to(12)).unwrap();
        let target = 3.0 - 2.0 * 2f64.sqrt();
        assert!(l.is_monotone(1e-10));
        assert!(l.values.iter().all(|&x| x > target));
        assert!((l.limit.unwrap() - target).abs() < 0.015, "{l:?}");
    }
}
