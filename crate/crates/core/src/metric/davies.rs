use super::{IntrinsicMetric, MetricError};
use crate::graph::{ball, exhaustion_domain, Graph, VertexId};
use crate::heat::{heat_kernel, DirichletOperator, HeatError, RadiusSchedule};

/// `ζ_j(t, r) = (jr·asinh(jr/t) - sqrt(t^2 + (jr)^2) + t) / j^2`, the
/// exponent of the off-diagonal kernel bound.
pub fn zeta(jump: f64, t: f64, r: f64) -> Result<f64, MetricError> {
    if !(t > 0.0) {
        return Err(MetricError::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if !(jump > 0.0) || !(r >= 0.0) {
        return Err(MetricError::InvalidParameter(format!("need j > 0 and r >= 0, got j = {jump}, r = {r}")));
    }
    let jr = jump * r;
    // t·(sqrt(1 + s^2) - 1) written without cancellation for small jr/t.
    let s = jr / t;
    let root_excess = t * s * s / ((1.0 + s * s).sqrt() + 1.0);
    Ok((jr * s.asinh() - root_excess) / (jump * jump))
}

fn bound(jump: f64, t: f64, rho: f64, mx: f64, my: f64) -> Result<f64, MetricError> {
    Ok((-zeta(jump, t, rho)?).exp() / (mx * my).sqrt())
}

/// `p_t(x, y) - exp(-ζ_j(t, ρ(x, y)))/sqrt(m(x) m(y))`, nonpositive when the
/// bound holds. The kernel is the exhaustion limit from below along
/// `schedule`.
#[allow(clippy::too_many_arguments)]
pub fn davies_bound_residual(
    g: &dyn Graph,
    metric: &IntrinsicMetric,
    jump: f64,
    x: &VertexId,
    y: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<f64, MetricError> {
    let p = heat_kernel(g, x, y, t, tol, schedule)?.estimate.last().unwrap_or(0.0);
    let rho = metric.distance(g, x, y, schedule.max())?;
    Ok(p - bound(jump, t, rho, g.measure(x)?, g.measure(y)?)?)
}

/// Davies residuals over all pairs of a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct DaviesTable {
    pub t: f64,
    pub pairs: usize,
    pub max_residual: f64,
    pub worst_pair: (VertexId, VertexId),
}

/// Residuals for every pair in `B_radius(x0)` at each of `times`, with
/// kernels from the Dirichlet domain of radius `domain_radius >= radius`.
pub fn davies_table(
    g: &dyn Graph,
    metric: &IntrinsicMetric,
    jump: f64,
    x0: &VertexId,
    radius: usize,
    times: &[f64],
    domain_radius: usize,
) -> Result<Vec<DaviesTable>, MetricError> {
    if domain_radius < radius {
        return Err(MetricError::InvalidParameter(format!(
            "domain radius {domain_radius} smaller than table radius {radius}"
        )));
    }
    let region = ball(g, x0, radius)?;
    let domain = exhaustion_domain(g, x0, domain_radius)?;
    let op = DirichletOperator::new(&domain);
    let mut tables: Vec<DaviesTable> = times
        .iter()
        .map(|&t| DaviesTable { t, pairs: 0, max_residual: f64::NEG_INFINITY, worst_pair: (x0.clone(), x0.clone()) })
        .collect();
    for x in region.vertices() {
        let px = op.position(x).ok_or_else(|| HeatError::OutsideBall { vertex: x.clone(), radius: domain_radius })?;
        let rho = metric.distances_from(g, x, 2 * radius + 2)?;
        let mx = g.measure(x)?;
        for table in &mut tables {
            let row = op.kernel_row(px, table.t)?;
            for y in region.vertices() {
                let py = op.position(y).expect("table ball inside the domain");
                let r = rho.get(y).expect("table ball inside the metric ball");
                let residual = row[py] - bound(jump, table.t, r, mx, g.measure(y)?)?;
                table.pairs += 1;
                if residual > table.max_residual {
                    table.max_residual = residual;
                    table.worst_pair = (x.clone(), y.clone());
                }
            }
        }
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feller2Row {
    pub vertex: VertexId,
    pub rho: f64,
    /// `-log m(y)`.
    pub lhs: f64,
    /// `(2ρ/j)(log ρ + C)`.
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feller2Table {
    pub rows: Vec<Feller2Row>,
    /// Vertices with `ρ(x0, y) <= 1`, where the logarithm is not positive.
    pub skipped: Vec<VertexId>,
}

impl Feller2Table {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Feller2Row> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

/// Checks the measure decay condition `-log m(y) <= (2ρ/j)(log ρ + C)`,
/// `ρ = ρ(x0, y)`, for `y` in `B_radius(x0)` outside `B_1(x0)`.
pub fn feller2_check(
    g: &dyn Graph,
    metric: &IntrinsicMetric,
    jump: f64,
    x0: &VertexId,
    constant: f64,
    radius: usize,
) -> Result<Feller2Table, MetricError> {
    if !(jump > 0.0) {
        return Err(MetricError::InvalidParameter(format!("jump size must be positive, got {jump}")));
    }
    let mb = metric.distances_from(g, x0, radius + 2)?;
    let mut table = Feller2Table { rows: Vec::new(), skipped: Vec::new() };
    for r in 2..=radius.min(mb.region.radius()) {
        for y in mb.region.sphere(r) {
            let rho = mb.get(y).expect("sphere inside the metric ball");
            if rho <= 1.0 {
                table.skipped.push(y.clone());
                continue;
            }
            let lhs = -g.measure(y)?.ln();
            let rhs = 2.0 * rho / jump * (rho.ln() + constant);
            table.rows.push(Feller2Row { vertex: y.clone(), rho, lhs, rhs, pass: lhs <= rhs });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BirthDeath, Cycle, Lattice, Line, Sequence};
    use crate::metric::{degree_metric, jump_size};

    fn v(x: i64) -> VertexId {
        VertexId::scalar(x)
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(1.3, 0.7, 0.0).unwrap(), 0.0);
        let direct = |j: f64, t: f64, r: f64| (j * r * (j * r / t).asinh() - (t * t + j * j * r * r).sqrt() + t) / (j * j);
        let asinh_one = (1.0 + 2f64.sqrt()).ln();
        assert!((zeta(1.0, 1.0, 1.0).unwrap() - (asinh_one - 2f64.sqrt() + 1.0)).abs() < 1e-15);
        assert!((zeta(1.0, 1.0, 1.0).unwrap() - 0.467_160_024_646).abs() < 1e-12);
        assert!((zeta(2.0, 1.0, 1.0).unwrap() - direct(2.0, 1.0, 1.0)).abs() < 1e-15);
        assert!((zeta(2.0, 1.0, 1.0).unwrap() - 0.412_800_743_214).abs() < 1e-12);
        assert!(zeta(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn zeta_monotonicity() {
        for &j in &[0.5, 1.0, 2.0] {
            for k in 0..40 {
                let (r, t) = (k as f64 * 0.25, 0.1 + k as f64 * 0.1);
                let z = zeta(j, t, r).unwrap();
                assert!(z >= 0.0);
                assert!(zeta(j, t, r + 0.25).unwrap() >= z);
                assert!(zeta(j, t + 0.1, r).unwrap() <= z);
            }
        }
    }

    #[test]
    fn single_residuals() {
        let z = Line::standard();
        let m = degree_metric();
        let j = 0.5f64.sqrt();
        let sched = RadiusSchedule::up_to(24);
        let r = davies_bound_residual(&z, &m, j, &v(0), &v(5), 1.0, 1e-12, &sched).unwrap();
        assert!(r <= 0.0, "{r}");
        let d = davies_bound_residual(&z, &m, j, &v(2), &v(2), 0.3, 1e-12, &sched).unwrap();
        assert!(d <= 0.0);
        let c3 = Cycle::standard(3).unwrap();
        let r = davies_bound_residual(&c3, &m, jump_size(&c3, &m, &v(0), 1).unwrap(), &v(0), &v(1), 0.5, 1e-12, &sched).unwrap();
        assert!(r <= 0.0);
    }

    #[test]
    fn tables_on_test_graphs() {
        let m = degree_metric();
        let z = Line::standard();
        let z2 = Lattice::new(2).unwrap();
        let bd = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
        let graphs: [(&dyn Graph, VertexId, usize); 3] = [(&z, v(0), 30), (&z2, z2.root(), 20), (&bd, v(0), 30)];
        for (g, x0, dom) in graphs {
            let j = jump_size(g, &m, &x0, dom).unwrap();
            for tab in davies_table(g, &m, j, &x0, 8, &[0.5, 1.0, 2.0], dom).unwrap() {
                assert!(tab.max_residual <= 1e-10, "{}: {tab:?}", g.describe());
            }
        }
    }

    #[test]
    fn measure_decay_criterion() {
        let m = degree_metric();
        let z = Line::standard();
        let unit = feller2_check(&z, &m, 0.5f64.sqrt(), &v(0), 0.0, 20).unwrap();
        assert!(unit.passes() && unit.rows.iter().all(|r| r.lhs == 0.0));

        let g = BirthDeath::new(1.0, Sequence::parse("1/(r+1)^2").unwrap());
        let j = jump_size(&g, &m, &v(0), 100).unwrap();
        let tab = feller2_check(&g, &m, j, &v(0), 1.0, 100).unwrap();
        assert!(tab.passes());
        assert!(tab.rows.iter().any(|r| r.vertex == v(10)));

        let steep = BirthDeath::new(Sequence::parse("exp(-(r+1)^2)").unwrap(), Sequence::parse("exp(-r^2)").unwrap());
        let j = jump_size(&steep, &m, &v(0), 20).unwrap();
        let tab = feller2_check(&steep, &m, j, &v(0), 1.0, 20).unwrap();
        assert!(!tab.passes());
        let first = tab.failures().next().unwrap();
        assert!(first.rho < 15.0);
    }
}
