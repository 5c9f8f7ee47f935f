use super::FellerError;
use crate::graph::{ball, exhaustion_domain, weighted_degree, Graph, VertexId};
use crate::heat::{DirichletOperator, HeatError};

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub distance: usize,
    pub vertex: VertexId,
    /// `max_t p_t(x, y)` over the grid.
    pub max_kernel: f64,
    pub argmax_time: f64,
    pub kernel_at_horizon: f64,
    /// `max_t (p_t(x, y) - e^{T·Deg(x)} p_T(x, y))`, nonpositive in theory.
    pub comparison_residual: f64,
}

/// Decay of `sup_{t <= T} p_t(x, ·)` along a geodesic ray.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformFellerTable {
    pub x: VertexId,
    pub horizon: f64,
    pub times: Vec<f64>,
    pub rows: Vec<ProbeRow>,
}

impl UniformFellerTable {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.comparison_residual).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether the row maxima decrease along the ray.
    pub fn is_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_kernel <= w[0].max_kernel)
    }
}

/// Ray from `x` choosing the smallest vertex of the next sphere among the
/// neighbors of the current one.
fn geodesic_ray(g: &dyn Graph, x: &VertexId, length: usize) -> Result<Vec<VertexId>, FellerError> {
    let b = ball(g, x, length)?;
    let mut ray = vec![x.clone()];
    for r in 1..=b.radius() {
        let cur = ray.last().unwrap();
        let next = g
            .neighbors(cur)?
            .into_iter()
            .map(|(y, _)| y)
            .filter(|y| b.distance(y) == Some(r))
            .min();
        match next {
            Some(y) => ray.push(y),
            None => break,
        }
    }
    Ok(ray)
}

/// Tabulates `p_t(x, y)` on the grid `t = kT/(n-1)` for `y` on a ray of
/// length `rmax`, using the Dirichlet kernel of the exhaustion domain of
/// radius `rmax`. Each grid value is compared with `e^{T·Deg(x)} p_T(x, y)`.
pub fn uniform_feller_probe(
    g: &dyn Graph,
    x: &VertexId,
    horizon: f64,
    n_times: usize,
    rmax: usize,
) -> Result<UniformFellerTable, FellerError> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(FellerError::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    if n_times < 2 {
        return Err(FellerError::InvalidParameter(format!("need at least 2 grid times, got {n_times}")));
    }
    let times: Vec<f64> = (0..n_times)
        .map(|k| if k + 1 == n_times { horizon } else { horizon * k as f64 / (n_times - 1) as f64 })
        .collect();
    let ray = geodesic_ray(g, x, rmax)?;
    let domain = exhaustion_domain(g, x, rmax)?;
    let op = DirichletOperator::new(&domain);
    let px = op
        .position(x)
        .ok_or_else(|| HeatError::OutsideBall { vertex: x.clone(), radius: rmax })?;
    let kernels = times.iter().map(|&t| op.kernel_row(px, t)).collect::<Result<Vec<_>, _>>()?;
    let growth = (horizon * weighted_degree(g, x)? / g.measure(x)?).exp();
    let mut rows = Vec::with_capacity(ray.len());
    for (distance, y) in ray.into_iter().enumerate() {
        let Some(py) = op.position(&y) else { break };
        let at_horizon = kernels[n_times - 1][py];
        let mut row = ProbeRow {
            distance,
            vertex: y,
            max_kernel: f64::NEG_INFINITY,
            argmax_time: 0.0,
            kernel_at_horizon: at_horizon,
            comparison_residual: f64::NEG_INFINITY,
        };
        for (&t, k) in times.iter().zip(&kernels) {
            let p = k[py];
            if p > row.max_kernel {
                row.max_kernel = p;
                row.argmax_time = t;
            }
            row.comparison_residual = row.comparison_residual.max(p - growth * at_horizon);
        }
        rows.push(row);
    }
    Ok(UniformFellerTable { x: x.clone(), horizon, times, rows })
}
