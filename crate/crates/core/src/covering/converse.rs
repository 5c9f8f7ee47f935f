use std::collections::HashMap;
use std::sync::Arc;

use super::{line_over_cycle, product_cover, CoverError, CoverFactor, CoveringMap};
use crate::feller::{birth_death_nonfeller, uniform_feller_probe, BirthDeathReport, NonFellerVerdict, UniformFellerTable};
use crate::graph::{ball, GraphOracle, Line, ProductWeights, Sequence, VertexId};
use crate::heat::{capacity, CapacityReport, RadiusSchedule};

#[derive(Debug, Clone)]
pub struct ConverseOptions {
    /// Radial measure `m(|z|)` of the weighted line factor.
    pub measure: Sequence,
    /// Length of the radial certificate and of the measure-tail window.
    pub certificate_radius: usize,
    /// Ball around the base root on which the lifted certificate is checked.
    pub lift_radius: usize,
    pub capacity_radius: usize,
    /// Ray length examined in the base probe.
    pub ray_length: usize,
    /// Truncation radius of the base probe; larger than the ray so the
    /// Dirichlet boundary does not depress the rows of interest.
    pub probe_domain: usize,
    pub cover_ray: usize,
    pub horizon: f64,
    pub n_times: usize,
    pub tol: f64,
}

impl Default for ConverseOptions {
    fn default() -> Self {
        ConverseOptions {
            measure: Sequence::parse("4^(-r)").expect("valid default measure"),
            certificate_radius: 40,
            lift_radius: 6,
            capacity_radius: 12,
            ray_length: 15,
            probe_domain: 30,
            cover_ray: 8,
            horizon: 1.0,
            n_times: 16,
            tol: 1e-3,
        }
    }
}

/// Retained fraction below which kernel values along the base ray would
/// count as decaying.
pub const RETENTION_FLOOR: f64 = 0.2;
/// Cover capacity above which the cover counts as uniformly transient.
pub const CAPACITY_FLOOR: f64 = 0.05;

/// Evidence that the weighted line times two triangles is neither Feller
/// nor uniformly transient while its cover by the line times two copies of
/// the integers is both.
#[derive(Debug, Clone)]
pub struct ConverseReport {
    pub covering: CoveringMap,
    /// `Σ_r Σ_{k>r} m(k)`, computed as the partial sums of measure tails.
    pub tail_sum: f64,
    pub chain: BirthDeathReport,
    /// Bounded radial solution of `Lv = -v` off the origin with `v(0) = 1`.
    pub certificate: Vec<f64>,
    /// `max |m(Lv + v)|/v` over radii `1..K` on the weighted line; the
    /// measure weighting avoids dividing cancellation errors by tiny `m`.
    pub certificate_residual: f64,
    /// `min v`; positive means `v` does not vanish at infinity.
    pub certificate_floor: f64,
    /// `max |m(Lw + w)|/w` for `w(z, x1, x2) = v(|z|)` on a base ball, off
    /// `z = 0`.
    pub lift_residual: f64,
    pub cover_capacity: CapacityReport,
    pub base_probe: UniformFellerTable,
    /// `min_{1 <= r <= ray} max_t p_t(x, y_r) / max_t p_t(x, y_1)` on the base.
    pub base_retention: f64,
    pub cover_probe: UniformFellerTable,
}

impl ConverseReport {
    pub fn base_nonfeller(&self) -> bool {
        self.chain.verdict == NonFellerVerdict::NonFellerSuspected
            && self.certificate_floor > 0.0
            && self.base_retention >= RETENTION_FLOOR
    }

    pub fn cover_transient(&self) -> bool {
        self.cover_capacity.capacity.best().is_some_and(|c| c > CAPACITY_FLOOR)
    }

    pub fn cover_decays(&self) -> bool {
        self.cover_probe.is_decreasing()
    }
}

/// Solves `v(r+1) = 2v(r) - v(r-1) + m(r)v(r)` with `v(0) = 1` and the
/// initial slope `-Σ_{k>=1} m(k)v(k)` that keeps `v` bounded, by fixed-point
/// iteration on the slope.
fn radial_resolvent(m: &[f64]) -> Result<Vec<f64>, CoverError> {
    let n = m.len();
    let mut v = vec![1.0; n];
    for _ in 0..200 {
        let slope = -(1..n).map(|k| m[k] * v[k]).sum::<f64>();
        let mut next = vec![1.0; n];
        let mut step = slope;
        for r in 1..n {
            next[r] = next[r - 1] + step;
            step += m[r] * next[r];
        }
        let change = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if change <= 1e-14 {
            return Ok(v);
        }
    }
    Err(CoverError::Invalid("radial certificate iteration did not settle; measure tails too heavy".into()))
}

pub fn converse_counterexample_report(opts: &ConverseOptions) -> Result<ConverseReport, CoverError> {
    let line: GraphOracle = Arc::new(Line::new(1.0, opts.measure.clone()));
    let covering = product_cover(
        vec![
            CoverFactor::Identity(line.clone()),
            CoverFactor::Cover(line_over_cycle(3)?),
            CoverFactor::Cover(line_over_cycle(3)?),
        ],
        ProductWeights::Plain,
    )?;

    let k = opts.certificate_radius;
    let chain = birth_death_nonfeller(&Sequence::Const(1.0), &opts.measure, k)?;
    let tail_sum = chain.tail_mass.partial_sums.last().copied().unwrap_or(f64::NAN);

    let masses = (0..=k)
        .map(|r| opts.measure.positive_at(r as i64, "m(r)"))
        .collect::<Result<Vec<_>, _>>()?;
    let certificate = radial_resolvent(&masses)?;
    let certificate_residual = (1..k)
        .map(|r| {
            let flux = 2.0 * certificate[r] - certificate[r - 1] - certificate[r + 1];
            (flux + masses[r] * certificate[r]).abs() / certificate[r]
        })
        .fold(0.0, f64::max);
    let certificate_floor = certificate.iter().copied().fold(f64::INFINITY, f64::min);

    let base = covering.base.as_ref();
    let region = ball(base, &base.root(), opts.lift_radius.min(k - 1))?;
    let lifted: HashMap<VertexId, f64> = ball(base, &base.root(), opts.lift_radius.min(k - 1) + 1)?
        .vertices()
        .map(|x| (x.clone(), certificate[x.head().unsigned_abs() as usize]))
        .collect();
    let mut lift_residual: f64 = 0.0;
    for x in region.vertices().filter(|x| x.head() != 0) {
        let wx = lifted[x];
        let mut flux = base.measure(x)? * wx;
        for (y, b) in base.neighbors(x)? {
            flux += b * (wx - lifted[&y]);
        }
        lift_residual = lift_residual.max(flux.abs() / wx);
    }

    let cover_capacity = capacity(
        covering.cover.as_ref(),
        &covering.cover.root(),
        opts.tol,
        &RadiusSchedule::arithmetic(2, 2, opts.capacity_radius),
    )?;

    let mut base_probe = uniform_feller_probe(base, &base.root(), opts.horizon, opts.n_times, opts.probe_domain)?;
    base_probe.rows.truncate(opts.ray_length + 1);
    let first = base_probe.rows.get(1).map_or(f64::NAN, |r| r.max_kernel);
    let base_retention = base_probe.rows[1..].iter().map(|r| r.max_kernel / first).fold(f64::INFINITY, f64::min);

    let cover_probe =
        uniform_feller_probe(covering.cover.as_ref(), &covering.cover.root(), opts.horizon, opts.n_times, opts.cover_ray)?;

    Ok(ConverseReport {
        covering,
        tail_sum,
        chain,
        certificate,
        certificate_residual,
        certificate_floor,
        lift_residual,
        cover_capacity,
        base_probe,
        base_retention,
        cover_probe,
    })
}
