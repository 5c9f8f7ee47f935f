use std::collections::HashMap;

use super::FellerError;
use crate::graph::{apply_laplacian, ball, Graph, VertexId};
use crate::numeric::{classify_tail, TailClass, TailFit};

/// A certificate counts as vanishing once `v(Rmax) < VANISH_THRESHOLD·v(0)`.
pub const VANISH_THRESHOLD: f64 = 0.01;

/// Slack allowed in `Lv >= λv`.
const SUPERSOLUTION_SLACK: f64 = 1e-12;

fn check_lambda(lambda: f64) -> Result<(), FellerError> {
    if lambda < 0.0 {
        Ok(())
    } else {
        Err(FellerError::NonNegativeLambda(lambda))
    }
}

/// Radial function `v(r) = Π_{i<=r} D_-(i)/(D_-(i) - λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateV {
    pub lambda: f64,
    pub inner: Vec<f64>,
    /// `v(0) .. v(Rmax)`.
    pub values: Vec<f64>,
    /// Largest relative defect of `v(r+1)/v(r) = D_-(r+1)/(D_-(r+1) - λ)`.
    pub recursion_residual: f64,
    pub vanishing: bool,
}

impl CertificateV {
    pub fn rmax(&self) -> usize {
        self.values.len() - 1
    }

    fn at(&self, r: usize) -> f64 {
        self.values.get(r).copied().unwrap_or(0.0)
    }
}

/// Builds `v` from the maximal inner degrees `inner(r)`, `r = 1..=rmax`.
pub fn certificate_v(inner: impl Fn(usize) -> f64, lambda: f64, rmax: usize) -> Result<CertificateV, FellerError> {
    check_lambda(lambda)?;
    let inner: Vec<f64> = (1..=rmax).map(inner).collect();
    if let Some(bad) = inner.iter().find(|&&d| !(d > 0.0)) {
        return Err(FellerError::InvalidParameter(format!("inner degree must be positive, got {bad}")));
    }
    let mut values = Vec::with_capacity(rmax + 1);
    values.push(1.0);
    for &d in &inner {
        let prev = *values.last().unwrap();
        values.push(prev * (d / (d - lambda)));
    }
    let recursion_residual = inner
        .iter()
        .enumerate()
        .map(|(i, &d)| (values[i + 1] / values[i] - d / (d - lambda)).abs() / (d / (d - lambda)))
        .fold(0.0, f64::max);
    let decreasing = values.windows(2).all(|w| w[1] <= w[0]);
    let vanishing = decreasing && values[rmax] < VANISH_THRESHOLD * values[0];
    Ok(CertificateV { lambda, inner, values, recursion_residual, vanishing })
}

/// `min (Lv - λv)` per radius, `v` extended radially from `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateCheck {
    pub radii: Vec<usize>,
    pub residuals: Vec<f64>,
    pub holds: bool,
}

impl CertificateCheck {
    pub fn min_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Checks `Lv >= λv` at every vertex of `B_{Rmax-1}(x0)`, with `v(x)` taken
/// as `v(d(x0, x))`.
pub fn verify_certificate_v(g: &dyn Graph, x0: &VertexId, cert: &CertificateV) -> Result<CertificateCheck, FellerError> {
    let rmax = cert.rmax();
    if rmax == 0 {
        return Ok(CertificateCheck { radii: Vec::new(), residuals: Vec::new(), holds: true });
    }
    let b = ball(g, x0, rmax)?;
    let dist: HashMap<&VertexId, usize> = b.vertices().map(|v| (v, b.distance(v).unwrap())).collect();
    let v = |y: &VertexId| dist.get(y).map(|&r| cert.at(r));
    let mut radii = Vec::new();
    let mut residuals = Vec::new();
    for r in 0..rmax.min(b.radius() + 1) {
        let mut worst = f64::INFINITY;
        for x in b.sphere(r) {
            let lv = apply_laplacian(g, &v, x)?;
            worst = worst.min(lv - cert.lambda * cert.at(r));
        }
        radii.push(r);
        residuals.push(worst);
    }
    let holds = residuals.iter().all(|&e| e >= -SUPERSOLUTION_SLACK);
    Ok(CertificateCheck { radii, residuals, holds })
}

/// Comparison function `w(r) = v0·Π_{i<=r} d_-(i)/(D(i) - λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonW {
    pub lambda: f64,
    /// `w(0) .. w(Rmax)`.
    pub values: Vec<f64>,
    /// Fit of the log-decrements `log((D(i) - λ)/d_-(i))`.
    pub fit: TailFit,
    /// Whether the log-decrements look summable, i.e. `w` stays away from 0.
    pub bounded_below: bool,
    /// Estimated `inf w / v0` when bounded below.
    pub epsilon: Option<f64>,
}

pub fn comparison_w(
    degree: impl Fn(usize) -> f64,
    inner_min: impl Fn(usize) -> f64,
    lambda: f64,
    v0: f64,
    rmax: usize,
) -> Result<ComparisonW, FellerError> {
    check_lambda(lambda)?;
    if !(v0 > 0.0) {
        return Err(FellerError::InvalidParameter(format!("v0 must be positive, got {v0}")));
    }
    let mut values = vec![v0];
    let mut decrements = Vec::with_capacity(rmax);
    for i in 1..=rmax {
        let (d, dm) = (degree(i), inner_min(i));
        if !(dm > 0.0) || d < dm {
            return Err(FellerError::InvalidParameter(format!("need 0 < d_-({i}) <= D({i}), got {dm}, {d}")));
        }
        let factor = dm / (d - lambda);
        values.push(values[i - 1] * factor);
        decrements.push(-factor.ln());
    }
    let radii: Vec<f64> = (1..=rmax).map(|r| r as f64).collect();
    let fit = classify_tail(&radii, &decrements);
    let bounded_below = fit.class == TailClass::Converges;
    let epsilon = bounded_below.then(|| {
        let last = *decrements.last().unwrap();
        let rest = if fit.exponential {
            let q = (-fit.rate).exp();
            last * q / (1.0 - q)
        } else {
            last * rmax as f64 / (fit.power - 1.0)
        };
        values[rmax] / v0 * (-rest).exp()
    });
    Ok(ComparisonW { lambda, values, fit, bounded_below, epsilon })
}
