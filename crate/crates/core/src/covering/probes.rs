use super::{CoverError, CoveringMap, Sheets};
use crate::graph::{exhaustion_domain, VertexId};
use crate::heat::{
    heat_kernel, heat_mass, lambda0, Direction, DirichletOperator, HeatError, HeatKernelValue, MassReport,
    MonotoneEstimate, RadiusSchedule, Verdict,
};

/// Cover kernels summed over a fiber, against the base kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSum {
    pub x_lift: VertexId,
    pub y: VertexId,
    pub t: f64,
    /// `S_R = Σ p~_t^R(x~, y~)` over `y~` over `y` in `B_R(x~)`; increasing.
    pub sums: MonotoneEstimate,
    pub base: HeatKernelValue,
    /// `p_t(x, y) - S_R` per radius, with the base value taken at its best
    /// estimate; a signed lower-bound gap.
    pub residuals: Vec<f64>,
}

impl FiberSum {
    pub fn last_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::NAN)
    }

    pub fn min_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Fiber sum seen from a chosen lift `x_lift`; the base point is its image.
pub fn fiber_sum(
    c: &CoveringMap,
    x_lift: &VertexId,
    y: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<FiberSum, CoverError> {
    if !(tol > 0.0) {
        return Err(CoverError::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    if !c.cover.contains(x_lift) {
        return Err(HeatError::Graph(crate::graph::GraphError::UnknownVertex(x_lift.clone())).into());
    }
    let x = c.project(x_lift);
    let base = heat_kernel(c.base.as_ref(), &x, y, t, tol, schedule)?;
    let mut sums = MonotoneEstimate::new(Direction::Increasing, tol);
    for &r in schedule.radii() {
        let d = exhaustion_domain(c.cover.as_ref(), x_lift, r)?;
        let op = DirichletOperator::new(&d);
        let px = op.position(x_lift).expect("center is interior");
        let row = op.kernel_row(px, t)?;
        let s: f64 = c
            .fiber(y, x_lift, r)?
            .iter()
            .filter_map(|(v, _)| op.position(v))
            .map(|q| row[q])
            .sum();
        sums.push(r, s);
        if !d.has_boundary() {
            sums.finish_exact();
            break;
        }
        if sums.settled() {
            sums.verdict = Verdict::Converged;
            break;
        }
    }
    let target = base.estimate.best().unwrap_or(f64::NAN);
    let residuals = sums.values.iter().map(|s| target - s).collect();
    Ok(FiberSum { x_lift: x_lift.clone(), y: y.clone(), t, sums, base, residuals })
}

/// Fiber sum from the canonical lift of the base vertex `x`.
pub fn fiber_sum_residual(
    c: &CoveringMap,
    x: &VertexId,
    y: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<FiberSum, CoverError> {
    fiber_sum(c, &c.lift(x)?, y, t, tol, schedule)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SheetCheck {
    pub sheets: usize,
    pub cover_diagonal: f64,
    pub base_diagonal: f64,
    /// `n·p~_t(x~, x~) - p_t(x, x)`, nonnegative in theory.
    pub residual: f64,
}

/// Diagonal comparison for finitely many sheets.
pub fn diag_sheet_check(
    c: &CoveringMap,
    x: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<SheetCheck, CoverError> {
    let Sheets::Finite(n) = c.sheets() else {
        return Err(CoverError::InfiniteSheets);
    };
    let xl = c.lift(x)?;
    let base = heat_kernel(c.base.as_ref(), x, x, t, tol, schedule)?.estimate.best().unwrap_or(f64::NAN);
    let cover = heat_kernel(c.cover.as_ref(), &xl, &xl, t, tol, schedule)?.estimate.best().unwrap_or(f64::NAN);
    Ok(SheetCheck { sheets: n, cover_diagonal: cover, base_diagonal: base, residual: n as f64 * cover - base })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaComparison {
    pub base: MonotoneEstimate,
    pub cover: MonotoneEstimate,
    /// Cover estimate minus base estimate.
    pub gap: f64,
    /// `gap >= -tol`, and `|gap| < tol` for finitely many sheets.
    pub holds: bool,
}

/// Bottom of the spectrum on both sides, each exhausted around its root.
pub fn lambda0_compare(c: &CoveringMap, tol: f64, schedule: &RadiusSchedule) -> Result<LambdaComparison, CoverError> {
    let base = lambda0(c.base.as_ref(), &c.base.root(), tol, schedule)?;
    let cover = lambda0(c.cover.as_ref(), &c.cover.root(), tol, schedule)?;
    let gap = cover.best().unwrap_or(f64::NAN) - base.best().unwrap_or(f64::NAN);
    let holds = gap >= -tol && (c.sheets() == Sheets::Infinite || gap.abs() < tol);
    Ok(LambdaComparison { base, cover, gap, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassComparison {
    pub base: MassReport,
    pub cover: MassReport,
    /// `|deficit(base) - deficit(cover)|`.
    pub difference: f64,
}

/// Heat mass on base and cover over the same radius schedule, from `x_lift`
/// and its image.
pub fn mass_deficit_compare(
    c: &CoveringMap,
    x_lift: &VertexId,
    t: f64,
    tol: f64,
    schedule: &RadiusSchedule,
) -> Result<MassComparison, CoverError> {
    if !(t > 0.0) {
        return Err(CoverError::Invalid(format!("time must be positive, got {t}")));
    }
    let base = heat_mass(c.base.as_ref(), &c.project(x_lift), t, tol, schedule)?;
    let cover = heat_mass(c.cover.as_ref(), x_lift, t, tol, schedule)?;
    let difference = (base.deficit() - cover.deficit()).abs();
    Ok(MassComparison { base, cover, difference })
}
