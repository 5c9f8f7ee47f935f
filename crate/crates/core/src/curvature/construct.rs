use super::{bakry_emery_bound, ollivier_bd, path_w, BakryEmery, CurvatureError, PathW};
use crate::feller::{birth_death_nonfeller, series_nonfeller, BirthDeathReport, SeriesReport};
use crate::graph::{BirthDeath, Sequence, VertexId};
use crate::numeric::DoubleF64;

/// Slack for the normalized Bakry-Émery bound against its target.
const BE_SLACK: f64 = 1e-8;

fn target(k: &Sequence, r: usize) -> Result<f64, CurvatureError> {
    let v = k.at(r as i64, "k_r")?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CurvatureError::InvalidParameter(format!("k_{r} = {v} is not finite")))
    }
}

/// Curvatures of a chain at one vertex against the prescribed lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub r: usize,
    /// Ollivier-Ricci curvature between `r-1` and `r`.
    pub kappa: f64,
    pub bakry_emery: BakryEmery,
    pub target: f64,
    pub w: PathW,
}

impl CurvatureProfile {
    pub fn kappa_ok(&self, scale: f64) -> bool {
        self.kappa >= self.target - 1e-12 * scale.max(1.0)
    }

    pub fn bakry_emery_ok(&self) -> bool {
        self.bakry_emery.normalized >= self.target - BE_SLACK
    }

    /// The closed-form sign conditions and the eigenvalue bound agree.
    pub fn cross_validated(&self) -> bool {
        self.w.ok == self.bakry_emery_ok()
    }
}

/// Chain with `d_+ = 1` and fast-growing `d_-`: the curvatures satisfy any
/// prescribed lower bounds while the Feller property fails.
#[derive(Debug, Clone)]
pub struct FellerCounterexample {
    pub chain: BirthDeath,
    /// `d_-(0) .. d_-(N+3)`.
    pub dminus: Vec<f64>,
    pub rows: Vec<CurvatureProfile>,
    /// `Σ 1/d_-(r)`, expected to converge.
    pub inverse_inner: SeriesReport,
    pub nonfeller: SeriesReport,
}

impl FellerCounterexample {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|row| {
            row.kappa_ok(self.dminus[row.r]) && row.bakry_emery_ok() && row.w.ok && row.cross_validated()
        })
    }
}

/// Builds the chain from `d_-(r) = d_-(r-1) + max(2 max(k_r, k_{r-1}), 3r^2 - 3r + 1)`
/// with `d_-(0) = 0`, `d_+ = 1`, `m(0) = 1`, and checks both curvature
/// bounds for `r = 1..=n`. The sequence `k` is read from `r = 1`; at
/// `r = 1` only `k_1` enters the maximum.
pub fn build_feller_counterexample(k: &Sequence, n: usize) -> Result<FellerCounterexample, CurvatureError> {
    if n < 3 {
        return Err(CurvatureError::Radius { min: 3, got: n });
    }
    let len = n + 4;
    let targets = (1..len).map(|r| target(k, r)).collect::<Result<Vec<_>, _>>()?;
    let k_at = |r: usize| targets[r - 1];
    let mut dminus = vec![0.0; len];
    let mut m = vec![1.0; len];
    for r in 1..len {
        let kmax = if r == 1 { k_at(1) } else { k_at(r).max(k_at(r - 1)) };
        let cubic = (3 * r * r - 3 * r + 1) as f64;
        dminus[r] = dminus[r - 1] + (2.0 * kmax).max(cubic);
        m[r] = m[r - 1] / dminus[r];
    }
    let chain = BirthDeath::new(Sequence::from_values(&m), Sequence::from_values(&m));
    let dm = |r: usize| dminus[r];
    let rows = (1..=n)
        .map(|r| {
            Ok(CurvatureProfile {
                r,
                kappa: ollivier_bd(&chain, r)?,
                bakry_emery: bakry_emery_bound(&chain, &VertexId::scalar(r as i64))?,
                target: k_at(r),
                w: path_w(dm, |_| 1.0, k_at(r), r)?,
            })
        })
        .collect::<Result<Vec<_>, CurvatureError>>()?;
    let inverse_inner = SeriesReport::from_terms((1..=n).collect(), (1..=n).map(|r| 1.0 / dminus[r]).collect());
    let nonfeller = series_nonfeller(&chain, &VertexId::scalar(0), n)?;
    Ok(FellerCounterexample { chain, dminus, rows, inverse_inner, nonfeller })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactKappaRow {
    pub r: usize,
    /// `C_r = Deg(0) - Σ_{j<=r} k_j`.
    pub c: f64,
    pub kappa: f64,
    pub target: f64,
}

impl ExactKappaRow {
    pub fn error(&self) -> f64 {
        (self.kappa - self.target).abs()
    }
}

/// Chain whose Ollivier-Ricci curvature equals a prescribed sequence.
#[derive(Debug, Clone)]
pub struct ExactKappa {
    pub chain: BirthDeath,
    pub rows: Vec<ExactKappaRow>,
    /// Smallest and largest `b(r, r+1)` over the table.
    pub weight_range: (f64, f64),
    /// `max_r 2^r |b(r, r+1) - b(r-1, r)|`, at most 1 by construction.
    pub step_ratio: f64,
    pub nonfeller: BirthDeathReport,
}

impl ExactKappa {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(ExactKappaRow::error).fold(0.0, f64::max)
    }
}

/// `m(0) = 1`, `b(0, 1) = 2`, `m(r) = 2^-r/(1 + |C_r|)` and
/// `b(r, r+1) = b(r-1, r) + C_r m(r)`, which forces `κ(r) = k_r`. Weights
/// are accumulated in double-double arithmetic so that the curvature can be
/// read back to full precision. Tables extend to `2n + 3` so that measure
/// tails can be summed well past `n`.
pub fn build_exact_kappa(k: &Sequence, n: usize) -> Result<ExactKappa, CurvatureError> {
    if n < 2 {
        return Err(CurvatureError::Radius { min: 2, got: n });
    }
    let len = 2 * n + 4;
    let mut c = vec![2.0; len];
    let mut m = vec![DoubleF64::new(1.0); len];
    let mut b = vec![DoubleF64::new(2.0); len];
    let mut targets = vec![0.0; len];
    for r in 1..len {
        targets[r] = target(k, r)?;
        c[r] = c[r - 1] - targets[r];
        let mr = 0.5f64.powi(r as i32) / (1.0 + c[r].abs());
        m[r] = DoubleF64::new(mr);
        b[r] = b[r - 1].add_product(c[r], mr);
    }
    let weights: Vec<f64> = b.iter().map(|w| w.value()).collect();
    if let Some(bad) = weights.iter().find(|&&w| !(w > 0.0)) {
        return Err(CurvatureError::InvalidParameter(format!("construction produced weight {bad}")));
    }
    let b_seq = Sequence::table(b.clone());
    let m_seq = Sequence::table(m);
    let chain = BirthDeath::new(b_seq.clone(), m_seq.clone());
    let rows = (1..=n)
        .map(|r| Ok(ExactKappaRow { r, c: c[r], kappa: ollivier_bd(&chain, r)?, target: targets[r] }))
        .collect::<Result<Vec<_>, CurvatureError>>()?;
    let weight_range = weights.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &w| (lo.min(w), hi.max(w)));
    let step_ratio = (1..len)
        .map(|r| b[r].diff(b[r - 1]).abs() * 2f64.powi(r as i32))
        .fold(0.0, f64::max);
    let nonfeller = birth_death_nonfeller(&b_seq, &m_seq, n)?;
    Ok(ExactKappa { chain, rows, weight_range, step_ratio, nonfeller })
}
