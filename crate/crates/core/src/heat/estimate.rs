use std::fmt;

/// Tri-state outcome of a finite computation about an infinite limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    Diverging,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converged => "converged",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Monotone values along an exhaustion `R_1 < R_2 < ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneEstimate {
    pub radii: Vec<usize>,
    pub values: Vec<f64>,
    pub direction: Direction,
    pub tol: f64,
    pub verdict: Verdict,
    /// Extrapolated limit, when a model for the tail was fitted.
    pub limit: Option<f64>,
    /// The last domain had no boundary, so the last value is the limit.
    pub exact: bool,
}

/// Slack allowed against the declared direction before a sequence counts as
/// non-monotone.
pub const MONOTONE_SLACK: f64 = 1e-12;

impl MonotoneEstimate {
    pub fn new(direction: Direction, tol: f64) -> Self {
        MonotoneEstimate {
            radii: Vec::new(),
            values: Vec::new(),
            direction,
            tol,
            verdict: Verdict::Inconclusive,
            limit: None,
            exact: false,
        }
    }

    pub fn push(&mut self, radius: usize, value: f64) {
        self.radii.push(radius);
        self.values.push(value);
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Best available value: the extrapolated limit if any, else the last.
    pub fn best(&self) -> Option<f64> {
        self.limit.or_else(|| self.last())
    }

    /// Signed differences `v_{k+1} - v_k`.
    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn last_increment(&self) -> Option<f64> {
        self.increments().last().copied()
    }

    /// True when the last two increments are below `tol` in magnitude.
    pub fn settled(&self) -> bool {
        let inc = self.increments();
        inc.len() >= 2 && inc[inc.len() - 2..].iter().all(|d| d.abs() < self.tol)
    }

    pub fn is_monotone(&self, slack: f64) -> bool {
        self.increments().iter().all(|&d| match self.direction {
            Direction::Increasing => d >= -slack,
            Direction::Decreasing => d <= slack,
        })
    }

    /// Marks the estimate exact (finite graph fully covered).
    pub(crate) fn finish_exact(&mut self) {
        self.exact = true;
        self.verdict = Verdict::Converged;
        self.limit = self.last();
    }
}

/// Radii at which an exhaustion is evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusSchedule(Vec<usize>);

impl RadiusSchedule {
    /// `start, start + step, ...` up to `max`, always ending at `max`.
    pub fn arithmetic(start: usize, step: usize, max: usize) -> Self {
        let step = step.max(1);
        let mut radii: Vec<usize> = (start..=max).step_by(step).collect();
        if radii.last() != Some(&max) {
            radii.push(max);
        }
        RadiusSchedule(radii)
    }

    /// Default schedule `4, 8, 12, ...` up to `max`.
    pub fn up_to(max: usize) -> Self {
        RadiusSchedule::arithmetic(4.min(max), 4, max)
    }

    pub fn explicit(mut radii: Vec<usize>) -> Self {
        radii.sort_unstable();
        radii.dedup();
        RadiusSchedule(radii)
    }

    pub fn radii(&self) -> &[usize] {
        &self.0
    }

    pub fn max(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }
}
