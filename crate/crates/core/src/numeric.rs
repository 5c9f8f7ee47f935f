//! Small floating-point helpers shared across modules.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Used where a recursion accumulates tiny increments onto an O(1) value and
/// the increments must later be recovered exactly from differences.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleF64 {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleF64 {
    pub fn new(v: f64) -> Self {
        DoubleF64 { hi: v, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    /// `self + a * b` with the product and the sum both error-free before the
    /// final renormalization.
    pub fn add_product(self, a: f64, b: f64) -> Self {
        let p = a * b;
        let p_err = a.mul_add(b, -p);
        let (s, s_err) = two_sum(self.hi, p);
        let lo = self.lo + p_err + s_err;
        let (hi, lo) = fast_two_sum(s, lo);
        DoubleF64 { hi, lo }
    }

    /// `self - other` evaluated as `(hi - hi') + (lo - lo')`; exact in the hi
    /// part whenever the two values are within a factor of two.
    pub fn diff(self, other: DoubleF64) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}

pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Heuristic convergence class of a positive series from its tail terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailClass {
    Diverges,
    Converges,
    Inconclusive,
}

/// Fitted decay of series terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    /// Exponent `p` in `a_r ≈ c·r^(-p)`.
    pub power: f64,
    /// Rate `s` in `a_r ≈ c·exp(-s·r)`; used instead of `power` when the
    /// semi-log fit is clearly better.
    pub rate: f64,
    pub exponential: bool,
    pub class: TailClass,
}

pub const DIVERGE_POWER: f64 = 1.05;
pub const CONVERGE_POWER: f64 = 1.2;

/// Classifies `Σ a_r` from terms `a_r` at indices `r >= 1`, using the last
/// half of the data (at least four points).
///
/// A power fit `a_r ≈ c·r^(-p)` decides: `p <= 1.05` diverges, `p >= 1.2`
/// converges, anything between is inconclusive. If a semi-log fit explains
/// the tail markedly better the exponential rate decides instead.
pub fn classify_tail(r: &[f64], a: &[f64]) -> TailFit {
    let n = r.len();
    let inconclusive = TailFit { power: f64::NAN, rate: f64::NAN, exponential: false, class: TailClass::Inconclusive };
    if n < 4 {
        return inconclusive;
    }
    let start = (n / 2).min(n - 4);
    let (rs, ts) = (&r[start..], &a[start..]);
    if ts.iter().all(|&t| t == 0.0) {
        return TailFit { power: f64::INFINITY, rate: f64::INFINITY, exponential: true, class: TailClass::Converges };
    }
    if ts.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return inconclusive;
    }
    let ly: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let lx: Vec<f64> = rs.iter().map(|x| x.ln()).collect();
    let (ps, pc) = linear_fit(&lx, &ly);
    let (es, ec) = linear_fit(rs, &ly);
    let sse = |x: &[f64], s: f64, c: f64| -> f64 {
        x.iter().zip(&ly).map(|(x, y)| (y - (s * x + c)).powi(2)).sum()
    };
    let power_sse = sse(&lx, ps, pc);
    let exp_sse = sse(rs, es, ec);
    let power = -ps;
    let rate = -es;
    let exponential = exp_sse < 0.25 * power_sse && rate.abs() > 1e-3;
    let class = if exponential {
        if rate > 0.0 {
            TailClass::Converges
        } else {
            TailClass::Diverges
        }
    } else if power <= DIVERGE_POWER {
        TailClass::Diverges
    } else if power >= CONVERGE_POWER {
        TailClass::Converges
    } else {
        TailClass::Inconclusive
    };
    TailFit { power, rate, exponential, class }
}
