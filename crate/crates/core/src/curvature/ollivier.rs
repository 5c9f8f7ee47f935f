use super::CurvatureError;
use crate::graph::BirthDeath;
use crate::numeric::DoubleF64;

/// `b(r, r+1)` in split form, with `b(-1, 0) = 0`.
fn edge(chain: &BirthDeath, r: i64) -> Result<DoubleF64, CurvatureError> {
    if r < 0 {
        return Ok(DoubleF64::default());
    }
    chain.edge_weight(r)?;
    Ok(chain.b.at_split(r, "b(r,r+1)")?)
}

/// Curvature between `r-1` and `r` on a birth-death chain:
/// `(b(r-1,r) - b(r-2,r-1))/m(r-1) - (b(r,r+1) - b(r-1,r))/m(r)`.
///
/// Differences of weights are taken on the split representation, so chains
/// built from tiny increments keep full relative accuracy.
pub fn ollivier_bd(chain: &BirthDeath, r: usize) -> Result<f64, CurvatureError> {
    if r < 1 {
        return Err(CurvatureError::Radius { min: 1, got: r });
    }
    let r = r as i64;
    let (b2, b1, b0) = (edge(chain, r - 2)?, edge(chain, r - 1)?, edge(chain, r)?);
    let (m1, m0) = (chain.vertex_measure(r - 1)?, chain.vertex_measure(r)?);
    Ok(b1.diff(b2) / m1 - b0.diff(b1) / m0)
}

/// Quantities whose signs decide `K_BE(r) >= k_r` on a birth-death chain
/// with normalized Γ-calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathW {
    pub minus: f64,
    pub plus: f64,
    pub ok: bool,
}

/// `W_-(r) = -d_-(r-1) + 3d_+(r-1) + d_-(r) - d_+(r) - 2k` and
/// `W_+(r) = -d_+(r+1) + 3d_-(r+1) + d_+(r) - d_-(r) - 2k`; the bound holds
/// iff both are nonnegative and `W_- W_+ >= 4 d_-(r) d_+(r)`.
pub fn path_w(
    dminus: impl Fn(usize) -> f64,
    dplus: impl Fn(usize) -> f64,
    k: f64,
    r: usize,
) -> Result<PathW, CurvatureError> {
    if r < 1 {
        return Err(CurvatureError::Radius { min: 1, got: r });
    }
    let minus = -dminus(r - 1) + 3.0 * dplus(r - 1) + dminus(r) - dplus(r) - 2.0 * k;
    let plus = -dplus(r + 1) + 3.0 * dminus(r + 1) + dplus(r) - dminus(r) - 2.0 * k;
    let ok = minus >= 0.0 && plus >= 0.0 && minus * plus >= 4.0 * dminus(r) * dplus(r);
    Ok(PathW { minus, plus, ok })
}
