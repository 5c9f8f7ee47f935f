use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

use super::CurvatureError;
use crate::graph::{apply_laplacian, ball, Graph, GraphError, VertexId};

type Func<'a> = &'a dyn Fn(&VertexId) -> Option<f64>;

fn gamma_rec(g: &dyn Graph, order: u32, f: Func, h: Func, x: &VertexId) -> Result<f64, GraphError> {
    if order == 0 {
        let fx = f(x).ok_or_else(|| GraphError::MissingValue(x.clone()))?;
        let hx = h(x).ok_or_else(|| GraphError::MissingValue(x.clone()))?;
        return Ok(fx * hx);
    }
    let prev = |y: &VertexId| gamma_rec(g, order - 1, f, h, y).ok();
    let lf = |y: &VertexId| apply_laplacian(g, f, y).ok();
    let lh = |y: &VertexId| apply_laplacian(g, h, y).ok();
    Ok(-apply_laplacian(g, &prev, x)? + gamma_rec(g, order - 1, &lf, h, x)? + gamma_rec(g, order - 1, f, &lh, x)?)
}

/// `Γ_k(f, h)(x)` by the recursion `Γ_0(f, h) = fh`,
/// `Γ_k(f, h) = -L Γ_{k-1}(f, h) + Γ_{k-1}(Lf, h) + Γ_{k-1}(f, Lh)`, with no
/// normalizing factors. Both functions must be defined on `B_k(x)`.
pub fn gamma(g: &dyn Graph, order: u32, f: Func, h: Func, x: &VertexId) -> Result<f64, CurvatureError> {
    gamma_rec(g, order, f, h, x).map_err(|e| match e {
        GraphError::MissingValue(_) => CurvatureError::InsufficientSupport { center: x.clone(), needed: order as usize },
        other => other.into(),
    })
}

/// Matrices of `Γ_1(·,·)(x)` and `Γ_2(·,·)(x)` on functions over `B_2(x)`
/// vanishing at `x`, in the basis of indicator functions.
#[derive(Debug, Clone)]
pub struct GammaForms {
    pub center: VertexId,
    /// Basis vertices: the sphere of radius 1 first, then radius 2.
    pub basis: Vec<VertexId>,
    pub inner: usize,
    pub first: DMatrix<f64>,
    pub second: DMatrix<f64>,
}

pub fn gamma_forms(g: &dyn Graph, x: &VertexId) -> Result<GammaForms, CurvatureError> {
    let b = ball(g, x, 2)?;
    let basis: Vec<VertexId> = b.sphere(1).iter().chain(b.sphere(2)).cloned().collect();
    let inner = b.sphere(1).len();
    let pos: HashMap<&VertexId, usize> = basis.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let indicator = |i: usize| {
        let pos = &pos;
        let b = &b;
        move |y: &VertexId| -> Option<f64> {
            b.distance(y)?;
            Some(if pos.get(y) == Some(&i) { 1.0 } else { 0.0 })
        }
    };
    let n = basis.len();
    let mut first = DMatrix::zeros(n, n);
    let mut second = DMatrix::zeros(n, n);
    for i in 0..n {
        let fi = indicator(i);
        for j in i..n {
            let fj = indicator(j);
            let g1 = gamma(g, 1, &fi, &fj, x)?;
            let g2 = gamma(g, 2, &fi, &fj, x)?;
            first[(i, j)] = g1;
            first[(j, i)] = g1;
            second[(i, j)] = g2;
            second[(j, i)] = g2;
        }
    }
    Ok(GammaForms { center: x.clone(), basis, inner, first, second })
}

/// Largest `K` with `Γ_2(f, f)(x) >= K Γ_1(f, f)(x)` for all `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BakryEmery {
    /// With `Γ_k` exactly as the recursion defines them.
    pub literal: f64,
    /// With the usual `1/2` factors in `Γ_1` and `Γ_2`; equals `literal/2`.
    pub normalized: f64,
}

impl BakryEmery {
    fn new(literal: f64) -> Self {
        BakryEmery { literal, normalized: literal / 2.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.literal.is_finite()
    }
}

/// Relative threshold below which eigenvalues count as zero.
const NULL_TOL: f64 = 1e-12;

/// Curvature bound at `x` as a generalized eigenvalue problem.
///
/// Functions are normalized by `f(x) = 0`. `Γ_1(f, f)(x)` only sees the
/// values on the neighbors, so the values on the second sphere span its null
/// space. If `Γ_2` is negative there (or couples to the neighbors along a
/// direction where it vanishes) no finite `K` works and `-inf` is returned;
/// otherwise the second-sphere values are eliminated by a Schur complement.
pub fn bakry_emery_bound(g: &dyn Graph, x: &VertexId) -> Result<BakryEmery, CurvatureError> {
    let forms = gamma_forms(g, x)?;
    Ok(BakryEmery::new(bound_from_forms(&forms)))
}

fn bound_from_forms(forms: &GammaForms) -> f64 {
    let (n, k) = (forms.basis.len(), forms.inner);
    let a = forms.first.view((0, 0), (k, k)).into_owned();
    let p = forms.second.view((0, 0), (k, k)).into_owned();
    let r = forms.second.view((0, k), (k, n - k)).into_owned();
    let s = forms.second.view((k, k), (n - k, n - k)).into_owned();
    let scale = forms.second.amax().max(1.0);

    let mut schur = p;
    if n > k {
        let eig = SymmetricEigen::new(s);
        for (idx, &sigma) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(idx);
            let coupling = &r * v;
            if sigma < -NULL_TOL * scale {
                return f64::NEG_INFINITY;
            }
            if sigma <= NULL_TOL * scale {
                if coupling.amax() > 1e-9 * scale {
                    return f64::NEG_INFINITY;
                }
                continue;
            }
            schur -= &coupling * coupling.transpose() / sigma;
        }
    }
    let Some(chol) = a.cholesky() else {
        return f64::NEG_INFINITY;
    };
    let l_inv = chol.l().try_inverse().expect("Cholesky factor is invertible");
    let reduced = &l_inv * schur * l_inv.transpose();
    let reduced = (&reduced + reduced.transpose()) / 2.0;
    SymmetricEigen::new(reduced).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}
