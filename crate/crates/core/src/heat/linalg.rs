//! Sparse symmetric kernels used when a domain is too large for dense
//! factorizations: CSR storage, Jacobi-preconditioned conjugate gradients and
//! Lanczos with full reorthogonalization.

use nalgebra::{DMatrix, SymmetricEigen};

/// Symmetric matrix in compressed sparse row form (both triangles stored).
#[derive(Debug, Clone)]
pub struct SymCsr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymCsr {
    /// Builds from per-row entry lists; rows need not be sorted.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        SymCsr { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, out) in y.iter_mut().enumerate().take(self.n) {
            *out = (self.row_ptr[i]..self.row_ptr[i + 1]).map(|k| self.vals[k] * x[self.cols[k]]).sum();
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .find(|&k| self.cols[k] == i)
                    .map_or(0.0, |k| self.vals[k])
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[k])] += self.vals[k];
            }
        }
        m
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("conjugate gradients stalled after {iterations} iterations (relative residual {residual:e})")]
pub struct CgFailure {
    pub iterations: usize,
    pub residual: f64,
}

/// Solves `A x = b` for symmetric positive definite `A`.
pub fn conjugate_gradient(a: &SymCsr, b: &[f64], rtol: f64) -> Result<Vec<f64>, CgFailure> {
    let n = a.dim();
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 }).collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let max_iter = 20 * n + 100;
    for it in 0..max_iter {
        a.matvec(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let res = norm(&r) / bnorm;
        if res < rtol {
            return Ok(x);
        }
        if !res.is_finite() {
            return Err(CgFailure { iterations: it, residual: res });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(CgFailure { iterations: max_iter, residual: norm(&r) / bnorm })
}

/// Orthonormal Krylov basis and the tridiagonal projection of `A`.
struct Krylov<'a> {
    a: &'a SymCsr,
    basis: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    exhausted: bool,
}

impl<'a> Krylov<'a> {
    fn new(a: &'a SymCsr, start: &[f64]) -> Self {
        let s = norm(start);
        let v: Vec<f64> = start.iter().map(|x| x / s).collect();
        Krylov { a, basis: vec![v], alpha: Vec::new(), beta: Vec::new(), exhausted: false }
    }

    fn steps(&self) -> usize {
        self.alpha.len()
    }

    /// One Lanczos step with two passes of full reorthogonalization.
    fn step(&mut self) {
        let k = self.alpha.len();
        let mut w = vec![0.0; self.a.dim()];
        self.a.matvec(&self.basis[k], &mut w);
        let scale = norm(&w).max(f64::MIN_POSITIVE);
        self.alpha.push(dot(&w, &self.basis[k]));
        for _ in 0..2 {
            for v in &self.basis {
                let c = dot(&w, v);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= c * vi;
                }
            }
        }
        let b = norm(&w);
        if b <= 1e-13 * scale || k + 1 == self.a.dim() {
            self.exhausted = true;
            return;
        }
        self.beta.push(b);
        self.basis.push(w.into_iter().map(|x| x / b).collect());
    }

    fn tridiagonal(&self) -> DMatrix<f64> {
        let m = self.alpha.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = self.alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = self.beta[i];
                t[(i + 1, i)] = self.beta[i];
            }
        }
        t
    }
}

/// `exp(-t A) v` by Lanczos, enlarging the Krylov space until the projected
/// solution changes by less than `rtol` relative to `|v|`.
pub fn expm_action(a: &SymCsr, v: &[f64], t: f64, rtol: f64) -> Vec<f64> {
    let vnorm = norm(v);
    if vnorm == 0.0 || t == 0.0 {
        return v.to_vec();
    }
    let mut kry = Krylov::new(a, v);
    let mut prev: Option<Vec<f64>> = None;
    let chunk = 8;
    loop {
        for _ in 0..chunk {
            kry.step();
            if kry.exhausted {
                break;
            }
        }
        let t_mat = kry.tridiagonal();
        let eig = SymmetricEigen::new(t_mat);
        let m = kry.steps();
        // coefficients = Q exp(-t Theta) Q^T e1
        let coeffs: Vec<f64> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| eig.eigenvectors[(i, k)] * (-t * eig.eigenvalues[k]).exp() * eig.eigenvectors[(0, k)])
                    .sum()
            })
            .collect();
        let converged = match &prev {
            Some(p) => {
                let diff: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c - p.get(i).copied().unwrap_or(0.0)).powi(2))
                    .sum::<f64>()
                    .sqrt();
                diff < rtol
            }
            None => false,
        };
        if converged || kry.exhausted || m >= a.dim() {
            let mut out = vec![0.0; a.dim()];
            for (c, basis) in coeffs.iter().zip(&kry.basis) {
                for (o, b) in out.iter_mut().zip(basis) {
                    *o += vnorm * c * b;
                }
            }
            return out;
        }
        prev = Some(coeffs);
    }
}

/// Smallest eigenvalue of `A`, Krylov space seeded with `start`. Converged
/// when the Ritz residual drops below `rtol` times the spectral scale.
pub fn smallest_eigenvalue(a: &SymCsr, start: &[f64], rtol: f64) -> f64 {
    let mut kry = Krylov::new(a, start);
    let scale = a.diagonal().iter().fold(0.0_f64, |m, d| m.max(d.abs())).max(1e-300);
    loop {
        for _ in 0..8 {
            kry.step();
            if kry.exhausted {
                break;
            }
        }
        let eig = SymmetricEigen::new(kry.tridiagonal());
        let m = kry.steps();
        let (k, theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        let beta_last = kry.beta.get(m - 1).copied().unwrap_or(0.0);
        let residual = (beta_last * eig.eigenvectors[(m - 1, k)]).abs();
        if kry.exhausted || residual < rtol * scale || m >= a.dim() {
            return theta;
        }
    }
}

/// Ratio of extreme diagonal entries beyond which a matrix counts as graded.
pub const GRADED_RATIO: f64 = 1e6;

/// Whether the diagonal spans more than [`GRADED_RATIO`].
pub fn is_graded(a: &DMatrix<f64>) -> bool {
    let (lo, hi) = a.diagonal().iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| (lo.min(d.abs()), hi.max(d.abs())));
    hi > GRADED_RATIO * lo
}

/// Cyclic Jacobi eigensolver with the relative stopping test
/// `|a_pq| <= eps·sqrt(|a_pp a_qq|)`. On positive definite matrices of the
/// form `DKD` with `K` well conditioned it resolves small eigenvalues and
/// their eigenvectors to high relative accuracy, which Householder
/// reduction does not.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let n = a.nrows();
    let mut m: Vec<f64> = a.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let at = |i: usize, j: usize| i + n * j;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[at(p, q)];
                let (app, aqq) = (m[at(p, p)], m[at(q, q)]);
                if apq == 0.0 || apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                m[at(p, p)] = app - t * apq;
                m[at(q, q)] = aqq + t * apq;
                m[at(p, q)] = 0.0;
                m[at(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let (g, h) = (m[at(r, p)], m[at(r, q)]);
                        let (gp, hq) = (g - s * (h + g * tau), h + s * (g - h * tau));
                        m[at(r, p)] = gp;
                        m[at(r, q)] = hq;
                        m[at(p, r)] = gp;
                        m[at(q, r)] = hq;
                    }
                    let (g, h) = (v[at(r, p)], v[at(r, q)]);
                    v[at(r, p)] = g - s * (h + g * tau);
                    v[at(r, q)] = h + s * (g - h * tau);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let eigenvalues = nalgebra::DVector::from_fn(n, |i, _| m[at(i, i)]);
    SymmetricEigen { eigenvalues, eigenvectors: DMatrix::from_vec(n, n, v) }
}
