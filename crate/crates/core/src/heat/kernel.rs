use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

use super::linalg::{expm_action, is_graded, jacobi_eigen, smallest_eigenvalue, SymCsr};
use super::HeatError;
use crate::graph::{DirichletDomain, VertexId};

/// Largest interior handled by dense eigendecomposition; bigger domains use
/// Krylov methods.
pub const DENSE_LIMIT: usize = 2000;

/// Largest graded interior handled by the Jacobi eigensolver.
pub const JACOBI_LIMIT: usize = 700;

/// Relative accuracy of Krylov matrix-exponential actions.
pub const KRYLOV_RTOL: f64 = 1e-12;

enum Backend {
    Dense(SymmetricEigen<f64, nalgebra::Dyn>),
    Sparse(SymCsr),
    Empty,
}

/// The Dirichlet Laplacian of a domain, symmetrized by conjugation with
/// `sqrt(m)`: `A = M^(1/2) L_D M^(-1/2)` on the interior, so that
/// `p_t(x, y) = [exp(-tA)]_{xy} / sqrt(m(x) m(y))`.
pub struct DirichletOperator<'d> {
    domain: &'d DirichletDomain,
    sqrt_m: Vec<f64>,
    backend: Backend,
}

fn symmetrized_rows(d: &DirichletDomain) -> Vec<Vec<(usize, f64)>> {
    d.interior()
        .iter()
        .map(|&i| {
            let mi = d.measure(i);
            let mut row = vec![(d.interior_pos(i).unwrap(), d.degree(i))];
            for &(j, b) in d.arcs(i) {
                if let Some(q) = d.interior_pos(j) {
                    if j != i {
                        row.push((q, -b / (mi * d.measure(j)).sqrt()));
                    }
                }
            }
            row
        })
        .collect()
}

impl<'d> DirichletOperator<'d> {
    pub fn new(domain: &'d DirichletDomain) -> Self {
        let sqrt_m = domain.interior().iter().map(|&i| domain.measure(i).sqrt()).collect();
        let n = domain.interior().len();
        let backend = if n == 0 {
            Backend::Empty
        } else {
            let csr = SymCsr::from_rows(symmetrized_rows(domain));
            if n <= DENSE_LIMIT {
                let dense = csr.to_dense();
                // Strongly varying degrees defeat Householder reduction.
                Backend::Dense(if n <= JACOBI_LIMIT && is_graded(&dense) {
                    jacobi_eigen(&dense)
                } else {
                    SymmetricEigen::new(dense)
                })
            } else {
                Backend::Sparse(csr)
            }
        };
        DirichletOperator { domain, sqrt_m, backend }
    }

    pub fn domain(&self) -> &DirichletDomain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.sqrt_m.len()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backend, Backend::Dense(_))
    }

    /// Interior position of a vertex, if it is interior.
    pub fn position(&self, x: &VertexId) -> Option<usize> {
        self.domain.index_of(x).and_then(|i| self.domain.interior_pos(i))
    }

    /// `p_t(x, ·)` on the interior, `x` given by interior position.
    pub fn kernel_row(&self, x: usize, t: f64) -> Result<Vec<f64>, HeatError> {
        check_time(t)?;
        let n = self.dim();
        if t == 0.0 {
            let mut row = vec![0.0; n];
            row[x] = 1.0 / (self.sqrt_m[x] * self.sqrt_m[x]);
            return Ok(row);
        }
        let mut row = match &self.backend {
            Backend::Empty => return Ok(Vec::new()),
            Backend::Dense(eig) => {
                let w: Vec<f64> = (0..n)
                    .map(|k| (-t * eig.eigenvalues[k]).exp() * eig.eigenvectors[(x, k)])
                    .collect();
                (0..n)
                    .map(|y| (0..n).map(|k| eig.eigenvectors[(y, k)] * w[k]).sum())
                    .collect::<Vec<f64>>()
            }
            Backend::Sparse(a) => {
                let mut e = vec![0.0; n];
                e[x] = 1.0;
                expm_action(a, &e, t, KRYLOV_RTOL)
            }
        };
        let sx = self.sqrt_m[x];
        for (y, v) in row.iter_mut().enumerate() {
            *v /= sx * self.sqrt_m[y];
        }
        Ok(row)
    }

    /// Full interior kernel matrix; dense backend only.
    pub fn kernel_matrix(&self, t: f64) -> Result<DMatrix<f64>, HeatError> {
        check_time(t)?;
        let n = self.dim();
        if t == 0.0 && n > 0 {
            return Ok(DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    1.0 / (self.sqrt_m[i] * self.sqrt_m[i])
                } else {
                    0.0
                }
            }));
        }
        match &self.backend {
            Backend::Empty => Ok(DMatrix::zeros(0, 0)),
            Backend::Dense(eig) => {
                let scaled = DMatrix::from_fn(n, n, |i, k| {
                    eig.eigenvectors[(i, k)] * (-t * eig.eigenvalues[k]).exp()
                });
                let mut p = scaled * eig.eigenvectors.transpose();
                for i in 0..n {
                    for j in 0..n {
                        p[(i, j)] /= self.sqrt_m[i] * self.sqrt_m[j];
                    }
                }
                Ok(p)
            }
            Backend::Sparse(_) => Err(HeatError::TooLarge { interior: n, limit: DENSE_LIMIT }),
        }
    }

    /// `Σ_y p_t(x, y) m(y)` over the interior.
    pub fn mass(&self, x: usize, t: f64) -> Result<f64, HeatError> {
        let row = self.kernel_row(x, t)?;
        Ok(row
            .iter()
            .zip(&self.sqrt_m)
            .map(|(p, s)| p * s * s)
            .sum())
    }

    /// Bottom of the Dirichlet spectrum; `+inf` for an empty interior.
    pub fn bottom_eigenvalue(&self) -> f64 {
        match &self.backend {
            Backend::Empty => f64::INFINITY,
            Backend::Dense(eig) => eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min),
            Backend::Sparse(a) => smallest_eigenvalue(a, &self.sqrt_m, 1e-13),
        }
    }
}

fn check_time(t: f64) -> Result<(), HeatError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatError::NegativeTime(t))
    }
}

/// Dirichlet heat kernel of a domain at one time, indexed by vertex.
#[derive(Debug, Clone)]
pub struct DirichletKernel {
    pub t: f64,
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    values: DMatrix<f64>,
    /// Empty interior: every value is zero.
    pub degenerate: bool,
}

impl DirichletKernel {
    /// `p_t(x, y)`, zero unless both vertices are interior.
    pub fn get(&self, x: &VertexId, y: &VertexId) -> f64 {
        match (self.index.get(x), self.index.get(y)) {
            (Some(&i), Some(&j)) => self.values[(i, j)],
            _ => 0.0,
        }
    }

    /// Interior vertices, in the order of [`Self::matrix`].
    pub fn interior(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.values
    }
}

/// `p_t` on a domain by spectral decomposition of the symmetrized interior
/// block; entries vanish on the boundary.
pub fn dirichlet_heat_kernel(d: &DirichletDomain, t: f64) -> Result<DirichletKernel, HeatError> {
    let op = DirichletOperator::new(d);
    let values = op.kernel_matrix(t)?;
    let ids = d.interior_ids();
    let index = ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok(DirichletKernel { t, degenerate: ids.is_empty(), ids, index, values })
}

/// Chapman-Kolmogorov defect `max |p_{s+t} - Σ_z p_s(·,z) p_t(z,·) m(z)|`.
pub fn semigroup_residual(d: &DirichletDomain, s: f64, t: f64) -> Result<f64, HeatError> {
    let op = DirichletOperator::new(d);
    let ps = op.kernel_matrix(s)?;
    let pt = op.kernel_matrix(t)?;
    let pst = op.kernel_matrix(s + t)?;
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d.interior().len(),
        d.interior().iter().map(|&i| d.measure(i)),
    ));
    let composed = &ps * m * &pt;
    Ok((pst - composed).amax())
}
