//! Deterministic linear algebra on ensemble samples: the cubic-trace
//! statistic, Gram spectra and log-determinants, deviation norms, the
//! symmetric inverse square root, and the projection-Gram summary feeding
//! the entropy bound.
//!
//! The single factorization primitive is the symmetric eigendecomposition
//! (via nalgebra); there is no separate Cholesky path, so PSD edge cases
//! behave uniformly across operations.

use crate::ensembles::{DataMatrix, HollowSymmetricMatrix};
use nalgebra::DMatrix;
use thiserror::Error;

/// Eigenvalues at or below this floor are treated as singular at working
/// precision.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// Denominator threshold below which the contraction coefficient is the
/// trivial 1 (the defining ratio is 0/0 there).
const DEGENERATE_DENOM: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("Gram matrix singular at working precision (lambda_min = {lambda_min:e} <= {floor:e})")]
    SingularGram { lambda_min: f64, floor: f64 },
    #[error("spectral gap constant {0} outside (0, 1]")]
    BadSpectralGap(f64),
}

/// Tr(W³) of a hollow symmetric matrix, as the triangle sum
/// 6·Σ_{i<j<k} W_ij W_jk W_ki (exact for zero-diagonal symmetric input).
pub fn cubic_trace(w: &HollowSymmetricMatrix) -> f64 {
    let n = w.n();
    let mut total = 0.0;
    for i in 0..n {
        let row_i = w.row(i);
        for j in (i + 1)..n {
            let row_j = w.row(j);
            let mut paths = 0.0;
            for k in (j + 1)..n {
                paths += row_j[k] * row_i[k];
            }
            total += row_i[j] * paths;
        }
    }
    6.0 * total
}

/// The normalized Gram matrix G = (1/d)·XXᵀ, symmetric by construction.
pub fn gram_matrix(x: &DataMatrix) -> DMatrix<f64> {
    let n = x.n();
    let inv_d = 1.0 / x.d() as f64;
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = crate::ensembles::dot(x.row(i), x.row(j)) * inv_d;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Ascending eigenvalues of a symmetric matrix, with tiny negative rounding
/// clamped to zero for PSD inputs.
fn sym_eigenvalues_ascending(m: &DMatrix<f64>) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let mut vals: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&v| if v < 0.0 && v > -1e-10 * scale.max(1.0) { 0.0 } else { v })
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Ascending eigenvalues of (1/d)·XXᵀ, without the singularity gate (used
/// by small-ball tail curves, which must observe arbitrarily small
/// eigenvalues).
pub fn gram_eigenvalues(x: &DataMatrix) -> Vec<f64> {
    sym_eigenvalues_ascending(&gram_matrix(x))
}

/// Spectrum summary of the normalized Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSpectrum {
    eigenvalues: Vec<f64>,
    logdet: f64,
}

impl GramSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Natural log of det((1/d)·XXᵀ).
    pub fn logdet(&self) -> f64 {
        self.logdet
    }
}

/// Eigendecomposition of (1/d)·XXᵀ. Fails with `SingularGram` when the
/// smallest eigenvalue is at or below [`EIGENVALUE_FLOOR`] (the logdet is
/// undefined at working precision there), including the rank-deficient
/// n > d case.
pub fn gram_spectrum(x: &DataMatrix) -> Result<GramSpectrum, SpectraError> {
    let vals = gram_eigenvalues(x);
    let lambda_min = vals[0];
    if x.n() > x.d() || lambda_min <= EIGENVALUE_FLOOR {
        return Err(SpectraError::SingularGram { lambda_min, floor: EIGENVALUE_FLOOR });
    }
    let logdet = vals.iter().map(|&v| v.ln()).sum();
    Ok(GramSpectrum { eigenvalues: vals, logdet })
}

/// The three deviation statistics of G = (1/d)·XXᵀ from the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationNorms {
    /// |Tr(I − G)|
    pub trace_dev: f64,
    /// ‖I − G‖²_HS
    pub hs_dev_sq: f64,
    /// spectral norm ‖G − I‖
    pub op_dev: f64,
}

pub fn deviation_norms(x: &DataMatrix) -> DeviationNorms {
    let g = gram_matrix(x);
    let n = x.n();
    let mut trace_dev = 0.0;
    let mut hs = 0.0;
    for i in 0..n {
        trace_dev += 1.0 - g[(i, i)];
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            hs += (delta - g[(i, j)]).powi(2);
        }
    }
    let op_dev = sym_eigenvalues_ascending(&g)
        .iter()
        .fold(0.0_f64, |a, &l| a.max((l - 1.0).abs()));
    DeviationNorms { trace_dev: trace_dev.abs(), hs_dev_sq: hs, op_dev }
}

/// Symmetric PSD inverse square root: returns Q with Q·G·Q = I.
pub fn inverse_sqrt_sym(g: &DMatrix<f64>) -> Result<DMatrix<f64>, SpectraError> {
    assert_eq!(g.nrows(), g.ncols(), "inverse_sqrt_sym needs a square matrix");
    let eig = g.clone().symmetric_eigen();
    let lambda_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if lambda_min <= EIGENVALUE_FLOOR {
        return Err(SpectraError::SingularGram { lambda_min, floor: EIGENVALUE_FLOOR });
    }
    let n = g.nrows();
    let mut q = DMatrix::zeros(n, n);
    for k in 0..n {
        let inv_sqrt = 1.0 / eig.eigenvalues[k].sqrt();
        let v = eig.eigenvectors.column(k);
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] += inv_sqrt * v[i] * v[j];
            }
        }
    }
    Ok(q)
}

/// Row-whitened matrix A = (XXᵀ)^{-1/2}·X, which has exactly orthonormal
/// rows up to rounding.
pub fn whiten_rows(x: &DataMatrix) -> Result<DMatrix<f64>, SpectraError> {
    let xm = DMatrix::from_row_slice(x.n(), x.d(), x.as_slice());
    let s = &xm * xm.transpose();
    let q = inverse_sqrt_sym(&s)?;
    Ok(&q * &xm)
}

/// The projection matrix B = AᵀA (d×d) for A = (XXᵀ)^{-1/2}·X.
pub fn projection_gram(x: &DataMatrix) -> Result<DMatrix<f64>, SpectraError> {
    let a = whiten_rows(x)?;
    Ok(a.transpose() * &a)
}

/// Per-row ingredients of the Fisher-information contraction coefficient.
///
/// With B = AᵀA and a = row i of A:
///   u = Σ_j a_j²(1−B_jj), w = Σ_j a_j²(1−B_jj)²,
///   v = Σ_{j≠k} (a_j B_jk)², m = Σ_{j≠k} B_jk² a_j a_k,
///   contraction = 1 − c·u²/(c·w + 2v), or 1 when the denominator
///   degenerates (row supported on coordinates with B_jj = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowGramStats {
    pub u: f64,
    pub w: f64,
    pub v: f64,
    pub m: f64,
    pub contraction: f64,
}

/// Scalar summary of B = AᵀA: the diagonal maximum ε, the off-diagonal
/// maximum ζ, and the per-row contraction ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionGramSummary {
    pub epsilon: f64,
    pub gram_zeta: f64,
    pub per_row: Vec<RowGramStats>,
    pub n: usize,
    pub d: usize,
}

impl ProjectionGramSummary {
    /// Σ_i contraction_i, the aggregate constant multiplying J − 1.
    pub fn contraction_sum(&self) -> f64 {
        self.per_row.iter().map(|r| r.contraction).sum()
    }
}

/// Builds the projection-Gram summary of X with spectral-gap constant
/// c ∈ (0, 1].
pub fn projection_gram_summary(
    x: &DataMatrix,
    c: f64,
) -> Result<ProjectionGramSummary, SpectraError> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(SpectraError::BadSpectralGap(c));
    }
    let a = whiten_rows(x)?;
    let b = a.transpose() * &a;
    let (n, d) = (x.n(), x.d());

    let mut epsilon = 0.0_f64;
    let mut zeta = 0.0_f64;
    for j in 0..d {
        epsilon = epsilon.max(b[(j, j)]);
        for k in (j + 1)..d {
            zeta = zeta.max(b[(j, k)].abs());
        }
    }

    // Σ_{k≠j} B_jk² per row j of B, shared across rows of A.
    let mut offdiag_rowsq = vec![0.0; d];
    for j in 0..d {
        let mut s = 0.0;
        for k in 0..d {
            if k != j {
                s += b[(j, k)] * b[(j, k)];
            }
        }
        offdiag_rowsq[j] = s;
    }

    let mut per_row = Vec::with_capacity(n);
    for i in 0..n {
        let mut u = 0.0;
        let mut w = 0.0;
        let mut v = 0.0;
        let mut m = 0.0;
        for j in 0..d {
            let aij = a[(i, j)];
            let resid = 1.0 - b[(j, j)];
            u += aij * aij * resid;
            w += aij * aij * resid * resid;
            v += aij * aij * offdiag_rowsq[j];
            let mut coupled = 0.0;
            for k in 0..d {
                if k != j {
                    coupled += b[(j, k)] * b[(j, k)] * a[(i, k)];
                }
            }
            m += aij * coupled;
        }
        let denom = c * w + 2.0 * v;
        let contraction = if denom <= DEGENERATE_DENOM {
            1.0
        } else {
            (1.0 - c * u * u / denom).clamp(0.0, 1.0)
        };
        per_row.push(RowGramStats { u, w, v, m, contraction });
    }

    Ok(ProjectionGramSummary { epsilon, gram_zeta: zeta, per_row, n, d })
}
