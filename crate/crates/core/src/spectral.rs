//! Operator norm and the norm-attaining (top right singular) subspace.
//!
//! Singular values come from the Hermitian eigendecomposition of `M*M`.

use crate::eigen::{hermitian_eig, max_eigenvalue_unchecked};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};

pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SpectralData {
    pub op_norm: f64,
    /// Orthonormal right singular vectors with `σ ≥ op_norm·(1 − rank_tol)`.
    pub top_subspace: Vec<Vector>,
    pub rank_tol: f64,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.top_subspace.len()
    }
}

/// Largest singular value `σ_max(M) = ‖M‖`.
pub fn operator_norm(m: &Matrix) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let gram = if m.rows() < m.cols() {
        m.adjoint().gram()
    } else {
        m.gram()
    };
    max_eigenvalue_unchecked(&gram).max(0.0).sqrt()
}

/// All right singular vectors of `m` whose singular value lies within the
/// relative band `rank_tol` of the largest. For `m = 0` every unit vector
/// attains the norm, so the full standard basis is returned.
pub fn top_singular_subspace(m: &Matrix, rank_tol: f64) -> Result<SpectralData> {
    if !(rank_tol > 0.0 && rank_tol < 1e-2) {
        return Err(Error::InvalidInput(format!(
            "rank_tol must lie in (0, 1e-2), got {rank_tol}"
        )));
    }
    let n = m.cols();
    if m.is_zero() {
        return Ok(SpectralData {
            op_norm: 0.0,
            top_subspace: (0..n).map(|i| Vector::basis(m.field(), n, i)).collect(),
            rank_tol,
        });
    }
    let eig = hermitian_eig(&m.gram())?;
    let sigma: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let op_norm = sigma[n - 1];
    let cutoff = op_norm * (1.0 - rank_tol);
    let top_subspace = sigma
        .iter()
        .zip(eig.vectors)
        .rev()
        .filter(|(s, _)| **s >= cutoff)
        .map(|(_, v)| v)
        .collect();
    Ok(SpectralData {
        op_norm,
        top_subspace,
        rank_tol,
    })
}
