//! Extremal eigenvalues, condition numbers and sparsity of real symmetric
//! matrices.

mod lanczos;

pub use lanczos::lanczos_extremes;

use crate::error::{Error, Result};
use crate::families::MatrixKind;
use crate::graph::{hermitian_dilation, incidence_matrix, laplacian, Graph, SymmetricMatrix};
use serde::{Deserialize, Serialize};

pub const DEFAULT_CUTOFF: f64 = 1e-6;
pub const DEFAULT_DENSE_LIMIT: usize = 3000;

/// Dense limit, overridable through `NLSP_DENSE_LIMIT`.
pub fn dense_limit_from_env() -> usize {
    std::env::var("NLSP_DENSE_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    /// Smallest magnitude above the cutoff.
    pub lambda_min_nz: f64,
    /// Largest magnitude.
    pub lambda_max: f64,
    pub method: Method,
}

impl Extremes {
    pub fn kappa(&self) -> f64 {
        self.lambda_max / self.lambda_min_nz
    }
}

/// All eigenvalues in ascending order.
pub fn full_spectrum(m: &SymmetricMatrix) -> Vec<f64> {
    if m.order() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.to_dense().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Extremes of `|lambda|` over the spectrum, ignoring magnitudes at or
/// below `cutoff`.
pub fn extremes_of(spectrum: &[f64], cutoff: f64) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &l in spectrum {
        let a = l.abs();
        hi = hi.max(a);
        if a > cutoff {
            lo = lo.min(a);
        }
    }
    if !lo.is_finite() {
        return Err(Error::ZeroMatrix);
    }
    Ok((lo, hi))
}

pub fn extreme_eigs(m: &SymmetricMatrix, cutoff: f64, dense_limit: usize) -> Result<Extremes> {
    if m.order() == 0 || m.max_abs() <= cutoff {
        return Err(Error::ZeroMatrix);
    }
    if m.order() <= dense_limit {
        let (lo, hi) = extremes_of(&full_spectrum(m), cutoff)?;
        Ok(Extremes { lambda_min_nz: lo, lambda_max: hi, method: Method::Dense })
    } else {
        lanczos_extremes(m, cutoff, 1e-8)
    }
}

pub fn condition_number(m: &SymmetricMatrix, cutoff: f64, dense_limit: usize) -> Result<f64> {
    Ok(extreme_eigs(m, cutoff, dense_limit)?.kappa())
}

/// Maximum number of nonzeros in any row.
pub fn sparsity(m: &SymmetricMatrix) -> usize {
    m.row_nnz().into_iter().max().unwrap_or(0)
}

/// Smallest nonzero eigenvalue at the working cutoff and at `1e-10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSensitivity {
    pub system_size: usize,
    pub min_eig_at_1e6: f64,
    pub min_eig_at_1e10: f64,
    pub delta: f64,
    /// Set when the two minima differ by more than 1%.
    pub unstable: bool,
}

pub fn cutoff_sensitivity(m: &SymmetricMatrix) -> Result<CutoffSensitivity> {
    let spec = full_spectrum(m);
    let (a, _) = extremes_of(&spec, 1e-6)?;
    let (b, _) = extremes_of(&spec, 1e-10)?;
    let delta = (a - b).abs();
    Ok(CutoffSensitivity { system_size: m.order(), min_eig_at_1e6: a, min_eig_at_1e10: b, delta, unstable: delta > 0.01 * a })
}

/// Laplacian, or the Hermitian dilation of the incidence matrix.
pub fn system_matrix(g: &Graph, kind: MatrixKind) -> Result<SymmetricMatrix> {
    match kind {
        MatrixKind::Laplacian => laplacian(g),
        MatrixKind::Incidence => Ok(hermitian_dilation(&incidence_matrix(g)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRecord {
    pub system_size: usize,
    pub lambda_min_nz: f64,
    pub lambda_max: f64,
    pub kappa: f64,
    pub sparsity: usize,
    pub cutoff: f64,
    pub matrix_kind: MatrixKind,
    pub method: Method,
}

pub fn measure(g: &Graph, kind: MatrixKind, cutoff: f64, dense_limit: usize) -> Result<SpectralRecord> {
    let m = system_matrix(g, kind)?;
    let ex = extreme_eigs(&m, cutoff, dense_limit)?;
    Ok(SpectralRecord {
        system_size: m.order(),
        lambda_min_nz: ex.lambda_min_nz,
        lambda_max: ex.lambda_max,
        kappa: ex.kappa(),
        sparsity: sparsity(&m),
        cutoff,
        matrix_kind: kind,
        method: ex.method,
    })
}
