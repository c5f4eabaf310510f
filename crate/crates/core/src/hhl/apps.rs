//! Network applications: effective resistance between two vertices and
//! minimum-norm traffic flows on a directed network.

use super::{extract_overlap, hhl_solve, HhlConfig, NULL_CUTOFF};
use crate::error::{Error, Result};
use crate::graph::{hermitian_dilation, incidence_matrix, laplacian, pad_to_power_of_two, Graph, SymmetricMatrix};
use crate::spectral::{self, DEFAULT_CUTOFF};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Dense pseudo-inverse.
    Oracle,
    /// Simulated HHL. Without an explicit config, `t` comes from the
    /// Gershgorin bound and `C` from the smallest nonzero eigenvalue.
    Hhl { n_r: u32, config: Option<HhlConfig> },
}

pub type ResistanceMethod = SolveMethod;
pub type FlowMethod = SolveMethod;

fn pinv_apply(m: &SymmetricMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let pinv = m.to_dense().pseudo_inverse(NULL_CUTOFF).map_err(|e| Error::Other(e.to_string()))?;
    Ok((pinv * DVector::from_column_slice(b)).iter().copied().collect())
}

/// Pads `m` to a power-of-two order and picks a config for it.
fn padded_system(m: &SymmetricMatrix, n_r: u32, config: &Option<HhlConfig>, signed: bool) -> Result<(SymmetricMatrix, HhlConfig)> {
    let d = m.gershgorin_bound();
    let fill = d / 2.0;
    let padded = pad_to_power_of_two(m, fill)?;
    let cfg = match config {
        Some(c) => c.clone(),
        None => {
            let ex = spectral::extreme_eigs(m, DEFAULT_CUTOFF, spectral::dense_limit_from_env())?;
            let mut lo = ex.lambda_min_nz.min(fill);
            if signed {
                // The dilation spectrum is symmetric; the smallest magnitude
                // is the smallest positive eigenvalue.
                lo = lo.abs();
            }
            HhlConfig::with_defaults(n_r, d, lo, signed)
        }
    };
    Ok((padded, cfg))
}

/// `(delta_i - delta_j)^T L^+ (delta_i - delta_j)`.
pub fn effective_resistance(g: &Graph, i: usize, j: usize, method: &ResistanceMethod) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::KindMismatch("effective resistance needs an undirected graph".into()));
    }
    let n = g.n_vertices();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidParam(format!("need distinct vertices below {n}, got {i} and {j}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let l = laplacian(g)?;
    let mut b = vec![0.0; n];
    b[i] = 1.0;
    b[j] = -1.0;
    match method {
        SolveMethod::Oracle => {
            let x = pinv_apply(&l, &b)?;
            Ok(x[i] - x[j])
        }
        SolveMethod::Hhl { n_r, config } => {
            let (padded, cfg) = padded_system(&l, *n_r, config, false)?;
            b.resize(padded.order(), 0.0);
            let out = hhl_solve(&padded, &b, &cfg)?;
            let bn = 2f64.sqrt();
            let probe: Vec<f64> = b.iter().map(|x| x / bn).collect();
            let ov = extract_overlap(&out, &probe)?;
            // L^+ is PSD, so the overlap is nonnegative and its magnitude
            // suffices in shot mode.
            let value = ov
                .value
                .unwrap_or_else(|| ov.fidelity.sqrt() * out.scale * out.p_success.sqrt() * out.b_norm);
            Ok(bn * value)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowResult {
    /// Flow per edge, in edge order.
    pub flow: Vec<f64>,
    /// Edges carrying negative flow (against their orientation).
    pub negative_edges: Vec<usize>,
    /// `||B y - c||`.
    pub residual: f64,
}

/// Minimum-norm `y` with `B y = c` through the Hermitian dilation
/// `[[0, B], [B^T, 0]] (0, y) = (c, 0)`.
pub fn traffic_flow(g: &Graph, injections: &[f64], method: &FlowMethod) -> Result<FlowResult> {
    if !g.is_directed() {
        return Err(Error::KindMismatch("traffic flow needs a directed graph".into()));
    }
    let n = g.n_vertices();
    let e = g.n_edges();
    if injections.len() != n {
        return Err(Error::InvalidParam(format!("{} injections for {n} vertices", injections.len())));
    }
    let total: f64 = injections.iter().sum();
    let scale = injections.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if total.abs() > 1e-8 * scale {
        return Err(Error::InvalidParam(format!("injections are imbalanced (sum {total})")));
    }
    let bmat = incidence_matrix(g)?;
    if injections.iter().all(|&x| x == 0.0) {
        return Ok(FlowResult { flow: vec![0.0; e], negative_edges: Vec::new(), residual: 0.0 });
    }
    let h = hermitian_dilation(&bmat);
    let mut rhs = injections.to_vec();
    rhs.resize(n + e, 0.0);
    let flow: Vec<f64> = match method {
        SolveMethod::Oracle => pinv_apply(&h, &rhs)?[n..n + e].to_vec(),
        SolveMethod::Hhl { n_r, config } => {
            let (padded, cfg) = padded_system(&h, *n_r, config, true)?;
            rhs.resize(padded.order(), 0.0);
            hhl_solve(&padded, &rhs, &cfg)?.reconstruct()[n..n + e].to_vec()
        }
    };
    let by = bmat.mul_vec(&flow);
    let residual = by.iter().zip(injections).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt();
    if matches!(method, SolveMethod::Oracle) && residual > 1e-8 * scale {
        return Err(Error::InvalidParam(format!("no flow satisfies the injections (residual {residual:.3e})")));
    }
    let negative_edges = flow.iter().enumerate().filter(|(_, &y)| y < -1e-12).map(|(k, _)| k).collect();
    Ok(FlowResult { flow, negative_edges, residual })
}
