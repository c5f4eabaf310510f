//! All-qubit fixing: when `b = delta_i - delta_j` is an eigenvector of the
//! Laplacian, phase estimation returns a single bitstring and HHL reduces
//! to one ancilla rotation.

use super::HhlConfig;
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph, SymmetricMatrix};
use serde::Serialize;
use std::collections::HashSet;
use std::f64::consts::PI;

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AqfCertificate {
    pub holds: bool,
    pub i: usize,
    pub j: usize,
    pub eigenvalue: Option<f64>,
}

/// `delta_i - delta_j` is an eigenvector of `l` when columns `i` and `j`
/// agree off the pair and the diagonal entries match.
pub fn check_aqf(l: &SymmetricMatrix, i: usize, j: usize) -> Result<AqfCertificate> {
    let n = l.order();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidParam(format!("need distinct vertices below {n}, got {i} and {j}")));
    }
    let close = |x: f64, y: f64| (x - y).abs() <= TOL * (1.0 + x.abs().max(y.abs()));
    let holds = close(l.get(i, i), l.get(j, j))
        && (0..n).filter(|&p| p != i && p != j).all(|p| close(l.get(p, i), l.get(p, j)));
    Ok(AqfCertificate { holds, i, j, eigenvalue: holds.then(|| l.get(i, i) - l.get(i, j)) })
}

/// Adds two vertices joined to exactly the `attach` set; the new pair
/// then carries eigenvalue `|attach|` (unit weights).
pub fn augment_for_aqf(g: &Graph, attach: &[usize]) -> Result<Graph> {
    if g.is_directed() {
        return Err(Error::KindMismatch("augmentation needs an undirected graph".into()));
    }
    let n = g.n_vertices();
    let set: HashSet<usize> = attach.iter().copied().collect();
    if attach.is_empty() || set.len() != attach.len() {
        return Err(Error::InvalidParam("attach set must be nonempty and free of duplicates".into()));
    }
    if let Some(&v) = attach.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidParam(format!("attach vertex {v} out of range")));
    }
    let mut out = Graph::new(n + 2, false);
    for e in g.edges() {
        out.add_edge(e.u, e.v, e.w)?;
    }
    for &v in attach {
        out.add_edge(n, v, 1.0)?;
        out.add_edge(n + 1, v, 1.0)?;
    }
    let l = laplacian(&out)?;
    let mut b = vec![0.0; n + 2];
    b[n] = 1.0;
    b[n + 1] = -1.0;
    let k = attach.len() as f64;
    let lb = l.mul_vec(&b);
    if lb.iter().zip(&b).any(|(x, y)| (x - k * y).abs() > 1e-9) {
        return Err(Error::Other("augmented pair is not an eigenvector".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneQubitOutcome {
    pub lambda_tilde: f64,
    pub p_success: f64,
    /// RY angle `2 asin(C / lambda~)`.
    pub angle: f64,
    /// `b^T L^+ b` for `b = delta_i - delta_j`, i.e. `2 / lambda`.
    pub r_eff: f64,
}

/// The circuit left after all clock qubits are fixed: one RY rotation.
pub fn one_qubit_hhl(lambda: f64, cfg: &HhlConfig) -> Result<OneQubitOutcome> {
    if !(lambda > super::NULL_CUTOFF) {
        return Err(Error::InvalidParam(format!("eigenvalue {lambda} below cutoff")));
    }
    let lt = cfg.scaled(lambda);
    if !(cfg.c > 0.0 && cfg.c <= lt) {
        return Err(Error::InvalidParam(format!("C = {} must lie in (0, {lt}]", cfg.c)));
    }
    let r = cfg.c / lt;
    let p_success = r * r;
    let scale = cfg.t / (2.0 * PI * cfg.c);
    Ok(OneQubitOutcome { lambda_tilde: lt, p_success, angle: 2.0 * r.asin(), r_eff: 2.0 * scale * p_success.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::undirected::complete;

    fn path3() -> SymmetricMatrix {
        let mut g = Graph::new(3, false);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 2, 1.0).unwrap();
        laplacian(&g).unwrap()
    }

    #[test]
    fn certificates() {
        let c = check_aqf(&laplacian(&complete(5).unwrap()).unwrap(), 1, 3).unwrap();
        assert_eq!(c.eigenvalue, Some(5.0));
        assert_eq!(check_aqf(&path3(), 0, 2).unwrap().eigenvalue, Some(1.0));
        assert!(!check_aqf(&path3(), 0, 1).unwrap().holds);
        assert!(check_aqf(&path3(), 1, 1).is_err());
    }

    #[test]
    fn augmentation() {
        let g = augment_for_aqf(&complete(3).unwrap(), &[0, 1, 2]).unwrap();
        assert_eq!(check_aqf(&laplacian(&g).unwrap(), 3, 4).unwrap().eigenvalue, Some(3.0));
        let mut e = Graph::new(2, false);
        e.add_edge(0, 1, 1.0).unwrap();
        let g = augment_for_aqf(&e, &[0]).unwrap();
        assert_eq!(check_aqf(&laplacian(&g).unwrap(), 2, 3).unwrap().eigenvalue, Some(1.0));
        assert!(augment_for_aqf(&e, &[0, 0]).is_err());
    }

    #[test]
    fn hexagon_angle() {
        let t = 2.0 * PI / 12.0;
        let cfg = HhlConfig { n_r: 3, t, c: t / (2.0 * PI), signed: false, shots: None, seed: 0 };
        let o = one_qubit_hhl(6.0, &cfg).unwrap();
        assert!((o.angle - 0.3349).abs() < 5e-5);
        assert!((o.r_eff - 1.0 / 3.0).abs() < 1e-12);
    }
}
