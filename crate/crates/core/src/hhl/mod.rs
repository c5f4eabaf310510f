//! Statevector HHL: phase estimation on a clock register, eigenvalue
//! inversion by a controlled ancilla rotation, uncomputation and
//! post-selection. Controlled powers of `U = exp(iAt)` are applied through
//! the eigendecomposition of `A`; the clock transforms use an FFT.

mod aqf;
mod apps;

pub use aqf::{augment_for_aqf, check_aqf, one_qubit_hhl, AqfCertificate, OneQubitOutcome};
pub use apps::{effective_resistance, traffic_flow, FlowMethod, FlowResult, ResistanceMethod, SolveMethod};

use crate::error::{Error, Result};
use crate::graph::SymmetricMatrix;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const MAX_QUBITS: u32 = 22;
/// Eigenvalues below this are treated as null space.
pub const NULL_CUTOFF: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HhlConfig {
    pub n_r: u32,
    pub t: f64,
    pub c: f64,
    /// Two's-complement clock for indefinite matrices.
    #[serde(default)]
    pub signed: bool,
    /// SWAP-test shots for overlap estimates; `None` gives exact amplitudes.
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

/// Evolution time from a spectral bound `d_tilde >= |lambda|_max`: the
/// largest eigenvalue lands on the top clock bin (PSD) or just inside
/// the positive half (signed).
pub fn default_t(d_tilde: f64, n_r: u32, signed: bool) -> f64 {
    let top = if signed { 0.5 } else { 1.0 };
    2.0 * PI * (top - 0.5f64.powi(n_r as i32)) / d_tilde
}

/// `0.9` of the smallest scaled eigenvalue predicted from `lambda_min`.
pub fn default_c(lambda_min: f64, t: f64) -> f64 {
    0.9 * lambda_min.abs() * t / (2.0 * PI)
}

impl HhlConfig {
    pub fn with_defaults(n_r: u32, d_tilde: f64, lambda_min: f64, signed: bool) -> Self {
        let t = default_t(d_tilde, n_r, signed);
        HhlConfig { n_r, t, c: default_c(lambda_min, t), signed, shots: None, seed: 0 }
    }

    pub fn scaled(&self, lambda: f64) -> f64 {
        lambda * self.t / (2.0 * PI)
    }

    /// Scaled eigenvalue encoded by clock value `k`.
    pub fn clock_value(&self, k: usize) -> f64 {
        let m = (1usize << self.n_r) as f64;
        let k = k as f64;
        if self.signed && k >= m / 2.0 {
            (k - m) / m
        } else {
            k / m
        }
    }

    fn validate(&self, eigenvalues: &[f64], n_b: u32) -> Result<()> {
        if self.n_r == 0 || n_b + self.n_r + 1 > MAX_QUBITS {
            return Err(Error::InvalidParam(format!(
                "{} qubits requested, at most {MAX_QUBITS} simulated",
                n_b + self.n_r + 1
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidParam(format!("evolution time must be positive, got {}", self.t)));
        }
        let mut min_nz = f64::INFINITY;
        for &l in eigenvalues {
            let lt = self.scaled(l);
            let ok = if self.signed { lt.abs() < 0.5 } else { l > -NULL_CUTOFF && lt < 1.0 };
            if !ok {
                return Err(Error::InvalidParam(format!(
                    "scaled eigenvalue {lt} out of range for {} mode",
                    if self.signed { "signed" } else { "PSD" }
                )));
            }
            if l.abs() > NULL_CUTOFF {
                min_nz = min_nz.min(lt.abs());
            }
        }
        if !(self.c > 0.0 && self.c <= min_nz * (1.0 + 1e-12)) {
            return Err(Error::InvalidParam(format!("C = {} must lie in (0, {min_nz}]", self.c)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhlOutcome {
    /// Probability of ancilla 1 with the clock back at zero.
    pub p_success: f64,
    /// Probability of ancilla 1 regardless of the clock.
    pub p_ancilla: f64,
    /// Probability that the clock reads all zeros after uncomputation.
    pub p_clock_zero: f64,
    pub solution_state: Vec<Complex64>,
    /// `t / (2 pi C)`.
    pub scale: f64,
    pub b_norm: f64,
    pub shots: Option<u64>,
    pub seed: u64,
}

impl HhlOutcome {
    /// Unnormalized solution estimate of `A x = b`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let f = self.b_norm * self.scale * self.p_success.sqrt();
        self.solution_state.iter().map(|a| a.re * f).collect()
    }
}

/// Eigendecomposition shared by the simulation passes.
struct Prepared {
    vals: Vec<f64>,
    vecs: DMatrix<f64>,
    /// Coefficients of normalized `b` in the eigenbasis.
    beta: Vec<f64>,
    b_norm: f64,
    n_b: u32,
}

fn prepare(a: &SymmetricMatrix, b: &[f64], cfg: &HhlConfig) -> Result<Prepared> {
    let n = a.order();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParam(format!("matrix order {n} must be a power of two; pad first")));
    }
    if b.len() != n {
        return Err(Error::InvalidParam(format!("b has length {}, expected {n}", b.len())));
    }
    let b_norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(b_norm > 0.0) {
        return Err(Error::InvalidParam("b must be nonzero".into()));
    }
    let eig = SymmetricEigen::new(a.to_dense());
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    cfg.validate(&vals, n.trailing_zeros())?;
    let bn = DVector::from_iterator(n, b.iter().map(|x| x / b_norm));
    let beta: Vec<f64> = (eig.eigenvectors.transpose() * bn).iter().copied().collect();
    Ok(Prepared { vals, vecs: eig.eigenvectors, beta, b_norm, n_b: n.trailing_zeros() })
}

/// Clock-major amplitudes `amp[k * n + i]` after phase estimation of
/// `|b>`: `2^{-n_r/2} sum_j |j> U^j |b>`, then an inverse QFT on the clock.
fn qpe_state(p: &Prepared, cfg: &HhlConfig) -> Vec<Complex64> {
    let n = p.vals.len();
    let m = 1usize << cfg.n_r;
    let mut amp = vec![Complex64::new(0.0, 0.0); m * n];
    let norm = 1.0 / (m as f64).sqrt();
    for j in 0..m {
        // U^j |b> = V diag(e^{i lambda t j}) beta
        let coeffs: Vec<Complex64> = p
            .vals
            .iter()
            .zip(&p.beta)
            .map(|(&l, &bt)| Complex64::from_polar(bt * norm, l * cfg.t * j as f64))
            .collect();
        for i in 0..n {
            amp[j * n + i] = (0..n).map(|e| coeffs[e] * p.vecs[(i, e)]).sum();
        }
    }
    clock_transform(&mut amp, n, m, false);
    amp
}

/// Quantum (inverse) Fourier transform along the clock axis. The quantum
/// inverse QFT uses the `e^{-2 pi i jk/M}` kernel, i.e. a forward FFT.
fn clock_transform(amp: &mut [Complex64], n: usize, m: usize, qft: bool) {
    let mut planner = FftPlanner::new();
    let fft = if qft { planner.plan_fft_inverse(m) } else { planner.plan_fft_forward(m) };
    let norm = 1.0 / (m as f64).sqrt();
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..n {
        for k in 0..m {
            col[k] = amp[k * n + i];
        }
        fft.process(&mut col);
        for k in 0..m {
            amp[k * n + i] = col[k] * norm;
        }
    }
}

/// Controlled rotation factor `C / lambda~_k`, zero on the zero bin and
/// clamped to `[-1, 1]` where the bin lies below `C`.
fn rotation(cfg: &HhlConfig, k: usize) -> f64 {
    let lt = cfg.clock_value(k);
    if k == 0 || lt == 0.0 {
        0.0
    } else {
        (cfg.c / lt).clamp(-1.0, 1.0)
    }
}

/// Clock-zero amplitude of `QPE^dagger` applied to a clock-major state.
fn uncompute_to_zero(p: &Prepared, cfg: &HhlConfig, mut amp: Vec<Complex64>) -> Vec<Complex64> {
    let n = p.vals.len();
    let m = 1usize << cfg.n_r;
    clock_transform(&mut amp, n, m, true);
    // Hadamards then project onto |0>: 2^{-n_r/2} sum_j U^{-j} amp_j
    let norm = 1.0 / (m as f64).sqrt();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..m {
        let slice = &amp[j * n..(j + 1) * n];
        for e in 0..n {
            let proj: Complex64 = (0..n).map(|i| slice[i] * p.vecs[(i, e)]).sum();
            if proj == Complex64::new(0.0, 0.0) {
                continue;
            }
            let c = proj * Complex64::from_polar(norm, -p.vals[e] * cfg.t * j as f64);
            for i in 0..n {
                acc[i] += c * p.vecs[(i, e)];
            }
        }
    }
    acc
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

pub fn hhl_solve(a: &SymmetricMatrix, b: &[f64], cfg: &HhlConfig) -> Result<HhlOutcome> {
    let p = prepare(a, b, cfg)?;
    let n = p.vals.len();
    let amp = qpe_state(&p, cfg);
    let m = 1usize << cfg.n_r;

    let mut one = amp.clone();
    let mut zero = amp;
    for k in 0..m {
        let r = rotation(cfg, k);
        let c0 = (1.0 - r * r).max(0.0).sqrt();
        for i in 0..n {
            one[k * n + i] *= r;
            zero[k * n + i] *= c0;
        }
    }
    let p_ancilla = norm_sq(&one);
    let x = uncompute_to_zero(&p, cfg, one);
    let rest = uncompute_to_zero(&p, cfg, zero);
    let p_success = norm_sq(&x);
    if p_success < 1e-14 {
        return Err(Error::InvalidParam("b lies in the null space: success probability vanishes".into()));
    }
    let s = 1.0 / p_success.sqrt();
    log::debug!("hhl n_b={} n_r={} p_success={p_success:.6e}", p.n_b, cfg.n_r);
    Ok(HhlOutcome {
        p_success,
        p_ancilla,
        p_clock_zero: p_success + norm_sq(&rest),
        solution_state: x.into_iter().map(|a| a * s).collect(),
        scale: cfg.t / (2.0 * PI * cfg.c),
        b_norm: p.b_norm,
        shots: cfg.shots,
        seed: cfg.seed,
    })
}

/// Success probability predicted from the eigen-expansion,
/// `C^2 sum_i |beta_i / lambda~_i|^2` over the non-null components. It
/// equals the simulated value when every scaled eigenvalue is on the clock grid.
pub fn predicted_p_success(a: &SymmetricMatrix, b: &[f64], cfg: &HhlConfig) -> Result<f64> {
    let p = prepare(a, b, cfg)?;
    Ok(p.vals
        .iter()
        .zip(&p.beta)
        .filter(|(l, _)| l.abs() > NULL_CUTOFF)
        .map(|(&l, &bt)| (cfg.c * bt / cfg.scaled(l)).powi(2))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Overlap {
    /// `<probe|x>` for the unnormalized solution; `None` in shot mode.
    pub value: Option<f64>,
    /// `|<probe|solution_state>|^2`, estimated from SWAP-test shots in shot mode.
    pub fidelity: f64,
}

pub fn extract_overlap(outcome: &HhlOutcome, probe: &[f64]) -> Result<Overlap> {
    if probe.len() != outcome.solution_state.len() {
        return Err(Error::InvalidParam("probe length differs from the state register".into()));
    }
    let pn = probe.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (pn - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParam(format!("probe must be normalized (norm {pn})")));
    }
    let ip: Complex64 = probe.iter().zip(&outcome.solution_state).map(|(p, a)| a * *p).sum();
    let fid = ip.norm_sqr().min(1.0);
    match outcome.shots {
        None => Ok(Overlap {
            value: Some(ip.re * outcome.scale * outcome.p_success.sqrt() * outcome.b_norm),
            fidelity: fid,
        }),
        Some(shots) => {
            if shots == 0 {
                return Err(Error::InvalidParam("shot count must be positive".into()));
            }
            // SWAP test: P(ancilla 0) = (1 + |<a|b>|^2) / 2
            let mut rng = ChaCha8Rng::seed_from_u64(outcome.seed);
            let dist = Binomial::new(shots, (1.0 + fid) / 2.0).map_err(|e| Error::Other(e.to_string()))?;
            let zeros = dist.sample(&mut rng) as f64;
            Ok(Overlap { value: None, fidelity: (2.0 * zeros / shots as f64 - 1.0).clamp(0.0, 1.0) })
        }
    }
}

/// Clock distribution after phase estimation, indexed by clock value.
pub fn clock_histogram(a: &SymmetricMatrix, b: &[f64], cfg: &HhlConfig) -> Result<Vec<f64>> {
    let p = prepare(a, b, cfg)?;
    let n = p.vals.len();
    let amp = qpe_state(&p, cfg);
    Ok(amp.chunks(n).map(norm_sq).collect())
}

/// Clock qubits (bit 0 least significant) whose marginal probability of
/// one value is at least `p_th`, with that value.
pub fn detect_fixed_clock_qubits(
    a: &SymmetricMatrix,
    b: &[f64],
    cfg: &HhlConfig,
    p_th: f64,
) -> Result<Vec<(u32, u8)>> {
    let hist = clock_histogram(a, b, cfg)?;
    let mut fixed = Vec::new();
    for q in 0..cfg.n_r {
        let p1: f64 = hist.iter().enumerate().filter(|(k, _)| k >> q & 1 == 1).map(|(_, p)| p).sum();
        if p1 >= p_th {
            fixed.push((q, 1));
        } else if 1.0 - p1 >= p_th {
            fixed.push((q, 0));
        }
    }
    Ok(fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag(d: &[f64]) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::new(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    #[test]
    fn identity_inversion() {
        let a = diag(&[1.0, 1.0]);
        let n_r = 3;
        let t = 2.0 * PI * 0.5; // lambda~ = 1/2
        let cfg = HhlConfig { n_r, t, c: 0.25, signed: false, shots: None, seed: 0 };
        let out = hhl_solve(&a, &[1.0, 0.0], &cfg).unwrap();
        assert_relative_eq!(out.p_success, 0.25, epsilon = 1e-12);
        assert_relative_eq!(out.p_clock_zero, 1.0, epsilon = 1e-12);
        let x = out.reconstruct();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(x[1], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn signed_mode_inverts_negative_eigenvalues() {
        let a = diag(&[-1.0, 2.0]);
        let t = 2.0 * PI / 8.0; // lambda~ = -1/8, 1/4
        let cfg = HhlConfig { n_r: 4, t, c: 0.1, signed: true, shots: None, seed: 0 };
        let x = hhl_solve(&a, &[1.0, 1.0], &cfg).unwrap().reconstruct();
        assert_relative_eq!(x[0], -1.0, epsilon = 1e-10);
        assert_relative_eq!(x[1], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn rejects_bad_configs() {
        let a = diag(&[1.0, 2.0]);
        let ok = HhlConfig { n_r: 3, t: 2.0 * PI / 4.0, c: 0.2, signed: false, shots: None, seed: 0 };
        assert!(hhl_solve(&a, &[1.0, 0.0], &ok).is_ok());
        assert!(hhl_solve(&a, &[1.0, 0.0], &HhlConfig { c: 0.3, ..ok.clone() }).is_err());
        assert!(hhl_solve(&a, &[1.0, 0.0], &HhlConfig { t: 2.0 * PI, ..ok.clone() }).is_err());
        assert!(hhl_solve(&a, &[1.0, 0.0], &HhlConfig { n_r: 21, ..ok.clone() }).is_err());
        assert!(hhl_solve(&diag(&[0.0, 1.0]), &[1.0, 0.0], &HhlConfig { c: 0.1, ..ok }).is_err());
    }
}
