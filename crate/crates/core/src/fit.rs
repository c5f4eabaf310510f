//! Relative least-squares fits of kappa(N) and s(N) against a fixed set of growth
//! models, selected by small-sample corrected AIC.

use crate::error::{Error, Result};
use crate::growth::{ratio, GrowthClass};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Candidates within this score distance of the best count as tied; the
/// simplest tied model wins.
pub const TIE_WINDOW: f64 = 2.0;
pub const ENVELOPE_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Constant,
    Polylog(u32),
    Polynomial(u32),
    Exponential,
}

impl Model {
    pub const CANDIDATES: [Model; 8] = [
        Model::Constant,
        Model::Polylog(1),
        Model::Polylog(2),
        Model::Polylog(3),
        Model::Polynomial(1),
        Model::Polynomial(2),
        Model::Polynomial(3),
        Model::Exponential,
    ];

    pub fn n_params(&self) -> usize {
        match self {
            Model::Constant => 1,
            Model::Polylog(p) | Model::Polynomial(p) => *p as usize + 1,
            Model::Exponential => 3,
        }
    }

    /// Simplicity rank used for tie-breaking.
    pub fn rank(&self) -> (u8, u32) {
        match self {
            Model::Constant => (0, 0),
            Model::Polylog(p) => (1, *p),
            Model::Polynomial(p) => (2, *p),
            Model::Exponential => (3, 0),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Constant => write!(f, "constant"),
            Model::Polylog(p) => write!(f, "polylog{p}"),
            Model::Polynomial(p) => write!(f, "poly{p}"),
            Model::Exponential => write!(f, "exp"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Kappa,
    Sparsity,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub model: Model,
    /// `None` when the candidate was inadmissible.
    pub score: Option<f64>,
    pub sse: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub quantity: Quantity,
    pub model: Model,
    /// Constant/polylog/polynomial: `a_0..a_p` on `1, f(x), .., f(x)^p`
    /// with `f = ln` or identity. Exponential: `[a0, a1, a2]` for
    /// `a2*exp(a1*x) + a0`.
    pub coeffs: Vec<f64>,
    pub score: f64,
    pub sse: f64,
    pub residuals: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub candidates: Vec<CandidateScore>,
    pub flags: Vec<String>,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        eval_model(self.model, &self.coeffs, x)
    }

    /// Growth class in the system size `N`.
    pub fn growth(&self) -> GrowthClass {
        match self.model {
            Model::Constant => GrowthClass::constant(),
            Model::Polylog(p) => GrowthClass::polylog(ratio(p as i64, 1)),
            Model::Polynomial(p) => GrowthClass::poly(ratio(p as i64, 1)),
            Model::Exponential => GrowthClass::super_exp(self.coeffs[1], ratio(0, 1)),
        }
    }

    pub fn score_of(&self, m: Model) -> Option<f64> {
        self.candidates.iter().find(|c| c.model == m).and_then(|c| c.score)
    }
}

pub fn eval_model(m: Model, c: &[f64], x: f64) -> f64 {
    match m {
        Model::Exponential => c[2] * (c[1] * x).exp() + c[0],
        Model::Constant | Model::Polylog(_) => horner(c, x.ln()),
        Model::Polynomial(_) => horner(c, x),
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * t + a)
}

fn basis(m: Model, x: f64) -> f64 {
    match m {
        Model::Polylog(_) | Model::Constant => x.ln(),
        _ => x,
    }
}

/// Row-weighted linear least squares on `1, t, .., t^p` with column scaling.
fn linear_fit(ts: &[f64], ys: &[f64], ws: &[f64], p: usize) -> Option<Vec<f64>> {
    let n = ts.len();
    let mut a = DMatrix::zeros(n, p + 1);
    for (i, &t) in ts.iter().enumerate() {
        for k in 0..=p {
            a[(i, k)] = ws[i] * t.powi(k as i32);
        }
    }
    let scale: Vec<f64> = (0..=p)
        .map(|k| a.column(k).iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300))
        .collect();
    for k in 0..=p {
        a.column_mut(k).scale_mut(1.0 / scale[k]);
    }
    let b = DVector::from_iterator(n, ys.iter().zip(ws).map(|(y, w)| y * w));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let c: Vec<f64> = sol.iter().zip(&scale).map(|(x, s)| x / s).collect();
    c.iter().all(|x| x.is_finite()).then_some(c)
}

/// `1/|y|` so residuals are relative; unit weights if any `y` is zero.
fn relative_weights(ys: &[f64]) -> Vec<f64> {
    if ys.iter().all(|&y| y != 0.0) {
        ys.iter().map(|y| 1.0 / y.abs()).collect()
    } else {
        vec![1.0; ys.len()]
    }
}

fn exp_for_offset(xs: &[f64], ys: &[f64], ws: &[f64], a0: f64) -> Option<(Vec<f64>, f64)> {
    if ys.iter().any(|&y| y - a0 <= 0.0) {
        return None;
    }
    let zs: Vec<f64> = ys.iter().map(|&y| (y - a0).ln()).collect();
    // d ln(y - a0) = dy / (y - a0), so this weight turns log residuals
    // back into weighted residuals in y.
    let lw: Vec<f64> = ys.iter().zip(ws).map(|(&y, &w)| w * (y - a0)).collect();
    let c = linear_fit(xs, &zs, &lw, 1)?;
    let coeffs = vec![a0, c[1], c[0].exp()];
    let sse = sse_of(Model::Exponential, &coeffs, xs, ys, ws);
    sse.is_finite().then_some((coeffs, sse))
}

/// Log-linearized fit with the offset from a coarse grid, then refined by
/// golden-section search below `min(ys)`.
fn fit_exponential(xs: &[f64], ys: &[f64], ws: &[f64]) -> Option<(Vec<f64>, f64)> {
    let min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let better = |a: Option<(Vec<f64>, f64)>, b: Option<(Vec<f64>, f64)>| match (a, b) {
        (Some(a), Some(b)) => Some(if b.1 < a.1 { b } else { a }),
        (a, b) => a.or(b),
    };
    let mut best = None;
    for a0 in [0.0, min / 2.0, min - 1.0] {
        best = better(best, exp_for_offset(xs, ys, ws, a0));
    }
    let span = min.abs().max(1.0);
    let (mut lo, mut hi) = (min - 4.0 * span, min - 1e-9 * span);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |a0: f64| exp_for_offset(xs, ys, ws, a0).map_or(f64::INFINITY, |r| r.1);
    for _ in 0..80 {
        let (p, q) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(p) < f(q) {
            hi = q;
        } else {
            lo = p;
        }
    }
    better(best, exp_for_offset(xs, ys, ws, 0.5 * (lo + hi)))
}

fn sse_of(m: Model, c: &[f64], xs: &[f64], ys: &[f64], ws: &[f64]) -> f64 {
    xs.iter().zip(ys).zip(ws).map(|((&x, &y), w)| (w * (eval_model(m, c, x) - y)).powi(2)).sum()
}

/// Corrected AIC with the residual sum floored at `floor`.
pub fn aicc(sse: f64, n: usize, k: usize, floor: f64) -> Option<f64> {
    if n <= k + 1 {
        return None;
    }
    let n_f = n as f64;
    let k_f = k as f64;
    Some(n_f * (sse.max(floor) / n_f).ln() + 2.0 * k_f * n_f / (n_f - k_f - 1.0))
}

/// Points where the curve is checked against the lower bound of 1.
fn check_grid(x_min: f64, x_max: f64, xs: &[f64]) -> Vec<f64> {
    let steps = 256;
    let (l0, l1) = (x_min.ln(), x_max.ln());
    let mut g: Vec<f64> = (0..=steps).map(|i| (l0 + (l1 - l0) * i as f64 / steps as f64).exp()).collect();
    g.extend((0..=steps).map(|i| x_min + (x_max - x_min) * i as f64 / steps as f64));
    g.extend_from_slice(xs);
    g
}

fn admissible(m: Model, c: &[f64], q: Quantity, grid: &[f64]) -> std::result::Result<(), String> {
    match m {
        Model::Exponential if c[1] <= 0.0 || c[2] <= 0.0 => return Err("non-growing exponential".into()),
        Model::Polylog(p) | Model::Polynomial(p) if c[p as usize] <= 0.0 => {
            return Err("non-positive leading coefficient".into())
        }
        _ => {}
    }
    if matches!(q, Quantity::Kappa | Quantity::Sparsity) {
        if let Some(x) = grid.iter().find(|&&x| eval_model(m, c, x) < 1.0 - 1e-9) {
            return Err(format!("curve drops below 1 at x={x}"));
        }
    }
    Ok(())
}

/// Fits every candidate, discards inadmissible ones, and keeps the
/// simplest model whose score is within [`TIE_WINDOW`] of the best.
pub fn fit_series(xs: &[f64], ys: &[f64], quantity: Quantity) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::Fit("x and y lengths differ".into()));
    }
    if xs.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {}", xs.len())));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) || xs.iter().any(|&x| x <= 1.0) {
        return Err(Error::Fit("inputs must be finite with x > 1".into()));
    }
    let n = xs.len();
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ws = relative_weights(ys);
    let rms = (ys.iter().zip(&ws).map(|(y, w)| (y * w).powi(2)).sum::<f64>() / n as f64).sqrt();
    let floor = n as f64 * (1e-10 * rms.max(1e-300)).powi(2);
    let grid = check_grid(x_min, x_max, xs);

    let mut candidates = Vec::new();
    let mut fitted: Vec<(Model, Vec<f64>, f64, f64)> = Vec::new();
    for m in Model::CANDIDATES {
        let attempt = match m {
            Model::Exponential => fit_exponential(xs, ys, &ws),
            Model::Constant => linear_fit(&vec![1.0; n], ys, &ws, 0).map(|c| {
                let s = sse_of(m, &c, xs, ys, &ws);
                (c, s)
            }),
            Model::Polylog(p) | Model::Polynomial(p) => {
                let ts: Vec<f64> = xs.iter().map(|&x| basis(m, x)).collect();
                linear_fit(&ts, ys, &ws, p as usize).map(|c| {
                    let s = sse_of(m, &c, xs, ys, &ws);
                    (c, s)
                })
            }
        };
        let entry = match attempt {
            None => CandidateScore { model: m, score: None, sse: None, note: Some("least squares failed".into()) },
            Some((c, sse)) => match (admissible(m, &c, quantity, &grid), aicc(sse, n, m.n_params(), floor)) {
                (Err(why), _) => CandidateScore { model: m, score: None, sse: Some(sse), note: Some(why) },
                (Ok(()), None) => {
                    CandidateScore { model: m, score: None, sse: Some(sse), note: Some("too few points".into()) }
                }
                (Ok(()), Some(score)) => {
                    fitted.push((m, c, sse, score));
                    CandidateScore { model: m, score: Some(score), sse: Some(sse), note: None }
                }
            },
        };
        candidates.push(entry);
    }

    let best = fitted
        .iter()
        .map(|f| f.3)
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        .ok_or_else(|| Error::Fit("no admissible candidate".into()))?;
    let (model, coeffs, sse, score) = fitted
        .into_iter()
        .filter(|f| f.3 <= best + TIE_WINDOW)
        .min_by_key(|f| f.0.rank())
        .expect("best candidate is in the window");

    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(&x, &y)| y - eval_model(model, &coeffs, x)).collect();
    let mut flags = Vec::new();
    if quantity == Quantity::Sparsity
        && xs.iter().zip(ys).any(|(&x, &y)| (eval_model(model, &coeffs, x).round() - y).abs() > 2.0)
    {
        flags.push("sparsity_deviation".to_string());
    }
    Ok(FitResult { quantity, model, coeffs, score, sse, residuals, x_min, x_max, candidates, flags })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Set when too few points survived and the full series was kept.
    pub fallback: bool,
}

/// Indices of points at least as large as every value among the preceding
/// `window - 1` points.
pub fn upper_envelope(ys: &[f64], window: usize) -> Vec<usize> {
    (0..ys.len())
        .filter(|&i| {
            let start = i.saturating_sub(window.saturating_sub(1));
            ys[start..i].iter().all(|&p| ys[i] >= p)
        })
        .collect()
}

/// Envelope of a series for fitting; falls back to the full series when
/// fewer than 4 points survive.
pub fn envelope_for_fit(xs: &[f64], ys: &[f64], window: usize) -> Envelope {
    let keep = upper_envelope(ys, window);
    if keep.len() < 4 {
        Envelope { xs: xs.to_vec(), ys: ys.to_vec(), fallback: true }
    } else {
        Envelope {
            xs: keep.iter().map(|&i| xs[i]).collect(),
            ys: keep.iter().map(|&i| ys[i]).collect(),
            fallback: false,
        }
    }
}

/// Checks measured system sizes against a declared growth class: the
/// log-ratio must not drift by more than half a power of `n`.
pub fn size_growth_consistent(declared: &GrowthClass, ns: &[f64], sizes: &[f64]) -> bool {
    if ns.len() < 3 {
        return true;
    }
    let ts: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let rs: Vec<f64> = ns.iter().zip(sizes).map(|(&n, &s)| s.ln() - declared.eval(n).ln()).collect();
    if rs.iter().any(|r| !r.is_finite()) {
        return false;
    }
    match linear_fit(&ts, &rs, &vec![1.0; ts.len()], 1) {
        Some(c) => c[1].abs() < 0.5,
        None => false,
    }
}
