//! Solver runtime models, classical-to-quantum runtime ratios, crossovers
//! and advantage categories.

mod tables;

pub use tables::{reproduce_tables, table2_rows, table3_rows, TableDiff, TableRow};

use crate::error::{Error, Result};
use crate::fit::FitResult;
use crate::growth::{ratio, GrowthClass};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Hhl,
    HhlAa,
    HhlVtaa,
    PsiHhl,
    PhaseRand,
    /// CKS with `polylog = log^k`.
    Cks(u32),
    /// AQC(exp) with `polylog = log^k`.
    Aqc(u32),
    Dream,
}

impl Solver {
    pub const ALL: [Solver; 12] = [
        Solver::Hhl,
        Solver::HhlAa,
        Solver::HhlVtaa,
        Solver::PsiHhl,
        Solver::PhaseRand,
        Solver::Cks(1),
        Solver::Cks(2),
        Solver::Cks(3),
        Solver::Aqc(1),
        Solver::Aqc(2),
        Solver::Aqc(3),
        Solver::Dream,
    ];

    pub fn parse(s: &str) -> Option<Solver> {
        let s = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let poly = |rest: &str| rest.trim_matches(|c| c == '(' || c == ')' || c == '_').parse::<u32>().ok();
        Some(match s.as_str() {
            "hhl" => Solver::Hhl,
            "hhl_aa" => Solver::HhlAa,
            "hhl_vtaa" => Solver::HhlVtaa,
            "psi_hhl" => Solver::PsiHhl,
            "phase_rand" => Solver::PhaseRand,
            "dream" => Solver::Dream,
            _ if s.starts_with("cks") => Solver::Cks(poly(&s[3..]).filter(|k| (1..=3).contains(k))?),
            _ if s.starts_with("aqc") => Solver::Aqc(poly(&s[3..]).filter(|k| (1..=3).contains(k))?),
            _ => return None,
        })
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Hhl => write!(f, "HHL"),
            Solver::HhlAa => write!(f, "HHL_AA"),
            Solver::HhlVtaa => write!(f, "HHL_VTAA"),
            Solver::PsiHhl => write!(f, "PSI_HHL"),
            Solver::PhaseRand => write!(f, "PHASE_RAND"),
            Solver::Cks(k) => write!(f, "CKS({k})"),
            Solver::Aqc(k) => write!(f, "AQC({k})"),
            Solver::Dream => write!(f, "DREAM"),
        }
    }
}

/// Classical baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classical {
    /// Conjugate-gradient style: `N s sqrt(kappa) log(1/eps)`.
    Cls,
    /// Near-linear Laplacian solver:
    /// `M log^2 N log(1/eps) log(M log^2 N log(1/eps))` with `M ~ N`.
    Kmp,
    /// Planar Laplacian solver: `M log(1/eps)` with `M ~ N`.
    Planar,
}

/// Arithmetic shared by numeric values and growth classes.
trait Quant: Copy {
    fn times(self, o: Self) -> Self;
    fn power(self, r: Rational64) -> Self;
    fn log(self) -> Self;
}

impl Quant for f64 {
    fn times(self, o: f64) -> f64 {
        self * o
    }
    fn power(self, r: Rational64) -> f64 {
        self.powf(*r.numer() as f64 / *r.denom() as f64)
    }
    fn log(self) -> f64 {
        self.ln()
    }
}

impl Quant for GrowthClass {
    fn times(self, o: GrowthClass) -> GrowthClass {
        self.mul(&o)
    }
    fn power(self, r: Rational64) -> GrowthClass {
        self.pow(r)
    }
    fn log(self) -> GrowthClass {
        self.log_of()
    }
}

/// Inputs to the runtime expressions with `1/eps = log N` substituted:
/// `log_n` stands for both `log N` and `1/eps`, `loglog_n` for
/// `log(1/eps)`.
#[derive(Debug, Clone, Copy)]
struct Inputs<Q> {
    size: Q,
    log_n: Q,
    loglog_n: Q,
    kappa: Q,
    s: Q,
}

fn p(k: i64) -> Rational64 {
    ratio(k, 1)
}

fn quantum_expr<Q: Quant>(solver: Solver, q: &Inputs<Q>) -> Q {
    let (l, ll, k, s) = (q.log_n, q.loglog_n, q.kappa, q.s);
    match solver {
        Solver::Hhl => l.times(s.power(p(2))).times(k.power(p(3))).times(l),
        Solver::HhlAa => l.times(s.power(p(2))).times(k.power(p(2))).times(l),
        Solver::HhlVtaa => l
            .times(s.power(p(2)))
            .times(k)
            .times(k.times(l).log().power(p(3)))
            .times(l.power(p(3)))
            .times(ll.power(p(2))),
        Solver::PsiHhl => l.times(s.power(p(2))).times(k).times(l),
        Solver::PhaseRand => l.times(s).times(k).times(k.log()).times(l),
        Solver::Cks(j) | Solver::Aqc(j) => {
            l.times(s).times(k).times(s.times(k).times(l).log().power(p(j as i64)))
        }
        Solver::Dream => l.times(s.power(ratio(1, 2))).times(k).times(ll),
    }
}

fn classical_expr<Q: Quant>(c: Classical, q: &Inputs<Q>) -> Q {
    match c {
        Classical::Cls => q.size.times(q.s).times(q.kappa.power(ratio(1, 2))).times(q.loglog_n),
        Classical::Kmp => {
            let inner = q.size.times(q.log_n.power(p(2))).times(q.loglog_n);
            inner.times(inner.log())
        }
        Classical::Planar => q.size.times(q.loglog_n),
    }
}

fn numeric_inputs(n_size: f64, kappa: f64, s: f64) -> Result<Inputs<f64>> {
    if !(n_size >= 3.0) {
        return Err(Error::InvalidParam(format!("system size {n_size} must be at least 3")));
    }
    if !(kappa >= 1.0) || !(s >= 1.0) {
        return Err(Error::InvalidParam(format!("need kappa >= 1 and s >= 1 (kappa={kappa}, s={s})")));
    }
    let l = n_size.ln();
    Ok(Inputs { size: n_size, log_n: l, loglog_n: l.ln(), kappa, s })
}

/// Runtime with unit prefactors and natural logs.
pub fn runtime(solver: Solver, n_size: f64, kappa: f64, s: f64) -> Result<f64> {
    Ok(quantum_expr(solver, &numeric_inputs(n_size, kappa, s)?))
}

pub fn classical_runtime(c: Classical, n_size: f64, kappa: f64, s: f64) -> Result<f64> {
    Ok(classical_expr(c, &numeric_inputs(n_size, kappa, s)?))
}

/// `t_CLS / t_solver` at explicit values.
pub fn ratio_at(solver: Solver, n_size: f64, kappa: f64, s: f64) -> Result<f64> {
    let t = runtime(solver, n_size, kappa, s)?;
    if t == 0.0 {
        return Err(Error::InvalidParam(format!("{solver} runtime vanishes at kappa={kappa}")));
    }
    Ok(classical_runtime(Classical::Cls, n_size, kappa, s)? / t)
}

/// `t_CLS / t_solver` with kappa and s taken from fitted curves.
pub fn ratio_r(solver: Solver, n_size: f64, kappa_fit: &FitResult, s_fit: &FitResult) -> Result<f64> {
    let kappa = kappa_fit.eval(n_size);
    let s = s_fit.eval(n_size);
    if !(kappa >= 1.0 && s >= 1.0) {
        return Err(Error::Fit(format!("fit undefined at N={n_size} (kappa={kappa}, s={s})")));
    }
    ratio_at(solver, n_size, kappa, s)
}

/// Smallest scanned size with `ratio_r >= 1`.
pub fn crossover(solver: Solver, kappa_fit: &FitResult, s_fit: &FitResult, scan: &[f64]) -> Option<f64> {
    scan.iter().copied().find(|&n| ratio_r(solver, n, kappa_fit, s_fit).is_ok_and(|r| r >= 1.0))
}

fn class_inputs(size: &GrowthClass, kappa: &GrowthClass, s: &GrowthClass) -> Inputs<GrowthClass> {
    let l = size.log_of();
    Inputs { size: *size, log_n: l, loglog_n: l.log_of(), kappa: *kappa, s: *s }
}

pub fn solver_class(solver: Solver, size: &GrowthClass, kappa: &GrowthClass, s: &GrowthClass) -> GrowthClass {
    quantum_expr(solver, &class_inputs(size, kappa, s))
}

pub fn classical_class(c: Classical, size: &GrowthClass, kappa: &GrowthClass, s: &GrowthClass) -> GrowthClass {
    classical_expr(c, &class_inputs(size, kappa, s))
}

/// Growth class of `t_CLS / t_solver` in the family index `n`.
pub fn ratio_class(solver: Solver, size: &GrowthClass, kappa: &GrowthClass, s: &GrowthClass) -> GrowthClass {
    classical_class(Classical::Cls, size, kappa, s).div(&solver_class(solver, size, kappa, s))
}

/// Prefactor-free ratio in the index domain: every log of a growth class
/// is replaced by its class value, so `log N` for `N = 2^n` is `n`.
pub fn rtilde(c: Classical, solver: Solver, n: f64, size: &GrowthClass, kappa: &GrowthClass, s: &GrowthClass) -> f64 {
    let ci = class_inputs(size, kappa, s);
    let q = Inputs {
        size: ci.size.eval(n),
        log_n: ci.log_n.eval(n),
        loglog_n: ci.loglog_n.eval(n),
        kappa: ci.kappa.eval(n),
        s: ci.s.eval(n),
    };
    classical_expr(c, &q) / quantum_expr(solver, &q)
}

/// Smallest integer index in `range` with `rtilde >= 1`.
pub fn crossover_n(
    c: Classical,
    solver: Solver,
    size: &GrowthClass,
    kappa: &GrowthClass,
    s: &GrowthClass,
    range: std::ops::RangeInclusive<u32>,
) -> Option<u32> {
    range.into_iter().find(|&n| rtilde(c, solver, n as f64, size, kappa, s) >= 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Bad,
    Good,
    Better,
    Best,
}

impl Category {
    /// Label used in the survey tables.
    pub fn label(&self) -> &'static str {
        match self {
            Category::Best => "exp",
            Category::Better => "poly",
            Category::Good => "sub-lin",
            Category::Bad => "none",
        }
    }

    pub fn from_label(s: &str) -> Option<Category> {
        Some(match s {
            "exp" => Category::Best,
            "poly" => Category::Better,
            "sub-lin" => Category::Good,
            "none" => Category::Bad,
            _ => return None,
        })
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Best => "best",
            Category::Better => "better",
            Category::Good => "good",
            Category::Bad => "bad",
        };
        f.write_str(s)
    }
}

/// Category of a ratio class. Exactly linear growth counts as better.
pub fn categorize(r: &GrowthClass) -> Category {
    let zero = ratio(0, 1);
    let one = ratio(1, 1);
    if r.exp_rate > 0.0 {
        return Category::Best;
    }
    if r.exp_rate < 0.0 || r.poly_deg < zero {
        return Category::Bad;
    }
    if r.poly_deg == zero {
        let unbounded = r.log_deg > zero || (r.log_deg == zero && r.loglog_deg > zero);
        return if unbounded { Category::Good } else { Category::Bad };
    }
    let at_least_linear = r.poly_deg > one
        || (r.poly_deg == one && (r.log_deg > zero || (r.log_deg == zero && r.loglog_deg >= zero)));
    if at_least_linear {
        Category::Better
    } else {
        Category::Good
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageVerdict {
    pub solver: Solver,
    pub ratio_class: GrowthClass,
    pub category: Category,
    /// The solver's own runtime grows exponentially.
    pub futile: bool,
    pub crossover_n: Option<f64>,
}

pub fn classify(solver: Solver, ratio: &GrowthClass, t_solver: &GrowthClass) -> AdvantageVerdict {
    AdvantageVerdict {
        solver,
        ratio_class: *ratio,
        category: categorize(ratio),
        futile: t_solver.exp_rate > 0.0,
        crossover_n: None,
    }
}

/// Ratio class and verdict from growths in the family index.
pub fn verdict(solver: Solver, size: &GrowthClass, kappa: &GrowthClass, s: &GrowthClass) -> AdvantageVerdict {
    classify(solver, &ratio_class(solver, size, kappa, s), &solver_class(solver, size, kappa, s))
}
