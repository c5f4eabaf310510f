//! Configuration-driven survey: generate family schedules, measure kappa
//! and s, fit growth laws, classify, and persist records, report,
//! manifest and plot-ready series.

use crate::advantage::{crossover, ratio_r, rtilde, verdict, AdvantageVerdict, Category, Classical, Solver};
use crate::error::{Error, Result};
use crate::families::{enumerate_schedule, FamilyId, FamilySpec, MatrixKind, SkippedInstance};
use crate::fit::{envelope_for_fit, fit_series, size_growth_consistent, FitResult, Quantity, ENVELOPE_WINDOW};
use crate::growth::GrowthClass;
use crate::spectral::{self, CutoffSensitivity, Method, DEFAULT_CUTOFF};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

fn default_cutoff() -> f64 {
    DEFAULT_CUTOFF
}
fn default_solvers() -> Vec<String> {
    Solver::ALL.iter().map(|s| s.to_string()).collect()
}
fn default_scan_max() -> f64 {
    1e12
}
fn default_window() -> usize {
    ENVELOPE_WINDOW
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    #[serde(flatten)]
    pub spec: FamilySpec,
    /// Distinguishes several entries of one family; the record label is
    /// `family/tag`.
    #[serde(default)]
    pub tag: Option<String>,
}

impl FamilyEntry {
    pub fn new(spec: FamilySpec) -> Self {
        FamilyEntry { spec, tag: None }
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if let Some(t) = &self.tag {
            parts.push(t.clone());
        } else {
            if self.spec.repair {
                parts.push("repaired".to_string());
            }
            if self.spec.weight_rule != crate::families::WeightRule::Unit {
                parts.push(format!("{:?}", self.spec.weight_rule).to_lowercase());
            }
        }
        let name = self.spec.family.name();
        if parts.is_empty() {
            name
        } else {
            format!("{name}/{}", parts.join("-"))
        }
    }
}

/// Family id from a record label (`family` or `family/tag`).
pub fn family_of_label(label: &str) -> Result<FamilyId> {
    let name = label.split('/').next().unwrap_or_default();
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| Error::Config(format!("unknown family in label {label:?}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub schema_version: u32,
    pub families: Vec<FamilyEntry>,
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    /// Largest order solved densely; `NLSP_DENSE_LIMIT` or the built-in
    /// default when absent.
    #[serde(default)]
    pub dense_limit: Option<usize>,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<String>,
    /// Upper end of the system-size scan for crossovers.
    #[serde(default = "default_scan_max")]
    pub scan_max_n: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Seed for random families that do not set their own.
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default = "default_window")]
    pub envelope_window: usize,
    /// Compare minimum eigenvalues at cutoffs 1e-6 and 1e-10 per instance.
    #[serde(default)]
    pub cutoff_check: bool,
}

impl SurveyConfig {
    pub fn new(families: Vec<FamilyEntry>) -> Self {
        SurveyConfig {
            schema_version: SCHEMA_VERSION,
            families,
            cutoff: DEFAULT_CUTOFF,
            dense_limit: None,
            solvers: default_solvers(),
            scan_max_n: default_scan_max(),
            output_dir: None,
            base_seed: None,
            envelope_window: ENVELOPE_WINDOW,
            cutoff_check: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SurveyConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn solvers(&self) -> Result<Vec<Solver>> {
        self.solvers
            .iter()
            .map(|s| Solver::parse(s).ok_or_else(|| Error::Config(format!("unknown solver {s:?}"))))
            .collect()
    }

    pub fn dense_limit(&self) -> usize {
        self.dense_limit.unwrap_or_else(spectral::dense_limit_from_env)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.families.is_empty() {
            return Err(Error::Config("no families configured".into()));
        }
        if !(self.cutoff > 0.0) {
            return Err(Error::Config("cutoff must be positive".into()));
        }
        if !(self.scan_max_n >= 3.0) {
            return Err(Error::Config("scan_max_n must be at least 3".into()));
        }
        if self.envelope_window < 2 {
            return Err(Error::Config("envelope_window must be at least 2".into()));
        }
        self.solvers()?;
        let mut labels = std::collections::HashSet::new();
        for e in &self.families {
            e.spec.validate().map_err(|err| Error::Config(format!("{}: {err}", e.label())))?;
            if !labels.insert(e.label()) {
                return Err(Error::Config(format!("duplicate family label {}", e.label())));
            }
        }
        Ok(())
    }

    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn effective_spec(&self, e: &FamilyEntry) -> FamilySpec {
        let mut spec = e.spec.clone();
        if spec.seed.is_none() && spec.family.is_random() {
            spec.seed = self.base_seed;
        }
        spec
    }
}

/// One row of `records.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub family: String,
    pub n: usize,
    pub system_size: usize,
    pub matrix_kind: MatrixKind,
    pub kappa: f64,
    pub lambda_min_nz: f64,
    pub lambda_max: f64,
    pub sparsity: usize,
    pub cutoff: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub family: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub system_size: usize,
    pub method: Method,
    pub elapsed_ms: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestSkip {
    pub family: String,
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub created_unix: u64,
    pub entries: Vec<ManifestEntry>,
    pub skipped: Vec<ManifestSkip>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffCheck {
    pub n: usize,
    pub sensitivity: CutoffSensitivity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub label: String,
    pub family: FamilyId,
    pub matrix_kind: MatrixKind,
    pub size_growth: GrowthClass,
    pub n_records: usize,
    pub skipped: Vec<SkippedInstance>,
    pub size_growth_consistent: bool,
    /// Random families are fitted on their upper envelope; set when too
    /// few points survived and the full series was used.
    pub envelope_fallback: Option<bool>,
    pub kappa_fit: Option<FitResult>,
    pub s_fit: Option<FitResult>,
    /// Fitted growths composed with the size growth, in the index `n`.
    pub kappa_growth: Option<GrowthClass>,
    pub s_growth: Option<GrowthClass>,
    pub verdicts: BTreeMap<String, AdvantageVerdict>,
    pub cutoff_checks: Vec<CutoffCheck>,
    pub error: Option<String>,
}

impl FamilyReport {
    pub fn category(&self, solver: Solver) -> Option<Category> {
        self.verdicts.get(&solver.to_string()).map(|v| v.category)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config_hash: String,
    pub families: Vec<FamilyReport>,
    pub failures: usize,
}

#[derive(Debug, Clone)]
pub struct SurveyOutput {
    pub records: Vec<Record>,
    pub report: Report,
    pub manifest: Manifest,
}

impl SurveyOutput {
    pub fn family(&self, label: &str) -> Option<&FamilyReport> {
        self.report.families.iter().find(|f| f.label == label)
    }
}

struct Measured {
    record: Record,
    entry: ManifestEntry,
    check: Option<CutoffCheck>,
}

struct FamilyRun {
    label: String,
    spec: FamilySpec,
    measured: Vec<Measured>,
    skipped: Vec<SkippedInstance>,
}

fn measure_family(cfg: &SurveyConfig, e: &FamilyEntry) -> Result<FamilyRun> {
    let spec = cfg.effective_spec(e);
    let label = e.label();
    let schedule = enumerate_schedule(&spec)?;
    let dense_limit = cfg.dense_limit();
    let kind = spec.matrix_kind();
    let results: Vec<std::result::Result<Measured, SkippedInstance>> = schedule
        .instances
        .par_iter()
        .map(|inst| {
            let t0 = Instant::now();
            let rec = spectral::measure(&inst.graph, kind, cfg.cutoff, dense_limit)
                .map_err(|err| SkippedInstance { n: inst.n, reason: err.to_string() })?;
            let check = if cfg.cutoff_check && rec.system_size <= dense_limit {
                spectral::system_matrix(&inst.graph, kind)
                    .and_then(|m| spectral::cutoff_sensitivity(&m))
                    .ok()
                    .map(|sensitivity| CutoffCheck { n: inst.n, sensitivity })
            } else {
                None
            };
            let record = Record {
                family: label.clone(),
                n: inst.n,
                system_size: rec.system_size,
                matrix_kind: kind,
                kappa: rec.kappa,
                lambda_min_nz: rec.lambda_min_nz,
                lambda_max: rec.lambda_max,
                sparsity: rec.sparsity,
                cutoff: cfg.cutoff,
                seed: inst.seed,
            };
            let entry = ManifestEntry {
                family: label.clone(),
                n: inst.n,
                seed: inst.seed,
                system_size: rec.system_size,
                method: rec.method,
                elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
                warnings: inst.warnings.clone(),
            };
            Ok(Measured { record, entry, check })
        })
        .collect();
    let mut measured = Vec::new();
    let mut skipped = schedule.skipped;
    for r in results {
        match r {
            Ok(m) => measured.push(m),
            Err(s) => {
                log::warn!("{label} n={}: {}", s.n, s.reason);
                skipped.push(s);
            }
        }
    }
    skipped.sort_by_key(|s| s.n);
    Ok(FamilyRun { label, spec, measured, skipped })
}

/// Series sorted by system size with repeated sizes merged (maximum kept).
fn series(records: &[&Record], y: impl Fn(&Record) -> f64) -> (Vec<f64>, Vec<f64>) {
    let mut pts: Vec<(f64, f64)> = records.iter().map(|r| (r.system_size as f64, y(r))).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (x, v) in pts {
        if xs.last() == Some(&x) {
            let last = ys.last_mut().expect("parallel vectors");
            *last = last.max(v);
        } else {
            xs.push(x);
            ys.push(v);
        }
    }
    (xs, ys)
}

/// Geometric scan of system sizes from 3 to `max_n`.
pub fn scan_grid(max_n: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut n = 3.0f64;
    while n <= max_n {
        out.push(n.round());
        n *= 1.02;
    }
    out.dedup();
    out
}

/// Measurements of one family to be fitted over system size.
pub struct FitInput<'a> {
    pub label: &'a str,
    pub family: FamilyId,
    /// Fit the upper envelope instead of the raw series.
    pub random: bool,
    pub size_growth: GrowthClass,
    pub records: Vec<&'a Record>,
}

pub struct FamilyFits {
    pub kappa_fit: FitResult,
    pub s_fit: FitResult,
    pub envelope_fallback: Option<bool>,
}

pub fn fit_family(input: &FitInput<'_>, window: usize) -> Result<FamilyFits> {
    let (xs, ks) = series(&input.records, |r| r.kappa);
    let (_, ss) = series(&input.records, |r| r.sparsity as f64);
    let (kx, ky, sx, sy, fallback) = if input.random {
        let ke = envelope_for_fit(&xs, &ks, window);
        let se = envelope_for_fit(&xs, &ss, window);
        let fb = ke.fallback || se.fallback;
        (ke.xs, ke.ys, se.xs, se.ys, Some(fb))
    } else {
        (xs.clone(), ks, xs, ss, None)
    };
    let kappa_fit = fit_series(&kx, &ky, Quantity::Kappa)?;
    let s_fit = fit_series(&sx, &sy, Quantity::Sparsity)?;
    Ok(FamilyFits { kappa_fit, s_fit, envelope_fallback: fallback })
}

/// Composes fits with the size growth and classifies for every solver.
pub fn classify_fits(
    size_growth: &GrowthClass,
    kappa_fit: &FitResult,
    s_fit: &FitResult,
    solvers: &[Solver],
    scan: &[f64],
) -> Result<(GrowthClass, GrowthClass, BTreeMap<String, AdvantageVerdict>)> {
    let kappa_n = kappa_fit.growth().compose(size_growth)?;
    let s_n = s_fit.growth().compose(size_growth)?;
    let mut verdicts = BTreeMap::new();
    for &solver in solvers {
        let mut v = verdict(solver, size_growth, &kappa_n, &s_n);
        v.crossover_n = crossover(solver, kappa_fit, s_fit, scan);
        verdicts.insert(solver.to_string(), v);
    }
    Ok((kappa_n, s_n, verdicts))
}

fn analyze(cfg: &SurveyConfig, run: &FamilyRun, solvers: &[Solver], scan: &[f64]) -> FamilyReport {
    let spec = &run.spec;
    let size_growth = spec.size_growth.unwrap_or_else(|| spec.size_growth().expect("validated spec"));
    let records: Vec<&Record> = run.measured.iter().map(|m| &m.record).collect();
    let ns: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let sizes: Vec<f64> = records.iter().map(|r| r.system_size as f64).collect();
    let mut report = FamilyReport {
        label: run.label.clone(),
        family: spec.family,
        matrix_kind: spec.matrix_kind(),
        size_growth,
        n_records: records.len(),
        skipped: run.skipped.clone(),
        size_growth_consistent: size_growth_consistent(&size_growth, &ns, &sizes),
        envelope_fallback: None,
        kappa_fit: None,
        s_fit: None,
        kappa_growth: None,
        s_growth: None,
        verdicts: BTreeMap::new(),
        cutoff_checks: run.measured.iter().filter_map(|m| m.check.clone()).collect(),
        error: None,
    };
    let input = FitInput {
        label: &run.label,
        family: spec.family,
        random: spec.family.is_random(),
        size_growth,
        records,
    };
    let fits = match fit_family(&input, cfg.envelope_window) {
        Ok(f) => f,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.envelope_fallback = fits.envelope_fallback;
    match classify_fits(&size_growth, &fits.kappa_fit, &fits.s_fit, solvers, scan) {
        Ok((k, s, v)) => {
            report.kappa_growth = Some(k);
            report.s_growth = Some(s);
            report.verdicts = v;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report.kappa_fit = Some(fits.kappa_fit);
    report.s_fit = Some(fits.s_fit);
    report
}

/// Runs the whole pipeline in memory.
pub fn run_survey(cfg: &SurveyConfig) -> Result<SurveyOutput> {
    cfg.validate()?;
    let solvers = cfg.solvers()?;
    let scan = scan_grid(cfg.scan_max_n);
    let runs: Vec<FamilyRun> = cfg.families.iter().map(|e| measure_family(cfg, e)).collect::<Result<_>>()?;
    let families: Vec<FamilyReport> = runs.par_iter().map(|r| analyze(cfg, r, &solvers, &scan)).collect();

    let mut records = Vec::new();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for run in &runs {
        for m in &run.measured {
            records.push(m.record.clone());
            entries.push(m.entry.clone());
        }
        skipped.extend(run.skipped.iter().map(|s| ManifestSkip { family: run.label.clone(), n: s.n, reason: s.reason.clone() }));
    }
    let failures = skipped.len() + families.iter().filter(|f| f.error.is_some()).count();
    let config_hash = cfg.hash();
    let created_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SurveyOutput {
        records,
        report: Report { schema_version: SCHEMA_VERSION, config_hash: config_hash.clone(), families, failures },
        manifest: Manifest {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            created_unix,
            entries,
            skipped,
        },
    })
}

fn slug(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' }).collect()
}

pub fn write_records<W: std::io::Write>(records: &[Record], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    let mut rd = csv::Reader::from_path(path)?;
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Writes records.csv, report.json, manifest.json and per-family series.
pub fn write_outputs(cfg: &SurveyConfig, out: &SurveyOutput, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("series"))?;
    write_records(&out.records, fs::File::create(dir.join("records.csv"))?)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(&out.report)?)?;
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&out.manifest)?)?;
    let solvers = cfg.solvers()?;
    for fam in &out.report.families {
        let base = dir.join("series").join(slug(&fam.label));
        let recs: Vec<&Record> = out.records.iter().filter(|r| r.family == fam.label).collect();
        let (Some(kf), Some(sf)) = (&fam.kappa_fit, &fam.s_fit) else { continue };

        let mut w = csv::Writer::from_path(base.with_extension("measured.csv"))?;
        w.write_record(["N", "kappa", "s", "kappa_fit", "s_fit"])?;
        for r in &recs {
            let x = r.system_size as f64;
            w.write_record([
                r.system_size.to_string(),
                r.kappa.to_string(),
                r.sparsity.to_string(),
                kf.eval(x).to_string(),
                sf.eval(x).round().to_string(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(base.with_extension("ratio.csv"))?;
        w.write_record(["N", "solver", "R"])?;
        for r in &recs {
            for &s in &solvers {
                if let Ok(v) = ratio_r(s, r.system_size as f64, kf, sf) {
                    w.write_record([r.system_size.to_string(), s.to_string(), v.to_string()])?;
                }
            }
        }
        w.flush()?;

        let (Some(kn), Some(sn)) = (&fam.kappa_growth, &fam.s_growth) else { continue };
        let mut w = csv::Writer::from_path(base.with_extension("rtilde.csv"))?;
        w.write_record(["n", "solver", "rtilde", "reference"])?;
        let (lo, hi) = recs.iter().fold((usize::MAX, 0), |(lo, hi), r| (lo.min(r.n), hi.max(r.n)));
        for n in lo.max(2)..=hi {
            for &s in &solvers {
                let v = rtilde(Classical::Cls, s, n as f64, &fam.size_growth, kn, sn);
                if v.is_finite() {
                    w.write_record([n.to_string(), s.to_string(), v.to_string(), n.to_string()])?;
                }
            }
        }
        w.flush()?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityEntry {
    pub label: String,
    pub seeds: Vec<u64>,
    /// Category per solver and seed (`None` when the fit failed).
    pub categories: BTreeMap<String, Vec<Option<Category>>>,
    pub stable: bool,
}

/// Re-runs each random family under several seeds and reports whether the
/// verdicts agree.
pub fn seed_sensitivity(cfg: &SurveyConfig, seeds: &[u64]) -> Result<Vec<StabilityEntry>> {
    cfg.validate()?;
    if seeds.len() < 2 {
        return Err(Error::InvalidParam("seed sensitivity needs at least two seeds".into()));
    }
    if let Some(e) = cfg.families.iter().find(|e| !e.spec.family.is_random()) {
        return Err(Error::InvalidParam(format!("{} is deterministic", e.label())));
    }
    let solvers = cfg.solvers()?;
    let mut out = Vec::new();
    for e in &cfg.families {
        let per_seed: Vec<FamilyReport> = seeds
            .iter()
            .map(|&seed| {
                let mut entry = e.clone();
                entry.spec.seed = Some(seed);
                let mut one = cfg.clone();
                one.families = vec![entry];
                run_survey(&one).map(|o| o.report.families.into_iter().next().expect("one family"))
            })
            .collect::<Result<_>>()?;
        let mut categories = BTreeMap::new();
        for &s in &solvers {
            categories.insert(s.to_string(), per_seed.iter().map(|r| r.category(s)).collect::<Vec<_>>());
        }
        let stable = categories.values().all(|v: &Vec<Option<Category>>| v.iter().all(|c| c.is_some() && *c == v[0]));
        out.push(StabilityEntry { label: e.label(), seeds: seeds.to_vec(), categories, stable });
    }
    Ok(out)
}

/// Fits of one family as exchanged between `survey fit`, `survey classify`
/// and `survey crossover`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFitEntry {
    pub label: String,
    pub family: FamilyId,
    pub size_growth: GrowthClass,
    pub kappa_fit: Option<FitResult>,
    pub s_fit: Option<FitResult>,
    pub error: Option<String>,
}

/// Groups records by label and fits each group. The size growth is the
/// family's declared growth under default parameters.
pub fn fit_records(records: &[Record], window: usize) -> Result<Vec<FamilyFitEntry>> {
    let mut groups: BTreeMap<&str, Vec<&Record>> = BTreeMap::new();
    for r in records {
        groups.entry(r.family.as_str()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(label, recs)| {
            let family = family_of_label(label)?;
            let size_growth = family.size_growth(&family.default_params())?;
            let input = FitInput { label, family, random: family.is_random(), size_growth, records: recs };
            Ok(match fit_family(&input, window) {
                Ok(f) => FamilyFitEntry {
                    label: label.to_string(),
                    family,
                    size_growth,
                    kappa_fit: Some(f.kappa_fit),
                    s_fit: Some(f.s_fit),
                    error: None,
                },
                Err(e) => FamilyFitEntry {
                    label: label.to_string(),
                    family,
                    size_growth,
                    kappa_fit: None,
                    s_fit: None,
                    error: Some(e.to_string()),
                },
            })
        })
        .collect()
}
