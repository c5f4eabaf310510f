use nalgebra::{DMatrix, DVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nlsp_core::advantage::{crossover, reproduce_tables, table2_rows, table3_rows, verdict, Solver};
use nlsp_core::graph::{parse_edge_list, Graph, SymmetricMatrix};
use nlsp_core::hhl::{self, HhlConfig, SolveMethod};
use nlsp_core::spectral::{self, dense_limit_from_env};
use nlsp_core::families::MatrixKind;
use nlsp_core::superfamily::{self, SliceKind};
use nlsp_core::survey::{self, FamilyFitEntry, SurveyConfig};
use nlsp_core::Error;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "nlsp", version, about = "Graph-family linear-system survey and HHL tools")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run and post-process surveys.
    #[command(subcommand)]
    Survey(SurveyCmd),
    /// Generalized hypercube tableau.
    #[command(subcommand)]
    Superfamily(SuperCmd),
    /// Simulated HHL and its network applications.
    #[command(subcommand)]
    Hhl(HhlCmd),
    /// Reproduction checks.
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Subcommand)]
enum SurveyCmd {
    /// Run a survey config; writes records.csv, report.json, manifest.json and series/.
    Run {
        config: PathBuf,
        /// Overrides the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit kappa and s per family from a records.csv.
    Fit {
        records: PathBuf,
        #[arg(long, default_value_t = nlsp_core::fit::ENVELOPE_WINDOW)]
        window: usize,
    },
    /// Classify fits (from `survey fit`) for the given solvers.
    Classify {
        fits: PathBuf,
        #[arg(long = "solver", default_values_t = vec!["HHL".to_string(), "CKS(1)".to_string(), "DREAM".to_string()])]
        solvers: Vec<String>,
    },
    /// Smallest scanned system size with R >= 1.
    Crossover {
        fits: PathBuf,
        #[arg(long)]
        solver: String,
        #[arg(long = "max-n", default_value_t = 1e12)]
        max_n: f64,
    },
    /// Re-run random families under several seeds.
    Seeds {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SliceArg {
    Row,
    Column,
    Main,
    Super,
    Sub,
    IsoS,
}

#[derive(Subcommand)]
enum SuperCmd {
    /// Measured and predicted kappa, s per cell, as CSV.
    Tableau {
        #[arg(long = "a-max", default_value_t = 6)]
        a_max: usize,
        #[arg(long = "m-max", default_value_t = 5)]
        m_max: usize,
        /// Skip cells with more vertices than this.
        #[arg(long, default_value_t = 2048)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a slice of the tableau.
    Slice {
        #[arg(long, value_enum)]
        kind: SliceArg,
        /// m for rows, a for columns, D for diagonals, s for iso-s.
        #[arg(long, default_value_t = 0)]
        value: usize,
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 10)]
        to: usize,
        #[arg(long, default_value = "HHL")]
        solver: String,
    },
}

#[derive(Args)]
struct HhlOpts {
    /// Clock qubits.
    #[arg(long = "n-r", default_value_t = 10)]
    n_r: u32,
    /// Use the dense pseudo-inverse instead of the simulator.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum HhlCmd {
    /// Solve a problem file: {"matrix": [[..]] | "graph": path, "b": [..], "config": {..}}.
    Solve { problem: PathBuf },
    /// Effective resistance between two vertices of an undirected graph.
    Reff {
        graph: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        opts: HhlOpts,
    },
    /// Minimum-norm flow on a directed graph for whitespace-separated injections.
    Traffic {
        graph: PathBuf,
        injections: PathBuf,
        #[command(flatten)]
        opts: HhlOpts,
    },
}

#[derive(Subcommand)]
enum ReproCmd {
    /// Classify every printed table row and report label mismatches.
    Tables,
}

#[derive(serde::Deserialize)]
struct Problem {
    #[serde(default)]
    matrix: Option<Vec<Vec<f64>>>,
    /// Edge list; undirected gives the Laplacian, directed the dilated incidence matrix.
    #[serde(default)]
    graph: Option<PathBuf>,
    b: Vec<f64>,
    config: HhlConfig,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Json(_) | Error::Io(_) | Error::Csv(_) | Error::InvalidParam(_) => EXIT_CONFIG,
        _ => 1,
    }
}

fn read_graph(path: &Path) -> nlsp_core::Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

fn read_fits(path: &Path) -> nlsp_core::Result<Vec<FamilyFitEntry>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn parse_solver(s: &str) -> nlsp_core::Result<Solver> {
    Solver::parse(s).ok_or_else(|| Error::Config(format!("unknown solver {s:?}")))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn method(opts: &HhlOpts) -> SolveMethod {
    if opts.oracle {
        SolveMethod::Oracle
    } else {
        SolveMethod::Hhl { n_r: opts.n_r, config: None }
    }
}

fn run(cli: Cli) -> nlsp_core::Result<u8> {
    match cli.cmd {
        Cmd::Survey(SurveyCmd::Run { config, out }) => {
            let mut cfg = SurveyConfig::load(&config)?;
            if out.is_some() {
                cfg.output_dir = out;
            }
            let dir = cfg.output_dir.clone().ok_or_else(|| Error::Config("no output directory given".into()))?;
            let res = survey::run_survey(&cfg)?;
            survey::write_outputs(&cfg, &res, &dir)?;
            for f in &res.report.families {
                let hhl = f.category(Solver::Hhl).map(|c| c.to_string()).unwrap_or_else(|| "-".into());
                println!("{:<40} records={:<4} HHL={hhl}", f.label, f.n_records);
            }
            log::info!("wrote {}", dir.display());
            Ok(if res.report.failures > 0 { EXIT_PARTIAL } else { 0 })
        }
        Cmd::Survey(SurveyCmd::Fit { records, window }) => {
            let fits = survey::fit_records(&survey::read_records(&records)?, window)?;
            let failed = fits.iter().any(|f| f.error.is_some());
            println!("{}", serde_json::to_string_pretty(&fits)?);
            Ok(if failed { EXIT_PARTIAL } else { 0 })
        }
        Cmd::Survey(SurveyCmd::Classify { fits, solvers }) => {
            let solvers = solvers.iter().map(|s| parse_solver(s)).collect::<nlsp_core::Result<Vec<_>>>()?;
            let mut out = Vec::new();
            let mut failed = false;
            for f in read_fits(&fits)? {
                let (Some(k), Some(s)) = (&f.kappa_fit, &f.s_fit) else {
                    failed = true;
                    continue;
                };
                match survey::classify_fits(&f.size_growth, k, s, &solvers, &[]) {
                    Ok((kn, sn, v)) => out.push(json!({
                        "label": f.label,
                        "kappa_growth": kn.to_string(),
                        "s_growth": sn.to_string(),
                        "verdicts": v,
                    })),
                    Err(e) => {
                        failed = true;
                        out.push(json!({ "label": f.label, "error": e.to_string() }));
                    }
                }
            }
            print_json(&json!(out));
            Ok(if failed { EXIT_PARTIAL } else { 0 })
        }
        Cmd::Survey(SurveyCmd::Crossover { fits, solver, max_n }) => {
            let solver = parse_solver(&solver)?;
            let scan = survey::scan_grid(max_n);
            for f in read_fits(&fits)? {
                let n = match (&f.kappa_fit, &f.s_fit) {
                    (Some(k), Some(s)) => crossover(solver, k, s, &scan).map(|n| n.to_string()),
                    _ => None,
                };
                println!("{:<40} {solver}: {}", f.label, n.unwrap_or_else(|| "none".into()));
            }
            Ok(0)
        }
        Cmd::Survey(SurveyCmd::Seeds { config, seeds }) => {
            let cfg = SurveyConfig::load(&config)?;
            let st = survey::seed_sensitivity(&cfg, &seeds)?;
            println!("{}", serde_json::to_string_pretty(&st)?);
            Ok(if st.iter().all(|s| s.stable) { 0 } else { EXIT_PARTIAL })
        }
        Cmd::Superfamily(SuperCmd::Tableau { a_max, m_max, cap, out }) => {
            let cells = superfamily::tableau(a_max, m_max, cap, dense_limit_from_env())?;
            match out {
                Some(p) => superfamily::write_tableau_csv(&cells, std::fs::File::create(p)?)?,
                None => superfamily::write_tableau_csv(&cells, std::io::stdout())?,
            }
            Ok(if cells.iter().all(|c| c.matches_prediction()) { 0 } else { EXIT_PARTIAL })
        }
        Cmd::Superfamily(SuperCmd::Slice { kind, value, from, to, solver }) => {
            let kind = match kind {
                SliceArg::Row => SliceKind::Row(value),
                SliceArg::Column => SliceKind::Column(value),
                SliceArg::Main => SliceKind::MainDiagonal,
                SliceArg::Super => SliceKind::SuperDiagonal(value),
                SliceArg::Sub => SliceKind::SubDiagonal(value),
                SliceArg::IsoS => SliceKind::IsoS(value),
            };
            let slice = superfamily::build_slice(kind, from..=to)?;
            let v = superfamily::slice_verdict(&slice, parse_solver(&solver)?)?;
            print_json(&json!({
                "kind": slice.kind,
                "cells": slice.cells,
                "note": slice.note,
                "ratio_class": v.ratio_class.to_string(),
                "category": v.category.to_string(),
                "futile": v.futile,
            }));
            Ok(0)
        }
        Cmd::Hhl(HhlCmd::Solve { problem }) => {
            let p: Problem = serde_json::from_str(&std::fs::read_to_string(&problem)?)?;
            let a = match (&p.matrix, &p.graph) {
                (Some(rows), None) => {
                    let n = rows.len();
                    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                    if flat.len() != n * n {
                        return Err(Error::Config("matrix must be square".into()));
                    }
                    SymmetricMatrix::from_dense(&DMatrix::from_row_slice(n, n, &flat))?
                }
                (None, Some(path)) => {
                    let g = read_graph(path)?;
                    let kind = if g.is_directed() {
                        MatrixKind::Incidence
                    } else {
                        MatrixKind::Laplacian
                    };
                    spectral::system_matrix(&g, kind)?
                }
                _ => return Err(Error::Config("give exactly one of matrix, graph".into())),
            };
            let out = hhl::hhl_solve(&a, &p.b, &p.config)?;
            let x = out.reconstruct();
            let oracle = a.to_dense().pseudo_inverse(hhl::NULL_CUTOFF).map_err(|e| Error::Other(e.to_string()))?
                * DVector::from_column_slice(&p.b);
            let delta = x.iter().zip(oracle.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            print_json(&json!({
                "p_success": out.p_success,
                "p_ancilla": out.p_ancilla,
                "p_clock_zero": out.p_clock_zero,
                "scale": out.scale,
                "solution": x,
                "oracle": oracle.iter().collect::<Vec<_>>(),
                "max_abs_delta": delta,
            }));
            Ok(0)
        }
        Cmd::Hhl(HhlCmd::Reff { graph, i, j, opts }) => {
            let g = read_graph(&graph)?;
            let r = hhl::effective_resistance(&g, i, j, &method(&opts))?;
            println!("{r}");
            Ok(0)
        }
        Cmd::Hhl(HhlCmd::Traffic { graph, injections, opts }) => {
            let g = read_graph(&graph)?;
            let c = std::fs::read_to_string(&injections)?
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Config(format!("injection {t:?}: {e}"))))
                .collect::<nlsp_core::Result<Vec<_>>>()?;
            let r = hhl::traffic_flow(&g, &c, &method(&opts))?;
            println!("{}", serde_json::to_string_pretty(&r)?);
            Ok(0)
        }
        Cmd::Repro(ReproCmd::Tables) => {
            let t0 = std::time::Instant::now();
            let (checked, diffs) = reproduce_tables();
            for r in table2_rows().iter().chain(table3_rows().iter()) {
                let ok = !diffs.iter().any(|d| d.table == r.table && d.name == r.name);
                let v = verdict(Solver::Hhl, &r.size, &r.kappa, &r.s);
                println!(
                    "table {} {:<34} {}  HHL ratio {}",
                    r.table,
                    r.name,
                    if ok { "match" } else { "MISMATCH" },
                    v.ratio_class
                );
            }
            for d in &diffs {
                println!("  {} {}: printed {} computed {}", d.name, d.column, d.printed.label(), d.computed.label());
            }
            println!("{}/{checked} labels match ({:.1} ms)", checked - diffs.len(), t0.elapsed().as_secs_f64() * 1e3);
            Ok(if diffs.is_empty() { 0 } else { EXIT_PARTIAL })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
