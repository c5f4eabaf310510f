use nlsp_core::advantage::{Category, Solver};
use nlsp_core::families::{FamilyId, FamilySpec};
use nlsp_core::fit::Model;
use nlsp_core::survey::{read_records, run_survey, seed_sensitivity, write_outputs, FamilyEntry, SurveyConfig};

fn entry(f: FamilyId, sched: impl IntoIterator<Item = usize>) -> FamilyEntry {
    FamilyEntry::new(FamilySpec::new(f, sched.into_iter().collect()))
}

#[test]
fn deterministic_pipelines() {
    let cfg = SurveyConfig::new(vec![
        entry(FamilyId::Hypercube, 2..=10),
        entry(FamilyId::Ladder, (4..=60).step_by(4)),
        entry(FamilyId::Sudoku, 2..=6),
    ]);
    let out = run_survey(&cfg).unwrap();
    assert_eq!(out.report.failures, 0);

    let h = out.family("hypercube").unwrap();
    assert_eq!(h.kappa_fit.as_ref().unwrap().model, Model::Polylog(1));
    assert_eq!(h.category(Solver::Hhl), Some(Category::Best));

    let l = out.family("ladder").unwrap();
    assert_eq!(l.kappa_fit.as_ref().unwrap().model, Model::Polynomial(2));
    assert_eq!(l.category(Solver::Hhl), Some(Category::Bad));
    assert_eq!(l.category(Solver::Dream), Some(Category::Bad));

    // Sudoku rows, columns and boxes give s = 3n^2 - 2n, i.e. about 3 sqrt(N),
    // which the integer-power candidates can only bracket at desk scale.
    for r in out.records.iter().filter(|r| r.family == "sudoku") {
        assert_eq!(r.sparsity, 3 * r.n * r.n - 2 * r.n);
        assert_eq!(r.system_size, r.n.pow(4));
    }
    let s = out.family("sudoku").unwrap();
    assert!(matches!(s.kappa_fit.as_ref().unwrap().model, Model::Polylog(_)));
}

#[test]
fn outputs_are_reproducible() {
    let mut cfg = SurveyConfig::new(vec![entry(FamilyId::Hypercube, 2..=7), entry(FamilyId::BarabasiAlbert, (8..=80).step_by(8))]);
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for sub in ["a", "b"] {
        let d = dir.path().join(sub);
        cfg.output_dir = Some(d.clone());
        let out = run_survey(&cfg).unwrap();
        write_outputs(&cfg, &out, &d).unwrap();
        texts.push(std::fs::read(d.join("records.csv")).unwrap());
        let recs = read_records(&d.join("records.csv")).unwrap();
        assert_eq!(recs.len(), 6 + 10 - out.manifest.skipped.len());
        assert_eq!(recs.len(), out.manifest.entries.len());
        assert!(d.join("report.json").exists());
        assert!(d.join("series/hypercube.rtilde.csv").exists());
    }
    assert_eq!(texts[0], texts[1]);
    let header = String::from_utf8(texts[0].clone()).unwrap();
    assert!(header.starts_with("family,n,system_size,matrix_kind,kappa,lambda_min_nz,lambda_max,sparsity,cutoff,seed\n"));
}

#[test]
fn config_errors() {
    assert!(SurveyConfig::from_json(r#"{"schema_version": 9, "families": []}"#).is_err());
    let ok = r#"{"schema_version": 1, "families": [{"family": "hypercube", "schedule": [2,3,4,5]}]}"#;
    assert!(SurveyConfig::from_json(ok).is_ok());
    let bad = r#"{"schema_version": 1, "families": [{"family": "hypercube", "schedule": [2], "params": {"zz": 1}}]}"#;
    assert!(SurveyConfig::from_json(bad).is_err());
    let cfg = SurveyConfig::new(vec![entry(FamilyId::Hypercube, 2..=5)]);
    assert!(seed_sensitivity(&cfg, &[1, 2, 3]).is_err());
}

#[test]
fn barabasi_albert_is_stable_across_seeds() {
    let cfg = SurveyConfig::new(vec![entry(FamilyId::BarabasiAlbert, (16..=400).step_by(16))]);
    let st = seed_sensitivity(&cfg, &[1, 2, 3]).unwrap();
    let hhl = &st[0].categories["HHL"];
    assert_eq!(hhl.len(), 3);
    assert!(hhl.iter().filter(|c| **c == Some(Category::Good)).count() >= 2, "{hhl:?}");
    assert_eq!(st[0].stable, st[0].categories.values().all(|v| v.iter().all(|c| *c == v[0])));
}
