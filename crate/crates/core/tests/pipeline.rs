use lotkaian_core::corestats::format_fixed;
use lotkaian_core::ingest::{parse_citation_csv, AuthorDataset, ParseOptions, WorkRecord};
use lotkaian_core::report::{
    build_report, comparative_tables, emit_tables, render_figures, tables_from_csv, tables_to_csv, ReportSections,
    Section, TableFormat, WarningCode,
};
use lotkaian_core::stattests::DispersionClass;
use lotkaian_core::{analyze_dataset, AnalysisConfig, AnalysisReport, Error, XminPolicy};

const FIXTURE: &str = include_str!("fixtures/krugman_shaped.csv");
const REPORT_SCHEMA: &str = include_str!("../schema/report-v1.schema.json");
const TABLES_SCHEMA: &str = include_str!("../schema/tables-v1.schema.json");

fn fixture() -> AuthorDataset {
    let options = ParseOptions {
        author: "P Krugman".into(),
        prize_year: Some(2008),
        source: "krugman_shaped.csv".into(),
        ..Default::default()
    };
    parse_citation_csv(FIXTURE.as_bytes(), &options).unwrap()
}

fn config() -> AnalysisConfig {
    AnalysisConfig {
        bootstrap_replicas: 200,
        seed: 11,
        ..Default::default()
    }
}

fn validate(schema: &str, doc: &str) {
    let schema: serde_json::Value = serde_json::from_str(schema).unwrap();
    let doc: serde_json::Value = serde_json::from_str(doc).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn fixture_has_the_intended_shape() {
    let ds = fixture();
    assert_eq!(ds.len(), 950);
    assert_eq!(ds.total_cites(), 93827);
    let report = analyze_dataset(&ds, &config()).unwrap();
    assert!(report.merge_log.is_empty());
    let s = report.summary.value().unwrap();
    assert_eq!(s.h, 114);
    assert_eq!(s.cites_core, 80546);
    assert_eq!(s.range_full, 7220);
    assert_eq!(s.asymptote_start_bin, 1);
    assert_eq!(format_fixed(s.pct_works_core.unwrap(), 2), "12.00");
    assert_eq!(format_fixed(s.pct_cites_core.unwrap(), 2), "85.85");
    assert_eq!(format!("{:.0} - {:.0}", s.first_bin_interval.0, s.first_bin_interval.1), "2 - 291");

    let o = report.outliers.value().unwrap();
    let cites: Vec<u64> = o.outliers.iter().map(|x| x.cites).collect();
    assert_eq!(cites, vec![7222, 6242, 5072, 4749]);
    assert_eq!(o.total_cites, 23285);
    assert!((o.total_pct - 28.9).abs() <= 0.1, "{}", o.total_pct);
    assert_eq!(o.separation_gap, 5);

    let fit = report.power_law.value().unwrap();
    assert_eq!(fit.x_min, 114);
    assert_eq!(fit.n_tail, 114);
    assert!(!fit.small_sample_flag);
    assert_eq!(report.dispersion.value().unwrap().classification, DispersionClass::Contagious);
    assert!(report.regression_raw.value().unwrap().slope < 0.0);
    assert_eq!(report.verdicts.dispersion.as_deref(), Some("Contagious"));
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
}

#[test]
fn report_json_validates_and_round_trips() {
    let report = analyze_dataset(&fixture(), &config()).unwrap();
    let json = report.to_json().unwrap();
    validate(REPORT_SCHEMA, &json);
    let back = AnalysisReport::from_json(&json).unwrap();
    assert_eq!(back.to_json().unwrap(), json);
}

#[test]
fn analysis_is_deterministic() {
    let a = analyze_dataset(&fixture(), &config()).unwrap();
    let b = analyze_dataset(&fixture(), &config()).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(render_figures(&a), render_figures(&b));
    assert_eq!(render_figures(&a).len(), 4);
}

fn small_author(name: &str, year: i32, scale: u64) -> AuthorDataset {
    let works: Vec<WorkRecord> = (1..=80u64)
        .map(|i| WorkRecord::new(format!("{name} paper number {i}"), scale * 400 / (i * i) + 3 * (i % 4)).with_authors([name]))
        .collect();
    let mut ds = AuthorDataset::new(name, works);
    ds.prize_year = Some(year);
    ds
}

#[test]
fn two_author_tables() {
    let cfg = AnalysisConfig {
        bootstrap_replicas: 0,
        merge_threshold: None,
        ..Default::default()
    };
    let reports = vec![
        analyze_dataset(&fixture(), &cfg).unwrap(),
        analyze_dataset(&small_author("A Person", 1999, 3), &cfg).unwrap(),
    ];
    let tables = comparative_tables(&reports);
    assert_eq!(tables.len(), 5);
    for t in &tables {
        let expected_rows = if t.name == "regression" { 4 } else { 2 };
        assert_eq!(t.rows.len(), expected_rows, "{}", t.name);
        assert!(t.rows.iter().all(|r| r.len() == t.columns.len()));
    }
    assert_eq!(tables[0].rows[0][0], "P Krugman");
    assert_eq!(tables[0].rows[0][7], "12.00%");

    let json = emit_tables(&reports, TableFormat::Json, Some(&serde_json::json!({"seed": 1}))).unwrap();
    validate(TABLES_SCHEMA, &json);

    let csv = tables_to_csv(&tables).unwrap();
    assert_eq!(tables_from_csv(&csv).unwrap(), tables);
    assert_eq!(emit_tables(&reports, TableFormat::Csv, None).unwrap(), csv);
}

#[test]
fn printed_percentages_rederive_from_integers() {
    let report = analyze_dataset(&fixture(), &config()).unwrap();
    let s = report.summary.value().unwrap();
    let tables = comparative_tables(std::slice::from_ref(&report));
    let row = &tables[0].rows[0];
    let parse = |cell: &str| cell.trim_end_matches('%').parse::<f64>().unwrap();
    let pairs = [
        (7, s.works_core as f64, s.works_full as f64),
        (10, s.range_core as f64, s.range_full as f64),
        (13, s.cites_core as f64, s.cites_full as f64),
    ];
    for (col, part, whole) in pairs {
        assert!((parse(&row[col]) - 100.0 * part / whole).abs() <= 0.05);
    }
}

#[test]
fn h_policy_mismatch_is_inconsistent() {
    let ds = fixture();
    let report = analyze_dataset(&ds, &AnalysisConfig { bootstrap_replicas: 0, ..config() }).unwrap();
    let mut fit = report.power_law.value().unwrap().clone();
    fit.x_min = 100;
    let sections = ReportSections {
        histograms: report.histograms.clone(),
        summary: report.summary.clone(),
        dispersion: report.dispersion.clone(),
        power_law: Section::present(fit),
        exponent_domain: report.exponent_domain.clone(),
        normality: report.normality.clone(),
        regression_raw: report.regression_raw.clone(),
        regression_normalized: report.regression_normalized.clone(),
        bibliographic: report.bibliographic.clone(),
        authorship: report.authorship.clone(),
        outliers: report.outliers.clone(),
    };
    match build_report(&ds, report.config.clone(), report.merge_log.clone(), sections.clone()) {
        Err(Error::InconsistentSections { first, second, .. }) => {
            assert_eq!((first, second), ("summary", "power_law"));
        }
        other => panic!("expected inconsistency, got {other:?}"),
    }
    // the same fit is acceptable when x_min was chosen explicitly
    let explicit = AnalysisConfig {
        x_min: XminPolicy::Explicit(100),
        ..report.config.clone()
    };
    assert!(build_report(&ds, explicit, report.merge_log.clone(), sections).is_ok());
}

#[test]
fn empty_core_skips_sections() {
    let works = (0..5).map(|i| WorkRecord::new(format!("uncited {i}"), 0)).collect();
    let ds = AuthorDataset::new("Nobody", works);
    let report = analyze_dataset(&ds, &config()).unwrap();
    assert!(report.summary.skip_reason().is_some());
    assert!(report.power_law.skip_reason().unwrap().contains("h-core"));
    assert!(report.histograms.full_linear.value().is_some());
    assert!(report.warnings.iter().any(|w| w.code == WarningCode::SectionSkipped));
    assert!(report.warnings.iter().any(|w| w.code == WarningCode::DegenerateHistogram));
    validate(REPORT_SCHEMA, &report.to_json().unwrap());
    let figs = render_figures(&report);
    assert!(figs[1].1.contains("skipped"));
    let tables = comparative_tables(&[report]);
    assert_eq!(tables[1].rows[0][1], "skipped");
}

#[test]
fn small_core_is_flagged() {
    let ds = small_author("B Person", 2001, 1);
    let cfg = AnalysisConfig {
        bootstrap_replicas: 0,
        merge_threshold: None,
        ..config()
    };
    let report = analyze_dataset(&ds, &cfg).unwrap();
    let fit = report.power_law.value().unwrap();
    assert!(fit.small_sample_flag);
    assert!(report.warnings.iter().any(|w| w.code == WarningCode::SmallSample));
}

#[test]
fn empty_dataset_is_an_error() {
    let ds = AuthorDataset::new("Empty", Vec::new());
    assert!(matches!(analyze_dataset(&ds, &config()), Err(Error::EmptyDataset)));
}

#[test]
fn scan_policy_runs() {
    let cfg = AnalysisConfig {
        x_min: XminPolicy::Scan,
        bootstrap_replicas: 100,
        ..config()
    };
    let report = analyze_dataset(&fixture(), &cfg).unwrap();
    let fit = report.power_law.value().unwrap();
    assert!(fit.x_min >= 2);
    assert!(fit.p_value.is_some());
}
