use serde::{Deserialize, Serialize};

use super::{AnalysisReport, Section};
use crate::corestats::{format_fixed, format_percent};
use crate::error::{Error, Result};
use crate::loglog::{RegressionMode, RegressionResult};

pub const TABLES_SCHEMA_VERSION: &str = "lotkaian-tables/1";

const SKIPPED: &str = "skipped";
const ABSENT: &str = "n/a";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Json,
    Csv,
}

/// One comparative table: a row per author (per author and mode for the
/// regression table), cells pre-formatted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparativeTable {
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

const TABLES: [(&str, &str, &[&str]); 5] = [
    (
        "summary",
        "Full and h-truncated distributions",
        &[
            "Author", "Prize Year", "H-Index", "First Bin", "Asymptote Start Bin",
            "Works Full", "Works Core", "% Works", "Range Full", "Range Core", "% Range",
            "Cites Full", "Cites Core", "% Cites",
        ],
    ),
    (
        "dispersion",
        "Index of dispersion",
        &["Author", "N", "Mean", "Variance", "Index", "Chi2", "DF", "P Low", "P High", "Classification"],
    ),
    (
        "power_law",
        "Power-law fit of h-truncated distributions",
        &[
            "Author", "Alpha", "Std Err", "X Min", "N Tail", "KS D", "P Value", "Verdict", "Domain",
            "Erratic", "Small Sample",
        ],
    ),
    (
        "normality",
        "Shapiro-Wilk test of log(x+1) h-core",
        &["Author", "N", "W", "P Value", "Verdict"],
    ),
    (
        "regression",
        "Doubly logarithmic regression",
        &[
            "Author", "Mode", "Slope", "Intercept", "R2", "F", "Points", "Empty Dropped", "Significance",
        ],
    ),
];

fn layout_of(name: &str) -> Option<&'static (&'static str, &'static str, &'static [&'static str])> {
    TABLES.iter().find(|t| t.0 == name)
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_else(|| ABSENT.to_string())
}

fn year(r: &AnalysisReport) -> String {
    opt(r.author.prize_year, |y| y.to_string())
}

fn skipped_row(author: &str, width: usize) -> Vec<String> {
    let mut row = vec![author.to_string()];
    row.resize(width, SKIPPED.to_string());
    row
}

fn summary_row(r: &AnalysisReport, width: usize) -> Vec<String> {
    let name = r.author.name.clone();
    let Some(s) = r.summary.value() else {
        let mut row = skipped_row(&name, width);
        row[1] = year(r);
        return row;
    };
    vec![
        name,
        year(r),
        s.h.to_string(),
        format!(
            "{} - {}",
            format_fixed(s.first_bin_interval.0, 0),
            format_fixed(s.first_bin_interval.1, 0)
        ),
        s.asymptote_start_bin.to_string(),
        s.works_full.to_string(),
        s.works_core.to_string(),
        format_percent(s.pct_works_core, 2),
        s.range_full.to_string(),
        s.range_core.to_string(),
        format_percent(s.pct_range_core, 2),
        s.cites_full.to_string(),
        s.cites_core.to_string(),
        format_percent(s.pct_cites_core, 2),
    ]
}

fn dispersion_row(r: &AnalysisReport, width: usize) -> Vec<String> {
    let Some(d) = r.dispersion.value() else {
        return skipped_row(&r.author.name, width);
    };
    vec![
        r.author.name.clone(),
        d.n.to_string(),
        format_fixed(d.mean, 3),
        format_fixed(d.variance, 2),
        format_fixed(d.index, 2),
        format_fixed(d.chi2, 2),
        d.df.to_string(),
        format!("{:.3e}", d.p_low),
        format!("{:.3e}", d.p_high),
        d.classification.label().to_string(),
    ]
}

fn power_law_row(r: &AnalysisReport, width: usize) -> Vec<String> {
    let Some(f) = r.power_law.value() else {
        return skipped_row(&r.author.name, width);
    };
    let dom = r.exponent_domain.value();
    vec![
        r.author.name.clone(),
        format_fixed(f.alpha, 2),
        format_fixed(f.alpha_stderr, 3),
        f.x_min.to_string(),
        f.n_tail.to_string(),
        format_fixed(f.ks_d, 4),
        opt(f.p_value, |p| format_fixed(p, 3)),
        opt(f.verdict, |v| v.label().to_string()),
        opt(dom, |d| d.domain.label().to_string()),
        opt(dom, |d| d.erratic.to_string()),
        f.small_sample_flag.to_string(),
    ]
}

fn normality_row(r: &AnalysisReport, width: usize) -> Vec<String> {
    let Some(n) = r.normality.value() else {
        return skipped_row(&r.author.name, width);
    };
    let p = if n.p_value < 0.001 {
        String::from("< 0.001")
    } else {
        format_fixed(n.p_value, 3)
    };
    vec![
        r.author.name.clone(),
        n.n.to_string(),
        format_fixed(n.w, 4),
        p,
        n.verdict.label().to_string(),
    ]
}

fn regression_row(r: &AnalysisReport, mode: RegressionMode, section: &Section<RegressionResult>, width: usize) -> Vec<String> {
    let mode_label = match mode {
        RegressionMode::RawCounts => "raw",
        RegressionMode::WidthNormalized => "normalized",
    };
    let Some(g) = section.value() else {
        let mut row = skipped_row(&r.author.name, width);
        row[1] = mode_label.to_string();
        return row;
    };
    vec![
        r.author.name.clone(),
        mode_label.to_string(),
        format_fixed(g.slope, 2),
        format_fixed(g.intercept, 3),
        format_fixed(g.r2, 4),
        if g.f_capped { String::from("capped") } else { format_fixed(g.f_stat, 2) },
        g.n_points.to_string(),
        g.n_dropped_empty.to_string(),
        g.significance.label().to_string(),
    ]
}

/// The five comparative tables across `reports`, in input order.
pub fn comparative_tables(reports: &[AnalysisReport]) -> Vec<ComparativeTable> {
    TABLES
        .iter()
        .map(|&(name, title, columns)| {
            let w = columns.len();
            let rows = match name {
                "summary" => reports.iter().map(|r| summary_row(r, w)).collect(),
                "dispersion" => reports.iter().map(|r| dispersion_row(r, w)).collect(),
                "power_law" => reports.iter().map(|r| power_law_row(r, w)).collect(),
                "normality" => reports.iter().map(|r| normality_row(r, w)).collect(),
                _ => reports
                    .iter()
                    .flat_map(|r| {
                        [
                            regression_row(r, RegressionMode::RawCounts, &r.regression_raw, w),
                            regression_row(r, RegressionMode::WidthNormalized, &r.regression_normalized, w),
                        ]
                    })
                    .collect(),
            };
            ComparativeTable {
                name: name.to_string(),
                title: title.to_string(),
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows,
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct TablesDocument {
    schema_version: String,
    run_config: Option<serde_json::Value>,
    tables: Vec<ComparativeTable>,
}

pub fn tables_to_json(tables: &[ComparativeTable], run_config: Option<&serde_json::Value>) -> Result<String> {
    let doc = TablesDocument {
        schema_version: TABLES_SCHEMA_VERSION.to_string(),
        run_config: run_config.cloned(),
        tables: tables.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Long format: one `table,row,column,value` record per cell.
pub fn tables_to_csv(tables: &[ComparativeTable]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["table", "row", "column", "value"])?;
    for t in tables {
        for (i, row) in t.rows.iter().enumerate() {
            for (col, cell) in t.columns.iter().zip(row) {
                w.write_record([t.name.as_str(), &i.to_string(), col, cell])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Rebuild tables from [`tables_to_csv`] output.
pub fn tables_from_csv(raw: &str) -> Result<Vec<ComparativeTable>> {
    let mut tables: Vec<ComparativeTable> = TABLES
        .iter()
        .map(|&(name, title, columns)| ComparativeTable {
            name: name.to_string(),
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        })
        .collect();
    let mut reader = csv::Reader::from_reader(raw.as_bytes());
    for (n, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |cause: String| Error::MalformedRow { row: n + 1, cause };
        if record.len() != 4 {
            return Err(bad(format!("expected 4 fields, got {}", record.len())));
        }
        let (name, row, column, value) = (&record[0], &record[1], &record[2], &record[3]);
        let layout = layout_of(name).ok_or_else(|| bad(format!("unknown table {name:?}")))?;
        let col = layout
            .2
            .iter()
            .position(|c| *c == column)
            .ok_or_else(|| bad(format!("unknown column {column:?} in {name}")))?;
        let row: usize = row.parse().map_err(|_| bad(format!("bad row index {row:?}")))?;
        let table = tables.iter_mut().find(|t| t.name == name).expect("known table");
        while table.rows.len() <= row {
            table.rows.push(vec![String::new(); layout.2.len()]);
        }
        table.rows[row][col] = value.to_string();
    }
    Ok(tables)
}

pub fn emit_tables(
    reports: &[AnalysisReport],
    format: TableFormat,
    run_config: Option<&serde_json::Value>,
) -> Result<String> {
    let tables = comparative_tables(reports);
    match format {
        TableFormat::Json => tables_to_json(&tables, run_config),
        TableFormat::Csv => tables_to_csv(&tables),
    }
}
