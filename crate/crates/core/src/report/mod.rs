//! Per-author report assembly, figures and comparative tables.

mod outliers;
mod svg;
mod tables;

pub use outliers::{extract_outliers, extract_outliers_with, Outlier, OutlierSet, DEFAULT_MIN_EMPTY_RUN};
pub use svg::{regression_caption, render_histogram_svg, render_regression_svg, HistogramAnnotations};
pub use tables::{
    comparative_tables, emit_tables, tables_from_csv, tables_to_csv, tables_to_json, ComparativeTable,
    TableFormat, TABLES_SCHEMA_VERSION,
};

use serde::{Deserialize, Serialize};

use crate::corestats::{AuthorshipProfile, BibliographicProfile, Histogram, SummaryRow};
use crate::error::{Error, Result};
use crate::ingest::{AuthorDataset, MergeLog};
use crate::loglog::{RegressionMode, RegressionResult};
use crate::pipeline::{AnalysisConfig, XminPolicy};
use crate::powerlaw::{exponent_domain, ExponentDomain, PowerLawFit};
use crate::stattests::{DispersionResult, NormalityResult};

pub const REPORT_SCHEMA_VERSION: &str = "lotkaian-report/1";

/// A report section: either computed or skipped with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Present { value: T },
    Skipped { reason: String },
}

impl<T> Section<T> {
    pub fn present(value: T) -> Self {
        Section::Present { value }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Section::Skipped { reason: reason.into() }
    }

    pub fn from_result(result: Result<T>) -> Self {
        match result {
            Ok(value) => Section::present(value),
            Err(e) => Section::skipped(e.to_string()),
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Section::Present { value } => Some(value),
            Section::Skipped { .. } => None,
        }
    }

    pub fn skip_reason(&self) -> Option<&str> {
        match self {
            Section::Present { .. } => None,
            Section::Skipped { reason } => Some(reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorMeta {
    pub name: String,
    pub prize_year: Option<i32>,
    pub source: String,
    pub works_ingested: usize,
    pub works_after_merge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHistograms {
    pub full_linear: Section<Histogram>,
    pub core_linear: Section<Histogram>,
    pub core_log1p: Section<Histogram>,
}

/// Everything that goes into a report before cross-checking.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSections {
    pub histograms: ReportHistograms,
    pub summary: Section<SummaryRow>,
    pub dispersion: Section<DispersionResult>,
    pub power_law: Section<PowerLawFit>,
    pub exponent_domain: Section<ExponentDomain>,
    pub normality: Section<NormalityResult>,
    pub regression_raw: Section<RegressionResult>,
    pub regression_normalized: Section<RegressionResult>,
    pub bibliographic: Section<BibliographicProfile>,
    pub authorship: Section<AuthorshipProfile>,
    pub outliers: Section<OutlierSet>,
}

/// Verdict strings for quick reading, in the fixed report vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub dispersion: Option<String>,
    pub power_law: Option<String>,
    pub exponent_domain: Option<String>,
    pub normality: Option<String>,
    pub regression: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningCode {
    SmallSample,
    AlphaAtUpperBound,
    ErraticExponent,
    NonNegativeSlope,
    FCapped,
    DegenerateHistogram,
    SectionSkipped,
    AuthorshipExcluded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub code: WarningCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub author: AuthorMeta,
    pub config: AnalysisConfig,
    /// Invocation details supplied by the caller, such as the command line
    /// configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run_config: Option<serde_json::Value>,
    pub merge_log: MergeLog,
    pub histograms: ReportHistograms,
    pub summary: Section<SummaryRow>,
    pub dispersion: Section<DispersionResult>,
    pub power_law: Section<PowerLawFit>,
    pub exponent_domain: Section<ExponentDomain>,
    pub normality: Section<NormalityResult>,
    pub regression_raw: Section<RegressionResult>,
    pub regression_normalized: Section<RegressionResult>,
    pub bibliographic: Section<BibliographicProfile>,
    pub authorship: Section<AuthorshipProfile>,
    pub outliers: Section<OutlierSet>,
    pub verdicts: Verdicts,
    pub warnings: Vec<Warning>,
}

impl AnalysisReport {
    /// The regression in the configured primary mode.
    pub fn primary_regression(&self) -> &Section<RegressionResult> {
        match self.config.regression_mode {
            RegressionMode::RawCounts => &self.regression_raw,
            RegressionMode::WidthNormalized => &self.regression_normalized,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        Ok(serde_json::from_str(raw)?)
    }
}

fn inconsistent(first: &'static str, second: &'static str, detail: String) -> Error {
    Error::InconsistentSections { first, second, detail }
}

fn check_consistency(s: &ReportSections, config: &AnalysisConfig) -> Result<()> {
    if let (Some(summary), Some(hist)) = (s.summary.value(), s.histograms.full_linear.value()) {
        if hist.total() != summary.works_full as u64 {
            return Err(inconsistent(
                "summary",
                "full_histogram",
                format!("{} works but {} binned", summary.works_full, hist.total()),
            ));
        }
    }
    if let (Some(summary), Some(fit)) = (s.summary.value(), s.power_law.value()) {
        if config.x_min == XminPolicy::HIndex {
            if fit.x_min != summary.h as u64 {
                return Err(inconsistent(
                    "summary",
                    "power_law",
                    format!("h-index {} but x_min {}", summary.h, fit.x_min),
                ));
            }
            if fit.n_tail != summary.works_core {
                return Err(inconsistent(
                    "summary",
                    "power_law",
                    format!("{} core works but {} in the fitted tail", summary.works_core, fit.n_tail),
                ));
            }
        }
    }
    if let (Some(summary), Some(d)) = (s.summary.value(), s.dispersion.value()) {
        if d.n != summary.works_core {
            return Err(inconsistent(
                "summary",
                "dispersion",
                format!("{} core works but n = {}", summary.works_core, d.n),
            ));
        }
    }
    if let (Some(summary), Some(nr)) = (s.summary.value(), s.normality.value()) {
        if nr.n != summary.works_core {
            return Err(inconsistent(
                "summary",
                "normality",
                format!("{} core works but n = {}", summary.works_core, nr.n),
            ));
        }
    }
    if let (Some(summary), Some(o)) = (s.summary.value(), s.outliers.value()) {
        if o.total_cites > summary.cites_core {
            return Err(inconsistent(
                "summary",
                "outliers",
                format!("outliers hold {} of {} core cites", o.total_cites, summary.cites_core),
            ));
        }
    }
    if let (Some(fit), Some(dom)) = (s.power_law.value(), s.exponent_domain.value()) {
        if exponent_domain(fit.alpha) != *dom {
            return Err(inconsistent(
                "power_law",
                "exponent_domain",
                format!("alpha {} does not give the stored domain", fit.alpha),
            ));
        }
    }
    for (name, reg) in [
        ("regression_raw", &s.regression_raw),
        ("regression_normalized", &s.regression_normalized),
    ] {
        if let (Some(r), Some(h)) = (reg.value(), s.histograms.core_log1p.value()) {
            if r.n_points + r.n_dropped_empty != h.bin_count {
                return Err(inconsistent(
                    name,
                    "core_histogram",
                    format!("{} points and {} dropped for {} bins", r.n_points, r.n_dropped_empty, h.bin_count),
                ));
            }
        }
    }
    Ok(())
}

fn collect_warnings(s: &ReportSections) -> Vec<Warning> {
    let mut out = Vec::new();
    let mut warn = |code, message: String| out.push(Warning { code, message });

    let named: [(&str, Option<&str>); 13] = [
        ("full_histogram", s.histograms.full_linear.skip_reason()),
        ("core_histogram", s.histograms.core_linear.skip_reason()),
        ("core_log_histogram", s.histograms.core_log1p.skip_reason()),
        ("summary", s.summary.skip_reason()),
        ("dispersion", s.dispersion.skip_reason()),
        ("power_law", s.power_law.skip_reason()),
        ("exponent_domain", s.exponent_domain.skip_reason()),
        ("normality", s.normality.skip_reason()),
        ("regression_raw", s.regression_raw.skip_reason()),
        ("regression_normalized", s.regression_normalized.skip_reason()),
        ("bibliographic", s.bibliographic.skip_reason()),
        ("authorship", s.authorship.skip_reason()),
        ("outliers", s.outliers.skip_reason()),
    ];
    for (name, reason) in named {
        if let Some(reason) = reason {
            warn(WarningCode::SectionSkipped, format!("{name} skipped: {reason}"));
        }
    }
    if let Some(fit) = s.power_law.value() {
        if fit.small_sample_flag {
            warn(
                WarningCode::SmallSample,
                format!("power-law tail has only {} values (fewer than 50)", fit.n_tail),
            );
        }
        if fit.at_upper_bound {
            warn(
                WarningCode::AlphaAtUpperBound,
                format!("exponent estimate reached the search ceiling ({})", fit.alpha),
            );
        }
    }
    if let Some(dom) = s.exponent_domain.value() {
        if dom.erratic {
            warn(
                WarningCode::ErraticExponent,
                format!("exponent outside [{}, {}]", dom.lower, dom.upper),
            );
        }
    }
    for reg in [&s.regression_raw, &s.regression_normalized].into_iter().flat_map(|r| r.value()) {
        let mode = match reg.mode {
            RegressionMode::RawCounts => "raw",
            RegressionMode::WidthNormalized => "normalized",
        };
        if reg.slope >= 0.0 {
            warn(
                WarningCode::NonNegativeSlope,
                format!("{mode} log-log slope is {} (expected negative)", reg.slope),
            );
        }
        if reg.f_capped {
            warn(WarningCode::FCapped, format!("{mode} regression is a perfect fit; F capped"));
        }
    }
    for (name, hist) in [
        ("full", &s.histograms.full_linear),
        ("core", &s.histograms.core_linear),
    ] {
        if hist.value().is_some_and(|h| h.degenerate) {
            warn(
                WarningCode::DegenerateHistogram,
                format!("{name} histogram has zero range; all values in bin 1"),
            );
        }
    }
    if let Some(a) = s.authorship.value() {
        if !a.excluded.is_empty() {
            warn(
                WarningCode::AuthorshipExcluded,
                format!("{} works do not list the author and were left out of the authorship profile", a.excluded.len()),
            );
        }
    }
    out
}

fn verdicts(s: &ReportSections, config: &AnalysisConfig) -> Verdicts {
    let primary = match config.regression_mode {
        RegressionMode::RawCounts => &s.regression_raw,
        RegressionMode::WidthNormalized => &s.regression_normalized,
    };
    Verdicts {
        dispersion: s.dispersion.value().map(|d| d.classification.label().to_string()),
        power_law: s
            .power_law
            .value()
            .and_then(|f| f.verdict)
            .map(|v| v.label().to_string()),
        exponent_domain: s.exponent_domain.value().map(|d| d.domain.label().to_string()),
        normality: s.normality.value().map(|n| n.verdict.label().to_string()),
        regression: primary.value().map(|r| r.significance.label().to_string()),
    }
}

/// Cross-check the sections, attach warnings and verdicts.
pub fn build_report(
    dataset: &AuthorDataset,
    config: AnalysisConfig,
    merge_log: MergeLog,
    sections: ReportSections,
) -> Result<AnalysisReport> {
    check_consistency(&sections, &config)?;
    let warnings = collect_warnings(&sections);
    let verdicts = verdicts(&sections, &config);
    let merged = merge_log.merges();
    let ReportSections {
        histograms,
        summary,
        dispersion,
        power_law,
        exponent_domain,
        normality,
        regression_raw,
        regression_normalized,
        bibliographic,
        authorship,
        outliers,
    } = sections;
    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION.to_string(),
        author: AuthorMeta {
            name: dataset.author.clone(),
            prize_year: dataset.prize_year,
            source: dataset.provenance.source.clone(),
            works_ingested: dataset.len() + merged,
            works_after_merge: dataset.len(),
        },
        config,
        run_config: None,
        merge_log,
        histograms,
        summary,
        dispersion,
        power_law,
        exponent_domain,
        normality,
        regression_raw,
        regression_normalized,
        bibliographic,
        authorship,
        outliers,
        verdicts,
        warnings,
    })
}

fn placeholder_svg(title: &str, reason: &str) -> String {
    let esc = |t: &str| t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"120\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <text class=\"title\" x=\"360\" y=\"40\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n\
         <text class=\"skipped\" x=\"360\" y=\"80\" text-anchor=\"middle\">skipped: {}</text>\n</svg>\n",
        esc(title),
        esc(reason)
    )
}

/// The four figures of a report as `(file name, SVG text)`.
pub fn render_figures(report: &AnalysisReport) -> Vec<(String, String)> {
    let name = &report.author.name;
    let h = report.summary.value().map(|s| s.h as u64);
    let outlier_values: Vec<u64> = report
        .outliers
        .value()
        .map(|o| o.outliers.iter().map(|x| x.cites).collect())
        .unwrap_or_default();

    let hist_fig = |section: &Section<Histogram>, title: String, notes: HistogramAnnotations| match section {
        Section::Present { value } => render_histogram_svg(value, &notes),
        Section::Skipped { reason } => placeholder_svg(&title, reason),
    };

    let t1 = format!("{name}: all works, linear bins");
    let t2 = format!("{name}: h-core, linear bins");
    let t3 = format!("{name}: h-core, log(x+1) bins");
    let t4 = format!("{name}: h-core log-log regression");
    let fig1 = hist_fig(
        &report.histograms.full_linear,
        t1.clone(),
        HistogramAnnotations {
            title: t1,
            h_index: h,
            ..Default::default()
        },
    );
    let fig2 = hist_fig(
        &report.histograms.core_linear,
        t2.clone(),
        HistogramAnnotations {
            title: t2,
            outliers: outlier_values,
            ..Default::default()
        },
    );
    let fig3 = hist_fig(
        &report.histograms.core_log1p,
        t3.clone(),
        HistogramAnnotations {
            title: t3,
            ..Default::default()
        },
    );
    let fig4 = match report.primary_regression() {
        Section::Present { value } => render_regression_svg(value, &t4),
        Section::Skipped { reason } => placeholder_svg(&t4, reason),
    };
    vec![
        ("fig1.svg".into(), fig1),
        ("fig2.svg".into(), fig2),
        ("fig3.svg".into(), fig3),
        ("fig4.svg".into(), fig4),
    ]
}
