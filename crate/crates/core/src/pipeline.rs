//! The full per-author analysis: merge, truncate at h, and run every test.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corestats::{
    authorship_profile, bibliographic_profile, bin_linear, bin_log1p, summarize, truncate_at_h,
    Histogram, DEFAULT_BIN_COUNT,
};
use crate::error::{Error, Result};
use crate::ingest::{merge_stray_records, AuthorDataset, MergeLog, DEFAULT_MERGE_THRESHOLD};
use crate::loglog::{loglog_regress_with, EmptyBinPolicy, RegressionMode};
use crate::powerlaw::{
    exponent_domain, fit_power_law, gof_pvalue, scan_xmin, BootstrapConfig, PowerLawFit,
    VerdictThresholds, DEFAULT_REPLICAS,
};
use crate::report::{build_report, extract_outliers_with, AnalysisReport, ReportHistograms, ReportSections, Section};
use crate::report::DEFAULT_MIN_EMPTY_RUN;
use crate::stattests::{index_of_dispersion, log1p_series, shapiro_wilk_at, DEFAULT_DISPERSION_LEVEL};

pub const DEFAULT_NORMALITY_LEVEL: f64 = 0.01;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum XminPolicy {
    /// Fit the h-core with `x_min = h`.
    #[default]
    HIndex,
    /// Choose `x_min` over the whole bibliography by minimum KS distance.
    Scan,
    /// Fit every work with at least this many citations.
    Explicit(u64),
}

impl fmt::Display for XminPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XminPolicy::HIndex => f.write_str("h"),
            XminPolicy::Scan => f.write_str("scan"),
            XminPolicy::Explicit(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for XminPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "h-index" | "h_index" | "hindex" => Ok(XminPolicy::HIndex),
            "scan" => Ok(XminPolicy::Scan),
            other => match other.parse::<u64>() {
                Ok(0) => Err("explicit x_min must be at least 1".into()),
                Ok(v) => Ok(XminPolicy::Explicit(v)),
                Err(_) => Err(format!("expected h, scan or a positive integer, got {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub x_min: XminPolicy,
    /// Zero skips the bootstrap.
    pub bootstrap_replicas: usize,
    /// Re-scan `x_min` on every replica; only used with [`XminPolicy::Scan`].
    pub rescan_bootstrap: bool,
    pub seed: u64,
    pub bins: usize,
    pub regression_mode: RegressionMode,
    pub empty_bins: EmptyBinPolicy,
    pub dispersion_level: f64,
    pub normality_level: f64,
    /// Title similarity above which records are merged; `None` disables merging.
    pub merge_threshold: Option<f64>,
    pub outlier_min_run: usize,
    pub verdict_thresholds: VerdictThresholds,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            x_min: XminPolicy::HIndex,
            bootstrap_replicas: DEFAULT_REPLICAS,
            rescan_bootstrap: false,
            seed: DEFAULT_SEED,
            bins: DEFAULT_BIN_COUNT,
            regression_mode: RegressionMode::RawCounts,
            empty_bins: EmptyBinPolicy::Drop,
            dispersion_level: DEFAULT_DISPERSION_LEVEL,
            normality_level: DEFAULT_NORMALITY_LEVEL,
            merge_threshold: Some(DEFAULT_MERGE_THRESHOLD),
            outlier_min_run: DEFAULT_MIN_EMPTY_RUN,
            verdict_thresholds: VerdictThresholds::default(),
        }
    }
}

/// Histogram, keeping the all-in-one-bin result for degenerate input.
fn histogram(values: &[u64], bins: usize, log: bool) -> Result<Histogram> {
    let built = if log { bin_log1p(values, bins) } else { bin_linear(values, bins) };
    match built {
        Err(Error::DegenerateRange { histogram }) => Ok(*histogram),
        other => other,
    }
}

fn fit_section(full: &AuthorDataset, core: &AuthorDataset, h: usize, config: &AnalysisConfig) -> Result<PowerLawFit> {
    let (tail, fit) = match config.x_min {
        XminPolicy::HIndex => {
            let tail = core.cites();
            let fit = fit_power_law(&tail, h as u64)?;
            (tail, fit)
        }
        XminPolicy::Scan => {
            let all: Vec<u64> = full.cites().into_iter().filter(|&c| c > 0).collect();
            let fit = scan_xmin(&all)?;
            (all.into_iter().filter(|&c| c >= fit.x_min).collect(), fit)
        }
        XminPolicy::Explicit(x_min) => {
            let tail: Vec<u64> = full.cites().into_iter().filter(|&c| c >= x_min).collect();
            let fit = fit_power_law(&tail, x_min)?;
            (tail, fit)
        }
    };
    if config.bootstrap_replicas == 0 {
        return Ok(fit);
    }
    let bootstrap = BootstrapConfig {
        replicas: config.bootstrap_replicas,
        seed: config.seed,
        rescan_xmin: config.rescan_bootstrap && config.x_min == XminPolicy::Scan,
    };
    let p = gof_pvalue(&tail, &fit, bootstrap)?;
    Ok(fit.with_p_value(p, &config.verdict_thresholds))
}

fn no_core<T>(e: &Error) -> Section<T> {
    Section::skipped(format!("no h-core: {e}"))
}

/// Run the whole battery on one author.
///
/// Failures local to one test become skipped sections; only an unusable
/// dataset or configuration is an error.
pub fn analyze_dataset(dataset: &AuthorDataset, config: &AnalysisConfig) -> Result<AnalysisReport> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if config.bins < 2 {
        return Err(Error::InvalidParameter(format!("at least 2 bins required, got {}", config.bins)));
    }
    let (full, merge_log) = match config.merge_threshold {
        Some(t) => merge_stray_records(dataset, t),
        None => (
            dataset.clone(),
            MergeLog {
                criterion: "merging disabled".into(),
                threshold: 1.0,
                entries: Vec::new(),
            },
        ),
    };

    let full_linear = histogram(&full.cites(), config.bins, false)?;
    let truncated = truncate_at_h(&full);

    let sections = match &truncated {
        Err(e) => ReportSections {
            histograms: ReportHistograms {
                full_linear: Section::present(full_linear),
                core_linear: no_core(e),
                core_log1p: no_core(e),
            },
            summary: no_core(e),
            dispersion: no_core(e),
            power_law: no_core(e),
            exponent_domain: no_core(e),
            normality: no_core(e),
            regression_raw: no_core(e),
            regression_normalized: no_core(e),
            bibliographic: no_core(e),
            authorship: no_core(e),
            outliers: no_core(e),
        },
        Ok((core, _rest)) => {
            let core_cites = core.cites();
            let h = core.len();
            let core_linear = histogram(&core_cites, config.bins, false)?;
            let core_log = histogram(&core_cites, config.bins, true)?;
            let power_law = Section::from_result(fit_section(&full, core, h, config));
            let exponent = match &power_law {
                Section::Present { value } => Section::present(exponent_domain(value.alpha)),
                Section::Skipped { reason } => Section::skipped(format!("no power-law fit: {reason}")),
            };
            ReportSections {
                summary: Section::from_result(summarize(&full, core, &full_linear)),
                dispersion: Section::from_result(index_of_dispersion(&core_cites, config.dispersion_level)),
                power_law,
                exponent_domain: exponent,
                normality: Section::from_result(shapiro_wilk_at(&log1p_series(&core_cites), config.normality_level)),
                regression_raw: Section::from_result(loglog_regress_with(
                    &core_log,
                    RegressionMode::RawCounts,
                    config.empty_bins,
                )),
                regression_normalized: Section::from_result(loglog_regress_with(
                    &core_log,
                    RegressionMode::WidthNormalized,
                    config.empty_bins,
                )),
                bibliographic: Section::from_result(bibliographic_profile(core)),
                authorship: Section::from_result(authorship_profile(core, &full.author)),
                outliers: Section::from_result(extract_outliers_with(core, &core_linear, config.outlier_min_run)),
                histograms: ReportHistograms {
                    full_linear: Section::present(full_linear),
                    core_linear: Section::present(core_linear),
                    core_log1p: Section::present(core_log),
                },
            }
        }
    };
    build_report(&full, config.clone(), merge_log, sections)
}
