//! Discrete power-law (Lotkaian) fitting.
//!
//! The model is `P(X = k) = k^-alpha / zeta(alpha, x_min)` for integers
//! `k >= x_min`. The exponent is estimated by maximum likelihood, goodness
//! of fit is the Kolmogorov-Smirnov distance calibrated by a parametric
//! bootstrap, and `x_min` is either supplied (the h-index in the default
//! pipeline) or chosen by minimizing the KS distance.

mod bootstrap;
mod ks;
mod mle;
mod zeta;

pub use bootstrap::{gof_pvalue, BootstrapConfig, DEFAULT_REPLICAS};
pub use ks::ks_statistic;
pub use mle::{fit_alpha_mle, AlphaMle, ALPHA_LOWER, ALPHA_UPPER};
pub use zeta::hurwitz_zeta;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use ks::{distinct_counts, ks_distinct};
use mle::{fit_from_stats, TailStats};

/// Tails shorter than this are flagged as unreliable.
pub const SMALL_SAMPLE_THRESHOLD: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerLawVerdict {
    Fit,
    Possible,
    MostLikelyRejected,
    Rejected,
}

impl PowerLawVerdict {
    pub fn label(self) -> &'static str {
        match self {
            PowerLawVerdict::Fit => "Fit",
            PowerLawVerdict::Possible => "Possible",
            PowerLawVerdict::MostLikelyRejected => "Most Likely Rejected",
            PowerLawVerdict::Rejected => "Rejected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: u64,
    pub n_tail: usize,
    pub log_likelihood: f64,
    pub ks_d: f64,
    pub alpha_stderr: f64,
    pub p_value: Option<f64>,
    pub verdict: Option<PowerLawVerdict>,
    pub small_sample_flag: bool,
    #[serde(default)]
    pub at_upper_bound: bool,
}

impl PowerLawFit {
    fn assemble(mle: AlphaMle, x_min: u64, n_tail: usize, ks_d: f64) -> Self {
        PowerLawFit {
            alpha: mle.alpha,
            x_min,
            n_tail,
            log_likelihood: mle.log_likelihood,
            ks_d,
            alpha_stderr: mle.stderr,
            p_value: None,
            verdict: None,
            small_sample_flag: n_tail < SMALL_SAMPLE_THRESHOLD,
            at_upper_bound: mle.at_upper_bound,
        }
    }

    /// Attach a bootstrap p-value and its verdict.
    pub fn with_p_value(mut self, p: f64, thresholds: &VerdictThresholds) -> Self {
        self.p_value = Some(p);
        self.verdict = Some(thresholds.classify(p));
        self
    }
}

/// Fit with a fixed `x_min`. Every value must be at least `x_min`.
pub fn fit_power_law(tail: &[u64], x_min: u64) -> Result<PowerLawFit> {
    let mle = fit_alpha_mle(tail, x_min)?;
    let mut sorted = tail.to_vec();
    sorted.sort_unstable();
    let d = ks_distinct(&distinct_counts(&sorted), sorted.len(), mle.alpha, x_min);
    Ok(PowerLawFit::assemble(mle, x_min, tail.len(), d))
}

/// Try every distinct value as `x_min` and keep the one with the smallest
/// KS distance; ties go to the smaller `x_min`, which keeps more data.
pub fn scan_xmin(values: &[u64]) -> Result<PowerLawFit> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.first() == Some(&0) {
        return Err(Error::InvalidParameter("power-law values must be positive".into()));
    }
    scan_sorted(&sorted)
}

pub(crate) fn scan_sorted(sorted: &[u64]) -> Result<PowerLawFit> {
    let distinct = distinct_counts(sorted);
    if distinct.len() < 2 {
        return Err(Error::NoViableCandidate);
    }
    // suffix sums of counts and log values over the distinct list
    let mut suffix_n = vec![0usize; distinct.len() + 1];
    let mut suffix_ln = vec![0f64; distinct.len() + 1];
    for i in (0..distinct.len()).rev() {
        let (v, c) = distinct[i];
        suffix_n[i] = suffix_n[i + 1] + c;
        suffix_ln[i] = suffix_ln[i + 1] + c as f64 * (v as f64).ln();
    }

    let mut best: Option<PowerLawFit> = None;
    for i in 0..distinct.len() - 1 {
        let x_min = distinct[i].0;
        let stats = TailStats {
            n: suffix_n[i],
            sum_ln: suffix_ln[i],
            x_min,
        };
        let mle = match fit_from_stats(stats) {
            Ok(m) => m,
            Err(Error::DegenerateTail) => continue,
            Err(e) => return Err(e),
        };
        let d = ks_distinct(&distinct[i..], stats.n, mle.alpha, x_min);
        if best.as_ref().is_none_or(|b| d < b.ks_d) {
            best = Some(PowerLawFit::assemble(mle, x_min, stats.n, d));
        }
    }
    best.ok_or(Error::NoViableCandidate)
}

/// p-value cut points for the verdict labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictThresholds {
    pub fit: f64,
    pub possible: f64,
    pub most_likely_rejected: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds {
            fit: 0.5,
            possible: 0.05,
            most_likely_rejected: 0.01,
        }
    }
}

impl VerdictThresholds {
    pub fn classify(&self, p: f64) -> PowerLawVerdict {
        if p >= self.fit {
            PowerLawVerdict::Fit
        } else if p >= self.possible {
            PowerLawVerdict::Possible
        } else if p >= self.most_likely_rejected {
            PowerLawVerdict::MostLikelyRejected
        } else {
            PowerLawVerdict::Rejected
        }
    }
}

/// Verdict under the default thresholds.
pub fn classify_power_law(p: f64) -> PowerLawVerdict {
    VerdictThresholds::default().classify(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Lotkaian,
    GaussianAttraction,
}

impl Domain {
    pub fn label(self) -> &'static str {
        match self {
            Domain::Lotkaian => "Lotkaian",
            Domain::GaussianAttraction => "Gaussian Attraction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentDomain {
    pub domain: Domain,
    /// Exponent outside the plausible band `[lower, upper]`.
    pub erratic: bool,
    pub lower: f64,
    pub gaussian_bound: f64,
    pub upper: f64,
}

pub const LOTKA_FLOOR: f64 = 1.26;
pub const GAUSSIAN_BOUND: f64 = 3.0;
pub const LOTKA_CEILING: f64 = 3.49;

pub fn exponent_domain(alpha: f64) -> ExponentDomain {
    ExponentDomain {
        domain: if alpha < GAUSSIAN_BOUND {
            Domain::Lotkaian
        } else {
            Domain::GaussianAttraction
        },
        erratic: !(LOTKA_FLOOR..=LOTKA_CEILING).contains(&alpha),
        lower: LOTKA_FLOOR,
        gaussian_bound: GAUSSIAN_BOUND,
        upper: LOTKA_CEILING,
    }
}
