//! Doubly-logarithmic regression of binned citation counts.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::corestats::{BinScale, Histogram};
use crate::error::{Error, Result};

/// F values are reported at most this large; a perfect fit is flagged.
pub const F_CAP: f64 = 1e12;
/// F(1, 23) critical values used for the standard 25-bin design.
pub const F_CRIT_5PCT_25: f64 = 4.28;
pub const F_CRIT_1PCT_25: f64 = 7.88;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RegressionMode {
    #[default]
    RawCounts,
    WidthNormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EmptyBinPolicy {
    /// Leave empty bins out of the fit.
    #[default]
    Drop,
    /// Count empty bins as one, keeping every bin in the fit.
    SubstituteOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Significance {
    #[serde(rename = "significant_1pct")]
    Significant1Pct,
    #[serde(rename = "significant_5pct")]
    Significant5Pct,
    NotSignificant,
}

impl Significance {
    pub fn label(self) -> &'static str {
        match self {
            Significance::Significant1Pct => "Significant at 1%",
            Significance::Significant5Pct => "Significant at 5%",
            Significance::NotSignificant => "Not significant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionPoint {
    /// 1-based bin ordinal.
    pub bin: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub f_stat: f64,
    pub f_capped: bool,
    pub n_points: usize,
    pub n_dropped_empty: usize,
    pub df: usize,
    pub mode: RegressionMode,
    pub empty_bins: EmptyBinPolicy,
    pub significance: Significance,
    pub alpha_from_slope: f64,
    pub points: Vec<RegressionPoint>,
}

/// Ordinary least squares of `ys` on `xs`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::InvalidParameter("x and y lengths differ".into()));
    }
    if n < 3 {
        return Err(Error::TooFewBins(n));
    }
    if ys.iter().all(|&y| y == ys[0]) {
        return Err(Error::ZeroVariance);
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if syy == 0.0 || sxx == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let slope = sxy / sxx;
    let r2 = (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0);
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Regress log10 bin counts on the log10-scale bin midpoints of a
/// `ln(x + 1)` histogram.
pub fn loglog_regress(hist: &Histogram, mode: RegressionMode) -> Result<RegressionResult> {
    loglog_regress_with(hist, mode, EmptyBinPolicy::Drop)
}

pub fn loglog_regress_with(
    hist: &Histogram,
    mode: RegressionMode,
    empty_bins: EmptyBinPolicy,
) -> Result<RegressionResult> {
    if hist.scale != BinScale::Log1p {
        return Err(Error::InvalidParameter("log-log regression needs a log1p histogram".into()));
    }
    if hist.degenerate {
        return Err(Error::TooFewBins(1));
    }
    let ln10 = std::f64::consts::LN_10;
    let mut points = Vec::with_capacity(hist.bin_count);
    let mut dropped = 0;
    for (i, &c) in hist.counts.iter().enumerate() {
        let count = match (c, empty_bins) {
            (0, EmptyBinPolicy::Drop) => {
                dropped += 1;
                continue;
            }
            (0, EmptyBinPolicy::SubstituteOne) => 1.0,
            (c, _) => c as f64,
        };
        let y = match mode {
            RegressionMode::RawCounts => count.log10(),
            RegressionMode::WidthNormalized => (count / hist.untransformed_widths[i]).log10(),
        };
        points.push(RegressionPoint {
            bin: i + 1,
            x: hist.bin_midpoint(i + 1) / ln10,
            y,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let line = fit_line(&xs, &ys)?;
    let n = points.len();
    let df = n - 2;
    let (f_stat, f_capped) = f_from_r2(line.r2, df);
    Ok(RegressionResult {
        slope: line.slope,
        intercept: line.intercept,
        r2: line.r2,
        f_stat,
        f_capped,
        n_points: n,
        n_dropped_empty: dropped,
        df,
        mode,
        empty_bins,
        significance: f_significance(f_stat, n)?,
        alpha_from_slope: line.slope.abs(),
        points,
    })
}

/// Regression F statistic `r2 * df / (1 - r2)`, capped at [`F_CAP`].
pub fn f_from_r2(r2: f64, df: usize) -> (f64, bool) {
    let f = r2 * df as f64 / (1.0 - r2);
    if !f.is_finite() || f > F_CAP {
        (F_CAP, true)
    } else {
        (f, false)
    }
}

/// `P(F > f)` for `F ~ F(v1, v2)`.
pub fn f_upper_tail(f: f64, v1: f64, v2: f64) -> Result<f64> {
    let dist = FisherSnedecor::new(v1, v2).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(dist.sf(f))
}

/// Critical F values `(5%, 1%)` for a simple regression on `n_points`.
pub fn f_critical_values(n_points: usize) -> Result<(f64, f64)> {
    if n_points < 3 {
        return Err(Error::TooFewBins(n_points));
    }
    if n_points == 25 {
        return Ok((F_CRIT_5PCT_25, F_CRIT_1PCT_25));
    }
    let dist = FisherSnedecor::new(1.0, (n_points - 2) as f64)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((dist.inverse_cdf(0.95), dist.inverse_cdf(0.99)))
}

pub fn f_significance(f_stat: f64, n_points: usize) -> Result<Significance> {
    let (five, one) = f_critical_values(n_points)?;
    Ok(if f_stat >= one {
        Significance::Significant1Pct
    } else if f_stat >= five {
        Significance::Significant5Pct
    } else {
        Significance::NotSignificant
    })
}
