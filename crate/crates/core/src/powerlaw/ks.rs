use crate::error::{Error, Result};

use super::zeta::hurwitz_unchecked;

/// Gap below which the running survival sum is advanced term by term
/// instead of re-evaluating the Hurwitz zeta.
const STEP_LIMIT: u64 = 64;

/// Sorted distinct values with multiplicities.
pub(crate) fn distinct_counts(sorted: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((last, c)) if *last == v => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `tail` and
/// the discrete power law with exponent `alpha` on `x >= x_min`, taken
/// over every integer of the support up to the largest observation.
pub fn ks_statistic(tail: &[u64], alpha: f64, x_min: u64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if x_min == 0 {
        return Err(Error::InvalidParameter("x_min must be at least 1".into()));
    }
    if tail.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = tail.to_vec();
    sorted.sort_unstable();
    if sorted[0] < x_min {
        return Err(Error::BelowXmin {
            value: sorted[0],
            x_min,
        });
    }
    Ok(ks_distinct(&distinct_counts(&sorted), sorted.len(), alpha, x_min))
}

/// Between consecutive observations the empirical CDF is flat while the
/// model CDF rises, so the supremum over the integer support is attained
/// either at an observation or at the integer just below one.
pub(crate) fn ks_distinct(distinct: &[(u64, usize)], n: usize, alpha: f64, x_min: u64) -> f64 {
    let z0 = hurwitz_unchecked(alpha, x_min as f64);
    let inv_n = 1.0 / n as f64;
    // upper = zeta(alpha, cur) = sum_{k >= cur} k^-alpha
    let mut upper = z0;
    let mut cur = x_min;
    let mut below = 0usize;
    let mut d: f64 = 0.0;

    for &(v, count) in distinct {
        if v - cur <= STEP_LIMIT {
            for k in cur..v {
                upper -= (k as f64).powf(-alpha);
            }
        } else {
            upper = hurwitz_unchecked(alpha, v as f64);
        }
        cur = v;
        if v > x_min {
            let model = 1.0 - upper / z0;
            d = d.max((below as f64 * inv_n - model).abs());
        }
        below += count;
        let model = 1.0 - (upper - (v as f64).powf(-alpha)) / z0;
        d = d.max((below as f64 * inv_n - model).abs());
    }
    d.min(1.0)
}
