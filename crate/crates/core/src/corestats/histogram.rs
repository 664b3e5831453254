use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BIN_COUNT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinScale {
    Linear,
    /// Bins of equal width in `ln(x + 1)`.
    Log1p,
}

/// Equal-width histogram over the binning scale. Bins are half-open
/// `[lo, hi)` except the last, which is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub scale: BinScale,
    pub bin_count: usize,
    /// `bin_count + 1` boundaries on the binning scale.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Bin widths in citation units.
    pub untransformed_widths: Vec<f64>,
    pub range_min: u64,
    pub range_max: u64,
    /// Set when every value was equal; all values sit in bin 1.
    #[serde(default)]
    pub degenerate: bool,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn transform(&self, value: u64) -> f64 {
        match self.scale {
            BinScale::Linear => value as f64,
            BinScale::Log1p => (value as f64).ln_1p(),
        }
    }

    fn untransform(&self, t: f64) -> f64 {
        match self.scale {
            BinScale::Linear => t,
            BinScale::Log1p => t.exp_m1(),
        }
    }

    /// 1-based bin ordinal of `value`, clamped to the histogram range.
    pub fn bin_ordinal(&self, value: u64) -> usize {
        self.bin_index(self.transform(value)) + 1
    }

    fn bin_index(&self, t: f64) -> usize {
        if self.degenerate {
            return 0;
        }
        let k = self.bin_count;
        let (lo, hi) = (self.edges[0], self.edges[k]);
        let guess = ((t - lo) / (hi - lo) * k as f64).floor();
        let mut idx = if guess.is_nan() || guess < 0.0 {
            0
        } else {
            (guess as usize).min(k - 1)
        };
        // settle against the stored edges so membership agrees with them
        while idx + 1 < k && t >= self.edges[idx + 1] {
            idx += 1;
        }
        while idx > 0 && t < self.edges[idx] {
            idx -= 1;
        }
        idx
    }

    /// Bounds of bin `ordinal` (1-based) in citation units.
    pub fn bin_interval(&self, ordinal: usize) -> (f64, f64) {
        let i = ordinal - 1;
        (self.untransform(self.edges[i]), self.untransform(self.edges[i + 1]))
    }

    /// Midpoint of bin `ordinal` on the binning scale.
    pub fn bin_midpoint(&self, ordinal: usize) -> f64 {
        let i = ordinal - 1;
        0.5 * (self.edges[i] + self.edges[i + 1])
    }
}

pub fn bin_linear(values: &[u64], bin_count: usize) -> Result<Histogram> {
    build(values, bin_count, BinScale::Linear)
}

pub fn bin_log1p(values: &[u64], bin_count: usize) -> Result<Histogram> {
    build(values, bin_count, BinScale::Log1p)
}

fn build(values: &[u64], bin_count: usize, scale: BinScale) -> Result<Histogram> {
    if bin_count < 2 {
        return Err(Error::InvalidParameter(format!(
            "bin count must be at least 2, got {bin_count}"
        )));
    }
    let (Some(&min), Some(&max)) = (values.iter().min(), values.iter().max()) else {
        return Err(Error::EmptySample);
    };

    let mut hist = Histogram {
        scale,
        bin_count,
        edges: Vec::new(),
        counts: vec![0; bin_count],
        untransformed_widths: vec![0.0; bin_count],
        range_min: min,
        range_max: max,
        degenerate: min == max,
    };
    let lo = hist.transform(min);
    let hi = hist.transform(max);

    if hist.degenerate {
        hist.edges = vec![lo; bin_count + 1];
        hist.counts[0] = values.len() as u64;
        return Err(Error::DegenerateRange {
            histogram: Box::new(hist),
        });
    }

    let width = (hi - lo) / bin_count as f64;
    hist.edges = (0..=bin_count)
        .map(|i| if i == bin_count { hi } else { lo + width * i as f64 })
        .collect();
    hist.untransformed_widths = hist
        .edges
        .windows(2)
        .map(|w| match scale {
            BinScale::Linear => w[1] - w[0],
            BinScale::Log1p => w[1].exp() - w[0].exp(),
        })
        .collect();

    for &v in values {
        let idx = hist.bin_index(hist.transform(v));
        hist.counts[idx] += 1;
    }
    Ok(hist)
}
