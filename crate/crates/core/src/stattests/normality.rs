//! Shapiro-Wilk W test using Royston's (1995) polynomial approximations
//! for the coefficients and the null distribution of W, valid for
//! 3 <= n <= 5000.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Rejection level for the normality test.
pub const DEFAULT_NORMALITY_LEVEL: f64 = 0.01;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityVerdict {
    Rejected,
    NotRejected,
}

impl NormalityVerdict {
    pub fn label(self) -> &'static str {
        match self {
            NormalityVerdict::Rejected => "Rejected",
            NormalityVerdict::NotRejected => "Not Rejected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityResult {
    pub n: usize,
    pub w: f64,
    pub p_value: f64,
    pub verdict: NormalityVerdict,
    pub alpha_level: f64,
}

/// `ln(x + 1)` of every value, in input order.
pub fn log1p_series(values: &[u64]) -> Vec<f64> {
    values.iter().map(|&v| (v as f64).ln_1p()).collect()
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn upper_normal_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// The antisymmetric weights `a_1 >= ... >= a_{n/2} > 0` applied to the
/// order-statistic differences `x_(n+1-i) - x_(i)`.
pub fn shapiro_wilk_coefficients(n: usize) -> Result<Vec<f64>> {
    if !(3..=5000).contains(&n) {
        return Err(Error::SampleSizeOutOfRange(n));
    }
    let half = n / 2;
    if n == 3 {
        return Ok(vec![std::f64::consts::FRAC_1_SQRT_2]);
    }
    let normal = Normal::standard();
    let an25 = n as f64 + 0.25;
    // lower-half expected normal order statistics (negative)
    let m: Vec<f64> = (1..=half)
        .map(|i| normal.inverse_cdf((i as f64 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / (n as f64).sqrt();

    let mut a = vec![0.0; half];
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;
    a[0] = a1;
    let (first_scaled, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in first_scaled..half {
        a[i] = -m[i] / fac;
    }
    Ok(a)
}

pub fn shapiro_wilk(values: &[f64]) -> Result<NormalityResult> {
    shapiro_wilk_at(values, DEFAULT_NORMALITY_LEVEL)
}

pub fn shapiro_wilk_at(values: &[f64], alpha_level: f64) -> Result<NormalityResult> {
    let n = values.len();
    let a = shapiro_wilk_coefficients(n)?;

    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if !(range > 0.0) || range < 1e-19 * x[n - 1].abs().max(1.0) {
        return Err(Error::ConstantData);
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let ss: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    let numerator: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (x[n - 1 - i] - x[i]))
        .sum();
    let w = (numerator * numerator / ss).min(1.0);

    let p_value = w_p_value(w, n);
    let verdict = if p_value < alpha_level {
        NormalityVerdict::Rejected
    } else {
        NormalityVerdict::NotRejected
    };
    Ok(NormalityResult {
        n,
        w,
        p_value,
        verdict,
        alpha_level,
    })
}

fn w_p_value(w: f64, n: usize) -> f64 {
    if n == 3 {
        let six_over_pi = 6.0 / std::f64::consts::PI;
        let p = six_over_pi * (w.sqrt().asin() - std::f64::consts::FRAC_PI_3);
        return p.clamp(0.0, 1.0);
    }
    let nf = n as f64;
    let mut y = (1.0 - w).ln();
    let (m, s) = if n <= 11 {
        let gamma = poly(&G, nf);
        if y >= gamma {
            return 1e-99;
        }
        y = -(gamma - y).ln();
        (poly(&C3, nf), poly(&C4, nf).exp())
    } else {
        let ln_n = nf.ln();
        (poly(&C5, ln_n), poly(&C6, ln_n).exp())
    };
    upper_normal_tail((y - m) / s)
}
