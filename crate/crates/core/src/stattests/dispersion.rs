use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::error::{Error, Result};

/// Two-sided significance level of the dispersion test.
pub const DEFAULT_DISPERSION_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionClass {
    RandomPoisson,
    RegularBinomial,
    Contagious,
}

impl DispersionClass {
    pub fn label(self) -> &'static str {
        match self {
            DispersionClass::RandomPoisson => "Random",
            DispersionClass::RegularBinomial => "Regular",
            DispersionClass::Contagious => "Contagious",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionResult {
    pub n: usize,
    pub mean: f64,
    /// Sample variance with divisor `n - 1`.
    pub variance: f64,
    pub index: f64,
    pub chi2: f64,
    pub df: u64,
    pub p_low: f64,
    pub p_high: f64,
    pub level: f64,
    pub classification: DispersionClass,
}

impl DispersionResult {
    /// Test from already-computed moments.
    pub fn from_moments(n: usize, mean: f64, variance: f64, level: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewValues { needed: 2, got: n });
        }
        if mean == 0.0 {
            return Err(Error::ZeroMean);
        }
        let df = (n - 1) as u64;
        let index = variance / mean;
        let chi2 = index * df as f64;
        let p_low = chi_square_lower_tail(chi2, df);
        let p_high = chi_square_upper_tail(chi2, df);
        // each tail gets half of the two-sided level
        let classification = if p_high < level / 2.0 {
            DispersionClass::Contagious
        } else if p_low < level / 2.0 {
            DispersionClass::RegularBinomial
        } else {
            DispersionClass::RandomPoisson
        };
        Ok(DispersionResult {
            n,
            mean,
            variance,
            index,
            chi2,
            df,
            p_low,
            p_high,
            level,
            classification,
        })
    }
}

/// Chi-squared index-of-dispersion test against the Poisson identity
/// mean = variance.
pub fn index_of_dispersion(values: &[u64], level: f64) -> Result<DispersionResult> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewValues { needed: 2, got: n });
    }
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
    DispersionResult::from_moments(n, mean, ss / (n - 1) as f64, level)
}

/// P(X > x) for X ~ chi-square(df).
pub fn chi_square_upper_tail(x: f64, df: u64) -> f64 {
    assert!(df >= 1, "chi-square needs at least one degree of freedom");
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    gamma_ur(df as f64 / 2.0, x / 2.0)
}

/// P(X <= x) for X ~ chi-square(df).
pub fn chi_square_lower_tail(x: f64, df: u64) -> f64 {
    assert!(df >= 1, "chi-square needs at least one degree of freedom");
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    gamma_lr(df as f64 / 2.0, x / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmodels::{polya_counts, sample_poisson};

    #[test]
    fn constant_data_is_regular() {
        let r = index_of_dispersion(&[5, 5, 5, 5], 0.05).unwrap();
        assert_eq!(r.index, 0.0);
        assert_eq!(r.chi2, 0.0);
        assert_eq!(r.classification, DispersionClass::RegularBinomial);
    }

    #[test]
    fn hand_computed_small_sample() {
        let r = index_of_dispersion(&[1, 2, 3], 0.05).unwrap();
        assert_eq!(r.mean, 2.0);
        assert_eq!(r.variance, 1.0);
        assert_eq!(r.index, 0.5);
        assert_eq!(r.chi2, r.index * r.df as f64);
    }

    #[test]
    fn krugman_moments_are_contagious() {
        let r = DispersionResult::from_moments(114, 705.75, 1279863.8, 0.05).unwrap();
        assert!((r.index - 1813.47).abs() < 0.02);
        assert_eq!(r.classification, DispersionClass::Contagious);
        assert_eq!(r.classification.label(), "Contagious");
    }

    #[test]
    fn errors() {
        assert!(matches!(index_of_dispersion(&[0, 0, 0], 0.05), Err(Error::ZeroMean)));
        assert!(matches!(
            index_of_dispersion(&[4], 0.05),
            Err(Error::TooFewValues { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn chi_square_closed_forms() {
        assert_eq!(chi_square_upper_tail(0.0, 7), 1.0);
        // chi-square(2) is exponential with mean 2
        assert!((chi_square_upper_tail(2.0 * 2f64.ln(), 2) - 0.5).abs() < 1e-14);
        let x = 3.7;
        assert!((chi_square_upper_tail(x, 2) - (-x / 2.0).exp()).abs() < 1e-14);
    }

    /// Independent regularized incomplete gamma: power series for x < a + 1,
    /// Lentz continued fraction otherwise.
    fn q_oracle(a: f64, x: f64) -> f64 {
        let ln_gamma_a = statrs_free_ln_gamma(a);
        let prefix = (a * x.ln() - x - ln_gamma_a).exp();
        if x < a + 1.0 {
            let (mut term, mut sum, mut ap) = (1.0 / a, 1.0 / a, a);
            for _ in 0..10_000 {
                ap += 1.0;
                term *= x / ap;
                sum += term;
                if term.abs() < sum.abs() * 1e-17 {
                    break;
                }
            }
            1.0 - sum * prefix
        } else {
            let tiny = 1e-300;
            let mut b = x + 1.0 - a;
            let mut c = 1.0 / tiny;
            let mut d = 1.0 / b;
            let mut h = d;
            for i in 1..10_000 {
                let an = -(i as f64) * (i as f64 - a);
                b += 2.0;
                d = an * d + b;
                if d.abs() < tiny {
                    d = tiny;
                }
                c = b + an / c;
                if c.abs() < tiny {
                    c = tiny;
                }
                d = 1.0 / d;
                let delta = d * c;
                h *= delta;
                if (delta - 1.0).abs() < 1e-17 {
                    break;
                }
            }
            prefix * h
        }
    }

    /// ln Gamma for integer or half-integer arguments, by recurrence from
    /// Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).
    fn statrs_free_ln_gamma(a: f64) -> f64 {
        let half = (2.0 * a).round() as u64 % 2 == 1;
        let (mut z, mut ln) = if half {
            (0.5, std::f64::consts::PI.sqrt().ln())
        } else {
            (1.0, 0.0)
        };
        while z < a {
            ln += f64::ln(z);
            z += 1.0;
        }
        ln
    }

    #[test]
    fn df23_matches_series_oracle() {
        for &x in &[0.5, 5.0, 14.85, 22.0, 23.0, 30.0, 35.17, 41.64, 60.0, 90.0] {
            let got = chi_square_upper_tail(x, 23);
            let want = q_oracle(11.5, x / 2.0);
            assert!((got - want).abs() < 1e-10, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn upper_tail_is_monotone() {
        let mut prev = 1.0;
        for i in 1..200 {
            let p = chi_square_upper_tail(i as f64 * 0.5, 10);
            assert!(p <= prev && (0.0..=1.0).contains(&p));
            prev = p;
        }
    }

    #[test]
    fn poisson_samples_classify_random() {
        let random = (0..200)
            .filter(|&seed| {
                let v = sample_poisson(5.0, 1000, seed).unwrap();
                index_of_dispersion(&v, 0.05).unwrap().classification == DispersionClass::RandomPoisson
            })
            .count();
        assert!(random >= 180, "{random}/200");
    }

    #[test]
    fn polya_counts_classify_contagious() {
        let contagious = (0..100)
            .filter(|&seed| {
                let v = polya_counts(50, 1, 1, 1, 100, seed).unwrap();
                index_of_dispersion(&v, 0.05).unwrap().classification == DispersionClass::Contagious
            })
            .count();
        assert!(contagious >= 95, "{contagious}/100");
    }
}
