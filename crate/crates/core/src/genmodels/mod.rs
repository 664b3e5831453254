//! Reference stochastic generators used as oracles for the estimators.

mod simon;
mod urn;
mod zeta;

pub use simon::{simon_process, SimonProcessState};
pub use urn::{polya_counts, polya_urn, UrnColor, UrnState};
pub use zeta::{sample_zeta, ZetaSampler, ZETA_VALUE_CAP};

use rand::distr::Distribution;
use rand_distr::{LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powerlaw::hurwitz_zeta;
use crate::rng::stream_rng;

pub fn sample_poisson(lambda: f64, n: usize, seed: u64) -> Result<Vec<u64>> {
    let dist = Poisson::new(lambda)
        .map_err(|e| Error::InvalidParameter(format!("poisson lambda {lambda}: {e}")))?;
    let mut rng = stream_rng(seed, 0);
    Ok((0..n).map(|_| dist.sample(&mut rng) as u64).collect())
}

pub fn sample_lognormal(mu: f64, sigma: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("lognormal mu {mu}, sigma {sigma}")));
    }
    let dist = LogNormal::new(mu, sigma)
        .map_err(|e| Error::InvalidParameter(format!("lognormal: {e}")))?;
    let mut rng = stream_rng(seed, 0);
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LotkaRow {
    pub k: u64,
    /// `n * k^-alpha / zeta(alpha)`.
    pub exact: f64,
    /// 60% of authors at k = 1 and `n * k^-alpha` beyond, the classical
    /// "inverse square" reading.
    pub sixty_percent: f64,
}

impl LotkaRow {
    pub fn exact_rounded(&self) -> u64 {
        self.exact.round() as u64
    }

    pub fn sixty_percent_rounded(&self) -> u64 {
        self.sixty_percent.round() as u64
    }
}

/// Expected number of authors producing `k = 1..=max_k` items out of
/// `n_authors`.
pub fn lotka_table(n_authors: u64, alpha: f64, max_k: u64) -> Result<Vec<LotkaRow>> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let z = hurwitz_zeta(alpha, 1.0)?;
    let n = n_authors as f64;
    Ok((1..=max_k)
        .map(|k| {
            let inv = (k as f64).powf(-alpha);
            LotkaRow {
                k,
                exact: n * inv / z,
                sixty_percent: if k == 1 { 0.6 * n } else { n * inv },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corestats::geometric_mean;

    #[test]
    fn lotka_thousand_authors() {
        let rows = lotka_table(1000, 2.0, 4).unwrap();
        let exact: Vec<u64> = rows.iter().map(LotkaRow::exact_rounded).collect();
        assert_eq!(&exact[..2], &[608, 152]);
        let sixty: Vec<u64> = rows.iter().map(LotkaRow::sixty_percent_rounded).collect();
        assert_eq!(sixty, vec![600, 250, 111, 63]);
        assert!((rows[1].exact / rows[0].exact - 0.25).abs() < 1e-15);
        assert!((rows[2].exact / rows[0].exact - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn lotka_edge_cases() {
        let rows = lotka_table(0, 2.0, 5).unwrap();
        assert!(rows.iter().all(|r| r.exact == 0.0 && r.sixty_percent == 0.0));
        assert!(lotka_table(10, 1.0, 3).is_err());
        assert!(lotka_table(10, 2.0, 0).unwrap().is_empty());
    }

    #[test]
    fn poisson_moments() {
        let draws = sample_poisson(5.0, 100_000, 17).unwrap();
        let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
        assert!((4.93..=5.07).contains(&mean), "{mean}");
        let var = draws.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
        assert!((var - 5.0).abs() < 0.15, "{var}");
        assert_eq!(sample_poisson(1e-6, 1, 0).unwrap().len(), 1);
        assert_eq!(draws, sample_poisson(5.0, 100_000, 17).unwrap());
        assert!(sample_poisson(0.0, 5, 0).is_err());
    }

    #[test]
    fn lognormal_geometric_mean() {
        let draws = sample_lognormal(2.0, 0.5, 50_000, 4).unwrap();
        let gm = geometric_mean(&draws).unwrap();
        assert!((gm.ln() - 2.0).abs() < 0.01, "{gm}");
        let tight = sample_lognormal(1.5, 1e-9, 100, 4).unwrap();
        assert!(tight.iter().all(|v| (v - 1.5f64.exp()).abs() < 1e-6));
        assert!(sample_lognormal(0.0, 0.0, 5, 0).is_err());
        assert_eq!(draws, sample_lognormal(2.0, 0.5, 50_000, 4).unwrap());
    }
}
