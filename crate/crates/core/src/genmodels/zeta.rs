use rand::Rng;

use crate::error::{Error, Result};
use crate::powerlaw::hurwitz_zeta;
use crate::rng::stream_rng;

const DEFAULT_CAPACITY: usize = 1 << 16;
const MIN_CAPACITY: usize = 256;
const MAX_CAPACITY: usize = 1 << 20;
const GUIDE_LIMIT: usize = 1 << 16;
/// Largest value the sampler will return; draws beyond it are clamped.
pub const ZETA_VALUE_CAP: u64 = 1 << 53;

/// Inverse-CDF sampler for the discrete power law on `k >= x_min`.
///
/// The first `capacity` support points are tabulated with a guide table
/// for O(1) lookup. Draws beyond the table are located by bisection on the
/// exact survival function `zeta(alpha, k) / zeta(alpha, x_min)`.
#[derive(Debug, Clone)]
pub struct ZetaSampler {
    alpha: f64,
    x_min: u64,
    norm: f64,
    cdf: Vec<f64>,
    guide: Vec<u32>,
}

impl ZetaSampler {
    pub fn new(alpha: f64, x_min: u64) -> Result<Self> {
        Self::with_capacity(alpha, x_min, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(alpha: f64, x_min: u64, capacity: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if x_min == 0 || x_min >= ZETA_VALUE_CAP {
            return Err(Error::InvalidParameter(format!("x_min must be in [1, 2^53), got {x_min}")));
        }
        let m = capacity
            .clamp(MIN_CAPACITY, MAX_CAPACITY)
            .min((ZETA_VALUE_CAP - x_min) as usize);
        let norm = hurwitz_zeta(alpha, x_min as f64)?;

        let mut cdf = Vec::with_capacity(m);
        let mut acc = 0.0;
        for i in 0..m as u64 {
            acc += ((x_min + i) as f64).powf(-alpha);
            cdf.push(acc / norm);
        }

        let g = m.min(GUIDE_LIMIT);
        let mut guide = Vec::with_capacity(g + 1);
        let mut i = 0usize;
        for j in 0..=g {
            let level = j as f64 / g as f64;
            while i < m - 1 && cdf[i] <= level {
                i += 1;
            }
            guide.push(i as u32);
        }

        Ok(ZetaSampler {
            alpha,
            x_min,
            norm,
            cdf,
            guide,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x_min(&self) -> u64 {
        self.x_min
    }

    /// `ln(x_min + i)` for every tabulated support point.
    pub fn ln_table(&self) -> Vec<f64> {
        (0..self.cdf.len() as u64)
            .map(|i| ((self.x_min + i) as f64).ln())
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let last = self.cdf.len() - 1;
        if u >= self.cdf[last] {
            return self.sample_tail(1.0 - u);
        }
        let g = self.guide.len() - 1;
        let j = ((u * g as f64) as usize).min(g - 1);
        let lo = self.guide[j] as usize;
        let hi = (self.guide[j + 1] as usize).min(last);
        let offset = self.cdf[lo..=hi].partition_point(|&c| c <= u);
        self.x_min + (lo + offset) as u64
    }

    fn survival(&self, k: u64) -> f64 {
        hurwitz_zeta(self.alpha, k as f64).unwrap_or(0.0) / self.norm
    }

    /// Largest `k` with `P(X >= k) >= r`.
    fn sample_tail(&self, r: f64) -> u64 {
        let mut lo = self.x_min + self.cdf.len() as u64;
        if self.survival(lo) < r {
            return lo - 1;
        }
        let mut step = self.cdf.len() as u64;
        let mut hi = lo + step;
        while self.survival(hi) >= r {
            lo = hi;
            step = step.saturating_mul(2);
            hi = lo.saturating_add(step);
            if hi >= ZETA_VALUE_CAP {
                if self.survival(ZETA_VALUE_CAP) >= r {
                    return ZETA_VALUE_CAP;
                }
                hi = ZETA_VALUE_CAP;
                break;
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) >= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// `n` independent draws from the discrete power law with exponent `alpha`
/// on `k >= x_min`.
pub fn sample_zeta(alpha: f64, x_min: u64, n: usize, seed: u64) -> Result<Vec<u64>> {
    let sampler = ZetaSampler::with_capacity(alpha, x_min, 16 * n)?;
    let mut rng = stream_rng(seed, 0);
    Ok((0..n).map(|_| sampler.sample(&mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alpha() {
        assert!(matches!(sample_zeta(1.0, 1, 10, 0), Err(Error::InvalidAlpha(_))));
        assert!(matches!(sample_zeta(f64::NAN, 1, 10, 0), Err(Error::InvalidAlpha(_))));
        assert!(sample_zeta(2.0, 0, 10, 0).is_err());
    }

    #[test]
    fn mass_at_minimum() {
        let draws = sample_zeta(2.0, 1, 1_000_000, 2024).unwrap();
        let ones = draws.iter().filter(|&&v| v == 1).count() as f64 / draws.len() as f64;
        let exact = 6.0 / std::f64::consts::PI.powi(2);
        assert!((ones - exact).abs() <= 0.005, "{ones}");
        assert_eq!(*draws.iter().min().unwrap(), 1);
    }

    #[test]
    fn support_and_determinism() {
        let a = sample_zeta(2.3, 17, 5000, 9).unwrap();
        assert!(a.iter().all(|&v| v >= 17));
        assert_eq!(a, sample_zeta(2.3, 17, 5000, 9).unwrap());
        assert_ne!(a, sample_zeta(2.3, 17, 5000, 10).unwrap());
    }

    #[test]
    fn tail_draws_follow_survival() {
        // tiny table so that most of the mass sits in the bisection path
        let sampler = ZetaSampler::with_capacity(1.5, 1, 1).unwrap();
        let mut rng = stream_rng(5, 0);
        let n = 40_000;
        let beyond = (0..n).filter(|_| sampler.sample(&mut rng) >= 1000).count() as f64 / n as f64;
        let exact = hurwitz_zeta(1.5, 1000.0).unwrap() / hurwitz_zeta(1.5, 1.0).unwrap();
        let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!((beyond - exact).abs() < 4.0 * sigma, "{beyond} vs {exact}");
    }

    #[test]
    fn table_and_tail_agree_at_seam() {
        let sampler = ZetaSampler::with_capacity(2.0, 3, 300).unwrap();
        let last = sampler.cdf[sampler.cdf.len() - 1];
        assert_eq!(sampler.sample_tail(1.0 - last + 1e-15), 3 + 300 - 1);
        let r = sampler.survival(400);
        assert_eq!(sampler.sample_tail(r), 400);
    }

    #[test]
    fn round_trip_error_shrinks() {
        for &(n, seeds) in &[(1000usize, 10u64), (10_000, 5)] {
            for seed in 0..seeds {
                let draws = sample_zeta(2.0, 1, n, 300 + seed).unwrap();
                let fit = crate::powerlaw::fit_alpha_mle(&draws, 1).unwrap();
                let bound = 3.0 * (2.0 - 1.0) / (n as f64).sqrt();
                assert!((fit.alpha - 2.0).abs() <= bound, "n {n} seed {seed}: {}", fit.alpha);
            }
        }
    }
}
