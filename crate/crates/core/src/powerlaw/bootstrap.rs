use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genmodels::ZetaSampler;
use crate::rng::stream_rng;

use super::ks::{distinct_counts, ks_distinct};
use super::mle::{fit_from_stats, TailStats};
use super::{scan_sorted, PowerLawFit};

pub const DEFAULT_REPLICAS: usize = 1000;
const MIN_REPLICAS: usize = 100;
const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub replicas: usize,
    pub seed: u64,
    /// Re-estimate x_min on every replica instead of holding it at the
    /// fitted value.
    pub rescan_xmin: bool,
}

impl BootstrapConfig {
    pub fn new(replicas: usize, seed: u64) -> Self {
        BootstrapConfig {
            replicas,
            seed,
            rescan_xmin: false,
        }
    }
}

/// Parametric-bootstrap goodness-of-fit probability: the fraction of
/// synthetic tails drawn from the fitted model whose refitted KS distance
/// is at least the observed one.
///
/// Replica `r` draws from its own stream of `seed`, so the value does not
/// depend on how rayon schedules the work.
pub fn gof_pvalue(tail: &[u64], fit: &PowerLawFit, config: BootstrapConfig) -> Result<f64> {
    if config.replicas < MIN_REPLICAS {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_REPLICAS} bootstrap replicas required, got {}",
            config.replicas
        )));
    }
    if tail.len() != fit.n_tail {
        return Err(Error::InvalidParameter(format!(
            "tail has {} values but the fit used {}",
            tail.len(),
            fit.n_tail
        )));
    }
    let n = fit.n_tail;
    let sampler = ZetaSampler::with_capacity(fit.alpha, fit.x_min, 16 * n)?;
    let ln_table = sampler.ln_table();

    let exceed = (0..config.replicas)
        .into_par_iter()
        .map(|r| {
            let d = replica_distance(&sampler, &ln_table, n, r, config)?;
            Ok(d >= fit.ks_d)
        })
        .collect::<Result<Vec<bool>>>()?;
    let hits = exceed.iter().filter(|&&b| b).count();
    Ok(hits as f64 / config.replicas as f64)
}

fn replica_distance(
    sampler: &ZetaSampler,
    ln_table: &[f64],
    n: usize,
    replica: usize,
    config: BootstrapConfig,
) -> Result<f64> {
    let x_min = sampler.x_min();
    let mut values = vec![0u64; n];
    for attempt in 0..MAX_ATTEMPTS {
        let stream = ((replica as u64) << 4) | attempt as u64;
        let mut rng = stream_rng(config.seed, stream);
        for v in values.iter_mut() {
            *v = sampler.sample(&mut rng);
        }
        values.sort_unstable();
        if values[0] == values[n - 1] {
            continue;
        }
        if config.rescan_xmin {
            match scan_sorted(&values) {
                Ok(fit) => return Ok(fit.ks_d),
                Err(Error::NoViableCandidate) => continue,
                Err(e) => return Err(e),
            }
        }
        let sum_ln: f64 = values
            .iter()
            .map(|&v| {
                ln_table
                    .get((v - x_min) as usize)
                    .copied()
                    .unwrap_or_else(|| (v as f64).ln())
            })
            .sum();
        let stats = TailStats { n, sum_ln, x_min };
        match fit_from_stats(stats) {
            Ok(mle) => return Ok(ks_distinct(&distinct_counts(&values), n, mle.alpha, x_min)),
            Err(Error::DegenerateTail) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ReplicaFailed {
        replica,
        attempts: MAX_ATTEMPTS,
    })
}
