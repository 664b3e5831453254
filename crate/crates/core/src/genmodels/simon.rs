use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimonProcessState {
    pub element_sizes: Vec<u64>,
    pub total_units: u64,
    pub p_new: f64,
}

/// Ijiri-Simon growth: each new unit founds a new element with probability
/// `p_new`, otherwise joins an existing element with probability
/// proportional to its size.
///
/// Picking a uniformly random earlier unit and joining its owner gives the
/// size-proportional choice in O(1).
pub fn simon_process(p_new: f64, total_units: u64, seed: u64) -> Result<SimonProcessState> {
    if !(p_new > 0.0 && p_new < 1.0) {
        return Err(Error::InvalidParameter(format!("p_new must be in (0, 1), got {p_new}")));
    }
    if total_units == 0 {
        return Err(Error::InvalidParameter("total_units must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let mut owner: Vec<u32> = Vec::with_capacity(total_units as usize);
    let mut sizes: Vec<u64> = vec![1];
    owner.push(0);
    for _ in 1..total_units {
        let element = if rng.random::<f64>() < p_new {
            sizes.push(0);
            (sizes.len() - 1) as u32
        } else {
            owner[rng.random_range(0..owner.len())]
        };
        sizes[element as usize] += 1;
        owner.push(element);
    }
    Ok(SimonProcessState {
        element_sizes: sizes,
        total_units,
        p_new,
    })
}
