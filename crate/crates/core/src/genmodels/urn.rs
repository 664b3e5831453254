use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UrnColor {
    White,
    Black,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrnState {
    /// (white, black)
    pub color_counts: (u64, u64),
    pub additions_per_draw: u64,
}

impl UrnState {
    pub fn total(&self) -> u64 {
        self.color_counts.0 + self.color_counts.1
    }
}

/// Pólya-Eggenberger urn: draw a ball, return it, and add `additions` balls
/// of the same colour.
pub fn polya_urn(
    white0: u64,
    black0: u64,
    additions: u64,
    n_draws: usize,
    seed: u64,
) -> Result<(Vec<UrnColor>, UrnState)> {
    let mut rng = stream_rng(seed, 0);
    run_urn(white0, black0, additions, n_draws, &mut rng)
}

fn run_urn<R: Rng + ?Sized>(
    white0: u64,
    black0: u64,
    additions: u64,
    n_draws: usize,
    rng: &mut R,
) -> Result<(Vec<UrnColor>, UrnState)> {
    if white0 == 0 || black0 == 0 || additions == 0 {
        return Err(Error::InvalidParameter(
            "urn needs at least one ball of each colour and a positive addition".into(),
        ));
    }
    let mut state = UrnState {
        color_counts: (white0, black0),
        additions_per_draw: additions,
    };
    let mut draws = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let (w, b) = state.color_counts;
        let color = if rng.random_range(0..w + b) < w {
            state.color_counts.0 += additions;
            UrnColor::White
        } else {
            state.color_counts.1 += additions;
            UrnColor::Black
        };
        draws.push(color);
    }
    Ok((draws, state))
}

/// White-ball draw counts for `subjects` independent urns, one stream each.
pub fn polya_counts(
    subjects: usize,
    white0: u64,
    black0: u64,
    additions: u64,
    n_draws: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    (0..subjects)
        .map(|s| {
            let mut rng = stream_rng(seed, s as u64);
            let (draws, _) = run_urn(white0, black0, additions, n_draws, &mut rng)?;
            Ok(draws.iter().filter(|&&c| c == UrnColor::White).count() as u64)
        })
        .collect()
}
