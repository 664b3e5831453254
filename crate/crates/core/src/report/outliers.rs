use serde::{Deserialize, Serialize};

use crate::corestats::{BinScale, Histogram};
use crate::error::{Error, Result};
use crate::ingest::{AuthorDataset, WorkRecord};

pub const DEFAULT_MIN_EMPTY_RUN: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outlier {
    pub work: WorkRecord,
    pub cites: u64,
    pub pct_of_core_cites: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierSet {
    pub outliers: Vec<Outlier>,
    /// Length of the empty-bin run separating the outliers from the rest.
    pub separation_gap: usize,
    /// 1-based ordinal of the first empty bin of that run, when one exists.
    pub gap_start_bin: Option<usize>,
    pub total_cites: u64,
    pub total_pct: f64,
    pub min_empty_run: usize,
    pub rule: String,
}

impl OutlierSet {
    pub fn len(&self) -> usize {
        self.outliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outliers.is_empty()
    }
}

pub fn extract_outliers(core: &AuthorDataset, hist: &Histogram) -> Result<OutlierSet> {
    extract_outliers_with(core, hist, DEFAULT_MIN_EMPTY_RUN)
}

/// The works above the widest run of at least `min_run` consecutive empty
/// bins of a linear histogram of the core. Equal-width runs resolve to the
/// lowest one.
pub fn extract_outliers_with(core: &AuthorDataset, hist: &Histogram, min_run: usize) -> Result<OutlierSet> {
    if hist.scale != BinScale::Linear {
        return Err(Error::InvalidParameter("outlier extraction needs a linear histogram".into()));
    }
    if min_run == 0 {
        return Err(Error::InvalidParameter("minimum empty run must be positive".into()));
    }
    if core.is_empty() {
        return Err(Error::EmptyCore);
    }
    let total: u64 = core.total_cites();
    let rule = format!(
        "works above the widest run of at least {min_run} consecutive empty bins ({} linear bins)",
        hist.bin_count
    );

    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < hist.counts.len() {
        if hist.counts[i] != 0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < hist.counts.len() && hist.counts[i] == 0 {
            i += 1;
        }
        let len = i - start;
        // a run reaching the top bin has nothing above it
        if len >= min_run && i < hist.counts.len() && best.is_none_or(|(_, l)| len > l) {
            best = Some((start, len));
        }
    }

    let Some((start, len)) = best else {
        return Ok(OutlierSet {
            outliers: Vec::new(),
            separation_gap: 0,
            gap_start_bin: None,
            total_cites: 0,
            total_pct: 0.0,
            min_empty_run: min_run,
            rule,
        });
    };
    let first_above = start + len;
    let pct = |c: u64| if total == 0 { 0.0 } else { 100.0 * c as f64 / total as f64 };
    let outliers: Vec<Outlier> = core
        .works
        .iter()
        .take_while(|w| hist.bin_ordinal(w.cites) > first_above)
        .map(|w| Outlier {
            work: w.clone(),
            cites: w.cites,
            pct_of_core_cites: pct(w.cites),
        })
        .collect();
    let total_cites = outliers.iter().map(|o| o.cites).sum();
    Ok(OutlierSet {
        outliers,
        separation_gap: len,
        gap_start_bin: Some(start + 1),
        total_cites,
        total_pct: pct(total_cites),
        min_empty_run: min_run,
        rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corestats::bin_linear;

    fn dataset(cites: &[u64]) -> AuthorDataset {
        let works = cites
            .iter()
            .enumerate()
            .map(|(i, &c)| WorkRecord::new(format!("work {i}"), c))
            .collect();
        AuthorDataset::new("Test Author", works)
    }

    #[test]
    fn single_isolated_top_work() {
        // bins of width 4 over [0, 100]; bins 20..=24 empty, one work in bin 25
        let mut cites: Vec<u64> = (0..19).flat_map(|b| [b * 4 + 1, b * 4 + 2]).collect();
        cites.push(0);
        cites.push(100);
        let core = dataset(&cites);
        let hist = bin_linear(&core.cites(), 25).unwrap();
        assert!(hist.counts[19..24].iter().all(|&c| c == 0));
        let set = extract_outliers(&core, &hist).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.outliers[0].cites, 100);
        assert_eq!(set.separation_gap, 5);
        assert_eq!(set.gap_start_bin, Some(20));
    }

    #[test]
    fn uniform_core_has_no_outliers() {
        let cites: Vec<u64> = (0..=100).collect();
        let core = dataset(&cites);
        let hist = bin_linear(&core.cites(), 25).unwrap();
        let set = extract_outliers(&core, &hist).unwrap();
        assert!(set.is_empty());
        assert_eq!(set.separation_gap, 0);
        assert_eq!(set.total_pct, 0.0);
    }

    #[test]
    fn single_empty_bins_do_not_separate() {
        // every other bin empty
        let cites: Vec<u64> = (0..13).map(|b| b * 8 + 1).chain([0, 100]).collect();
        let core = dataset(&cites);
        let hist = bin_linear(&core.cites(), 25).unwrap();
        assert!(extract_outliers(&core, &hist).unwrap().is_empty());
        let loose = extract_outliers_with(&core, &hist, 1).unwrap();
        assert!(!loose.is_empty());
    }

    #[test]
    fn widest_run_wins_and_ties_go_low() {
        // occupied bins 1-3, gap of 3, bin 7, gap of 3, bin 11, gap of 2, bin 14..
        let width = 4u64;
        let occupied = [1u64, 2, 3, 7, 11, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25];
        let mut cites: Vec<u64> = occupied.iter().map(|b| (b - 1) * width + 1).collect();
        cites.push(0);
        cites.push(100);
        let core = dataset(&cites);
        let hist = bin_linear(&core.cites(), 25).unwrap();
        let set = extract_outliers(&core, &hist).unwrap();
        assert_eq!(set.separation_gap, 3);
        assert_eq!(set.gap_start_bin, Some(4));
        // everything from bin 7 upward
        let expected = cites.iter().filter(|&&c| c >= 6 * width).count();
        assert_eq!(set.len(), expected);
    }

    #[test]
    fn outliers_are_a_prefix_of_the_ranking() {
        let cites = [7222u64, 6242, 5072, 4749, 2900, 2500, 1800, 900, 400, 114];
        let core = dataset(&cites);
        let hist = bin_linear(&core.cites(), 25).unwrap();
        let set = extract_outliers(&core, &hist).unwrap();
        let got: Vec<u64> = set.outliers.iter().map(|o| o.cites).collect();
        assert_eq!(got, &cites[..got.len()]);
        let pct_sum: f64 = set.outliers.iter().map(|o| o.pct_of_core_cites).sum();
        assert!((pct_sum - set.total_pct).abs() < 1e-9);
    }

    #[test]
    fn rejects_log_histogram() {
        let core = dataset(&[1, 5, 9]);
        let hist = crate::corestats::bin_log1p(&core.cites(), 25).unwrap();
        assert!(extract_outliers(&core, &hist).is_err());
    }
}
