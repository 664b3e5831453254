//! h-index truncation and descriptive statistics of the core oeuvre.

mod histogram;
mod profile;

pub use histogram::{bin_linear, bin_log1p, BinScale, Histogram, DEFAULT_BIN_COUNT};
pub use profile::{
    authorship_profile, bibliographic_profile, stratified_sample, AuthorshipPosition,
    AuthorshipProfile, BibliographicProfile, CategoryShare, Share,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::AuthorDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HIndexResult {
    pub h: usize,
    /// Works retained by the rank cut; always equal to `h`.
    pub core_count: usize,
    /// Citation count of the h-th ranked work, 0 when `h == 0`.
    pub boundary_cites: u64,
}

/// Largest `h` such that the top `h` works each have at least `h` cites.
pub fn h_index(cites: &[u64]) -> Result<HIndexResult> {
    if let Some(index) = cites.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::UnsortedInput { index: index + 1 });
    }
    let h = cites
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count();
    Ok(HIndexResult {
        h,
        core_count: h,
        boundary_cites: if h == 0 { 0 } else { cites[h - 1] },
    })
}

/// Split a dataset into its top-`h` works and the remainder. The cut is by
/// rank, so the core always has exactly `h` works even when ties straddle
/// the boundary.
pub fn truncate_at_h(dataset: &AuthorDataset) -> Result<(AuthorDataset, AuthorDataset)> {
    let h = h_index(&dataset.cites())?.h;
    if h == 0 {
        return Err(Error::EmptyCore);
    }
    let (core, below) = dataset.works.split_at(h);
    Ok((dataset.with_works(core.to_vec()), dataset.with_works(below.to_vec())))
}

/// Geometric mean, `exp(mean(ln x))`.
pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut log_sum = 0.0;
    for &v in values {
        if !(v > 0.0) {
            return Err(Error::NonPositiveValue(v));
        }
        log_sum += v.ln();
    }
    Ok((log_sum / values.len() as f64).exp())
}

/// Works, citation range (max - min) and citation total of one distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregates {
    pub works: usize,
    pub range: u64,
    pub cites: u64,
}

impl Aggregates {
    pub fn of(dataset: &AuthorDataset) -> Self {
        let cites = dataset.cites();
        let range = match (cites.iter().max(), cites.iter().min()) {
            (Some(max), Some(min)) => max - min,
            _ => 0,
        };
        Aggregates {
            works: cites.len(),
            range,
            cites: cites.iter().sum(),
        }
    }
}

/// One row of the full-versus-core comparison. Percentages are stored at
/// full precision and are `None` when the full quantity is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub h: usize,
    pub works_full: usize,
    pub works_core: usize,
    pub pct_works_core: Option<f64>,
    pub range_full: u64,
    pub range_core: u64,
    pub pct_range_core: Option<f64>,
    pub cites_full: u64,
    pub cites_core: u64,
    pub pct_cites_core: Option<f64>,
    pub first_bin_interval: (f64, f64),
    /// 1-based ordinal of the full-histogram bin holding the core's lowest value.
    pub asymptote_start_bin: usize,
}

fn percent(part: f64, whole: f64) -> Option<f64> {
    (whole != 0.0).then(|| 100.0 * part / whole)
}

impl SummaryRow {
    pub fn from_aggregates(
        h: usize,
        full: Aggregates,
        core: Aggregates,
        first_bin_interval: (f64, f64),
        asymptote_start_bin: usize,
    ) -> Self {
        SummaryRow {
            h,
            works_full: full.works,
            works_core: core.works,
            pct_works_core: percent(core.works as f64, full.works as f64),
            range_full: full.range,
            range_core: core.range,
            pct_range_core: percent(core.range as f64, full.range as f64),
            cites_full: full.cites,
            cites_core: core.cites,
            pct_cites_core: percent(core.cites as f64, full.cites as f64),
            first_bin_interval,
            asymptote_start_bin,
        }
    }
}

pub fn summarize(full: &AuthorDataset, core: &AuthorDataset, full_hist: &Histogram) -> Result<SummaryRow> {
    let h = h_index(&full.cites())?;
    let boundary = core.works.last().map(|w| w.cites).unwrap_or(h.boundary_cites);
    Ok(SummaryRow::from_aggregates(
        h.h,
        Aggregates::of(full),
        Aggregates::of(core),
        full_hist.bin_interval(1),
        full_hist.bin_ordinal(boundary),
    ))
}

/// Round half away from zero at `decimals` places and format. Used only
/// when rendering; stored values keep full precision.
pub fn format_fixed(value: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let scaled = value * scale;
    // absorb representation error such as 98.45 * 10 = 984.4999...
    let nudged = scaled + scaled.signum() * scaled.abs().max(1.0) * 1e-12;
    let rounded = (nudged.abs() + 0.5).floor().copysign(nudged);
    format!("{:.*}", decimals, rounded / scale)
}

pub fn format_percent(value: Option<f64>, decimals: usize) -> String {
    match value {
        Some(v) => format!("{}%", format_fixed(v, decimals)),
        None => String::from("n/a"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::WorkRecord;
    use proptest::prelude::*;

    fn dataset(cites: &[u64]) -> AuthorDataset {
        let works = cites
            .iter()
            .enumerate()
            .map(|(i, &c)| WorkRecord::new(format!("work {i:04}"), c))
            .collect();
        AuthorDataset::new("t", works)
    }

    /// Definition checked at every candidate, independent of the prefix scan.
    fn h_brute(cites: &[u64]) -> usize {
        (0..=cites.len())
            .filter(|&h| cites.iter().filter(|&&c| c >= h as u64).count() >= h)
            .max()
            .unwrap()
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&[]).unwrap().h, 0);
        assert_eq!(h_index(&[1, 1, 1]).unwrap().h, 1);
        assert_eq!(h_brute(&[10, 8, 5, 4, 3]), 4);
        let r = h_index(&[10, 8, 5, 4, 3]).unwrap();
        assert_eq!((r.h, r.core_count, r.boundary_cites), (4, 4, 4));
        assert_eq!(h_index(&[0, 0]).unwrap().h, 0);
    }

    #[test]
    fn unsorted_input_rejected() {
        assert!(matches!(
            h_index(&[3, 5, 1]),
            Err(Error::UnsortedInput { index: 1 })
        ));
    }

    #[test]
    fn truncation_is_a_rank_cut() {
        let (core, below) = truncate_at_h(&dataset(&[10, 8, 5, 4, 3])).unwrap();
        assert_eq!(core.cites(), vec![10, 8, 5, 4]);
        assert_eq!(below.cites(), vec![3]);
        // ties straddling the boundary stay below
        let (core, below) = truncate_at_h(&dataset(&[5, 3, 3, 3, 3])).unwrap();
        assert_eq!(core.cites(), vec![5, 3, 3]);
        assert_eq!(below.cites(), vec![3, 3]);
    }

    #[test]
    fn all_zero_is_empty_core() {
        assert!(matches!(truncate_at_h(&dataset(&[0, 0, 0])), Err(Error::EmptyCore)));
    }

    #[test]
    fn krugman_core_share() {
        // 950 works with h = 114: the top 114 have >= 114 cites, the rest <= 114
        let mut cites: Vec<u64> = (0..114).map(|i| 7222 - i * 60).collect();
        cites.extend(std::iter::repeat_n(50, 950 - 114));
        let ds = dataset(&cites);
        let (core, _) = truncate_at_h(&ds).unwrap();
        assert_eq!(core.len(), 114);
        let row = SummaryRow::from_aggregates(114, Aggregates::of(&ds), Aggregates::of(&core), (0.0, 1.0), 1);
        assert_eq!(format_fixed(row.pct_works_core.unwrap(), 1), "12.0");
    }

    #[test]
    fn table_one_rows_from_aggregates() {
        let row = SummaryRow::from_aggregates(
            114,
            Aggregates { works: 950, range: 7220, cites: 93827 },
            Aggregates { works: 114, range: 7109, cites: 80546 },
            (2.0, 290.8),
            1,
        );
        assert_eq!(format_percent(row.pct_works_core, 1), "12.0%");
        assert_eq!(format_percent(row.pct_range_core, 1), "98.5%");
        assert_eq!(format_percent(row.pct_cites_core, 1), "85.8%");

        let granger = SummaryRow::from_aggregates(
            82,
            Aggregates { works: 391, range: 21265, cites: 79033 },
            Aggregates { works: 82, range: 21180, cites: 74793 },
            (0.0, 851.0),
            1,
        );
        assert_eq!(format_percent(granger.pct_works_core, 2), "20.97%");
    }

    #[test]
    fn identity_core_is_all_hundreds() {
        let a = Aggregates { works: 5, range: 40, cites: 100 };
        let row = SummaryRow::from_aggregates(5, a, a, (0.0, 1.0), 1);
        assert_eq!(row.pct_works_core, Some(100.0));
        assert_eq!(row.pct_range_core, Some(100.0));
        assert_eq!(row.pct_cites_core, Some(100.0));
    }

    #[test]
    fn zero_full_quantity_gives_absent_percentage() {
        let a = Aggregates { works: 3, range: 0, cites: 9 };
        let row = SummaryRow::from_aggregates(3, a, a, (0.0, 0.0), 1);
        assert_eq!(row.pct_range_core, None);
        assert_eq!(format_percent(row.pct_range_core, 1), "n/a");
    }

    #[test]
    fn summarize_locates_asymptote_bin() {
        let mut cites: Vec<u64> = vec![1000, 800, 400, 120, 60, 30, 12, 11, 10, 9, 8];
        cites.extend([3, 2, 1, 0]);
        let full = dataset(&cites);
        let (core, _) = truncate_at_h(&full).unwrap();
        let hist = bin_linear(&full.cites(), 25).unwrap();
        let row = summarize(&full, &core, &hist).unwrap();
        assert_eq!(row.h, 9);
        assert_eq!(row.works_core, 9);
        assert_eq!(row.asymptote_start_bin, 1);
        assert_eq!(row.first_bin_interval, (0.0, 40.0));
        // range fraction follows from (max - boundary) / (max - min)
        let expected = 100.0 * (1000.0 - 10.0) / 1000.0;
        assert!((row.pct_range_core.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn half_up_rendering() {
        assert_eq!(format_fixed(98.45, 1), "98.5");
        assert_eq!(format_fixed(11.3725, 1), "11.4");
        assert_eq!(format_fixed(9.1954, 2), "9.20");
        assert_eq!(format_fixed(0.25, 1), "0.3");
        assert_eq!(format_fixed(-0.25, 1), "-0.3");
        assert_eq!(format_fixed(2.0, 0), "2");
    }

    #[test]
    fn geometric_mean_examples() {
        assert!((geometric_mean(&[4.0, 4.0, 4.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!((geometric_mean(&[1.0, 100.0]).unwrap() - 10.0).abs() < 1e-12);
        assert!(matches!(geometric_mean(&[1.0, 0.0]), Err(Error::NonPositiveValue(_))));
        assert!(matches!(geometric_mean(&[]), Err(Error::EmptySample)));
    }

    proptest! {
        #[test]
        fn geometric_mean_matches_product_root(values in proptest::collection::vec(0.1f64..50.0, 1..=20)) {
            let product: f64 = values.iter().product();
            let oracle = product.powf(1.0 / values.len() as f64);
            let gm = geometric_mean(&values).unwrap();
            prop_assert!((gm - oracle).abs() <= 1e-12 * oracle);
        }

        #[test]
        fn am_gm(values in proptest::collection::vec(0.1f64..1000.0, 1..40)) {
            let am = values.iter().sum::<f64>() / values.len() as f64;
            let gm = geometric_mean(&values).unwrap();
            prop_assert!(gm <= am * (1.0 + 1e-12));
        }

        #[test]
        fn h_matches_definition(mut cites in proptest::collection::vec(0u64..60, 0..60)) {
            cites.sort_unstable_by(|a, b| b.cmp(a));
            let r = h_index(&cites).unwrap();
            prop_assert_eq!(r.h, h_brute(&cites));
            prop_assert!(r.h <= cites.len());
            prop_assert!(r.h as u64 <= cites.first().copied().unwrap_or(0));
            if r.h > 0 {
                prop_assert!(cites[r.h - 1] >= r.h as u64);
            }
            if r.h < cites.len() {
                prop_assert!(cites[r.h] <= r.h as u64);
            }
        }

        #[test]
        fn h_is_monotone(mut cites in proptest::collection::vec(0u64..60, 1..60), pick in any::<prop::sample::Index>(), extra in 0u64..60) {
            cites.sort_unstable_by(|a, b| b.cmp(a));
            let before = h_index(&cites).unwrap().h;
            let mut bumped = cites.clone();
            bumped[pick.index(cites.len())] += 1;
            bumped.sort_unstable_by(|a, b| b.cmp(a));
            prop_assert!(h_index(&bumped).unwrap().h >= before);
            let mut appended = cites.clone();
            appended.push(extra);
            appended.sort_unstable_by(|a, b| b.cmp(a));
            prop_assert!(h_index(&appended).unwrap().h >= before);
        }
    }
}
