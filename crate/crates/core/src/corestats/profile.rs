use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{normalize_title, AuthorDataset, WorkType};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Share {
    pub count: usize,
    pub percent: f64,
}

impl Share {
    fn of(count: usize, total: usize) -> Self {
        Share {
            count,
            percent: 100.0 * count as f64 / total as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryShare {
    pub work_type: WorkType,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BibliographicProfile {
    pub sample_size: usize,
    /// One entry per [`WorkType`], in declaration order.
    pub categories: Vec<CategoryShare>,
}

impl BibliographicProfile {
    pub fn share(&self, work_type: WorkType) -> &CategoryShare {
        self.categories
            .iter()
            .find(|c| c.work_type == work_type)
            .expect("every category is present")
    }
}

/// Counts of works per bibliographic category. Works without a type are
/// counted as `Other`.
pub fn bibliographic_profile(sample: &AuthorDataset) -> Result<BibliographicProfile> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len();
    let categories = WorkType::ALL
        .iter()
        .map(|&t| {
            let count = sample
                .works
                .iter()
                .filter(|w| w.work_type.unwrap_or(WorkType::Other) == t)
                .count();
            let share = Share::of(count, n);
            CategoryShare {
                work_type: t,
                count: share.count,
                percent: share.percent,
            }
        })
        .collect();
    Ok(BibliographicProfile {
        sample_size: n,
        categories,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorshipPosition {
    Sole,
    Primary,
    Secondary,
}

/// Position of `focal` in an author list, or `None` when not listed.
pub fn authorship_position(authors: &[String], focal: &str) -> Option<AuthorshipPosition> {
    let needle = normalize_title(focal);
    if needle.is_empty() {
        return None;
    }
    let index = authors
        .iter()
        .position(|a| normalize_title(a).contains(&needle))?;
    Some(match (authors.len(), index) {
        (1, _) => AuthorshipPosition::Sole,
        (_, 0) => AuthorshipPosition::Primary,
        _ => AuthorshipPosition::Secondary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorshipProfile {
    /// Works that list the focal author; percentages are over this count.
    pub sample_size: usize,
    pub author_count_range: (usize, usize),
    pub median_author_count: f64,
    pub sole: Share,
    pub primary: Share,
    pub secondary: Share,
    /// Titles left out because the focal author is not listed.
    pub excluded: Vec<String>,
}

pub fn authorship_profile(sample: &AuthorDataset, focal_author: &str) -> Result<AuthorshipProfile> {
    let mut positions = Vec::new();
    let mut author_counts = Vec::new();
    let mut excluded = Vec::new();
    for work in &sample.works {
        match authorship_position(&work.authors, focal_author) {
            Some(p) => {
                positions.push(p);
                author_counts.push(work.authors.len());
            }
            None => {
                log::debug!(
                    "focal author `{focal_author}` not listed on `{}`; record excluded",
                    work.title
                );
                excluded.push(work.title.clone());
            }
        }
    }
    let n = positions.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let count = |p| positions.iter().filter(|&&q| q == p).count();

    author_counts.sort_unstable();
    let median = if n % 2 == 1 {
        author_counts[n / 2] as f64
    } else {
        0.5 * (author_counts[n / 2 - 1] + author_counts[n / 2]) as f64
    };

    Ok(AuthorshipProfile {
        sample_size: n,
        author_count_range: (author_counts[0], author_counts[n - 1]),
        median_author_count: median,
        sole: Share::of(count(AuthorshipPosition::Sole), n),
        primary: Share::of(count(AuthorshipPosition::Primary), n),
        secondary: Share::of(count(AuthorshipPosition::Secondary), n),
        excluded,
    })
}

/// Every `step`-th work starting from the top-ranked one.
pub fn stratified_sample(core: &AuthorDataset, step: usize) -> Result<AuthorDataset> {
    if step == 0 {
        return Err(Error::InvalidParameter("sampling step must be at least 1".into()));
    }
    Ok(core.with_works(core.works.iter().step_by(step).cloned().collect()))
}
