//! Citation-export ingestion and stray-record merging.
//!
//! The accepted input is a delimited text export with one row per work, in
//! the style produced by Publish or Perish. `Cites` and `Title` are required;
//! `Authors` (semicolon separated), `Year`, `Source` and `Type` are optional.
//! Header names are matched case-insensitively.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default similarity threshold for [`merge_stray_records`].
pub const DEFAULT_MERGE_THRESHOLD: f64 = 0.92;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkType {
    Monograph,
    JournalArticle,
    BookChapter,
    WorkingPaper,
    OpEd,
    Other,
}

impl WorkType {
    pub const ALL: [WorkType; 6] = [
        WorkType::Monograph,
        WorkType::JournalArticle,
        WorkType::BookChapter,
        WorkType::WorkingPaper,
        WorkType::OpEd,
        WorkType::Other,
    ];

    pub fn label(self) -> &'static str {
        match self {
            WorkType::Monograph => "Monograph",
            WorkType::JournalArticle => "Journal Article",
            WorkType::BookChapter => "Book Chapter",
            WorkType::WorkingPaper => "Working Paper",
            WorkType::OpEd => "Op-Ed",
            WorkType::Other => "Other",
        }
    }

    /// Lenient parse of a free-text type cell. Unrecognised text maps to
    /// `Other`; an empty cell is `None`.
    pub fn parse_label(raw: &str) -> Option<WorkType> {
        let key: String = raw
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        if key.is_empty() {
            return None;
        }
        Some(match key.as_str() {
            "monograph" | "book" | "books" => WorkType::Monograph,
            "journalarticle" | "article" | "journal" => WorkType::JournalArticle,
            "bookchapter" | "chapter" | "bookpart" | "incollection" => WorkType::BookChapter,
            "workingpaper" | "preprint" | "report" | "techreport" => WorkType::WorkingPaper,
            "oped" | "opinion" | "newspaper" | "column" => WorkType::OpEd,
            _ => WorkType::Other,
        })
    }
}

impl fmt::Display for WorkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkRecord {
    pub title: String,
    #[serde(default)]
    pub authors: Vec<String>,
    pub year: Option<i32>,
    pub venue: Option<String>,
    pub work_type: Option<WorkType>,
    pub cites: u64,
}

impl WorkRecord {
    pub fn new(title: impl Into<String>, cites: u64) -> Self {
        WorkRecord {
            title: collapse_whitespace(&title.into()),
            authors: Vec::new(),
            year: None,
            venue: None,
            work_type: None,
            cites,
        }
    }

    pub fn with_authors<I, S>(mut self, authors: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.authors = authors.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_type(mut self, work_type: WorkType) -> Self {
        self.work_type = Some(work_type);
        self
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = Some(year);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Only set when the caller supplies a timestamp, so that repeated runs
    /// over the same file produce identical datasets.
    pub ingested_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorDataset {
    pub author: String,
    pub prize_year: Option<i32>,
    pub works: Vec<WorkRecord>,
    pub provenance: Provenance,
}

impl AuthorDataset {
    /// Build a dataset and put the works into canonical order.
    pub fn new(author: impl Into<String>, mut works: Vec<WorkRecord>) -> Self {
        sort_works(&mut works);
        AuthorDataset {
            author: author.into(),
            prize_year: None,
            works,
            provenance: Provenance::default(),
        }
    }

    /// A dataset with the same metadata and a different set of works.
    pub fn with_works(&self, works: Vec<WorkRecord>) -> Self {
        AuthorDataset {
            author: self.author.clone(),
            prize_year: self.prize_year,
            works,
            provenance: self.provenance.clone(),
        }
    }

    pub fn cites(&self) -> Vec<u64> {
        self.works.iter().map(|w| w.cites).collect()
    }

    pub fn total_cites(&self) -> u64 {
        self.works.iter().map(|w| w.cites).sum()
    }

    pub fn len(&self) -> usize {
        self.works.len()
    }

    pub fn is_empty(&self) -> bool {
        self.works.is_empty()
    }
}

/// Canonical order: cites descending, then title ascending, then year
/// ascending (absent years first).
pub fn sort_works(works: &mut [WorkRecord]) {
    works.sort_by(canonical_order);
}

fn canonical_order(a: &WorkRecord, b: &WorkRecord) -> Ordering {
    b.cites
        .cmp(&a.cites)
        .then_with(|| a.title.cmp(&b.title))
        .then_with(|| a.year.cmp(&b.year))
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub delimiter: u8,
    pub author: String,
    pub prize_year: Option<i32>,
    pub source: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            delimiter: b',',
            author: String::new(),
            prize_year: None,
            source: String::from("<memory>"),
        }
    }
}

struct Columns {
    cites: usize,
    title: usize,
    authors: Option<usize>,
    year: Option<usize>,
    source: Option<usize>,
    work_type: Option<usize>,
}

impl Columns {
    fn locate(header: &csv::StringRecord) -> Result<Columns> {
        let find = |names: &[&str]| {
            header.iter().position(|h| {
                let h = h.trim().trim_start_matches('\u{feff}');
                names.iter().any(|n| h.eq_ignore_ascii_case(n))
            })
        };
        Ok(Columns {
            cites: find(&["cites", "citations"]).ok_or(Error::MissingColumn("Cites"))?,
            title: find(&["title"]).ok_or(Error::MissingColumn("Title"))?,
            authors: find(&["authors", "author"]),
            year: find(&["year"]),
            source: find(&["source", "venue"]),
            work_type: find(&["type"]),
        })
    }
}

/// Parse a citation export into a dataset sorted by descending cites.
pub fn parse_citation_csv(raw: &[u8], options: &ParseOptions) -> Result<AuthorDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(raw);

    let header = reader.headers().map_err(|e| utf8_or_csv(e, 0))?.clone();
    let cols = Columns::locate(&header)?;

    let mut works = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| utf8_or_csv(e, row))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        works.push(parse_row(&record, &cols, row)?);
    }
    if works.is_empty() {
        return Err(Error::EmptyDataset);
    }

    sort_works(&mut works);
    Ok(AuthorDataset {
        author: options.author.clone(),
        prize_year: options.prize_year,
        works,
        provenance: Provenance {
            source: options.source.clone(),
            ingested_at: None,
        },
    })
}

fn utf8_or_csv(err: csv::Error, row: usize) -> Error {
    match err.kind() {
        csv::ErrorKind::Utf8 { .. } => Error::MalformedRow {
            row,
            cause: "invalid UTF-8".into(),
        },
        _ => Error::Csv(err),
    }
}

fn parse_row(record: &csv::StringRecord, cols: &Columns, row: usize) -> Result<WorkRecord> {
    let malformed = |cause: String| Error::MalformedRow { row, cause };
    let field = |idx: usize| record.get(idx).map(str::trim).unwrap_or("");
    let optional = |idx: Option<usize>| idx.map(field).filter(|s| !s.is_empty());

    let cites_raw = field(cols.cites);
    let cites: u64 = cites_raw
        .parse()
        .map_err(|_| malformed(format!("cites `{cites_raw}` is not a non-negative integer")))?;

    let title = collapse_whitespace(field(cols.title));
    if title.is_empty() {
        return Err(malformed("empty title".into()));
    }

    let year = match optional(cols.year) {
        Some(y) => Some(
            y.parse::<i32>()
                .map_err(|_| malformed(format!("year `{y}` is not an integer")))?,
        ),
        None => None,
    };

    let authors = optional(cols.authors)
        .map(|a| {
            a.split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect()
        })
        .unwrap_or_default();

    Ok(WorkRecord {
        title,
        authors,
        year,
        venue: optional(cols.source).map(String::from),
        work_type: optional(cols.work_type).and_then(WorkType::parse_label),
        cites,
    })
}

/// Serialize a dataset back to the export format accepted by
/// [`parse_citation_csv`].
pub fn write_citation_csv(dataset: &AuthorDataset) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["Cites", "Title", "Authors", "Year", "Source", "Type"])?;
    for w in &dataset.works {
        writer.write_record([
            w.cites.to_string(),
            w.title.clone(),
            w.authors.join("; "),
            w.year.map(|y| y.to_string()).unwrap_or_default(),
            w.venue.clone().unwrap_or_default(),
            w.work_type.map(|t| t.label().to_string()).unwrap_or_default(),
        ])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Case-folded, punctuation-stripped, whitespace-collapsed title.
pub fn normalize_title(title: &str) -> String {
    let stripped: String = title
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() || c.is_whitespace() { c } else { ' ' })
        .collect();
    collapse_whitespace(&stripped)
}

/// Normalized Levenshtein ratio of two already-normalized titles.
pub fn title_similarity(a: &str, b: &str) -> f64 {
    strsim::normalized_levenshtein(a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeEntry {
    pub kept_title: String,
    pub absorbed_titles: Vec<String>,
    /// Kept record first, then the absorbed records in rank order.
    pub cites_before: Vec<u64>,
    pub cites_after: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeLog {
    /// Describes the automatic rule used in place of manual curation.
    pub criterion: String,
    pub threshold: f64,
    pub entries: Vec<MergeEntry>,
}

impl MergeLog {
    pub fn merges(&self) -> usize {
        self.entries.iter().map(|e| e.absorbed_titles.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union keeping the smaller index as root, so the root of every set is
    /// its highest-ranked member.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Merge records whose normalized titles are at least `threshold` similar.
///
/// Similarity is closed transitively: if A~B and B~C all three collapse into
/// the highest-cited of them, with citations summed.
pub fn merge_stray_records(dataset: &AuthorDataset, threshold: f64) -> (AuthorDataset, MergeLog) {
    let works = &dataset.works;
    let normalized: Vec<String> = works.iter().map(|w| normalize_title(&w.title)).collect();
    let lengths: Vec<usize> = normalized.iter().map(|t| t.chars().count()).collect();
    let mut sets = DisjointSet::new(works.len());

    if threshold >= 1.0 {
        let mut first_seen: HashMap<&str, usize> = HashMap::new();
        for (i, t) in normalized.iter().enumerate() {
            if t.is_empty() {
                continue;
            }
            match first_seen.get(t.as_str()) {
                Some(&j) => sets.union(i, j),
                None => {
                    first_seen.insert(t, i);
                }
            }
        }
    } else {
        for i in 0..works.len() {
            if lengths[i] == 0 {
                continue;
            }
            for j in (i + 1)..works.len() {
                if lengths[j] == 0 {
                    continue;
                }
                // edit distance is at least the length difference
                let longest = lengths[i].max(lengths[j]) as f64;
                let diff = lengths[i].abs_diff(lengths[j]) as f64;
                if 1.0 - diff / longest < threshold {
                    continue;
                }
                if title_similarity(&normalized[i], &normalized[j]) >= threshold {
                    sets.union(i, j);
                }
            }
        }
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); works.len()];
    for i in 0..works.len() {
        let root = sets.find(i);
        members[root].push(i);
    }

    let mut merged = Vec::with_capacity(works.len());
    let mut entries = Vec::new();
    for (root, group) in members.iter().enumerate() {
        if group.is_empty() {
            continue;
        }
        debug_assert_eq!(group[0], root);
        let mut kept = works[root].clone();
        if group.len() > 1 {
            let cites_before: Vec<u64> = group.iter().map(|&i| works[i].cites).collect();
            kept.cites = cites_before.iter().sum();
            entries.push(MergeEntry {
                kept_title: kept.title.clone(),
                absorbed_titles: group[1..].iter().map(|&i| works[i].title.clone()).collect(),
                cites_before,
                cites_after: kept.cites,
            });
        }
        merged.push(kept);
    }
    sort_works(&mut merged);

    let log = MergeLog {
        criterion: format!(
            "automatic stand-in for manual curation: normalized Levenshtein ratio >= {threshold} \
             on case-folded, punctuation-stripped titles"
        ),
        threshold,
        entries,
    };
    (dataset.with_works(merged), log)
}
