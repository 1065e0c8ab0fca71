//! Annotated news corpora.
//!
//! The canonical on-disk format is JSONL, one [`Article`] per line:
//!
//! ```json
//! {"id":"cnn-0001","publisher":"CNN","orientation":"mainstream","rating":"mostly_true",
//!  "title":"...","paragraphs":["...","..."],
//!  "links":[{"url":"https://example.org/x","external":true}],
//!  "quoted_spans":[[0,12,40]],"source_url":"https://www.cnn.com/..."}
//! ```
//!
//! `quoted_spans` entries are `[paragraph_index, char_start, char_end)` in
//! character offsets. `links`, `quoted_spans` and `source_url` may be omitted.

mod convert;
mod folds;
mod stats;
pub mod synthetic;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::textproc::TokenizedDocument;

pub use convert::{convert_buzzfeed, registrable_domain, ConvertReport};
pub use folds::{balance_by_oversampling, partition_publisher_folds, Fold};
pub use stats::{corpus_statistics, CorpusStats, RatingCounts, RowLevel, StatsRow};
pub(crate) use stats::csv_escape;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("article {0} is unrated and has no veracity label")]
    Unrated(String),
    #[error("orientation {orientation} has {found} publishers, expected {expected}")]
    FoldCount {
        orientation: Orientation,
        found: usize,
        expected: usize,
    },
    #[error("fold count must be positive")]
    ZeroFolds,
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("corpus is empty")]
    Empty,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Mainstream,
    Left,
    Right,
    Satire,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::Mainstream,
        Orientation::Left,
        Orientation::Right,
        Orientation::Satire,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Mainstream => "mainstream",
            Orientation::Left => "left",
            Orientation::Right => "right",
            Orientation::Satire => "satire",
        }
    }

    pub fn is_hyperpartisan(self) -> bool {
        matches!(self, Orientation::Left | Orientation::Right)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Orientation::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| format!("unknown orientation {s:?} (expected left|right|mainstream|satire)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rating {
    MostlyTrue,
    Mixture,
    MostlyFalse,
    NoFactual,
    Unrated,
}

impl Rating {
    pub const ALL: [Rating; 5] = [
        Rating::MostlyTrue,
        Rating::Mixture,
        Rating::MostlyFalse,
        Rating::NoFactual,
        Rating::Unrated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rating::MostlyTrue => "mostly_true",
            Rating::Mixture => "mixture",
            Rating::MostlyFalse => "mostly_false",
            Rating::NoFactual => "no_factual",
            Rating::Unrated => "unrated",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rating {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rating::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| {
            format!("unknown rating {s:?} (expected mostly_true|mixture|mostly_false|no_factual|unrated)")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub url: String,
    pub external: bool,
}

/// Quoted character range `[start, end)` inside one paragraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize, usize)", into = "(usize, usize, usize)")]
pub struct QuotedSpan {
    pub paragraph: usize,
    pub start: usize,
    pub end: usize,
}

impl From<(usize, usize, usize)> for QuotedSpan {
    fn from((paragraph, start, end): (usize, usize, usize)) -> Self {
        Self {
            paragraph,
            start,
            end,
        }
    }
}

impl From<QuotedSpan> for (usize, usize, usize) {
    fn from(s: QuotedSpan) -> Self {
        (s.paragraph, s.start, s.end)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub publisher: String,
    pub orientation: Orientation,
    pub rating: Rating,
    pub title: String,
    pub paragraphs: Vec<String>,
    #[serde(default)]
    pub links: Vec<Link>,
    #[serde(default)]
    pub quoted_spans: Vec<QuotedSpan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_url: Option<String>,
}

impl Article {
    pub fn external_links(&self) -> usize {
        self.links.iter().filter(|l| l.external).count()
    }

    /// Words of `doc` (tokenized from this article) lying entirely inside a
    /// quoted span.
    pub fn quoted_words(&self, doc: &TokenizedDocument) -> usize {
        doc.words()
            .filter(|t| {
                self.quoted_spans
                    .iter()
                    .any(|s| s.paragraph == t.paragraph && s.start <= t.start && t.end <= s.end)
            })
            .count()
    }

    /// Check the record-level invariants.
    pub fn validate(&self) -> Result<(), (String, String)> {
        let err = |field: &str, msg: String| Err((field.to_string(), msg));
        if self.id.is_empty() {
            return err("id", "must not be empty".into());
        }
        if self.paragraphs.is_empty() {
            return err("paragraphs", "must contain at least one paragraph".into());
        }
        if self.orientation == Orientation::Satire && self.rating != Rating::Unrated {
            return err(
                "rating",
                format!("satire articles must be unrated, found {}", self.rating),
            );
        }
        for (i, span) in self.quoted_spans.iter().enumerate() {
            let Some(text) = self.paragraphs.get(span.paragraph) else {
                return err(
                    "quoted_spans",
                    format!("span {i} refers to missing paragraph {}", span.paragraph),
                );
            };
            let len = text.chars().count();
            if span.start > span.end || span.end > len {
                return err(
                    "quoted_spans",
                    format!(
                        "span {i} [{}, {}) outside paragraph {} of length {len}",
                        span.start, span.end, span.paragraph
                    ),
                );
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    /// Published BuzzFeed annotation CSV; archived articles are read from an
    /// `articles/` directory next to the CSV.
    BuzzfeedCsv,
}

/// An ordered, immutable collection of articles.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    articles: Vec<Article>,
}

impl Corpus {
    /// Build a corpus from validated articles. Panics on invariant violations;
    /// use [`Corpus::try_new`] for untrusted input.
    pub fn new(articles: Vec<Article>) -> Self {
        Self::try_new(articles).expect("valid articles")
    }

    pub fn try_new(articles: Vec<Article>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::new();
        for (i, a) in articles.iter().enumerate() {
            if let Err((field, message)) = a.validate() {
                return Err(CorpusError::Field {
                    line: i + 1,
                    field,
                    message,
                });
            }
            if !seen.insert(a.id.as_str()) {
                return Err(CorpusError::Field {
                    line: i + 1,
                    field: "id".into(),
                    message: format!("duplicate id {:?}", a.id),
                });
            }
        }
        Ok(Self { articles })
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn into_articles(self) -> Vec<Article> {
        self.articles
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Article> {
        self.articles.iter()
    }

    /// Distinct publishers of one orientation, sorted.
    pub fn publishers(&self, orientation: Orientation) -> Vec<String> {
        let mut pubs: Vec<String> = self
            .articles
            .iter()
            .filter(|a| a.orientation == orientation)
            .map(|a| a.publisher.clone())
            .collect();
        pubs.sort();
        pubs.dedup();
        pubs
    }

    pub fn count(&self, orientation: Orientation) -> usize {
        self.articles.iter().filter(|a| a.orientation == orientation).count()
    }

    /// Concatenate two corpora, rejecting duplicate ids.
    pub fn merged(&self, other: &Corpus) -> Result<Corpus, CorpusError> {
        let mut all = self.articles.clone();
        all.extend(other.articles.iter().cloned());
        Corpus::try_new(all)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for a in &self.articles {
            out.push_str(&serde_json::to_string(a).expect("article serializes"));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Article;
    type IntoIter = std::slice::Iter<'a, Article>;

    fn into_iter(self) -> Self::IntoIter {
        self.articles.iter()
    }
}

/// A record rejected during lenient loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: usize,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "line {}: field `{field}`: {}", self.line, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

/// Load a corpus, failing on the first invalid record.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::Jsonl => {
            let (corpus, rejected) = load_jsonl_lenient(path)?;
            match rejected.into_iter().next() {
                None => Ok(corpus),
                Some(Rejection {
                    line,
                    field: Some(field),
                    message,
                }) => Err(CorpusError::Field {
                    line,
                    field,
                    message,
                }),
                Some(Rejection { line, message, .. }) => Err(CorpusError::Record { line, message }),
            }
        }
        CorpusFormat::BuzzfeedCsv => {
            let archive = path
                .parent()
                .map(|p| p.join("articles"))
                .unwrap_or_else(|| PathBuf::from("articles"));
            Ok(convert_buzzfeed(path, &archive)?.corpus)
        }
    }
}

/// Load a JSONL corpus, keeping valid records and reporting rejected ones.
///
/// Input order is preserved; blank lines are skipped.
pub fn load_jsonl_lenient(path: &Path) -> Result<(Corpus, Vec<Rejection>), CorpusError> {
    let raw = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_jsonl(&raw))
}

pub fn parse_jsonl(raw: &str) -> (Corpus, Vec<Rejection>) {
    let mut articles = Vec::new();
    let mut rejected = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in raw.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line).and_then(|a| a.validate().map(|_| a).map_err(|(f, m)| (Some(f), m))) {
            Ok(article) => {
                if seen.insert(article.id.clone()) {
                    articles.push(article);
                } else {
                    rejected.push(Rejection {
                        line: line_no,
                        field: Some("id".into()),
                        message: format!("duplicate id {:?}", article.id),
                    });
                }
            }
            Err((field, message)) => rejected.push(Rejection {
                line: line_no,
                field,
                message,
            }),
        }
    }
    (Corpus { articles }, rejected)
}

type RecordError = (Option<String>, String);

fn parse_record(line: &str) -> Result<Article, RecordError> {
    let value: Value = serde_json::from_str(line).map_err(|e| (None, format!("invalid JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err((None, "record is not a JSON object".into()));
    };
    let field_err = |field: &str, msg: String| (Some(field.to_string()), msg);

    let orientation = required_str(&map, "orientation")?
        .parse::<Orientation>()
        .map_err(|m| field_err("orientation", m))?;
    let rating = required_str(&map, "rating")?
        .parse::<Rating>()
        .map_err(|m| field_err("rating", m))?;
    let paragraphs = match map.get("paragraphs") {
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| v.as_str().map(str::to_string))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| field_err("paragraphs", "expected an array of strings".into()))?,
        Some(_) => return Err(field_err("paragraphs", "expected an array of strings".into())),
        None => return Err(field_err("paragraphs", "missing".into())),
    };
    let links = optional_field(&map, "links")?;
    let quoted_spans = optional_field(&map, "quoted_spans")?;
    let source_url = match map.get("source_url") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(field_err("source_url", "expected a string".into())),
    };
    Ok(Article {
        id: required_str(&map, "id")?.to_string(),
        publisher: required_str(&map, "publisher")?.to_string(),
        orientation,
        rating,
        title: required_str(&map, "title")?.to_string(),
        paragraphs,
        links,
        quoted_spans,
        source_url,
    })
}

fn required_str<'a>(map: &'a Map<String, Value>, field: &str) -> Result<&'a str, RecordError> {
    match map.get(field) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err((Some(field.to_string()), "expected a string".into())),
        None => Err((Some(field.to_string()), "missing".into())),
    }
}

fn optional_field<T: serde::de::DeserializeOwned + Default>(
    map: &Map<String, Value>,
    field: &str,
) -> Result<T, RecordError> {
    match map.get(field) {
        None | Some(Value::Null) => Ok(T::default()),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| (Some(field.to_string()), e.to_string())),
    }
}

/// Fake/real label derived from a fact-check rating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VeracityLabel {
    Fake,
    Real,
    Excluded,
}

/// Mostly false and mixture are fake, mostly true is real, articles without
/// factual content are excluded. Unrated (satire) articles are an error.
pub fn operationalize_veracity(article: &Article) -> Result<VeracityLabel, CorpusError> {
    match article.rating {
        Rating::MostlyTrue => Ok(VeracityLabel::Real),
        Rating::Mixture | Rating::MostlyFalse => Ok(VeracityLabel::Fake),
        Rating::NoFactual => Ok(VeracityLabel::Excluded),
        Rating::Unrated => Err(CorpusError::Unrated(article.id.clone())),
    }
}

#[cfg(test)]
pub(crate) fn article(id: &str, publisher: &str, orientation: Orientation, paragraphs: &[&str]) -> Article {
    Article {
        id: id.into(),
        publisher: publisher.into(),
        orientation,
        rating: if orientation == Orientation::Satire {
            Rating::Unrated
        } else {
            Rating::MostlyTrue
        },
        title: String::new(),
        paragraphs: paragraphs.iter().map(|p| p.to_string()).collect(),
        links: vec![],
        quoted_spans: vec![],
        source_url: None,
    }
}
