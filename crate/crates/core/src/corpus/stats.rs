use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Article, Corpus, CorpusError, Orientation, Rating};
use crate::textproc::tokenize;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingCounts {
    pub mostly_true: usize,
    pub mixture: usize,
    pub mostly_false: usize,
    pub no_factual: usize,
    pub unrated: usize,
}

impl RatingCounts {
    fn add(&mut self, rating: Rating) {
        *self.slot(rating) += 1;
    }

    fn slot(&mut self, rating: Rating) -> &mut usize {
        match rating {
            Rating::MostlyTrue => &mut self.mostly_true,
            Rating::Mixture => &mut self.mixture,
            Rating::MostlyFalse => &mut self.mostly_false,
            Rating::NoFactual => &mut self.no_factual,
            Rating::Unrated => &mut self.unrated,
        }
    }

    pub fn get(&self, rating: Rating) -> usize {
        [self.mostly_true, self.mixture, self.mostly_false, self.no_factual, self.unrated][rating.index()]
    }

    pub fn total(&self) -> usize {
        self.mostly_true + self.mixture + self.mostly_false + self.no_factual + self.unrated
    }

    fn merge(&mut self, other: &RatingCounts) {
        for r in Rating::ALL {
            *self.slot(r) += other.get(r);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowLevel {
    Orientation,
    Publisher,
    Total,
}

/// One row of the corpus overview table.
///
/// Sums are kept at full precision; means are derived on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub level: RowLevel,
    pub label: String,
    pub orientation: Option<Orientation>,
    pub ratings: RatingCounts,
    pub articles: usize,
    pub paragraphs: usize,
    pub external_links: usize,
    pub links: usize,
    pub quoted_words: usize,
    pub words: usize,
}

impl StatsRow {
    fn empty(level: RowLevel, label: &str, orientation: Option<Orientation>) -> Self {
        Self {
            level,
            label: label.to_string(),
            orientation,
            ratings: RatingCounts::default(),
            articles: 0,
            paragraphs: 0,
            external_links: 0,
            links: 0,
            quoted_words: 0,
            words: 0,
        }
    }

    fn merge(&mut self, other: &StatsRow) {
        self.ratings.merge(&other.ratings);
        self.articles += other.articles;
        self.paragraphs += other.paragraphs;
        self.external_links += other.external_links;
        self.links += other.links;
        self.quoted_words += other.quoted_words;
        self.words += other.words;
    }

    fn mean(&self, sum: usize) -> f64 {
        if self.articles == 0 {
            0.0
        } else {
            sum as f64 / self.articles as f64
        }
    }

    pub fn mean_paragraphs(&self) -> f64 {
        self.mean(self.paragraphs)
    }
    pub fn mean_external_links(&self) -> f64 {
        self.mean(self.external_links)
    }
    pub fn mean_links(&self) -> f64 {
        self.mean(self.links)
    }
    pub fn mean_quoted_words(&self) -> f64 {
        self.mean(self.quoted_words)
    }
    pub fn mean_words(&self) -> f64 {
        self.mean(self.words)
    }
}

/// Per-orientation rows, each followed by its publisher rows, then the total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub rows: Vec<StatsRow>,
}

impl CorpusStats {
    pub fn orientation(&self, o: Orientation) -> Option<&StatsRow> {
        self.rows
            .iter()
            .find(|r| r.level == RowLevel::Orientation && r.orientation == Some(o))
    }

    pub fn publisher(&self, name: &str) -> Option<&StatsRow> {
        self.rows
            .iter()
            .find(|r| r.level == RowLevel::Publisher && r.label == name)
    }

    pub fn total(&self) -> &StatsRow {
        self.rows.last().expect("total row")
    }

    /// CSV with counts and means rounded to one decimal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "level,label,mostly_true,mixture,mostly_false,no_factual,unrated,articles,\
             paragraphs,links_external,links_all,words_quoted,words_all\n",
        );
        for r in &self.rows {
            let level = match r.level {
                RowLevel::Orientation => "orientation",
                RowLevel::Publisher => "publisher",
                RowLevel::Total => "total",
            };
            out.push_str(&format!(
                "{level},{},{},{},{},{},{},{},{:.1},{:.1},{:.1},{:.1},{:.1}\n",
                csv_escape(&r.label),
                r.ratings.mostly_true,
                r.ratings.mixture,
                r.ratings.mostly_false,
                r.ratings.no_factual,
                r.ratings.unrated,
                r.articles,
                r.mean_paragraphs(),
                r.mean_external_links(),
                r.mean_links(),
                r.mean_quoted_words(),
                r.mean_words(),
            ));
        }
        out
    }
}

pub(crate) fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn article_row(a: &Article) -> StatsRow {
    let doc = tokenize(&a.paragraphs);
    let mut row = StatsRow::empty(RowLevel::Publisher, &a.publisher, Some(a.orientation));
    row.ratings.add(a.rating);
    row.articles = 1;
    row.paragraphs = a.paragraphs.len();
    row.external_links = a.external_links();
    row.links = a.links.len();
    row.quoted_words = a.quoted_words(&doc);
    row.words = doc.word_count();
    row
}

/// Aggregate counts and per-article means.
///
/// Word counts cover body paragraphs only (titles excluded) and use the
/// crate tokenizer's word tokens; punctuation is not counted.
pub fn corpus_statistics(corpus: &Corpus) -> Result<CorpusStats, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Empty);
    }
    let per_article: Vec<StatsRow> = corpus.articles().par_iter().map(article_row).collect();

    let mut publishers: BTreeMap<(Orientation, String), StatsRow> = BTreeMap::new();
    for row in &per_article {
        let key = (row.orientation.expect("article row"), row.label.clone());
        publishers
            .entry(key)
            .or_insert_with(|| StatsRow::empty(RowLevel::Publisher, &row.label, row.orientation))
            .merge(row);
    }

    let mut rows = Vec::new();
    let mut total = StatsRow::empty(RowLevel::Total, "total", None);
    for o in Orientation::ALL {
        let group: Vec<&StatsRow> = publishers
            .iter()
            .filter(|((po, _), _)| *po == o)
            .map(|(_, r)| r)
            .collect();
        if group.is_empty() {
            continue;
        }
        let mut head = StatsRow::empty(RowLevel::Orientation, o.as_str(), Some(o));
        for r in &group {
            head.merge(r);
        }
        total.merge(&head);
        rows.push(head);
        rows.extend(group.into_iter().cloned());
    }
    rows.push(total);
    Ok(CorpusStats { rows })
}
