use std::collections::HashMap;
use std::path::Path;

use super::{Document, FeatureError};
use crate::textproc::resources;

/// Word lists in the General Inquirer spreadsheet layout.
///
/// The header is `Entry,Source,<category>...,Othtags,Defined`; a non-empty
/// cell flags the entry for that category. Entries may carry a sense suffix
/// (`ABOUT#1`); all senses of a word are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionaries {
    categories: Vec<String>,
    words: HashMap<String, Vec<u16>>,
}

const NON_CATEGORY: &[&str] = &["Entry", "Source", "Othtags", "Defined"];

impl Dictionaries {
    /// The subset shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(resources::GENERAL_INQUIRER).expect("bundled dictionary parses")
    }

    pub fn load(path: &Path) -> Result<Self, FeatureError> {
        let raw = std::fs::read_to_string(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&raw)
    }

    pub fn parse(raw: &str) -> Result<Self, FeatureError> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(raw.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| FeatureError::Dictionary(e.to_string()))?
            .clone();
        if header.get(0).map(str::trim) != Some("Entry") {
            return Err(FeatureError::Dictionary("first column must be Entry".into()));
        }
        let columns: Vec<(usize, String)> = header
            .iter()
            .enumerate()
            .filter(|(_, h)| !h.trim().is_empty() && !NON_CATEGORY.contains(&h.trim()))
            .map(|(i, h)| (i, h.trim().to_string()))
            .collect();
        if columns.is_empty() {
            return Err(FeatureError::Dictionary("no category columns".into()));
        }
        let mut words: HashMap<String, Vec<u16>> = HashMap::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| FeatureError::Dictionary(format!("row {}: {e}", line + 2)))?;
            let entry = rec.get(0).unwrap_or("").trim();
            let word = entry.split('#').next().unwrap_or("").to_lowercase();
            if word.is_empty() {
                continue;
            }
            let flags = words.entry(word).or_default();
            for (ci, (col, _)) in columns.iter().enumerate() {
                if rec.get(*col).is_some_and(|c| !c.trim().is_empty()) && !flags.contains(&(ci as u16)) {
                    flags.push(ci as u16);
                }
            }
        }
        for f in words.values_mut() {
            f.sort_unstable();
        }
        Ok(Self {
            categories: columns.into_iter().map(|(_, h)| h).collect(),
            words,
        })
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    /// Categories flagged for a lowercased word.
    pub fn lookup(&self, word: &str) -> impl Iterator<Item = &str> {
        self.words
            .get(word)
            .into_iter()
            .flatten()
            .map(|&c| self.categories[c as usize].as_str())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Fraction of word tokens flagged with each category, aligned with
/// [`Dictionaries::categories`]. Zero for a document without words.
pub fn dictionary_features(doc: &Document, dicts: &Dictionaries) -> Vec<f64> {
    let mut hits = vec![0usize; dicts.categories.len()];
    let mut total = 0usize;
    for t in doc.tokens.words() {
        total += 1;
        if let Some(flags) = dicts.words.get(&t.lowercase()) {
            for &c in flags {
                hits[c as usize] += 1;
            }
        }
    }
    if total == 0 {
        return vec![0.0; hits.len()];
    }
    hits.into_iter().map(|h| h as f64 / total as f64).collect()
}
