use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    char_ngrams, dictionary_features, domain_features, pos_ngrams, readability_scores, stopword_ngrams,
    word_unigrams, Dictionaries, Document, DomainFeatures, FeatureError, FeatureFamily, Multiset,
    ReadabilityScores,
};
use crate::textproc::resources;

pub const VOCABULARY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub families: Vec<FeatureFamily>,
    pub ngram_min: usize,
    pub ngram_max: usize,
    /// Minimum document frequency as a fraction of training documents.
    pub min_doc_fraction: f64,
    /// Minimum number of categories a feature must occur in.
    pub min_categories: usize,
}

impl FeatureConfig {
    /// The full style model.
    pub fn style() -> Self {
        Self {
            families: vec![
                FeatureFamily::CharNgram,
                FeatureFamily::StopNgram,
                FeatureFamily::PosNgram,
                FeatureFamily::Readability,
                FeatureFamily::Dictionary,
                FeatureFamily::Domain,
            ],
            ngram_min: 1,
            ngram_max: 3,
            min_doc_fraction: 0.10,
            min_categories: 2,
        }
    }

    /// Bag-of-words topic baseline.
    pub fn topic() -> Self {
        Self {
            families: vec![FeatureFamily::Bow],
            ..Self::style()
        }
    }

    pub fn with_families(families: &[FeatureFamily]) -> Self {
        Self {
            families: families.to_vec(),
            ..Self::style()
        }
    }
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self::style()
    }
}

/// All raw feature values of one document, before selection.
///
/// Multiset families hold relative frequencies within the family; scalar
/// families hold raw values and are always present, even when zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedDocument {
    pub id: String,
    pub features: Vec<(String, f64)>,
}

fn push_multiset(out: &mut Vec<(String, f64)>, prefix: &str, per_order: Vec<(usize, Multiset)>) {
    let total: u32 = per_order.iter().flat_map(|(_, m)| m.values()).sum();
    if total == 0 {
        return;
    }
    for (n, m) in per_order {
        for (gram, c) in m {
            out.push((format!("{prefix}{n}:{gram}"), c as f64 / total as f64));
        }
    }
}

fn bundled_dictionaries() -> &'static Dictionaries {
    static DICTS: OnceLock<Dictionaries> = OnceLock::new();
    DICTS.get_or_init(Dictionaries::bundled)
}

/// Extract every feature of the configured families.
///
/// A document without any word gets zero readability scores instead of an
/// error so that one empty article does not abort a corpus run.
pub fn extract(doc: &Document, config: &FeatureConfig) -> Result<ExtractedDocument, FeatureError> {
    extract_with(doc, config, bundled_dictionaries(), resources::stopwords())
}

pub fn extract_with(
    doc: &Document,
    config: &FeatureConfig,
    dicts: &Dictionaries,
    stopwords: &HashSet<String>,
) -> Result<ExtractedDocument, FeatureError> {
    let orders = config.ngram_min..=config.ngram_max;
    let mut out = Vec::new();
    for &family in &config.families {
        match family {
            FeatureFamily::CharNgram => {
                let per = orders.clone().map(|n| Ok((n, char_ngrams(doc, n)?))).collect::<Result<_, FeatureError>>()?;
                push_multiset(&mut out, "char", per);
            }
            FeatureFamily::StopNgram => {
                let per = orders
                    .clone()
                    .map(|n| Ok((n, stopword_ngrams(doc, n, stopwords)?)))
                    .collect::<Result<_, FeatureError>>()?;
                push_multiset(&mut out, "stop", per);
            }
            FeatureFamily::PosNgram => {
                let per = orders.clone().map(|n| Ok((n, pos_ngrams(doc, n)?))).collect::<Result<_, FeatureError>>()?;
                push_multiset(&mut out, "pos", per);
            }
            FeatureFamily::Bow => {
                let m = word_unigrams(doc);
                let total: u32 = m.values().sum();
                out.extend(m.into_iter().map(|(w, c)| (format!("bow:{w}"), c as f64 / total as f64)));
            }
            FeatureFamily::Readability => {
                let scores = match readability_scores(doc) {
                    Ok(s) => s.as_array(),
                    Err(FeatureError::EmptyText) => [0.0; 10],
                    Err(e) => return Err(e),
                };
                for (name, v) in ReadabilityScores::NAMES.iter().zip(scores) {
                    out.push((format!("read:{name}"), v));
                }
            }
            FeatureFamily::Dictionary => {
                for (cat, v) in dicts.categories().iter().zip(dictionary_features(doc, dicts)) {
                    if v > 0.0 {
                        out.push((format!("dict:{cat}"), v));
                    }
                }
            }
            FeatureFamily::Domain => {
                let f = domain_features(doc);
                for (name, v) in DomainFeatures::NAMES.iter().zip(f.as_array()) {
                    out.push((format!("dom:{name}"), v));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(ExtractedDocument {
        id: doc.id.clone(),
        features: out,
    })
}

/// Training mean and standard deviation of a scalar feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub mean: f64,
    pub std: f64,
}

impl Scale {
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub id: String,
    pub family: FeatureFamily,
    pub doc_freq: usize,
    /// Training documents per category in which the feature occurs.
    pub category_presence: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Scale>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    version: u32,
    config: FeatureConfig,
    training_docs: usize,
    entries: Vec<VocabEntry>,
}

/// Selected features with their selection metadata and scalar scales.
#[derive(Debug, Clone)]
pub struct FeatureVocabulary {
    config: FeatureConfig,
    training_docs: usize,
    entries: Vec<VocabEntry>,
    index: HashMap<String, usize>,
    training_ids: BTreeSet<String>,
}

impl PartialEq for FeatureVocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.training_docs == other.training_docs && self.entries == other.entries
    }
}

impl FeatureVocabulary {
    fn from_parts(config: FeatureConfig, training_docs: usize, entries: Vec<VocabEntry>) -> Self {
        let index = entries.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        Self {
            config,
            training_docs,
            entries,
            index,
            training_ids: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn training_docs(&self) -> usize {
        self.training_docs
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Ids of the documents the vocabulary was built from. Empty after
    /// loading from disk.
    pub fn training_ids(&self) -> &BTreeSet<String> {
        &self.training_ids
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&VocabularyFile {
            version: VOCABULARY_VERSION,
            config: self.config.clone(),
            training_docs: self.training_docs,
            entries: self.entries.clone(),
        })
        .expect("vocabulary serializes")
    }

    pub fn from_json(raw: &str) -> Result<Self, FeatureError> {
        let file: VocabularyFile = serde_json::from_str(raw)?;
        if file.version != VOCABULARY_VERSION {
            return Err(FeatureError::Version(file.version));
        }
        Ok(Self::from_parts(file.config, file.training_docs, file.entries))
    }

    /// SHA-256 of the serialized vocabulary, hex encoded.
    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn save(&self, path: &Path) -> Result<(), FeatureError> {
        std::fs::write(path, self.to_json()).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, FeatureError> {
        let raw = std::fs::read_to_string(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&raw)
    }
}

/// Select features from training documents.
///
/// An n-gram, word or dictionary feature is kept when it occurs in at least
/// `min_doc_fraction` of the documents and in at least `min_categories`
/// categories. Scalar features are always kept and get a [`Scale`] from the
/// training values.
pub fn build_vocabulary<C: AsRef<str>>(
    docs: &[&ExtractedDocument],
    categories: &[C],
    config: &FeatureConfig,
) -> Result<FeatureVocabulary, FeatureError> {
    assert_eq!(docs.len(), categories.len(), "one category per document");
    let mut names: Vec<&str> = categories.iter().map(AsRef::as_ref).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() < 2 {
        return Err(FeatureError::TooFewCategories(names.len()));
    }
    let cat_of: Vec<usize> = categories
        .iter()
        .map(|c| names.binary_search(&c.as_ref()).expect("category listed"))
        .collect();

    struct Stats {
        df: usize,
        per_cat: Vec<usize>,
        values: Vec<f64>,
    }
    let mut stats: HashMap<&str, Stats> = HashMap::new();
    for (d, &c) in docs.iter().zip(&cat_of) {
        for (id, v) in &d.features {
            let s = stats.entry(id.as_str()).or_insert_with(|| Stats {
                df: 0,
                per_cat: vec![0; names.len()],
                values: Vec::new(),
            });
            if *v != 0.0 {
                s.df += 1;
                s.per_cat[c] += 1;
            }
            if id.starts_with("read:") || id.starts_with("dom:") {
                s.values.push(*v);
            }
        }
    }

    let n = docs.len();
    let min_df = config.min_doc_fraction * n as f64;
    let mut entries: Vec<VocabEntry> = stats
        .into_iter()
        .filter_map(|(id, s)| {
            let family = FeatureFamily::of_id(id)?;
            if !config.families.contains(&family) {
                return None;
            }
            let scale = if family.is_scalar() {
                let mean = s.values.iter().sum::<f64>() / n as f64;
                let var = s.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
                let std = if var.sqrt() > 1e-12 * mean.abs().max(1.0) { var.sqrt() } else { 1.0 };
                Some(Scale { mean, std })
            } else {
                let categories_present = s.per_cat.iter().filter(|&&c| c > 0).count();
                if (s.df as f64) < min_df - 1e-9 || categories_present < config.min_categories {
                    return None;
                }
                None
            };
            Some(VocabEntry {
                id: id.to_string(),
                family,
                doc_freq: s.df,
                category_presence: names.iter().map(|c| c.to_string()).zip(s.per_cat).collect(),
                scale,
            })
        })
        .collect();
    let rank = |f: FeatureFamily| config.families.iter().position(|&x| x == f);
    entries.sort_by(|a, b| rank(a.family).cmp(&rank(b.family)).then_with(|| a.id.cmp(&b.id)));

    let mut vocab = FeatureVocabulary::from_parts(config.clone(), n, entries);
    vocab.training_ids = docs.iter().map(|d| d.id.clone()).collect();
    Ok(vocab)
}

pub fn bag_of_words_vocabulary<C: AsRef<str>>(
    docs: &[&ExtractedDocument],
    categories: &[C],
) -> Result<FeatureVocabulary, FeatureError> {
    build_vocabulary(docs, categories, &FeatureConfig::topic())
}

/// Sparse vector over a vocabulary: strictly increasing indices, no zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub dim: usize,
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u32, *v))
            .unzip();
        Self {
            dim: dense.len(),
            indices,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn get(&self, idx: usize) -> f64 {
        match self.indices.binary_search(&(idx as u32)) {
            Ok(p) => self.values[p],
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().map(|&i| i as usize).zip(self.values.iter().copied())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            d[i] = v;
        }
        d
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * w[i]).sum()
    }
}

pub fn vectorize_extracted(doc: &ExtractedDocument, vocab: &FeatureVocabulary) -> FeatureVector {
    let mut pairs: Vec<(u32, f64)> = doc
        .features
        .iter()
        .filter_map(|(id, v)| {
            let i = vocab.index_of(id)?;
            let v = match &vocab.entries[i].scale {
                Some(s) => s.apply(*v),
                None => *v,
            };
            (v != 0.0).then_some((i as u32, v))
        })
        .collect();
    pairs.sort_by_key(|p| p.0);
    let (indices, values) = pairs.into_iter().unzip();
    FeatureVector {
        dim: vocab.len(),
        indices,
        values,
    }
}

/// Extract and vectorize in one step. Fails when the vocabulary needs a
/// family the document cannot provide, such as tags for POS n-grams.
pub fn vectorize(doc: &Document, vocab: &FeatureVocabulary) -> Result<FeatureVector, FeatureError> {
    Ok(vectorize_extracted(&extract(doc, &vocab.config)?, vocab))
}

pub fn vectorize_bow(doc: &Document, vocab: &FeatureVocabulary) -> Result<FeatureVector, FeatureError> {
    vectorize(doc, vocab)
}
