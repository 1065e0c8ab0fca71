//! Style and topic feature models.
//!
//! The style model combines character, stop-word and part-of-speech n-grams
//! (n in 1..=3), ten readability scores, General Inquirer dictionary
//! frequencies and four news-domain scalars. The topic model is a plain
//! bag of words. Both go through the same selection rules in
//! [`build_vocabulary`].

mod dictionary;
mod domain;
mod ngrams;
mod readability;
mod vocabulary;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Article;
use crate::textproc::{pos_tag, tokenize, LexiconTagger, Tagger, TokenizedDocument};

pub use dictionary::{dictionary_features, Dictionaries};
pub use domain::{domain_features, DomainFeatures};
pub use ngrams::{char_ngrams, pos_ngrams, stopword_ngrams, word_unigrams, Multiset};
pub use readability::{readability_scores, ReadabilityCounts, ReadabilityScores};
pub use vocabulary::{
    bag_of_words_vocabulary, build_vocabulary, extract, extract_with, vectorize, vectorize_bow, vectorize_extracted,
    ExtractedDocument, FeatureConfig, FeatureVector, FeatureVocabulary, Scale, VocabEntry,
};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("n-gram order {0} outside 1..=3")]
    NgramOrder(usize),
    #[error("document {0:?} has no part-of-speech tags")]
    Untagged(String),
    #[error("readability needs at least one sentence and one word")]
    EmptyText,
    #[error("vocabulary needs at least 2 categories, got {0}")]
    TooFewCategories(usize),
    #[error("dictionary: {0}")]
    Dictionary(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("vocabulary file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported vocabulary version {0}")]
    Version(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFamily {
    CharNgram,
    StopNgram,
    PosNgram,
    Readability,
    Dictionary,
    Domain,
    Bow,
}

impl FeatureFamily {
    /// Scalar families are exempt from the selection rules and standardized.
    pub fn is_scalar(self) -> bool {
        matches!(self, FeatureFamily::Readability | FeatureFamily::Domain)
    }

    /// Multiset families hold relative frequencies summing to one per document.
    pub fn is_multiset(self) -> bool {
        matches!(
            self,
            FeatureFamily::CharNgram | FeatureFamily::StopNgram | FeatureFamily::PosNgram | FeatureFamily::Bow
        )
    }

    pub fn of_id(id: &str) -> Option<FeatureFamily> {
        let prefix = id.split(':').next()?;
        Some(match prefix.trim_end_matches(|c: char| c.is_ascii_digit()) {
            "char" => FeatureFamily::CharNgram,
            "stop" => FeatureFamily::StopNgram,
            "pos" => FeatureFamily::PosNgram,
            "read" => FeatureFamily::Readability,
            "dict" => FeatureFamily::Dictionary,
            "dom" => FeatureFamily::Domain,
            "bow" => FeatureFamily::Bow,
            _ => return None,
        })
    }
}

/// An article after tokenization and tagging, with the corpus-level fields
/// the domain features need.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub paragraphs: Vec<String>,
    pub tokens: TokenizedDocument,
    pub links: usize,
    pub external_links: usize,
    pub quoted_words: usize,
}

impl Document {
    pub fn analyze(article: &Article) -> Self {
        Self::analyze_with(article, &LexiconTagger)
    }

    pub fn analyze_with(article: &Article, tagger: &dyn Tagger) -> Self {
        let mut tokens = tokenize(&article.paragraphs);
        tokens.pos_tags = Some(tagger.tag(&tokens.tokens));
        Self {
            id: article.id.clone(),
            quoted_words: article.quoted_words(&tokens),
            paragraphs: article.paragraphs.clone(),
            tokens,
            links: article.links.len(),
            external_links: article.external_links(),
        }
    }

    /// Document from raw paragraphs with no links or quotes.
    pub fn from_paragraphs<S: AsRef<str>>(id: &str, paragraphs: &[S]) -> Self {
        let paragraphs: Vec<String> = paragraphs.iter().map(|p| p.as_ref().to_string()).collect();
        Self {
            id: id.to_string(),
            tokens: pos_tag(tokenize(&paragraphs)),
            paragraphs,
            links: 0,
            external_links: 0,
            quoted_words: 0,
        }
    }
}
