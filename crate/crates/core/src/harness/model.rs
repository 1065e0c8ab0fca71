use std::fmt::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FeatureModel, HarnessConfig, HarnessError};
use crate::corpus::{csv_escape, operationalize_veracity, Article, Corpus, Orientation, VeracityLabel};
use crate::features::{build_vocabulary, extract, vectorize_extracted, Document, ExtractedDocument, FeatureVocabulary};
use crate::learn::{train_forest, ForestConfig, ModelFile, TrainedModel};
use crate::seed;

/// Which labels a standalone model learns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelScheme {
    /// hyperpartisan vs. mainstream
    Hyperpartisan,
    /// left, right, mainstream
    Orientation,
    /// fake vs. real on the hyperpartisan wings
    Veracity,
    /// satire vs. everything else
    Satire,
}

impl FromStr for LabelScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hyperpartisan" => Ok(LabelScheme::Hyperpartisan),
            "orientation" => Ok(LabelScheme::Orientation),
            "veracity" => Ok(LabelScheme::Veracity),
            "satire" => Ok(LabelScheme::Satire),
            _ => Err(format!(
                "unknown label scheme {s:?} (expected hyperpartisan|orientation|veracity|satire)"
            )),
        }
    }
}

/// The eligible articles of `corpus` under `scheme`, with their labels.
pub fn labelled(corpus: &Corpus, scheme: LabelScheme) -> Result<Vec<(&Article, String)>, HarnessError> {
    let mut out = vec![];
    for a in corpus.iter() {
        let label = match scheme {
            LabelScheme::Hyperpartisan | LabelScheme::Orientation if a.orientation == Orientation::Satire => None,
            LabelScheme::Hyperpartisan => Some(if a.orientation.is_hyperpartisan() { "hyperpartisan" } else { "mainstream" }),
            LabelScheme::Orientation => Some(a.orientation.as_str()),
            LabelScheme::Veracity if !a.orientation.is_hyperpartisan() => None,
            LabelScheme::Veracity => match operationalize_veracity(a)? {
                VeracityLabel::Fake => Some("fake"),
                VeracityLabel::Real => Some("real"),
                VeracityLabel::Excluded => None,
            },
            LabelScheme::Satire => Some(if a.orientation == Orientation::Satire { "satire" } else { "real" }),
        };
        if let Some(l) = label {
            out.push((a, l.to_string()));
        }
    }
    Ok(out)
}

/// Articles matching a side name: an orientation, `hyperpartisan`, `fake` or
/// `real`.
pub fn select<'a>(corpus: &'a Corpus, side: &str) -> Result<Vec<&'a Article>, HarnessError> {
    if let Ok(o) = Orientation::from_str(side) {
        return Ok(corpus.iter().filter(|a| a.orientation == o).collect());
    }
    match side {
        "hyperpartisan" => Ok(corpus.iter().filter(|a| a.orientation.is_hyperpartisan()).collect()),
        "fake" | "real" => {
            let want = if side == "fake" { VeracityLabel::Fake } else { VeracityLabel::Real };
            let mut out = vec![];
            for a in corpus.iter().filter(|a| a.orientation != Orientation::Satire) {
                if operationalize_veracity(a)? == want {
                    out.push(a);
                }
            }
            Ok(out)
        }
        _ => Err(HarnessError::Config(format!(
            "unknown side {side:?} (expected left|right|mainstream|satire|hyperpartisan|fake|real)"
        ))),
    }
}

fn extract_articles(articles: &[&Article], model: FeatureModel, config: &HarnessConfig) -> Result<Vec<ExtractedDocument>, HarnessError> {
    let cfg = config.selection.feature_config(model);
    Ok(articles
        .par_iter()
        .map(|a| extract(&Document::analyze(a), &cfg))
        .collect::<Result<_, _>>()?)
}

/// Train a forest on every eligible article of `corpus`.
pub fn train_model(
    corpus: &Corpus,
    scheme: LabelScheme,
    model: FeatureModel,
    config: &HarnessConfig,
    seed: u64,
) -> Result<(ModelFile, FeatureVocabulary), HarnessError> {
    let items = labelled(corpus, scheme)?;
    let articles: Vec<&Article> = items.iter().map(|(a, _)| *a).collect();
    let labels: Vec<&str> = items.iter().map(|(_, l)| l.as_str()).collect();
    let docs = extract_articles(&articles, model, config)?;
    let refs: Vec<&ExtractedDocument> = docs.iter().collect();
    let vocabulary = build_vocabulary(&refs, &labels, &config.selection.feature_config(model))?;
    let xs: Vec<_> = docs.iter().map(|d| vectorize_extracted(d, &vocabulary)).collect();
    let forest = train_forest(
        &xs,
        &labels,
        &ForestConfig {
            seed: seed::derive(seed, 2),
            ..config.forest
        },
    )?;
    let file = ModelFile::new(TrainedModel::Forest { model: forest }, &vocabulary, seed);
    Ok((file, vocabulary))
}

/// `(id, label)` for every article of `corpus`.
pub fn predict_corpus(
    file: &ModelFile,
    vocabulary: &FeatureVocabulary,
    corpus: &Corpus,
) -> Result<Vec<(String, String)>, HarnessError> {
    file.check_vocabulary(vocabulary)?;
    let config = vocabulary.config();
    corpus
        .articles()
        .par_iter()
        .map(|a| {
            let x = vectorize_extracted(&extract(&Document::analyze(a), config)?, vocabulary);
            let label = match &file.model {
                TrainedModel::Forest { model } => model.predict(&x)?.to_string(),
                TrainedModel::Linear {
                    model,
                    positive,
                    negative,
                } => if model.predict(&x)? { positive } else { negative }.clone(),
            };
            Ok((a.id.clone(), label))
        })
        .collect()
}

/// Long-format feature table `id,feature,value` of every article under
/// `vocabulary`, scalars standardized. Zero entries are omitted.
pub fn export_features(corpus: &Corpus, vocabulary: &FeatureVocabulary) -> Result<String, HarnessError> {
    let config = vocabulary.config();
    let rows: Vec<(String, crate::features::FeatureVector)> = corpus
        .articles()
        .par_iter()
        .map(|a| {
            let ex = extract(&Document::analyze(a), config)?;
            Ok((a.id.clone(), vectorize_extracted(&ex, vocabulary)))
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut out = String::from("id,feature,value\n");
    for (id, v) in rows {
        for (j, x) in v.iter() {
            writeln!(out, "{},{},{x}", csv_escape(&id), csv_escape(&vocabulary.entries()[j].id)).unwrap();
        }
    }
    Ok(out)
}

/// Vocabulary over the whole corpus with orientations as categories.
pub fn corpus_vocabulary(corpus: &Corpus, model: FeatureModel, config: &HarnessConfig) -> Result<FeatureVocabulary, HarnessError> {
    let articles: Vec<&Article> = corpus.iter().collect();
    let cats: Vec<&str> = articles.iter().map(|a| a.orientation.as_str()).collect();
    let docs = extract_articles(&articles, model, config)?;
    let refs: Vec<&ExtractedDocument> = docs.iter().collect();
    Ok(build_vocabulary(&refs, &cats, &config.selection.feature_config(model))?)
}
