use std::collections::BTreeMap;

use crate::corpus::balance_by_oversampling;
use crate::features::{build_vocabulary, vectorize_extracted, ExtractedDocument, FeatureConfig, FeatureVocabulary};
use crate::learn::{train_forest, ForestConfig, ForestModel, LearnError, Pipeline};
use crate::seed;

/// Vocabulary, optional oversampling and a random forest, all fit on the
/// training items of one cycle.
pub(crate) struct ForestPipeline<'a> {
    pub docs: &'a [ExtractedDocument],
    pub labels: &'a [String],
    pub selection: &'a FeatureConfig,
    pub forest: ForestConfig,
    pub balance: bool,
    /// Items never used for training even when handed to `fit`.
    pub skip: Option<&'a [bool]>,
    pub seed: u64,
    /// Build the vocabulary over every document; for exercising the guard.
    pub inject_leak: bool,
}

pub(crate) struct Fitted {
    pub vocabulary: FeatureVocabulary,
    pub forest: ForestModel,
}

fn key(items: &[usize]) -> u64 {
    items.iter().fold(items.len() as u64, |k, &i| seed::derive(k, i as u64))
}

/// Fails when any test document took part in building `vocabulary`, which
/// also fixed the scaling statistics.
pub(crate) fn guard<'a>(vocabulary: &FeatureVocabulary, test_ids: impl IntoIterator<Item = &'a str>) -> Result<(), LearnError> {
    let seen = vocabulary.training_ids();
    for id in test_ids {
        if seen.contains(id) {
            return Err(LearnError::TestLeak(id.to_string()));
        }
    }
    Ok(())
}

impl ForestPipeline<'_> {
    fn training_items(&self, train: &[usize]) -> Vec<usize> {
        train
            .iter()
            .copied()
            .filter(|&i| !self.skip.is_some_and(|s| s[i]))
            .collect()
    }
}

impl Pipeline for ForestPipeline<'_> {
    type Model = Fitted;

    fn fit(&self, train: &[usize]) -> Result<Fitted, LearnError> {
        let train = self.training_items(train);
        if train.is_empty() {
            return Err(LearnError::Empty);
        }
        let k = key(&train);
        let vocab_items: Vec<usize> = if self.inject_leak {
            (0..self.docs.len()).collect()
        } else {
            train.clone()
        };
        let refs: Vec<&ExtractedDocument> = vocab_items.iter().map(|&i| &self.docs[i]).collect();
        let cats: Vec<&str> = vocab_items.iter().map(|&i| self.labels[i].as_str()).collect();
        let vocabulary =
            build_vocabulary(&refs, &cats, self.selection).map_err(|e| LearnError::Pipeline(e.to_string()))?;

        let rows = if self.balance {
            let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for &i in &train {
                by_class.entry(self.labels[i].as_str()).or_default().push(i);
            }
            let groups: Vec<Vec<usize>> = by_class.into_values().collect();
            balance_by_oversampling(&groups, seed::derive(self.seed, k))
                .map_err(|e| LearnError::Pipeline(e.to_string()))?
                .concat()
        } else {
            train
        };
        let xs: Vec<_> = rows.iter().map(|&i| vectorize_extracted(&self.docs[i], &vocabulary)).collect();
        let ys: Vec<&str> = rows.iter().map(|&i| self.labels[i].as_str()).collect();
        let forest = train_forest(
            &xs,
            &ys,
            &ForestConfig {
                seed: seed::derive(self.seed, k.wrapping_add(1)),
                ..self.forest
            },
        )?;
        Ok(Fitted { vocabulary, forest })
    }

    fn predict(&self, model: &Fitted, test: &[usize]) -> Result<Vec<String>, LearnError> {
        guard(&model.vocabulary, test.iter().map(|&i| self.docs[i].id.as_str()))?;
        test.iter()
            .map(|&i| {
                let x = vectorize_extracted(&self.docs[i], &model.vocabulary);
                model.forest.predict(&x).map(str::to_string)
            })
            .collect()
    }
}

/// One forest per wing; test items are routed to the forest of their wing.
pub(crate) struct WingPipeline<'a> {
    pub left: ForestPipeline<'a>,
    pub right: ForestPipeline<'a>,
    pub is_left: &'a [bool],
}

impl Pipeline for WingPipeline<'_> {
    type Model = (Fitted, Fitted);

    fn fit(&self, train: &[usize]) -> Result<Self::Model, LearnError> {
        Ok((self.left.fit(train)?, self.right.fit(train)?))
    }

    fn predict(&self, model: &Self::Model, test: &[usize]) -> Result<Vec<String>, LearnError> {
        let (l, r): (Vec<usize>, Vec<usize>) = test.iter().partition(|&&i| self.is_left[i]);
        let mut pl = self.left.predict(&model.0, &l)?.into_iter();
        let mut pr = self.right.predict(&model.1, &r)?.into_iter();
        Ok(test
            .iter()
            .map(|&i| if self.is_left[i] { pl.next() } else { pr.next() }.expect("one prediction per item"))
            .collect())
    }
}
