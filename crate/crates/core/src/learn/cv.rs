use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_with_classes, EvaluationReport, LearnError};

/// Everything that happens between "here are training item indices" and
/// "here are predicted labels": vocabulary, balancing, scaling, learner.
///
/// `fit` must only look at the items it is given.
pub trait Pipeline: Sync {
    type Model: Send;

    fn fit(&self, train: &[usize]) -> Result<Self::Model, LearnError>;

    fn predict(&self, model: &Self::Model, test: &[usize]) -> Result<Vec<String>, LearnError>;
}

/// Unweighted average of per-fold metrics. Per-class values average over
/// the folds where they are defined and stay absent when none is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanReport {
    pub classes: Vec<String>,
    pub accuracy: f64,
    pub precision: Vec<Option<f64>>,
    pub recall: Vec<Option<f64>>,
    pub f1: Vec<Option<f64>>,
    pub folds: usize,
}

impl MeanReport {
    pub fn from_reports(reports: &[EvaluationReport]) -> Self {
        let classes = reports[0].classes.clone();
        let avg = |get: &dyn Fn(&EvaluationReport, usize) -> Option<f64>, c: usize| {
            let vals: Vec<f64> = reports.iter().filter_map(|r| get(r, c)).collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        };
        let k = classes.len();
        Self {
            accuracy: reports.iter().map(|r| r.accuracy).sum::<f64>() / reports.len() as f64,
            precision: (0..k).map(|c| avg(&|r, c| r.per_class[c].precision, c)).collect(),
            recall: (0..k).map(|c| avg(&|r, c| r.per_class[c].recall, c)).collect(),
            f1: (0..k).map(|c| avg(&|r, c| r.per_class[c].f1, c)).collect(),
            folds: reports.len(),
            classes,
        }
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub folds: Vec<EvaluationReport>,
    /// Predicted labels per fold, aligned with that fold's test items.
    pub predictions: Vec<Vec<String>>,
    pub mean: MeanReport,
}

/// Each fold in turn is the test set; the union of the others trains.
///
/// With `groups` (e.g. publishers per item) every cycle is checked to share
/// no group between its two sides.
pub fn cross_validate<P, L, C>(
    labels: &[L],
    folds: &[Vec<usize>],
    groups: Option<&[String]>,
    classes: &[C],
    pipeline: &P,
) -> Result<CrossValidation, LearnError>
where
    P: Pipeline,
    L: AsRef<str> + Sync,
    C: AsRef<str> + Sync,
{
    if folds.len() < 2 {
        return Err(LearnError::TooFewFolds(folds.len()));
    }
    let outcomes: Vec<(EvaluationReport, Vec<String>)> = (0..folds.len())
        .into_par_iter()
        .map(|fi| {
            let test = &folds[fi];
            let train: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != fi)
                .flat_map(|(_, f)| f.iter().copied())
                .collect();
            if let Some(groups) = groups {
                let train_groups: HashSet<&str> = train.iter().map(|&i| groups[i].as_str()).collect();
                if let Some(&i) = test.iter().find(|&&i| train_groups.contains(groups[i].as_str())) {
                    return Err(LearnError::Leakage {
                        fold: fi,
                        group: groups[i].clone(),
                    });
                }
            }
            for c in classes {
                if !train.iter().any(|&i| labels[i].as_ref() == c.as_ref()) {
                    return Err(LearnError::MissingClass {
                        fold: fi,
                        class: c.as_ref().to_string(),
                    });
                }
            }
            let model = pipeline.fit(&train)?;
            let predicted = pipeline.predict(&model, test)?;
            let gold: Vec<&str> = test.iter().map(|&i| labels[i].as_ref()).collect();
            let pred: Vec<&str> = predicted.iter().map(String::as_str).collect();
            let report = evaluate_with_classes(&pred, &gold, classes)?;
            Ok((report, predicted))
        })
        .collect::<Result<_, _>>()?;
    let (folds, predictions): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    Ok(CrossValidation {
        mean: MeanReport::from_reports(&folds),
        folds,
        predictions,
    })
}
