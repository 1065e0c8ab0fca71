use serde::{Deserialize, Serialize};

use super::LearnError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    /// `None` when nothing was predicted as this class.
    pub precision: Option<f64>,
    /// `None` when the class does not occur in the gold labels.
    pub recall: Option<f64>,
    /// `None` when precision or recall is undefined.
    pub f1: Option<f64>,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub classes: Vec<String>,
    /// Rows are gold classes, columns predicted classes, both in `classes` order.
    pub confusion: Vec<Vec<usize>>,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub total: usize,
}

impl EvaluationReport {
    pub fn class(&self, label: &str) -> Option<&ClassMetrics> {
        self.per_class.iter().find(|c| c.label == label)
    }

    pub fn correct(&self) -> usize {
        (0..self.classes.len()).map(|i| self.confusion[i][i]).sum()
    }

    /// Share of a gold class's errors that went to one specific other class.
    pub fn misclassification_share(&self, gold: &str, predicted: &str) -> Option<f64> {
        let g = self.classes.iter().position(|c| c == gold)?;
        let p = self.classes.iter().position(|c| c == predicted)?;
        let errors: usize = self.confusion[g].iter().sum::<usize>() - self.confusion[g][g];
        (errors > 0).then(|| self.confusion[g][p] as f64 / errors as f64)
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Evaluate over the sorted union of gold and predicted labels.
pub fn evaluate<S: AsRef<str>>(predictions: &[S], gold: &[S]) -> Result<EvaluationReport, LearnError> {
    let mut classes: Vec<String> = gold.iter().chain(predictions).map(|s| s.as_ref().to_string()).collect();
    classes.sort();
    classes.dedup();
    evaluate_with_classes(predictions, gold, &classes)
}

/// Evaluate with a fixed class list, so classes that never occur still get
/// a row in the report.
pub fn evaluate_with_classes<S: AsRef<str>, C: AsRef<str>>(
    predictions: &[S],
    gold: &[S],
    classes: &[C],
) -> Result<EvaluationReport, LearnError> {
    if predictions.len() != gold.len() {
        return Err(LearnError::Length(predictions.len(), gold.len()));
    }
    if gold.is_empty() {
        return Err(LearnError::Empty);
    }
    let classes: Vec<String> = classes.iter().map(|c| c.as_ref().to_string()).collect();
    let index = |s: &str| {
        classes
            .iter()
            .position(|c| c == s)
            .ok_or_else(|| LearnError::UnknownLabel(s.to_string()))
    };
    let k = classes.len();
    let mut confusion = vec![vec![0usize; k]; k];
    for (p, g) in predictions.iter().zip(gold) {
        confusion[index(g.as_ref())?][index(p.as_ref())?] += 1;
    }
    let total = gold.len();
    let correct: usize = (0..k).map(|i| confusion[i][i]).sum();
    let per_class = (0..k)
        .map(|i| {
            let tp = confusion[i][i];
            let support: usize = confusion[i].iter().sum();
            let predicted: usize = confusion.iter().map(|row| row[i]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            let f1 = match (precision, recall) {
                (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
                (Some(_), Some(_)) => Some(0.0),
                _ => None,
            };
            ClassMetrics {
                label: classes[i].clone(),
                precision,
                recall,
                f1,
                support,
            }
        })
        .collect();
    Ok(EvaluationReport {
        accuracy: correct as f64 / total as f64,
        classes,
        confusion,
        per_class,
        total,
    })
}

/// Predicts one fixed label for everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantPredictor {
    pub label: String,
}

impl ConstantPredictor {
    pub fn predict(&self, n: usize) -> Vec<String> {
        vec![self.label.clone(); n]
    }
}

pub fn naive_baseline<C: AsRef<str>>(label: &str, classes: &[C]) -> Result<ConstantPredictor, LearnError> {
    if !classes.iter().any(|c| c.as_ref() == label) {
        return Err(LearnError::UnknownLabel(label.to_string()));
    }
    Ok(ConstantPredictor {
        label: label.to_string(),
    })
}
