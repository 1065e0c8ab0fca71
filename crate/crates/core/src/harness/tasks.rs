use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::pipeline::{ForestPipeline, WingPipeline};
use super::tables::{score_table, Cell, ScoreRow, Table};
use super::{Aggregation, ExperimentOutput, ExperimentSpec, FeatureModel, HarnessError, Task};
use crate::corpus::{operationalize_veracity, partition_publisher_folds, Article, Corpus, Orientation, VeracityLabel};
use crate::features::{extract, Document, ExtractedDocument};
use crate::learn::{
    cross_validate, evaluate_with_classes, naive_baseline, CrossValidation, EvaluationReport, MeanReport, Pipeline,
};
use crate::seed;
use crate::unmasking::{curve_slope_statistic, curves_svg, unmask_pair, UnmaskingCurve};

/// Satire-class precision, recall and F1 of the best published classifier
/// on the same satire/real collection; echoed for comparison only.
pub const RUBIN_REFERENCE: (f64, f64, f64) = (0.90, 0.84, 0.87);

const HYP: &str = "hyperpartisan";
const MAIN: &str = "mainstream";

const FOLD_STREAM: u64 = 1;
const MODEL_STREAM: u64 = 2;
const SPLIT_STREAM: u64 = 3;
const UNMASK_STREAM: u64 = 4;

fn classes(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn analyze_all(articles: &[&Article]) -> Vec<Document> {
    articles.par_iter().map(|a| Document::analyze(a)).collect()
}

fn extract_all(docs: &[Document], model: FeatureModel, spec: &ExperimentSpec) -> Result<Vec<ExtractedDocument>, HarnessError> {
    let cfg = spec.config.selection.feature_config(model);
    Ok(docs.par_iter().map(|d| extract(d, &cfg)).collect::<Result<_, _>>()?)
}

fn require(counts: &[(&str, usize)]) -> Result<(), HarnessError> {
    let missing: Vec<&str> = counts.iter().filter(|(_, n)| *n == 0).map(|(name, _)| *name).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::MissingCategories(missing.join(", ")))
    }
}

fn publisher_folds(articles: &[&Article], spec: &ExperimentSpec) -> Result<Vec<Vec<usize>>, HarnessError> {
    let sub = Corpus::try_new(articles.iter().map(|a| (*a).clone()).collect())?;
    let folds = partition_publisher_folds(&sub, spec.config.folds, seed::derive(spec.seed, FOLD_STREAM))?;
    Ok(folds.into_iter().map(|f| f.members).collect())
}

fn pipeline<'a>(
    docs: &'a [ExtractedDocument],
    labels: &'a [String],
    selection: &'a crate::features::FeatureConfig,
    spec: &ExperimentSpec,
    balance: bool,
    skip: Option<&'a [bool]>,
) -> ForestPipeline<'a> {
    ForestPipeline {
        docs,
        labels,
        selection,
        forest: spec.config.forest,
        balance,
        skip,
        seed: seed::derive(spec.seed, MODEL_STREAM),
        inject_leak: spec.inject_leak,
    }
}

/// Constant-predictor rows for every class, checked against the values
/// implied by the class supports alone.
fn baselines(gold: &[String], classes: &[String]) -> Result<Vec<ScoreRow>, HarnessError> {
    let supports: Vec<usize> = classes.iter().map(|c| gold.iter().filter(|g| *g == c).count()).collect();
    classes
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let name = format!("all_{c}");
            let predicted = naive_baseline(c, classes)?.predict(gold.len());
            let report = evaluate_with_classes(&predicted, gold, classes)?;
            let row = ScoreRow::from_report(&name, &report);
            if row != ScoreRow::analytic_baseline(&name, ci, &supports) {
                return Err(HarnessError::Assertion(format!(
                    "{name} baseline disagrees with its class supports"
                )));
            }
            Ok(row)
        })
        .collect()
}

/// Unweighted average of several mean reports over the same classes.
fn average_means(parts: &[MeanReport]) -> MeanReport {
    let avg = |get: &dyn Fn(&MeanReport) -> Option<f64>| {
        let vals: Vec<f64> = parts.iter().filter_map(get).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    };
    let k = parts[0].classes.len();
    MeanReport {
        classes: parts[0].classes.clone(),
        accuracy: parts.iter().map(|m| m.accuracy).sum::<f64>() / parts.len() as f64,
        precision: (0..k).map(|c| avg(&|m| m.precision[c])).collect(),
        recall: (0..k).map(|c| avg(&|m| m.recall[c])).collect(),
        f1: (0..k).map(|c| avg(&|m| m.f1[c])).collect(),
        folds: parts.iter().map(|m| m.folds).sum(),
    }
}

/// Mean report over the items selected by `keep`, from stored CV predictions.
fn subset_mean(
    cv: &CrossValidation,
    folds: &[Vec<usize>],
    labels: &[String],
    classes: &[String],
    keep: impl Fn(usize) -> bool,
) -> Result<Option<MeanReport>, HarnessError> {
    let mut reports = vec![];
    for (f, fold) in folds.iter().enumerate() {
        let (pred, gold): (Vec<&str>, Vec<&str>) = fold
            .iter()
            .zip(&cv.predictions[f])
            .filter(|(&i, _)| keep(i))
            .map(|(&i, p)| (p.as_str(), labels[i].as_str()))
            .unzip();
        if !gold.is_empty() {
            reports.push(evaluate_with_classes(&pred, &gold, classes)?);
        }
    }
    Ok((!reports.is_empty()).then(|| MeanReport::from_reports(&reports)))
}

/// Score rows of a classification task plus its naive baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub classes: Vec<String>,
    pub rows: Vec<ScoreRow>,
    pub baselines: Vec<ScoreRow>,
    /// Per-fold accuracies for each row, when cross-validated.
    pub fold_accuracy: BTreeMap<String, Vec<f64>>,
}

impl ClassificationResult {
    pub fn row(&self, name: &str) -> Option<&ScoreRow> {
        self.rows.iter().chain(&self.baselines).find(|r| r.name == name)
    }

    fn table(&self, name: &str) -> Table {
        let all: Vec<ScoreRow> = self.rows.iter().chain(&self.baselines).cloned().collect();
        score_table(name, &self.classes, &all)
    }

    pub fn output(&self, task: Task) -> ExperimentOutput {
        let mut notes = BTreeMap::new();
        notes.insert("fold_averaging".into(), "unweighted".into());
        ExperimentOutput {
            task,
            tables: vec![self.table(task.as_str())],
            curves: vec![],
            figure: None,
            results: serde_json::to_value(self).expect("results serialize"),
            notes,
        }
    }
}

struct HypData<'a> {
    articles: Vec<&'a Article>,
    labels: Vec<String>,
    groups: Vec<String>,
    folds: Vec<Vec<usize>>,
}

fn hyp_data<'a>(corpus: &'a Corpus, spec: &ExperimentSpec) -> Result<HypData<'a>, HarnessError> {
    let articles: Vec<&Article> = corpus.iter().filter(|a| a.orientation != Orientation::Satire).collect();
    let count = |o: Orientation| articles.iter().filter(|a| a.orientation == o).count();
    require(&[
        ("left", count(Orientation::Left)),
        ("right", count(Orientation::Right)),
        ("mainstream", count(Orientation::Mainstream)),
    ])?;
    Ok(HypData {
        labels: articles
            .iter()
            .map(|a| if a.orientation.is_hyperpartisan() { HYP } else { MAIN }.to_string())
            .collect(),
        groups: articles.iter().map(|a| a.publisher.clone()).collect(),
        folds: publisher_folds(&articles, spec)?,
        articles,
    })
}

fn hyp_cv(
    data: &HypData,
    docs: &[ExtractedDocument],
    model: FeatureModel,
    spec: &ExperimentSpec,
    omit: Option<Orientation>,
) -> Result<CrossValidation, HarnessError> {
    let selection = spec.config.selection.feature_config(model);
    let skip: Vec<bool> = data.articles.iter().map(|a| Some(a.orientation) == omit).collect();
    let p = pipeline(docs, &data.labels, &selection, spec, true, Some(&skip));
    Ok(cross_validate(&data.labels, &data.folds, Some(&data.groups), &classes(&[HYP, MAIN]), &p)?)
}

/// Accuracy per test orientation under one training regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmissionRow {
    pub features: FeatureModel,
    /// `without_left`, `without_right` or `with_both`.
    pub training: String,
    pub left: Option<f64>,
    pub right: Option<f64>,
    pub mainstream: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmissionResult {
    pub rows: Vec<OmissionRow>,
}

const REGIMES: [(&str, Option<Orientation>); 3] = [
    ("without_left", Some(Orientation::Left)),
    ("without_right", Some(Orientation::Right)),
    ("with_both", None),
];

impl OmissionResult {
    pub fn get(&self, features: FeatureModel, training: &str) -> Option<&OmissionRow> {
        self.rows.iter().find(|r| r.features == features && r.training == training)
    }

    pub fn output(&self) -> ExperimentOutput {
        let mut columns = vec!["features".to_string()];
        for (regime, _) in REGIMES {
            for o in ["left", "right", "mainstream"] {
                columns.push(format!("{regime}_{o}"));
            }
        }
        let mut table = Table::new(Task::HyperpartisanOmission.as_str(), columns);
        let mut models: Vec<FeatureModel> = self.rows.iter().map(|r| r.features).collect();
        models.dedup();
        for m in models {
            let mut row: Vec<Cell> = vec![m.as_str().into()];
            for (regime, _) in REGIMES {
                let r = self.get(m, regime).expect("every regime evaluated");
                row.extend([r.left.into(), r.right.into(), r.mainstream.into()]);
            }
            table.push(row);
        }
        let mut notes = BTreeMap::new();
        notes.insert("fold_averaging".into(), "unweighted".into());
        notes.insert("balancing".into(), "oversampling of the smaller class".into());
        ExperimentOutput {
            task: Task::HyperpartisanOmission,
            tables: vec![table],
            curves: vec![],
            figure: None,
            results: serde_json::to_value(self).expect("results serialize"),
            notes,
        }
    }
}

/// Hyperpartisan vs. mainstream with left, right or neither wing left out
/// of training; accuracy is reported per test orientation.
pub fn run_hyperpartisan_omission(corpus: &Corpus, spec: &ExperimentSpec) -> Result<OmissionResult, HarnessError> {
    let data = hyp_data(corpus, spec)?;
    let docs = analyze_all(&data.articles);
    let mut rows = vec![];
    for &model in &spec.features {
        let extracted = extract_all(&docs, model, spec)?;
        for (regime, omit) in REGIMES {
            let cv = hyp_cv(&data, &extracted, model, spec, omit)?;
            let acc = |o: Orientation| -> Result<Option<f64>, HarnessError> {
                let classes = classes(&[HYP, MAIN]);
                Ok(subset_mean(&cv, &data.folds, &data.labels, &classes, |i| data.articles[i].orientation == o)?
                    .map(|m| m.accuracy))
            };
            rows.push(OmissionRow {
                features: model,
                training: regime.to_string(),
                left: acc(Orientation::Left)?,
                right: acc(Orientation::Right)?,
                mainstream: acc(Orientation::Mainstream)?,
            });
        }
    }
    Ok(OmissionResult { rows })
}

/// Hyperpartisan vs. mainstream with both wings in training, on the same
/// folds as the omission task.
pub fn run_hyperpartisan_binary(corpus: &Corpus, spec: &ExperimentSpec) -> Result<ClassificationResult, HarnessError> {
    let data = hyp_data(corpus, spec)?;
    let docs = analyze_all(&data.articles);
    let cls = classes(&[HYP, MAIN]);
    let mut rows = vec![];
    let mut fold_accuracy = BTreeMap::new();
    for &model in &spec.features {
        let extracted = extract_all(&docs, model, spec)?;
        let cv = hyp_cv(&data, &extracted, model, spec, None)?;
        rows.push(ScoreRow::from_mean(model.as_str(), &cv.mean));
        fold_accuracy.insert(model.as_str().to_string(), cv.folds.iter().map(|r| r.accuracy).collect());
    }
    Ok(ClassificationResult {
        baselines: baselines(&data.labels, &cls)?,
        classes: cls,
        rows,
        fold_accuracy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareRow {
    pub features: FeatureModel,
    pub gold: String,
    pub predicted: String,
    /// Share of the gold class's errors that went to `predicted`.
    pub share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationResult {
    pub scores: ClassificationResult,
    /// Confusion matrices summed over folds, rows gold.
    pub confusion: BTreeMap<String, Vec<Vec<usize>>>,
    pub shares: Vec<ShareRow>,
}

impl OrientationResult {
    pub fn share(&self, features: FeatureModel, gold: &str, predicted: &str) -> Option<f64> {
        self.shares
            .iter()
            .find(|s| s.features == features && s.gold == gold && s.predicted == predicted)
            .and_then(|s| s.share)
    }

    pub fn output(&self) -> ExperimentOutput {
        let task = Task::Orientation3Class;
        let mut out = self.scores.output(task);
        let cls = &self.scores.classes;
        let mut columns = vec!["features".to_string(), "gold".to_string()];
        columns.extend(cls.iter().map(|c| format!("predicted_{c}")));
        let mut confusion = Table::new(&format!("{task}_confusion"), columns);
        for (model, m) in &self.confusion {
            for (g, row) in m.iter().enumerate() {
                let mut cells: Vec<Cell> = vec![model.as_str().into(), cls[g].as_str().into()];
                cells.extend(row.iter().map(|&n| Cell::Count(n)));
                confusion.push(cells);
            }
        }
        let mut shares = Table::new(
            &format!("{task}_misclassification"),
            classes(&["features", "gold", "predicted", "share"]),
        );
        for s in &self.shares {
            shares.push(vec![
                s.features.as_str().into(),
                s.gold.as_str().into(),
                s.predicted.as_str().into(),
                s.share.into(),
            ]);
        }
        out.tables.push(confusion);
        out.tables.push(shares);
        out.results = serde_json::to_value(self).expect("results serialize");
        out
    }
}

/// Three-way orientation classification.
pub fn run_orientation(corpus: &Corpus, spec: &ExperimentSpec) -> Result<OrientationResult, HarnessError> {
    let data = hyp_data(corpus, spec)?;
    let labels: Vec<String> = data.articles.iter().map(|a| a.orientation.as_str().to_string()).collect();
    let cls = classes(&["left", "right", "mainstream"]);
    let docs = analyze_all(&data.articles);
    let mut rows = vec![];
    let mut fold_accuracy = BTreeMap::new();
    let mut confusion = BTreeMap::new();
    let mut shares = vec![];
    for &model in &spec.features {
        let extracted = extract_all(&docs, model, spec)?;
        let selection = spec.config.selection.feature_config(model);
        let p = pipeline(&extracted, &labels, &selection, spec, false, None);
        let cv = cross_validate(&labels, &data.folds, Some(&data.groups), &cls, &p)?;
        rows.push(ScoreRow::from_mean(model.as_str(), &cv.mean));
        fold_accuracy.insert(model.as_str().to_string(), cv.folds.iter().map(|r| r.accuracy).collect());
        let k = cls.len();
        let mut sum = vec![vec![0usize; k]; k];
        for r in &cv.folds {
            for g in 0..k {
                for q in 0..k {
                    sum[g][q] += r.confusion[g][q];
                }
            }
        }
        for g in 0..k {
            let errors: usize = sum[g].iter().sum::<usize>() - sum[g][g];
            for q in (0..k).filter(|&q| q != g) {
                shares.push(ShareRow {
                    features: model,
                    gold: cls[g].clone(),
                    predicted: cls[q].clone(),
                    share: (errors > 0).then(|| sum[g][q] as f64 / errors as f64),
                });
            }
        }
        confusion.insert(model.as_str().to_string(), sum);
    }
    Ok(OrientationResult {
        scores: ClassificationResult {
            baselines: baselines(&labels, &cls)?,
            classes: cls,
            rows,
            fold_accuracy,
        },
        confusion,
        shares,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VeracityResult {
    pub classes: Vec<String>,
    pub aggregation: Aggregation,
    /// One classifier over both wings.
    pub generic: Vec<ScoreRow>,
    /// Wing-specific classifiers combined as configured.
    pub specific: Vec<ScoreRow>,
    /// The other combination, for comparison.
    pub specific_alternative: Vec<ScoreRow>,
    /// Each wing classifier on its own wing.
    pub wings: Vec<ScoreRow>,
    pub baselines: Vec<ScoreRow>,
}

impl VeracityResult {
    pub fn output(&self, spec: &ExperimentSpec) -> ExperimentOutput {
        let task = spec.task;
        let main_rows = if task == Task::VeracityGeneric {
            &self.generic
        } else {
            &self.specific
        };
        let all: Vec<ScoreRow> = main_rows.iter().chain(&self.baselines).cloned().collect();
        let mut tables = vec![score_table(task.as_str(), &self.classes, &all)];
        if !self.wings.is_empty() {
            tables.push(score_table(&format!("{task}_wings"), &self.classes, &self.wings));
        }
        let mut notes = BTreeMap::new();
        notes.insert("fold_averaging".into(), "unweighted".into());
        notes.insert(
            "veracity_aggregation".into(),
            match self.aggregation {
                Aggregation::Pooled => "pooled",
                Aggregation::Averaged => "averaged",
            }
            .into(),
        );
        ExperimentOutput {
            task,
            tables,
            curves: vec![],
            figure: None,
            results: serde_json::to_value(self).expect("results serialize"),
            notes,
        }
    }
}

/// Fake vs. real on the hyperpartisan wings, generic and/or per wing
/// depending on `spec.task` (any other task runs both).
pub fn run_veracity(corpus: &Corpus, spec: &ExperimentSpec) -> Result<VeracityResult, HarnessError> {
    let mut articles = vec![];
    let mut labels = vec![];
    for a in corpus.iter().filter(|a| a.orientation.is_hyperpartisan()) {
        match operationalize_veracity(a)? {
            VeracityLabel::Fake => labels.push("fake".to_string()),
            VeracityLabel::Real => labels.push("real".to_string()),
            VeracityLabel::Excluded => continue,
        }
        articles.push(a);
    }
    let count = |o: Orientation| articles.iter().filter(|a| a.orientation == o).count();
    require(&[
        ("left", count(Orientation::Left)),
        ("right", count(Orientation::Right)),
        ("fake", labels.iter().filter(|l| *l == "fake").count()),
        ("real", labels.iter().filter(|l| *l == "real").count()),
    ])?;
    let cls = classes(&["fake", "real"]);
    let groups: Vec<String> = articles.iter().map(|a| a.publisher.clone()).collect();
    let folds = publisher_folds(&articles, spec)?;
    let is_left: Vec<bool> = articles.iter().map(|a| a.orientation == Orientation::Left).collect();
    let is_right: Vec<bool> = is_left.iter().map(|l| !l).collect();
    let docs = analyze_all(&articles);
    let want_generic = spec.task != Task::VeracityOrientationSpecific;
    let want_specific = spec.task != Task::VeracityGeneric;

    let mut result = VeracityResult {
        classes: cls.clone(),
        aggregation: spec.config.veracity_aggregation,
        generic: vec![],
        specific: vec![],
        specific_alternative: vec![],
        wings: vec![],
        baselines: baselines(&labels, &cls)?,
    };
    for &model in &spec.features {
        let extracted = extract_all(&docs, model, spec)?;
        let selection = spec.config.selection.feature_config(model);
        let name = model.as_str();
        if want_generic {
            let p = pipeline(&extracted, &labels, &selection, spec, false, None);
            let cv = cross_validate(&labels, &folds, Some(&groups), &cls, &p)?;
            result.generic.push(ScoreRow::from_mean(name, &cv.mean));
        }
        if want_specific {
            let wp = WingPipeline {
                left: pipeline(&extracted, &labels, &selection, spec, false, Some(&is_right)),
                right: pipeline(&extracted, &labels, &selection, spec, false, Some(&is_left)),
                is_left: &is_left,
            };
            let cv = cross_validate(&labels, &folds, Some(&groups), &cls, &wp)?;
            let left = subset_mean(&cv, &folds, &labels, &cls, |i| is_left[i])?.expect("left items present");
            let right = subset_mean(&cv, &folds, &labels, &cls, |i| !is_left[i])?.expect("right items present");
            let pooled = ScoreRow::from_mean(name, &cv.mean);
            let averaged = ScoreRow::from_mean(name, &average_means(&[left.clone(), right.clone()]));
            let (main, alt) = match spec.config.veracity_aggregation {
                Aggregation::Pooled => (pooled, averaged),
                Aggregation::Averaged => (averaged, pooled),
            };
            result.specific.push(main);
            result.specific_alternative.push(alt);
            result.wings.push(ScoreRow::from_mean(&format!("{name}_left"), &left));
            result.wings.push(ScoreRow::from_mean(&format!("{name}_right"), &right));
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatireResult {
    pub scores: ClassificationResult,
    pub train_size: usize,
    pub test_size: usize,
}

impl SatireResult {
    pub fn output(&self, task: Task) -> ExperimentOutput {
        let mut out = self.scores.output(task);
        let (p, r, f) = RUBIN_REFERENCE;
        let table = &mut out.tables[0];
        let mut row: Vec<Cell> = vec!["rubin_reference".into(), Cell::Num(None)];
        for v in [p, r, f] {
            row.extend([Cell::Num(Some(v)), Cell::Num(None)]);
        }
        table.push(row);
        out.notes.insert("split".into(), "stratified, fixed seed".into());
        out.results = serde_json::to_value(self).expect("results serialize");
        out
    }
}

/// Satire vs. real news on one balanced, stratified train/test split.
/// Articles with orientation satire form one class, all others the other.
pub fn run_satire(corpus: &Corpus, spec: &ExperimentSpec) -> Result<SatireResult, HarnessError> {
    let cls = classes(&["satire", "real"]);
    let mut by_class: [Vec<usize>; 2] = [vec![], vec![]];
    for (i, a) in corpus.iter().enumerate() {
        by_class[usize::from(a.orientation != Orientation::Satire)].push(i);
    }
    require(&[("satire", by_class[0].len()), ("real", by_class[1].len())])?;
    let n = by_class[0].len().min(by_class[1].len());
    let n_test = ((n as f64 * spec.config.satire_test_fraction).round() as usize).clamp(1, n.saturating_sub(1).max(1));
    let split_seed = seed::derive(spec.seed, SPLIT_STREAM);
    let (mut train, mut test) = (vec![], vec![]);
    for (c, items) in by_class.iter_mut().enumerate() {
        items.shuffle(&mut seed::rng(split_seed, c as u64));
        test.extend_from_slice(&items[..n_test]);
        train.extend_from_slice(&items[n_test..n]);
    }
    let mut chosen: Vec<usize> = train.iter().chain(&test).copied().collect();
    chosen.sort_unstable();
    let articles: Vec<&Article> = chosen.iter().map(|&i| &corpus.articles()[i]).collect();
    let pos = |i: usize| chosen.binary_search(&i).expect("chosen");
    let mut train: Vec<usize> = train.into_iter().map(pos).collect();
    let mut test: Vec<usize> = test.into_iter().map(pos).collect();
    train.sort_unstable();
    test.sort_unstable();
    let labels: Vec<String> = articles
        .iter()
        .map(|a| if a.orientation == Orientation::Satire { "satire" } else { "real" }.to_string())
        .collect();
    let gold: Vec<String> = test.iter().map(|&i| labels[i].clone()).collect();
    let docs = analyze_all(&articles);
    let mut rows = vec![];
    for &model in &spec.features {
        let extracted = extract_all(&docs, model, spec)?;
        let selection = spec.config.selection.feature_config(model);
        let p = pipeline(&extracted, &labels, &selection, spec, false, None);
        let fitted = p.fit(&train)?;
        let predicted = p.predict(&fitted, &test)?;
        let report: EvaluationReport = evaluate_with_classes(&predicted, &gold, &cls)?;
        rows.push(ScoreRow::from_report(model.as_str(), &report));
    }
    Ok(SatireResult {
        scores: ClassificationResult {
            baselines: baselines(&gold, &cls)?,
            classes: cls,
            rows,
            fold_accuracy: BTreeMap::new(),
        },
        train_size: train.len(),
        test_size: test.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub side_a: String,
    pub side_b: String,
    /// Over the whole curve.
    pub slope: f64,
    /// Over iterations 3 to 15, when the curve is that long.
    pub slope_3_15: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnmaskingSuite {
    pub curves: Vec<UnmaskingCurve>,
    pub slopes: Vec<SlopeRow>,
    pub checks: Vec<OrderingCheck>,
}

impl UnmaskingSuite {
    pub fn slope(&self, a: &str, b: &str) -> Option<f64> {
        self.slopes.iter().find(|s| s.side_a == a && s.side_b == b).map(|s| s.slope)
    }

    pub fn output(&self, task: Task) -> ExperimentOutput {
        let mut slopes = Table::new(
            &format!("{task}_slopes"),
            classes(&["side_a", "side_b", "slope", "slope_3_15"]),
        );
        for s in &self.slopes {
            slopes.push(vec![
                s.side_a.as_str().into(),
                s.side_b.as_str().into(),
                s.slope.into(),
                s.slope_3_15.into(),
            ]);
        }
        let mut checks = Table::new(&format!("{task}_checks"), classes(&["claim", "holds"]));
        for c in &self.checks {
            checks.push(vec![c.claim.as_str().into(), if c.holds { "true" } else { "false" }.into()]);
        }
        let refs: Vec<&UnmaskingCurve> = self.curves.iter().collect();
        let mut notes = BTreeMap::new();
        notes.insert("slope".into(), "mean first difference of the mean curve".into());
        ExperimentOutput {
            task,
            tables: vec![slopes, checks],
            curves: self.curves.clone(),
            figure: Some(curves_svg(&refs)),
            results: json!({ "slopes": self.slopes, "checks": self.checks }),
            notes,
        }
    }
}

/// Unmasking curves for the three orientation pairs or, for
/// [`Task::UnmaskSatire`], the fake/real/satire pairs. Satire articles come
/// from `satire` when given, otherwise from `corpus`.
pub fn run_unmasking_suite(
    corpus: &Corpus,
    satire: Option<&Corpus>,
    spec: &ExperimentSpec,
) -> Result<UnmaskingSuite, HarnessError> {
    let mut sides: Vec<(&str, Vec<&Article>)> = if spec.task == Task::UnmaskSatire {
        let mut fake = vec![];
        let mut real = vec![];
        for a in corpus.iter().filter(|a| a.orientation != Orientation::Satire) {
            match operationalize_veracity(a)? {
                VeracityLabel::Fake => fake.push(a),
                VeracityLabel::Real => real.push(a),
                VeracityLabel::Excluded => {}
            }
        }
        let sat: Vec<&Article> = satire
            .unwrap_or(corpus)
            .iter()
            .filter(|a| a.orientation == Orientation::Satire)
            .collect();
        vec![("fake", fake), ("real", real), ("satire", sat)]
    } else {
        [Orientation::Left, Orientation::Right, Orientation::Mainstream]
            .into_iter()
            .map(|o| (o.as_str(), corpus.iter().filter(|a| a.orientation == o).collect()))
            .collect()
    };
    require(&sides.iter().map(|(n, v)| (*n, v.len())).collect::<Vec<_>>())?;
    let docs: Vec<(&str, Vec<Document>)> = sides.iter_mut().map(|(n, v)| (*n, analyze_all(v))).collect();

    let pairs = [(0, 1), (0, 2), (1, 2)];
    let unmask_seed = seed::derive(spec.seed, UNMASK_STREAM);
    let mut curves = vec![];
    let mut slopes = vec![];
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let cfg = crate::unmasking::UnmaskingConfig {
            seed: seed::derive(unmask_seed, p as u64),
            ..spec.config.unmasking.clone()
        };
        let curve = unmask_pair(&docs[a].1, &docs[b].1, (docs[a].0, docs[b].0), &cfg)?;
        slopes.push(SlopeRow {
            side_a: docs[a].0.to_string(),
            side_b: docs[b].0.to_string(),
            slope: curve_slope_statistic(&curve, None)?,
            slope_3_15: curve_slope_statistic(&curve, Some(3..16)).ok(),
        });
        curves.push(curve);
    }

    let s: Vec<f64> = slopes.iter().map(|r| r.slope).collect();
    let checks = if spec.task == Task::UnmaskSatire {
        vec![OrderingCheck {
            claim: "fake-real slope is the least negative of the three".into(),
            holds: s[0] > s[1] && s[0] > s[2],
        }]
    } else {
        let below = |other: &UnmaskingCurve| {
            let end = curves[0].mean.len().min(16);
            end > 3 && (3..end).all(|i| curves[0].mean[i] < other.mean[i])
        };
        vec![
            OrderingCheck {
                claim: "left-right slope is more negative than both cross pairs".into(),
                holds: s[0] < s[1] && s[0] < s[2],
            },
            OrderingCheck {
                claim: "left-right curve lies below both cross pairs over iterations 3-15".into(),
                holds: below(&curves[1]) && below(&curves[2]),
            },
        ]
    };
    Ok(UnmaskingSuite { curves, slopes, checks })
}
