//! Unmasking for two document sets.
//!
//! Each run samples documents from both sides, represents them by the
//! relative frequencies of the run's most frequent words and then
//! repeatedly measures how well a linear classifier separates the sides
//! while removing the most discriminative words. The faster the accuracy
//! drops, the more alike the two sets are in style.

mod emit;

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Document, FeatureVector};
use crate::learn::{train_linear, LearnError, LinearConfig};
use crate::seed;

pub use emit::{curve_csv, curves_svg, emit_curve, read_curve_csv, CurveFormat};

#[derive(Debug, Error)]
pub enum UnmaskingError {
    #[error("side {0:?} has no documents")]
    EmptySide(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("only {found} distinct words, need {needed} for the configured eliminations")]
    VocabularyTooSmall { found: usize, needed: usize },
    #[error("curve needs at least 2 points, got {0}")]
    ShortCurve(usize),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("curve file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnmaskingConfig {
    pub docs_per_side: usize,
    pub runs: usize,
    pub vocabulary_size: usize,
    pub eliminate_per_side: usize,
    pub iterations: usize,
    pub folds: usize,
    pub seed: u64,
    pub linear: LinearConfig,
}

impl Default for UnmaskingConfig {
    fn default() -> Self {
        Self {
            docs_per_side: 100,
            runs: 5,
            vocabulary_size: 250,
            eliminate_per_side: 3,
            iterations: 25,
            folds: 10,
            seed: 0,
            linear: LinearConfig {
                max_iter: 200,
                tol: 1e-3,
                ..LinearConfig::default()
            },
        }
    }
}

impl UnmaskingConfig {
    pub fn validate(&self) -> Result<(), UnmaskingError> {
        let counts = [
            ("docs_per_side", self.docs_per_side),
            ("runs", self.runs),
            ("vocabulary_size", self.vocabulary_size),
            ("eliminate_per_side", self.eliminate_per_side),
            ("iterations", self.iterations),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(UnmaskingError::Config(format!("{name} must be positive")));
        }
        if self.folds < 2 {
            return Err(UnmaskingError::Config("folds must be at least 2".into()));
        }
        if self.iterations * self.eliminate_per_side * 2 > self.vocabulary_size {
            return Err(UnmaskingError::Config(format!(
                "{} iterations removing {} words per side exceed a vocabulary of {}",
                self.iterations, self.eliminate_per_side, self.vocabulary_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnmaskingCurve {
    pub labels: (String, String),
    /// One accuracy sequence per run, `iterations` points each.
    pub runs: Vec<Vec<f64>>,
    /// Pointwise mean of the runs.
    pub mean: Vec<f64>,
    /// Words removed per run and iteration, positive side first.
    pub eliminated: Vec<Vec<Vec<String>>>,
    pub config: UnmaskingConfig,
}

/// Lowercased word counts of one document.
struct Bag {
    counts: HashMap<String, u32>,
    total: u32,
}

impl Bag {
    fn of(doc: &Document) -> Self {
        let mut counts: HashMap<String, u32> = HashMap::new();
        let mut total = 0;
        for t in doc.tokens.words() {
            *counts.entry(t.lowercase()).or_default() += 1;
            total += 1;
        }
        Self { counts, total }
    }
}

/// Deals documents without replacement, reshuffling once the deck runs out.
struct Deck {
    n: usize,
    order: Vec<usize>,
    pos: usize,
    rng: ChaCha8Rng,
}

impl Deck {
    fn new(n: usize, mut rng: ChaCha8Rng) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        Self { n, order, pos: 0, rng }
    }

    /// `k` distinct items (all of them when `k >= n`).
    fn deal(&mut self, k: usize) -> Vec<usize> {
        let k = k.min(self.n);
        let mut out: Vec<usize> = Vec::with_capacity(k);
        while out.len() < k {
            if self.pos == self.n {
                self.order.shuffle(&mut self.rng);
                self.pos = 0;
            }
            let item = self.order[self.pos];
            self.pos += 1;
            if !out.contains(&item) {
                out.push(item);
            }
        }
        out
    }
}

/// The `k` words of highest collection frequency; ties go to the
/// lexicographically smaller word.
fn top_words(bags: &[&Bag], k: usize) -> Vec<String> {
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for b in bags {
        for (w, c) in &b.counts {
            *freq.entry(w).or_default() += u64::from(*c);
        }
    }
    let mut words: Vec<(&str, u64)> = freq.into_iter().collect();
    words.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    words.into_iter().take(k).map(|(w, _)| w.to_string()).collect()
}

/// Relative frequencies, z-standardized per word over the run's documents.
fn standardized_matrix(bags: &[&Bag], words: &[String]) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = bags
        .iter()
        .map(|b| {
            words
                .iter()
                .map(|w| match (b.counts.get(w), b.total) {
                    (Some(c), t) if t > 0 => f64::from(*c) / f64::from(t),
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    let n = rows.len() as f64;
    for j in 0..words.len() {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
        let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
        let std = if var > 0.0 { var.sqrt() } else { 1.0 };
        for r in rows.iter_mut() {
            r[j] = (r[j] - mean) / std;
        }
    }
    rows
}

fn project(rows: &[Vec<f64>], active: &[usize]) -> Vec<FeatureVector> {
    rows.iter()
        .map(|r| FeatureVector::from_dense(&active.iter().map(|&j| r[j]).collect::<Vec<_>>()))
        .collect()
}

/// Stratified k-fold accuracy of the linear learner.
fn cv_accuracy(
    xs: &[FeatureVector],
    ys: &[bool],
    fold_of: &[usize],
    folds: usize,
    config: &LinearConfig,
) -> Result<f64, LearnError> {
    let mut correct = 0usize;
    let mut seen = 0usize;
    for f in 0..folds {
        let (mut tx, mut ty) = (vec![], vec![]);
        for i in (0..xs.len()).filter(|&i| fold_of[i] != f) {
            tx.push(xs[i].clone());
            ty.push(ys[i]);
        }
        if !ty.contains(&true) || !ty.contains(&false) {
            continue;
        }
        let m = train_linear(&tx, &ty, config)?;
        for i in (0..xs.len()).filter(|&i| fold_of[i] == f) {
            seen += 1;
            correct += usize::from(m.predict(&xs[i])? == ys[i]);
        }
    }
    Ok(if seen == 0 { 0.5 } else { correct as f64 / seen as f64 })
}

struct Run {
    accuracies: Vec<f64>,
    eliminated: Vec<Vec<String>>,
}

fn run_once(bags: &[&Bag], ys: &[bool], config: &UnmaskingConfig, run_seed: u64) -> Result<Run, UnmaskingError> {
    let words = top_words(bags, config.vocabulary_size);
    let needed = config.iterations * config.eliminate_per_side * 2;
    if words.len() < needed {
        return Err(UnmaskingError::VocabularyTooSmall {
            found: words.len(),
            needed,
        });
    }
    let rows = standardized_matrix(bags, &words);

    // deal each side round-robin over the folds after shuffling
    let mut rng = seed::rng(run_seed, 0);
    let mut fold_of = vec![0usize; ys.len()];
    for side in [true, false] {
        let mut idx: Vec<usize> = (0..ys.len()).filter(|&i| ys[i] == side).collect();
        idx.shuffle(&mut rng);
        for (k, i) in idx.into_iter().enumerate() {
            fold_of[i] = k % config.folds;
        }
    }

    let mut active: Vec<usize> = (0..words.len()).collect();
    let mut accuracies = Vec::with_capacity(config.iterations);
    let mut eliminated = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        let xs = project(&rows, &active);
        accuracies.push(cv_accuracy(&xs, ys, &fold_of, config.folds, &config.linear)?);
        let model = train_linear(&xs, ys, &config.linear)?;
        let mut by_weight: Vec<usize> = (0..active.len()).collect();
        by_weight.sort_by(|&a, &b| {
            model.weights[b]
                .total_cmp(&model.weights[a])
                .then_with(|| words[active[a]].cmp(&words[active[b]]))
        });
        let e = config.eliminate_per_side;
        let mut gone: Vec<usize> = by_weight[..e].to_vec();
        let mut most_negative: Vec<usize> = by_weight[by_weight.len() - e..].to_vec();
        most_negative.reverse();
        gone.extend(most_negative);
        eliminated.push(gone.iter().map(|&p| words[active[p]].clone()).collect());
        let drop: BTreeSet<usize> = gone.into_iter().collect();
        active = active
            .iter()
            .enumerate()
            .filter(|(p, _)| !drop.contains(p))
            .map(|(_, &j)| j)
            .collect();
    }
    Ok(Run { accuracies, eliminated })
}

/// Unmask two document sets; `labels` name side A and side B.
pub fn unmask_pair(
    side_a: &[Document],
    side_b: &[Document],
    labels: (&str, &str),
    config: &UnmaskingConfig,
) -> Result<UnmaskingCurve, UnmaskingError> {
    config.validate()?;
    if side_a.is_empty() {
        return Err(UnmaskingError::EmptySide(labels.0.to_string()));
    }
    if side_b.is_empty() {
        return Err(UnmaskingError::EmptySide(labels.1.to_string()));
    }
    let bags_a: Vec<Bag> = side_a.par_iter().map(Bag::of).collect();
    let bags_b: Vec<Bag> = side_b.par_iter().map(Bag::of).collect();
    let mut deck_a = Deck::new(bags_a.len(), seed::rng(config.seed, 1));
    let mut deck_b = Deck::new(bags_b.len(), seed::rng(config.seed, 2));
    let samples: Vec<(Vec<usize>, Vec<usize>)> = (0..config.runs)
        .map(|_| (deck_a.deal(config.docs_per_side), deck_b.deal(config.docs_per_side)))
        .collect();
    let runs: Vec<Run> = samples
        .par_iter()
        .enumerate()
        .map(|(r, (a, b))| {
            let bags: Vec<&Bag> = a.iter().map(|&i| &bags_a[i]).chain(b.iter().map(|&i| &bags_b[i])).collect();
            let ys: Vec<bool> = a.iter().map(|_| true).chain(b.iter().map(|_| false)).collect();
            run_once(&bags, &ys, config, seed::derive(config.seed, 100 + r as u64))
        })
        .collect::<Result<_, _>>()?;
    let mean: Vec<f64> = (0..config.iterations)
        .map(|i| runs.iter().map(|r| r.accuracies[i]).sum::<f64>() / runs.len() as f64)
        .collect();
    let (runs, eliminated) = runs.into_iter().map(|r| (r.accuracies, r.eliminated)).unzip();
    Ok(UnmaskingCurve {
        labels: (labels.0.to_string(), labels.1.to_string()),
        runs,
        mean,
        eliminated,
        config: config.clone(),
    })
}

/// Mean first difference of the mean curve over `window` (whole curve by
/// default). More negative means a faster drop, i.e. more similar styles.
pub fn curve_slope_statistic(
    curve: &UnmaskingCurve,
    window: Option<std::ops::Range<usize>>,
) -> Result<f64, UnmaskingError> {
    slope(&curve.mean, window)
}

pub(crate) fn slope(points: &[f64], window: Option<std::ops::Range<usize>>) -> Result<f64, UnmaskingError> {
    let range = window.unwrap_or(0..points.len());
    let end = range.end.min(points.len());
    let start = range.start.min(end);
    if end - start < 2 {
        return Err(UnmaskingError::ShortCurve(end - start));
    }
    Ok((points[end - 1] - points[start]) / (end - 1 - start) as f64)
}
