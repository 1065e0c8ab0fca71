use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_dims, LearnError};
use crate::features::FeatureVector;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestConfig {
    pub trees: usize,
    /// `None` grows every tree until its leaves are pure.
    pub max_depth: Option<usize>,
    /// Candidate features per split; `None` means the square root of the
    /// dimension, rounded down and at least one.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            trees: 256,
            max_depth: None,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    /// Class distribution of the training samples reaching the leaf.
    Leaf { distribution: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    fn leaf(&self, x: &FeatureVector) -> &[f64] {
        let mut i = 0usize;
        loop {
            match &self.nodes[i] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x.get(*feature as usize) <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
                Node::Leaf { distribution } => return distribution,
            }
        }
    }

    /// Index of the most probable class; ties go to the smaller index.
    pub fn predict_index(&self, x: &FeatureVector) -> usize {
        argmax_first(self.leaf(x))
    }
}

fn argmax_first(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    /// Sorted class labels; tree distributions are indexed by position.
    pub classes: Vec<String>,
    pub dim: usize,
    pub trees: Vec<Tree>,
    pub config: ForestConfig,
}

impl ForestModel {
    /// Per-class vote counts.
    pub fn votes(&self, x: &FeatureVector) -> Result<Vec<usize>, LearnError> {
        if x.dim != self.dim {
            return Err(LearnError::Dimension {
                expected: self.dim,
                found: x.dim,
            });
        }
        let mut votes = vec![0usize; self.classes.len()];
        for t in &self.trees {
            votes[t.predict_index(x)] += 1;
        }
        Ok(votes)
    }

    /// Majority vote; ties go to the lexicographically smallest label.
    pub fn predict(&self, x: &FeatureVector) -> Result<&str, LearnError> {
        let votes = self.votes(x)?;
        let mut best = 0;
        for (i, v) in votes.iter().enumerate() {
            if *v > votes[best] {
                best = i;
            }
        }
        Ok(&self.classes[best])
    }
}

/// Column-major dense copy of the training vectors.
struct Columns {
    n: usize,
    data: Vec<f64>,
}

impl Columns {
    fn new(xs: &[FeatureVector], dim: usize) -> Self {
        let n = xs.len();
        let mut data = vec![0.0; n * dim];
        for (r, x) in xs.iter().enumerate() {
            for (c, v) in x.iter() {
                data[c * n + r] = v;
            }
        }
        Self { n, data }
    }

    fn get(&self, feature: usize, row: usize) -> f64 {
        self.data[feature * self.n + row]
    }
}

struct Builder<'a> {
    cols: &'a Columns,
    ys: &'a [usize],
    n_classes: usize,
    dim: usize,
    mtry: usize,
    max_depth: Option<usize>,
}

struct Split {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Builder<'_> {
    fn counts(&self, rows: &[usize]) -> Vec<f64> {
        let mut counts = vec![0.0; self.n_classes];
        for &r in rows {
            counts[self.ys[r]] += 1.0;
        }
        counts
    }

    /// Best threshold on one feature by the Gini criterion, expressed as
    /// `sum_left(c^2)/n_left + sum_right(c^2)/n_right` (higher is purer).
    fn best_on(&self, feature: usize, rows: &[usize], total: &[f64], pairs: &mut Vec<(f64, usize)>) -> Option<Split> {
        pairs.clear();
        pairs.extend(rows.iter().map(|&r| (self.cols.get(feature, r), self.ys[r])));
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs[0].0 == pairs[pairs.len() - 1].0 {
            return None;
        }
        let n = pairs.len() as f64;
        let mut left = vec![0.0; self.n_classes];
        let mut left_sq = 0.0;
        let mut right_sq: f64 = total.iter().map(|c| c * c).sum();
        let mut right = total.to_vec();
        let mut best: Option<Split> = None;
        for i in 0..pairs.len() - 1 {
            let k = pairs[i].1;
            left_sq += 2.0 * left[k] + 1.0;
            left[k] += 1.0;
            right_sq -= 2.0 * right[k] - 1.0;
            right[k] -= 1.0;
            let (lo, hi) = (pairs[i].0, pairs[i + 1].0);
            if lo == hi {
                continue;
            }
            let nl = (i + 1) as f64;
            let score = left_sq / nl + right_sq / (n - nl);
            if best.as_ref().map_or(true, |b| score > b.score) {
                let mid = lo + (hi - lo) / 2.0;
                let threshold = if mid < hi { mid } else { lo };
                best = Some(Split {
                    feature,
                    threshold,
                    score,
                });
            }
        }
        best
    }

    fn build(&self, rows: Vec<usize>, rng: &mut rand_chacha::ChaCha8Rng) -> Tree {
        let mut nodes: Vec<Node> = Vec::new();
        let mut pairs = Vec::new();
        let mut order: Vec<usize> = (0..self.dim).collect();
        // (node slot, rows, depth)
        let mut stack = vec![(0usize, rows, 0usize)];
        nodes.push(Node::Leaf { distribution: vec![] });
        while let Some((slot, rows, depth)) = stack.pop() {
            let total = self.counts(&rows);
            let dist: Vec<f64> = total.iter().map(|c| c / rows.len() as f64).collect();
            let pure = total.iter().any(|&c| c == rows.len() as f64);
            if pure || rows.len() < 2 || self.max_depth.is_some_and(|d| depth >= d) {
                nodes[slot] = Node::Leaf { distribution: dist };
                continue;
            }
            // lazy Fisher-Yates: position j holds the j-th drawn feature
            let mut drawn = 0;
            let mut draw = |rng: &mut dyn rand::RngCore, order: &mut Vec<usize>| {
                let j = rng.gen_range(drawn..self.dim);
                order.swap(drawn, j);
                drawn += 1;
                order[drawn - 1]
            };
            let mut candidates: Vec<usize> = (0..self.mtry).map(|_| draw(rng, &mut order)).collect();
            candidates.sort_unstable();
            let mut best: Option<Split> = None;
            for &f in &candidates {
                if let Some(s) = self.best_on(f, &rows, &total, &mut pairs) {
                    if best.as_ref().map_or(true, |b| s.score > b.score) {
                        best = Some(s);
                    }
                }
            }
            // no usable feature among the candidates: keep drawing
            for _ in self.mtry..self.dim {
                if best.is_some() {
                    break;
                }
                let f = draw(rng, &mut order);
                best = self.best_on(f, &rows, &total, &mut pairs);
            }
            let Some(split) = best else {
                nodes[slot] = Node::Leaf { distribution: dist };
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) =
                rows.iter().partition(|&&row| self.cols.get(split.feature, row) <= split.threshold);
            let li = nodes.len();
            nodes.push(Node::Leaf { distribution: vec![] });
            nodes.push(Node::Leaf { distribution: vec![] });
            nodes[slot] = Node::Split {
                feature: split.feature as u32,
                threshold: split.threshold,
                left: li as u32,
                right: (li + 1) as u32,
            };
            stack.push((li + 1, r, depth + 1));
            stack.push((li, l, depth + 1));
        }
        Tree { nodes }
    }
}

/// Train a random forest. Trees are built in parallel, each from its own
/// generator derived from the master seed, so results do not depend on the
/// thread count.
pub fn train_forest<S: AsRef<str>>(
    xs: &[FeatureVector],
    labels: &[S],
    config: &ForestConfig,
) -> Result<ForestModel, LearnError> {
    if xs.len() != labels.len() {
        return Err(LearnError::Length(xs.len(), labels.len()));
    }
    let dim = check_dims(xs)?;
    let mut classes: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(LearnError::SingleClass(classes[0].clone()));
    }
    if dim == 0 {
        return Err(LearnError::Dimension { expected: 1, found: 0 });
    }
    let ys: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search_by(|c| c.as_str().cmp(l.as_ref())).expect("class listed"))
        .collect();
    let cols = Columns::new(xs, dim);
    let mtry = config
        .features_per_split
        .unwrap_or_else(|| (dim as f64).sqrt().floor() as usize)
        .clamp(1, dim);
    let builder = Builder {
        cols: &cols,
        ys: &ys,
        n_classes: classes.len(),
        dim,
        mtry,
        max_depth: config.max_depth,
    };
    let n = xs.len();
    let trees: Vec<Tree> = (0..config.trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(config.seed, t as u64);
            let rows: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            builder.build(rows, &mut rng)
        })
        .collect();
    Ok(ForestModel {
        classes,
        dim,
        trees,
        config: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector::from_dense(v)
    }

    fn leaf(p: &[f64]) -> Tree {
        Tree {
            nodes: vec![Node::Leaf { distribution: p.to_vec() }],
        }
    }

    #[test]
    fn memorizes_with_single_full_tree() {
        let xs: Vec<FeatureVector> = (0..20).map(|i| fv(&[(i * 7 % 20) as f64, (i % 3) as f64])).collect();
        let ys: Vec<&str> = (0..20).map(|i| ["a", "b", "c"][(i * 13 % 7) % 3]).collect();
        let cfg = ForestConfig {
            trees: 1,
            bootstrap: false,
            features_per_split: Some(2),
            ..Default::default()
        };
        let m = train_forest(&xs, &ys, &cfg).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(m.predict(x).unwrap(), *y);
        }
        for t in &m.trees {
            for n in &t.nodes {
                match n {
                    Node::Leaf { distribution } => assert!((distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12),
                    Node::Split { feature, .. } => assert!((*feature as usize) < 2),
                }
            }
        }
    }

    #[test]
    fn tie_goes_to_smaller_label() {
        let m = ForestModel {
            classes: vec!["fake".into(), "real".into()],
            dim: 1,
            trees: vec![leaf(&[0.0, 1.0]), leaf(&[1.0, 0.0])],
            config: ForestConfig::default(),
        };
        assert_eq!(m.predict(&fv(&[0.0])).unwrap(), "fake");
        assert!(m.predict(&fv(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn deterministic_under_seed() {
        let xs: Vec<FeatureVector> = (0..40).map(|i| fv(&[(i % 5) as f64, (i % 7) as f64, (i / 4) as f64])).collect();
        let ys: Vec<&str> = (0..40).map(|i| if i < 20 { "x" } else { "y" }).collect();
        let cfg = ForestConfig {
            trees: 16,
            seed: 5,
            ..Default::default()
        };
        let a = train_forest(&xs, &ys, &cfg).unwrap();
        let b = train_forest(&xs, &ys, &cfg).unwrap();
        assert_eq!(a, b);
        let c = train_forest(&xs, &ys, &ForestConfig { seed: 6, ..cfg }).unwrap();
        assert_ne!(a.trees, c.trees);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            train_forest::<&str>(&[], &[], &ForestConfig::default()),
            Err(LearnError::Empty)
        ));
        assert!(matches!(
            train_forest(&[fv(&[1.0]), fv(&[2.0])], &["a", "a"], &ForestConfig::default()),
            Err(LearnError::SingleClass(_))
        ));
    }

    #[test]
    fn depth_limit() {
        let xs: Vec<FeatureVector> = (0..16).map(|i| fv(&[i as f64])).collect();
        let ys: Vec<&str> = (0..16).map(|i| if i % 2 == 0 { "a" } else { "b" }).collect();
        let cfg = ForestConfig {
            trees: 1,
            max_depth: Some(1),
            bootstrap: false,
            ..Default::default()
        };
        let m = train_forest(&xs, &ys, &cfg).unwrap();
        assert_eq!(m.trees[0].nodes.len(), 3);
    }
}
