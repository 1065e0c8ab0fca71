use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, Orientation};
use crate::seed;

/// One publisher-disjoint fold: the publishers it owns and the indices of
/// their articles in the partitioned corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub publishers: Vec<String>,
    pub members: Vec<usize>,
}

/// Split a corpus into `k` folds so that each fold holds exactly one
/// publisher of every non-satire orientation present.
///
/// Publishers are shuffled per orientation with `seed`; satire publishers,
/// if any, are dealt round-robin after shuffling.
pub fn partition_publisher_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<Vec<Fold>, CorpusError> {
    if k == 0 {
        return Err(CorpusError::ZeroFolds);
    }
    let mut folds = vec![
        Fold {
            publishers: vec![],
            members: vec![]
        };
        k
    ];
    for (stream, o) in Orientation::ALL.into_iter().enumerate() {
        let mut pubs = corpus.publishers(o);
        if pubs.is_empty() {
            continue;
        }
        if o != Orientation::Satire && pubs.len() != k {
            return Err(CorpusError::FoldCount {
                orientation: o,
                found: pubs.len(),
                expected: k,
            });
        }
        pubs.shuffle(&mut seed::rng(seed, stream as u64));
        for (j, p) in pubs.into_iter().enumerate() {
            folds[j % k].publishers.push(p);
        }
    }
    for (i, a) in corpus.iter().enumerate() {
        let f = folds
            .iter()
            .position(|f| f.publishers.contains(&a.publisher))
            .expect("every publisher assigned");
        folds[f].members.push(i);
    }
    Ok(folds)
}

/// Grow every group to the size of the largest by appending copies drawn
/// uniformly with replacement from the group's own originals.
pub fn balance_by_oversampling<T: Clone>(groups: &[Vec<T>], seed: u64) -> Result<Vec<Vec<T>>, CorpusError> {
    if let Some(i) = groups.iter().position(Vec::is_empty) {
        return Err(CorpusError::EmptyGroup(i));
    }
    let target = groups.iter().map(Vec::len).max().unwrap_or(0);
    Ok(groups
        .iter()
        .enumerate()
        .map(|(gi, g)| {
            let mut rng = seed::rng(seed, gi as u64);
            let mut out = g.clone();
            while out.len() < target {
                out.push(g[rng.gen_range(0..g.len())].clone());
            }
            out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::article;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn nine_publishers(per: usize) -> Corpus {
        let mut arts = vec![];
        for (o, names) in [
            (Orientation::Mainstream, ["ABC", "CNN", "Politico"]),
            (Orientation::Left, ["Addicting", "Occupy", "Other98"]),
            (Orientation::Right, ["Eagle", "Freedom", "RWN"]),
        ] {
            for n in names {
                for j in 0..per {
                    arts.push(article(&format!("{n}-{j}"), n, o, &["x"]));
                }
            }
        }
        Corpus::new(arts)
    }

    #[test]
    fn one_publisher_per_orientation() {
        let corpus = nine_publishers(4);
        let folds = partition_publisher_folds(&corpus, 3, 11).unwrap();
        assert_eq!(folds.len(), 3);
        for f in &folds {
            assert_eq!(f.publishers.len(), 3);
            let orients: HashSet<Orientation> =
                f.members.iter().map(|&i| corpus.articles()[i].orientation).collect();
            assert_eq!(orients.len(), 3);
            assert_eq!(f.members.len(), 12);
        }
        assert_eq!(folds, partition_publisher_folds(&corpus, 3, 11).unwrap());
    }

    #[test]
    fn single_fold_is_whole_corpus() {
        let mut arts = nine_publishers(1).into_articles();
        arts.retain(|a| ["ABC", "Occupy", "Eagle"].contains(&a.publisher.as_str()));
        let corpus = Corpus::new(arts);
        let folds = partition_publisher_folds(&corpus, 1, 0).unwrap();
        assert_eq!(folds[0].members, (0..corpus.len()).collect::<Vec<_>>());
    }

    #[test]
    fn wrong_publisher_count_names_orientation() {
        let mut arts = nine_publishers(1).into_articles();
        arts.retain(|a| a.publisher != "Other98");
        let err = partition_publisher_folds(&Corpus::new(arts), 3, 0).unwrap_err();
        assert!(err.to_string().contains("left"), "{err}");
    }

    #[test]
    fn oversampling_sizes() {
        let balanced = balance_by_oversampling(&[vec![0; 300], vec![1; 300]], 3).unwrap();
        assert_eq!(balanced, vec![vec![0; 300], vec![1; 300]]);

        let a: Vec<usize> = (0..545).collect();
        let b: Vec<usize> = (1000..1826).collect();
        let out = balance_by_oversampling(&[a.clone(), b.clone()], 9).unwrap();
        assert_eq!(out[0].len(), 826);
        assert_eq!(out[1], b);
        assert_eq!(&out[0][..545], &a[..]);
        // every appended item is a duplicate of an original
        let dupes = out[0].len() - a.len();
        assert_eq!(dupes, 281);
        assert!(out[0][545..].iter().all(|x| a.contains(x)));
        assert_eq!(out, balance_by_oversampling(&[a, b], 9).unwrap());
    }

    #[test]
    fn oversampling_rejects_empty_group() {
        assert!(matches!(
            balance_by_oversampling(&[vec![1], vec![]], 0),
            Err(CorpusError::EmptyGroup(1))
        ));
    }

    proptest! {
        #[test]
        fn folds_partition_the_corpus(per in 1usize..5, k_seed in 0u64..1000) {
            let corpus = nine_publishers(per);
            let folds = partition_publisher_folds(&corpus, 3, k_seed).unwrap();
            let mut all: Vec<usize> = folds.iter().flat_map(|f| f.members.clone()).collect();
            all.sort();
            prop_assert_eq!(all, (0..corpus.len()).collect::<Vec<_>>());
            for (i, f) in folds.iter().enumerate() {
                for g in &folds[i + 1..] {
                    prop_assert!(f.publishers.iter().all(|p| !g.publishers.contains(p)));
                }
            }
        }

        #[test]
        fn oversampling_keeps_originals(sizes in proptest::collection::vec(1usize..40, 1..5), s in 0u64..100) {
            let groups: Vec<Vec<usize>> = sizes.iter().enumerate()
                .map(|(g, &n)| (0..n).map(|i| g * 100 + i).collect()).collect();
            let out = balance_by_oversampling(&groups, s).unwrap();
            let max = *sizes.iter().max().unwrap();
            for (orig, grown) in groups.iter().zip(&out) {
                prop_assert_eq!(grown.len(), max);
                prop_assert_eq!(&grown[..orig.len()], &orig[..]);
            }
        }
    }
}
