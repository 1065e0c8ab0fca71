use std::collections::{BTreeMap, BTreeSet, HashMap};

use newsstyle::features::{
    build_vocabulary, char_ngrams, dictionary_features, extract, pos_ngrams, stopword_ngrams, vectorize,
    vectorize_extracted, Dictionaries, Document, ExtractedDocument, FeatureConfig, FeatureFamily,
};
use newsstyle::textproc::resources::{self, stopwords};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const POOL: &[&str] = &[
    "the", "a", "of", "and", "to", "in", "on", "cat", "dog", "house", "river", "said", "walked", "quickly",
    "government", "people", "good", "bad", "attack", "accept", "they", "we", "you", "!", ",", ".", "\"",
];

fn random_text(rng: &mut ChaCha8Rng, words: usize) -> String {
    (0..words).map(|_| *POOL.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

#[test]
fn char_trigrams_of_100_char_paragraph() {
    let p: String = "abcdefghij".repeat(10);
    assert_eq!(p.len(), 100);
    let d = Document::from_paragraphs("p", &[p]);
    assert_eq!(char_ngrams(&d, 3).unwrap().values().sum::<u32>(), 98);
}

#[test]
fn stopword_trigrams_of_50_token_fixture() {
    // 17 stop words among 50 tokens
    let stops = ["the", "of", "and", "to", "in", "on", "it", "was", "he", "she", "at", "by", "for", "with", "is", "an", "a"];
    let content: Vec<String> = (0..33).map(|i| format!("zq{i}")).collect();
    let mut tokens: Vec<String> = content.clone();
    for (i, s) in stops.iter().enumerate() {
        tokens.insert(i * 3, s.to_string());
    }
    assert_eq!(tokens.len(), 50);
    let d = Document::from_paragraphs("s", &[tokens.join(" ")]);
    let projected = tokens.iter().filter(|t| stopwords().contains(t.as_str())).count();
    assert_eq!(projected, 17);
    assert_eq!(stopword_ngrams(&d, 3, stopwords()).unwrap().values().sum::<u32>(), 15);
}

#[test]
fn pos_trigrams_stay_inside_sentences() {
    let d = Document::from_paragraphs("t", &["The cat sat on mats. Dogs ran very fast."]);
    let tags = d.tokens.pos_tags.as_ref().unwrap();
    let lens: Vec<usize> = d.tokens.sentences.iter().map(|s| s.len()).collect();
    assert_eq!(lens, [6, 5]);
    assert_eq!(tags.len(), 11);
    // 6+5 tags -> 4+3 trigrams
    assert_eq!(pos_ngrams(&d, 3).unwrap().values().sum::<u32>(), 7);
    let one = Document::from_paragraphs("u", &["one two three four five six seven eight"]);
    assert_eq!(pos_ngrams(&one, 1).unwrap().values().sum::<u32>(), 8);
}

/// Independent reading of the General Inquirer CSV: plain comma split.
fn naive_dictionary(raw: &str) -> (Vec<String>, HashMap<String, BTreeSet<String>>) {
    let mut lines = raw.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let cats: Vec<String> = header[2..header.len() - 2].iter().map(|s| s.to_string()).collect();
    let mut map: HashMap<String, BTreeSet<String>> = HashMap::new();
    for l in lines {
        let cells: Vec<&str> = l.split(',').collect();
        let word = cells[0].split('#').next().unwrap().to_lowercase();
        let e = map.entry(word).or_default();
        for (i, c) in cats.iter().enumerate() {
            if !cells[i + 2].is_empty() {
                e.insert(c.clone());
            }
        }
    }
    (cats, map)
}

#[test]
fn dictionary_matches_brute_force_on_1000_tokens() {
    let (cats, naive) = naive_dictionary(resources::GENERAL_INQUIRER);
    let dict_words: Vec<&String> = {
        let mut v: Vec<&String> = naive.keys().collect();
        v.sort();
        v
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let words: Vec<String> = (0..1000)
        .map(|i| {
            if rng.gen_bool(0.4) {
                let w = dict_words.choose(&mut rng).unwrap().to_string();
                if i % 7 == 0 {
                    w.to_uppercase()
                } else {
                    w
                }
            } else {
                format!("filler{}", rng.gen_range(0..50))
            }
        })
        .collect();
    let d = Document::from_paragraphs("gi", &[words.join(" ")]);
    assert_eq!(d.tokens.word_count(), 1000);
    let dicts = Dictionaries::bundled();
    assert_eq!(dicts.categories(), &cats[..]);
    let got = dictionary_features(&d, &dicts);
    for (ci, c) in cats.iter().enumerate() {
        let hits = words
            .iter()
            .filter(|w| naive.get(&w.to_lowercase()).is_some_and(|s| s.contains(c)))
            .count();
        assert_eq!(got[ci], hits as f64 / 1000.0, "category {c}");
    }
}

fn planted_corpus(n: usize, seed: u64) -> (Vec<Document>, Vec<&'static str>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = vec![];
    let mut cats = vec![];
    for i in 0..n {
        let cat = ["left", "right", "main"][i % 3];
        let len = rng.gen_range(20..60);
        let mut text = random_text(&mut rng, len);
        if i % 11 == 0 {
            text.push_str(" zebra");
        }
        if i % 10 == 0 {
            text.push_str(" yak");
        }
        if cat == "left" && rng.gen_bool(0.4) {
            text.push_str(" onlyleft");
        }
        docs.push(Document::from_paragraphs(&format!("doc{i}"), &[text, random_text(&mut rng, 15)]));
        cats.push(cat);
    }
    (docs, cats)
}

/// Both selection rules applied by exhaustive scanning of the raw features.
fn brute_force_selection(ex: &[ExtractedDocument], cats: &[&str], config: &FeatureConfig) -> BTreeSet<String> {
    let n = ex.len();
    let all: BTreeSet<&String> = ex.iter().flat_map(|d| d.features.iter().map(|(k, _)| k)).collect();
    let mut keep = BTreeSet::new();
    for id in all {
        let family = FeatureFamily::of_id(id).unwrap();
        if family.is_scalar() {
            keep.insert(id.clone());
            continue;
        }
        let present: Vec<usize> = (0..n)
            .filter(|&i| ex[i].features.iter().any(|(k, v)| k == id && *v != 0.0))
            .collect();
        let cat_set: BTreeSet<&str> = present.iter().map(|&i| cats[i]).collect();
        if present.len() * 10 >= n && cat_set.len() >= config.min_categories {
            keep.insert(id.clone());
        }
    }
    keep
}

#[test]
fn vocabulary_equals_brute_force_filter() {
    let (docs, cats) = planted_corpus(100, 7);
    let config = FeatureConfig::style();
    let ex: Vec<ExtractedDocument> = docs.iter().map(|d| extract(d, &config).unwrap()).collect();
    let refs: Vec<&ExtractedDocument> = ex.iter().collect();
    let vocab = build_vocabulary(&refs, &cats, &config).unwrap();
    let got: BTreeSet<String> = vocab.entries().iter().map(|e| e.id.clone()).collect();
    assert_eq!(got.len(), vocab.len(), "ids unique");
    assert_eq!(got, brute_force_selection(&ex, &cats, &config));

    // planted features: zebra in 10 docs of 100 (i % 11 == 0 -> 10 docs), yak in 10
    let zebra = (0..100).filter(|i| i % 11 == 0).count();
    assert_eq!(zebra, 10);
    assert!(got.contains("char3:yak"));
    assert!(!got.iter().any(|id| id.contains("onlyleft")));
    for e in vocab.entries() {
        if !e.family.is_scalar() {
            assert!(e.doc_freq * 10 >= 100);
            assert!(e.category_presence.values().filter(|&&c| c > 0).count() >= 2);
        }
    }
}

#[test]
fn feature_at_nine_percent_is_dropped() {
    let config = FeatureConfig::topic();
    let mut docs = vec![];
    for i in 0..100 {
        let mut t = String::from("common words here");
        if i < 9 {
            t.push_str(" rare");
        }
        if i < 10 {
            t.push_str(" edge");
        }
        docs.push(Document::from_paragraphs(&format!("d{i}"), &[t]));
    }
    let cats: Vec<&str> = (0..100).map(|i| if i % 2 == 0 { "x" } else { "y" }).collect();
    let ex: Vec<_> = docs.iter().map(|d| extract(d, &config).unwrap()).collect();
    let refs: Vec<_> = ex.iter().collect();
    let v = build_vocabulary(&refs, &cats, &config).unwrap();
    assert!(v.index_of("bow:edge").is_some());
    assert!(v.index_of("bow:rare").is_none());
}

/// Counts every family by hand from the document and normalizes.
fn brute_force_vector(doc: &Document, vocab: &newsstyle::features::FeatureVocabulary) -> Vec<f64> {
    let mut raw: BTreeMap<String, f64> = BTreeMap::new();
    let mut char_counts: BTreeMap<String, u32> = BTreeMap::new();
    for p in &doc.paragraphs {
        let norm: Vec<char> = p.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase().chars().collect();
        for n in 1..=3 {
            for i in 0..norm.len().saturating_sub(n - 1) {
                let g: String = norm[i..i + n].iter().collect();
                *char_counts.entry(format!("char{n}:{g}")).or_default() += 1;
            }
        }
    }
    let stops: Vec<String> = doc
        .tokens
        .tokens
        .iter()
        .map(|t| t.text.to_lowercase())
        .filter(|w| stopwords().contains(w))
        .collect();
    let mut stop_counts: BTreeMap<String, u32> = BTreeMap::new();
    for n in 1..=3 {
        for i in 0..stops.len().saturating_sub(n - 1) {
            *stop_counts.entry(format!("stop{n}:{}", stops[i..i + n].join("_"))).or_default() += 1;
        }
    }
    let tags = doc.tokens.pos_tags.as_ref().unwrap();
    let mut pos_counts: BTreeMap<String, u32> = BTreeMap::new();
    for s in &doc.tokens.sentences {
        let t: Vec<&str> = tags[s.clone()].iter().map(|t| t.as_str()).collect();
        for n in 1..=3 {
            for i in 0..t.len().saturating_sub(n - 1) {
                *pos_counts.entry(format!("pos{n}:{}", t[i..i + n].join("_"))).or_default() += 1;
            }
        }
    }
    for counts in [char_counts, stop_counts, pos_counts] {
        let total: u32 = counts.values().sum();
        for (k, c) in counts {
            raw.insert(k, c as f64 / total as f64);
        }
    }
    let mut out = vec![0.0; vocab.len()];
    for (i, e) in vocab.entries().iter().enumerate() {
        if let Some(v) = raw.get(&e.id) {
            out[i] = *v;
        }
    }
    out
}

#[test]
fn vectors_match_brute_force_on_50_docs() {
    let (docs, cats) = planted_corpus(120, 3);
    let config = FeatureConfig::with_families(&[FeatureFamily::CharNgram, FeatureFamily::StopNgram, FeatureFamily::PosNgram]);
    let ex: Vec<_> = docs.iter().map(|d| extract(d, &config).unwrap()).collect();
    let refs: Vec<_> = ex.iter().collect();
    let vocab = build_vocabulary(&refs, &cats, &config).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let sample: Vec<&Document> = docs.choose_multiple(&mut rng, 50).collect();
    for d in sample {
        let v = vectorize(d, &vocab).unwrap();
        let dense = v.to_dense();
        let oracle = brute_force_vector(d, &vocab);
        for (i, (a, b)) in dense.iter().zip(&oracle).enumerate() {
            assert!((a - b).abs() <= 1e-15, "{} {}: {a} vs {b}", d.id, vocab.entries()[i].id);
        }
        assert!(v.indices.windows(2).all(|w| w[0] < w[1]));
        assert!(v.values.iter().all(|&x| x != 0.0));
    }
}

#[test]
fn disjoint_doc_gets_only_scalars() {
    let (docs, cats) = planted_corpus(30, 5);
    let config = FeatureConfig::with_families(&[FeatureFamily::CharNgram, FeatureFamily::Readability, FeatureFamily::Domain]);
    let ex: Vec<_> = docs.iter().map(|d| extract(d, &config).unwrap()).collect();
    let refs: Vec<_> = ex.iter().collect();
    let vocab = build_vocabulary(&refs, &cats, &config).unwrap();
    let alien = Document::from_paragraphs("alien", &["ЖЖЖЖЖЖЖЖ", "ЯЯЯЯ"]);
    let v = vectorize(&alien, &vocab).unwrap();
    assert!(v.nnz() > 0);
    for (i, _) in v.iter() {
        assert!(vocab.entries()[i].family.is_scalar());
    }
    assert_eq!(v, vectorize(&alien, &vocab).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multiset_families_sum_to_at_most_one(seed in 0u64..10_000, words in 5usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs: Vec<Document> = (0..6)
            .map(|i| Document::from_paragraphs(&format!("d{i}"), &[random_text(&mut rng, words)]))
            .collect();
        let config = FeatureConfig::style();
        let ex: Vec<_> = docs.iter().map(|d| extract(d, &config).unwrap()).collect();
        let refs: Vec<_> = ex.iter().collect();
        let vocab = build_vocabulary(&refs, &["a", "b", "a", "b", "a", "b"], &config).unwrap();
        for e in &ex {
            let v = vectorize_extracted(e, &vocab);
            let mut sums: HashMap<FeatureFamily, f64> = HashMap::new();
            for (i, x) in v.iter() {
                let f = vocab.entries()[i].family;
                if f.is_multiset() {
                    prop_assert!(x > 0.0 && x <= 1.0);
                    *sums.entry(f).or_default() += x;
                }
            }
            for s in sums.values() {
                prop_assert!(*s <= 1.0 + 1e-12);
            }
            // raw extraction has no out-of-vocabulary mass: exactly one per family
            let mut raw: HashMap<FeatureFamily, f64> = HashMap::new();
            for (k, x) in &e.features {
                let f = FeatureFamily::of_id(k).unwrap();
                if f.is_multiset() {
                    *raw.entry(f).or_default() += x;
                }
            }
            for s in raw.values() {
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn vectorize_ignores_token_order_within_multisets(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs: Vec<Document> = (0..4)
            .map(|i| Document::from_paragraphs(&format!("d{i}"), &[random_text(&mut rng, 30)]))
            .collect();
        let config = FeatureConfig::topic();
        let ex: Vec<_> = docs.iter().map(|d| extract(d, &config).unwrap()).collect();
        let refs: Vec<_> = ex.iter().collect();
        let vocab = build_vocabulary(&refs, &["a", "b", "a", "b"], &config).unwrap();
        let mut words: Vec<&str> = docs[0].paragraphs[0].split(' ').collect();
        words.reverse();
        let reversed = Document::from_paragraphs("r", &[words.join(" ")]);
        prop_assert_eq!(vectorize(&docs[0], &vocab).unwrap(), vectorize(&reversed, &vocab).unwrap());
    }
}
