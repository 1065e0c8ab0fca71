use std::collections::{HashMap, HashSet};

use super::{Document, FeatureError};

/// Gram -> occurrence count.
pub type Multiset = HashMap<String, u32>;

fn check_order(n: usize) -> Result<(), FeatureError> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(FeatureError::NgramOrder(n))
    }
}

/// Lowercased paragraph with whitespace runs collapsed to one space and the
/// ends trimmed.
fn normalize_paragraph(p: &str) -> Vec<char> {
    let mut out = Vec::with_capacity(p.len());
    let mut pending_space = false;
    for c in p.trim().chars() {
        if c.is_whitespace() {
            pending_space = true;
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.extend(c.to_lowercase());
    }
    out
}

/// Character n-grams of the body text. Paragraphs are hard breaks;
/// punctuation is kept.
pub fn char_ngrams(doc: &Document, n: usize) -> Result<Multiset, FeatureError> {
    check_order(n)?;
    let mut grams = Multiset::new();
    for p in &doc.paragraphs {
        let chars = normalize_paragraph(p);
        for w in chars.windows(n) {
            *grams.entry(w.iter().collect()).or_default() += 1;
        }
    }
    Ok(grams)
}

/// N-grams over the subsequence of stop words, in order of appearance;
/// all other tokens are deleted first. Grams are joined with `_`.
pub fn stopword_ngrams(doc: &Document, n: usize, stopwords: &HashSet<String>) -> Result<Multiset, FeatureError> {
    check_order(n)?;
    let projected: Vec<String> = doc
        .tokens
        .tokens
        .iter()
        .map(|t| t.lowercase())
        .filter(|w| stopwords.contains(w))
        .collect();
    let mut grams = Multiset::new();
    for w in projected.windows(n) {
        *grams.entry(w.join("_")).or_default() += 1;
    }
    Ok(grams)
}

/// Tag n-grams within sentences, joined with `_`.
pub fn pos_ngrams(doc: &Document, n: usize) -> Result<Multiset, FeatureError> {
    check_order(n)?;
    let tags = doc
        .tokens
        .pos_tags
        .as_ref()
        .ok_or_else(|| FeatureError::Untagged(doc.id.clone()))?;
    let mut grams = Multiset::new();
    for s in &doc.tokens.sentences {
        for w in tags[s.clone()].windows(n) {
            let key = w.iter().map(|t| t.as_str()).collect::<Vec<_>>().join("_");
            *grams.entry(key).or_default() += 1;
        }
    }
    Ok(grams)
}

/// Lowercased word and number tokens.
pub fn word_unigrams(doc: &Document) -> Multiset {
    let mut grams = Multiset::new();
    for t in doc.tokens.words() {
        *grams.entry(t.lowercase()).or_default() += 1;
    }
    grams
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::{PosTag, TokenizedDocument};

    fn keys(m: &Multiset) -> Vec<(String, u32)> {
        let mut v: Vec<_> = m.iter().map(|(k, c)| (k.clone(), *c)).collect();
        v.sort();
        v
    }

    #[test]
    fn char_grams() {
        let d = Document::from_paragraphs("d", &["abc"]);
        assert_eq!(keys(&char_ngrams(&d, 2).unwrap()), [("ab".into(), 1), ("bc".into(), 1)]);
        let d = Document::from_paragraphs("d", &["a   b"]);
        assert_eq!(keys(&char_ngrams(&d, 2).unwrap()), [(" b".into(), 1), ("a ".into(), 1)]);
        let d = Document::from_paragraphs("d", &["ab", "cd"]);
        assert_eq!(char_ngrams(&d, 2).unwrap().len(), 2, "no gram crosses paragraphs");
        assert!(matches!(char_ngrams(&d, 4), Err(FeatureError::NgramOrder(4))));
        assert!(matches!(char_ngrams(&d, 0), Err(FeatureError::NgramOrder(0))));
    }

    #[test]
    fn stop_grams() {
        let stops: HashSet<String> = ["the", "on"].iter().map(|s| s.to_string()).collect();
        let d = Document::from_paragraphs("d", &["The cat sat on the mat"]);
        assert_eq!(
            keys(&stopword_ngrams(&d, 2, &stops).unwrap()),
            [("on_the".into(), 1), ("the_on".into(), 1)]
        );
        let short = Document::from_paragraphs("d", &["the cat"]);
        assert!(stopword_ngrams(&short, 2, &stops).unwrap().is_empty());
    }

    #[test]
    fn pos_grams_respect_sentences() {
        let d = Document::from_paragraphs("d", &["the cat sat"]);
        let tags = d.tokens.pos_tags.clone().unwrap();
        assert_eq!(tags, [PosTag::Det, PosTag::Noun, PosTag::Verb]);
        assert_eq!(
            keys(&pos_ngrams(&d, 2).unwrap()),
            [("DET_NOUN".into(), 1), ("NOUN_VERB".into(), 1)]
        );
        let two = Document::from_paragraphs("d", &["One two three four. Five six seven"]);
        assert_eq!(two.tokens.sentences.len(), 2);
        let total: u32 = pos_ngrams(&two, 3).unwrap().values().sum();
        assert_eq!(total, 3 + 1);
    }

    #[test]
    fn untagged_document() {
        let mut d = Document::from_paragraphs("x", &["a b"]);
        d.tokens = TokenizedDocument { pos_tags: None, ..d.tokens };
        assert!(matches!(pos_ngrams(&d, 1), Err(FeatureError::Untagged(_))));
    }

    #[test]
    fn bow_counts() {
        let d = Document::from_paragraphs("d", &["A a b."]);
        assert_eq!(keys(&word_unigrams(&d)), [("a".into(), 2), ("b".into(), 1)]);
    }
}
