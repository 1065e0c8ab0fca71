use newsstyle::textproc::{count_syllables, pos_tag, resources, tokenize, tokenize_text, PosTag};
use proptest::prelude::*;
use sha2::{Digest, Sha256};

const INPUT: &str = include_str!("fixtures/tokenizer_input.txt");
const EXPECTED: &str = include_str!("fixtures/tokenizer_expected.txt");
const SYLLABLES: &str = include_str!("fixtures/syllables.tsv");

#[test]
fn twenty_sentence_fixture_matches_hand_tokenization() {
    let paragraphs: Vec<&str> = INPUT.lines().collect();
    let doc = tokenize(&paragraphs);
    let got: Vec<Vec<&str>> = doc
        .sentences
        .iter()
        .map(|r| doc.tokens[r.clone()].iter().map(|t| t.text.as_str()).collect())
        .collect();
    let expected: Vec<Vec<&str>> = EXPECTED
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(" | ").collect())
        .collect();
    assert_eq!(expected.len(), 20);
    for (i, (g, e)) in got.iter().zip(&expected).enumerate() {
        assert_eq!(g, e, "sentence {i}");
    }
    assert_eq!(got.len(), expected.len());
}

#[test]
fn syllable_counter_agrees_with_dictionary() {
    let entries: Vec<(&str, u32)> = SYLLABLES
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (w, n) = l.split_once('\t').unwrap();
            (w, n.trim().parse().unwrap())
        })
        .collect();
    assert_eq!(entries.len(), 200);
    let misses: Vec<_> = entries
        .iter()
        .filter(|(w, n)| count_syllables(w).unwrap() != *n)
        .collect();
    let agreement = 1.0 - misses.len() as f64 / entries.len() as f64;
    assert!(agreement >= 0.90, "agreement {agreement}: {misses:?}");
}

#[test]
fn bundled_resource_checksums() {
    let sha = |s: &str| hex::encode(Sha256::digest(s.as_bytes()));
    assert_eq!(sha(resources::ABBREVIATIONS), "b927bbd22e757ea77b55e6a010f82da15b714de18674b725a229845e11c61204");
    assert_eq!(sha(resources::STOPWORDS), "1096f8caaed3e1cf6093373d412f190718594f27569b9d2789fb4c72a2527849");
    assert_eq!(sha(resources::POS_LEXICON), "7070510a2b37b0e2fd2a5e71ef2a7fe37996a5db3c120a8f968b5ddbd124fe11");
    assert_eq!(sha(resources::POS_SUFFIXES), "37a782e9c1e7edff94e15a8194ddabdebda6b366cfad81cc9a5b5c6852c589c8");
    assert_eq!(sha(resources::GENERAL_INQUIRER), "6e73a477ee7f703bd2c5ad9d5aca1e652c1c3b7400cd8c41d7b840fd887f80d8");
}

#[test]
fn tagging_is_aligned() {
    let paragraphs: Vec<&str> = INPUT.lines().collect();
    let doc = pos_tag(tokenize(&paragraphs));
    let tags = doc.pos_tags.as_ref().unwrap();
    assert_eq!(tags.len(), doc.tokens.len());
    for (t, tag) in doc.tokens.iter().zip(tags) {
        if t.text == "." {
            assert_eq!(*tag, PosTag::Punct);
        }
    }
}

fn text_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec(
        prop_oneof![
            "[a-zA-Z]{1,8}",
            "[0-9]{1,4}",
            Just(".".to_string()),
            Just("don't".to_string()),
            Just("Dr.".to_string()),
            Just("\u{201C}".to_string()),
            Just("!?".to_string()),
            Just("—".to_string()),
            Just("naïve".to_string()),
            " {1,3}",
        ],
        0..40,
    )
    .prop_map(|parts| parts.join(" "))
}

proptest! {
    #[test]
    fn spans_reproduce_source(text in text_strategy()) {
        let doc = tokenize_text(&text);
        let cs: Vec<char> = text.chars().collect();
        let mut last_end = 0;
        for t in &doc.tokens {
            prop_assert_eq!(cs[t.start..t.end].iter().collect::<String>(), t.text.clone());
            prop_assert!(t.start >= last_end);
            prop_assert!(t.end > t.start);
            last_end = t.end;
        }
        // sentences are contiguous and cover every token
        let mut next = 0;
        for s in &doc.sentences {
            prop_assert_eq!(s.start, next);
            prop_assert!(s.end > s.start);
            next = s.end;
        }
        prop_assert_eq!(next, doc.tokens.len());
        // everything that is not whitespace is covered by some token
        let covered: usize = doc.tokens.iter().map(|t| t.end - t.start).sum();
        prop_assert_eq!(covered, cs.iter().filter(|c| !c.is_whitespace()).count());
    }

    #[test]
    fn syllables_positive_and_grow_with_vowel_suffix(w in "[a-z]{1,12}") {
        let n = count_syllables(&w).unwrap();
        prop_assert!(n >= 1);
        let longer = format!("{w}bado");
        prop_assert!(count_syllables(&longer).unwrap() >= n);
    }
}
