use serde::{Deserialize, Serialize};

use super::{Document, FeatureError};
use crate::textproc::{count_syllables, TokenizedDocument};

/// Surface counts every readability formula is built from.
///
/// Words are word and number tokens. Characters are letters and digits
/// inside words. Sentences count only sentences containing a word. A token
/// without letters (a number) counts as one syllable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadabilityCounts {
    pub characters: usize,
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    /// More than 6 characters.
    pub long_words: usize,
    /// At least 3 syllables.
    pub complex_words: usize,
    /// At most 3 characters.
    pub mini_words: usize,
}

impl ReadabilityCounts {
    pub fn of(doc: &TokenizedDocument) -> Self {
        let mut c = ReadabilityCounts::default();
        for s in 0..doc.sentences.len() {
            let mut any = false;
            for t in doc.sentence(s).iter().filter(|t| t.is_word()) {
                any = true;
                let chars = t.char_count();
                let syl = count_syllables(&t.text).unwrap_or(1) as usize;
                c.words += 1;
                c.characters += chars;
                c.syllables += syl;
                c.long_words += usize::from(chars > 6);
                c.complex_words += usize::from(syl >= 3);
                c.mini_words += usize::from(chars <= 3);
            }
            c.sentences += usize::from(any);
        }
        c
    }
}

/// The ten readability scores, in the order of [`ReadabilityScores::NAMES`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityScores {
    pub ari: f64,
    pub coleman_liau: f64,
    pub flesch_kincaid_grade: f64,
    pub flesch_reading_ease: f64,
    pub gunning_fog: f64,
    pub lix: f64,
    pub mcalpine_eflaw: f64,
    pub rix: f64,
    pub smog: f64,
    pub strain: f64,
}

impl ReadabilityScores {
    pub const NAMES: [&'static str; 10] = [
        "ari",
        "coleman_liau",
        "flesch_kincaid_grade",
        "flesch_reading_ease",
        "gunning_fog",
        "lix",
        "mcalpine_eflaw",
        "rix",
        "smog",
        "strain",
    ];

    /// Apply the formulas documented in `docs/readability.md`.
    pub fn from_counts(c: &ReadabilityCounts) -> Result<Self, FeatureError> {
        if c.words == 0 || c.sentences == 0 {
            return Err(FeatureError::EmptyText);
        }
        let w = c.words as f64;
        let s = c.sentences as f64;
        let wps = w / s;
        let cpw = c.characters as f64 / w;
        let spw = c.syllables as f64 / w;
        Ok(Self {
            ari: 4.71 * cpw + 0.5 * wps - 21.43,
            coleman_liau: 0.0588 * (100.0 * cpw) - 0.296 * (100.0 * s / w) - 15.8,
            flesch_kincaid_grade: 0.39 * wps + 11.8 * spw - 15.59,
            flesch_reading_ease: 206.835 - 1.015 * wps - 84.6 * spw,
            gunning_fog: 0.4 * (wps + 100.0 * c.complex_words as f64 / w),
            lix: wps + 100.0 * c.long_words as f64 / w,
            mcalpine_eflaw: (w + c.mini_words as f64) / s,
            rix: c.long_words as f64 / s,
            smog: 1.0430 * (c.complex_words as f64 * 30.0 / s).sqrt() + 3.1291,
            strain: c.syllables as f64 * 3.0 / s / 10.0,
        })
    }

    pub fn as_array(&self) -> [f64; 10] {
        [
            self.ari,
            self.coleman_liau,
            self.flesch_kincaid_grade,
            self.flesch_reading_ease,
            self.gunning_fog,
            self.lix,
            self.mcalpine_eflaw,
            self.rix,
            self.smog,
            self.strain,
        ]
    }
}

pub fn readability_scores(doc: &Document) -> Result<ReadabilityScores, FeatureError> {
    ReadabilityScores::from_counts(&ReadabilityCounts::of(&doc.tokens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_word() {
        let d = Document::from_paragraphs("c", &["cat"]);
        let c = ReadabilityCounts::of(&d.tokens);
        assert_eq!(
            c,
            ReadabilityCounts {
                characters: 3,
                words: 1,
                sentences: 1,
                syllables: 1,
                long_words: 0,
                complex_words: 0,
                mini_words: 1
            }
        );
        let r = readability_scores(&d).unwrap();
        assert!((r.flesch_kincaid_grade - (0.39 + 11.8 - 15.59)).abs() < 1e-12);
        assert!((r.flesch_reading_ease - (206.835 - 1.015 - 84.6)).abs() < 1e-12);
        assert_eq!(r.lix, 1.0);
        assert_eq!(r.rix, 0.0);
        assert_eq!(r.mcalpine_eflaw, 2.0);
        assert!((r.smog - 3.1291).abs() < 1e-12);
        assert!(r.as_array().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn lix_and_rix_from_counts() {
        let c = ReadabilityCounts {
            characters: 500,
            words: 100,
            sentences: 5,
            syllables: 150,
            long_words: 30,
            complex_words: 10,
            mini_words: 40,
        };
        let r = ReadabilityScores::from_counts(&c).unwrap();
        assert!((r.lix - 50.0).abs() < 1e-12);
        assert!((r.rix - 6.0).abs() < 1e-12);
    }

    #[test]
    fn empty_text_is_an_error() {
        let d = Document::from_paragraphs("e", &["!!! ..."]);
        assert!(matches!(readability_scores(&d), Err(FeatureError::EmptyText)));
        let d = Document::from_paragraphs::<&str>("e", &[]);
        assert!(matches!(readability_scores(&d), Err(FeatureError::EmptyText)));
    }

    #[test]
    fn punctuation_only_sentences_do_not_count() {
        let d = Document::from_paragraphs("p", &["Yes. ! No."]);
        assert_eq!(ReadabilityCounts::of(&d.tokens).sentences, 2);
    }
}
