//! Deterministic linguistic preprocessing.
//!
//! Every function here is a pure function of its input. Bundled resources
//! (abbreviations, stop words, tagger lexicon and suffix rules) are compiled
//! into the binary from `data/`; see [`resources`].

mod quotes;
pub mod resources;
mod syllables;
mod tagger;
mod tokenize;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use quotes::{detect_quotes, detect_quotes_in};
pub use syllables::count_syllables;
pub use tagger::{pos_tag, LexiconTagger, PosTag, Tagger};
pub use tokenize::{tokenize, tokenize_text, Tokenizer};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("word {0:?} contains no letters")]
    NoLetters(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    /// Contains at least one letter.
    Word,
    /// Digits, optionally with `.`/`,` group separators.
    Number,
    Punct,
    /// Non-alphanumeric, non-punctuation characters (`$`, `%`, emoji, ...).
    Symbol,
}

/// A token with its location in the source paragraph.
///
/// `start..end` are character (not byte) offsets into the paragraph, so the
/// surface can always be recovered from the original text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub paragraph: usize,
    pub start: usize,
    pub end: usize,
    pub kind: TokenKind,
}

impl Token {
    /// Number of letters and digits in the surface.
    pub fn char_count(&self) -> usize {
        self.text.chars().filter(|c| c.is_alphanumeric()).count()
    }

    /// Words and numbers; everything readability and frequency features count.
    pub fn is_word(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Number)
    }

    pub fn lowercase(&self) -> String {
        self.text.to_lowercase()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub tokens: Vec<Token>,
    /// Contiguous, non-overlapping token ranges covering all tokens.
    pub sentences: Vec<Range<usize>>,
    /// One tag per token once tagged.
    pub pos_tags: Option<Vec<PosTag>>,
}

impl TokenizedDocument {
    pub fn is_tagged(&self) -> bool {
        self.pos_tags.is_some()
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }

    /// Tokens of one sentence.
    pub fn sentence(&self, idx: usize) -> &[Token] {
        &self.tokens[self.sentences[idx].clone()]
    }
}
