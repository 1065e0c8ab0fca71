use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::resources;
use super::{Token, TokenKind, TokenizedDocument};

/// Coarse universal tagset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Conj,
    Prt,
    Punct,
    X,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Num,
        PosTag::Conj,
        PosTag::Prt,
        PosTag::Punct,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Num => "NUM",
            PosTag::Conj => "CONJ",
            PosTag::Prt => "PRT",
            PosTag::Punct => "PUNCT",
            PosTag::X => "X",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

/// Assigns one tag per token.
pub trait Tagger: Send + Sync {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag>;
}

/// Lexicon lookup, then suffix rules, then `NOUN`.
///
/// Resolution order for one token:
/// 1. punctuation -> `PUNCT`, symbols -> `X`, numbers -> `NUM`;
/// 2. lowercase surface in the lexicon;
/// 3. longest matching suffix rule whose minimum word length is met;
/// 4. `NOUN`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LexiconTagger;

impl LexiconTagger {
    pub fn tag_token(&self, token: &Token) -> PosTag {
        match token.kind {
            TokenKind::Punct => return PosTag::Punct,
            TokenKind::Symbol => return PosTag::X,
            TokenKind::Number => return PosTag::Num,
            TokenKind::Word => {}
        }
        let lower = token.text.to_lowercase().replace('\u{2019}', "'");
        if let Some(&tag) = resources::pos_lexicon().get(&lower) {
            return tag;
        }
        let len = lower.chars().count();
        resources::pos_suffixes()
            .iter()
            .find(|(suffix, _, min_len)| len >= *min_len && lower.ends_with(suffix.as_str()))
            .map(|&(_, tag, _)| tag)
            .unwrap_or(PosTag::Noun)
    }
}

impl Tagger for LexiconTagger {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag> {
        tokens.iter().map(|t| self.tag_token(t)).collect()
    }
}

/// Fill `pos_tags` using the bundled reference tagger.
pub fn pos_tag(mut doc: TokenizedDocument) -> TokenizedDocument {
    doc.pos_tags = Some(LexiconTagger.tag(&doc.tokens));
    doc
}
