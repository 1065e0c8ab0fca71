use std::collections::HashSet;

use super::resources;
use super::{Token, TokenKind, TokenizedDocument};

const CLITICS: [&str; 6] = ["s", "re", "ve", "ll", "d", "m"];

/// Word tokenizer and sentence splitter.
///
/// Words are maximal runs of alphanumerics joined by internal apostrophes,
/// hyphens, and digit group separators. Every other non-space character is a
/// token of its own, except `...`. Negations and clitics are split off
/// (`don't` -> `do` `n't`, `it's` -> `it` `'s`). Sentences end at `.`, `!`,
/// `?` or an ellipsis, absorbing directly attached closing quotes and brackets;
/// tokens on the abbreviation list keep their period and never end a sentence.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    abbreviations: HashSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self {
            abbreviations: resources::abbreviations().clone(),
        }
    }
}

impl Tokenizer {
    pub fn new(abbreviations: impl IntoIterator<Item = String>) -> Self {
        Self {
            abbreviations: abbreviations.into_iter().map(|a| a.to_lowercase()).collect(),
        }
    }

    pub fn tokenize<S: AsRef<str>>(&self, paragraphs: &[S]) -> TokenizedDocument {
        let mut tokens = Vec::new();
        let mut sentences = Vec::new();
        for (p, text) in paragraphs.iter().enumerate() {
            let first = tokens.len();
            self.scan_paragraph(p, text.as_ref(), &mut tokens);
            split_sentences(&tokens, first, &mut sentences);
        }
        TokenizedDocument {
            tokens,
            sentences,
            pos_tags: None,
        }
    }

    fn scan_paragraph(&self, paragraph: usize, text: &str, out: &mut Vec<Token>) {
        let cs: Vec<char> = text.chars().collect();
        let n = cs.len();
        let mut i = 0;
        let push = |out: &mut Vec<Token>, start: usize, end: usize, kind: TokenKind| {
            out.push(Token {
                text: cs[start..end].iter().collect(),
                paragraph,
                start,
                end,
                kind,
            });
        };
        while i < n {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if is_word_char(c) {
                if let Some(end) = dotted_acronym(&cs, i) {
                    push(out, i, end, TokenKind::Word);
                    i = end;
                    continue;
                }
                let start = i;
                let mut end = scan_word(&cs, i);
                if end < n && cs[end] == '.' && self.takes_period(&cs[start..end]) {
                    end += 1;
                }
                let kind = if cs[start..end].iter().any(|c| c.is_alphabetic()) {
                    TokenKind::Word
                } else {
                    TokenKind::Number
                };
                match split_clitic(&cs[start..end]) {
                    Some(at) if kind == TokenKind::Word => {
                        push(out, start, start + at, TokenKind::Word);
                        push(out, start + at, end, TokenKind::Word);
                    }
                    _ => push(out, start, end, kind),
                }
                i = end;
                continue;
            }
            if c == '.' && i + 2 < n && cs[i + 1] == '.' && cs[i + 2] == '.' {
                push(out, i, i + 3, TokenKind::Punct);
                i += 3;
                continue;
            }
            let kind = if is_punctuation(c) {
                TokenKind::Punct
            } else {
                TokenKind::Symbol
            };
            push(out, i, i + 1, kind);
            i += 1;
        }
    }

    fn takes_period(&self, word: &[char]) -> bool {
        if word.len() == 1 && word[0].is_uppercase() {
            return true;
        }
        let mut key: String = word.iter().flat_map(|c| c.to_lowercase()).collect();
        key.push('.');
        self.abbreviations.contains(&key)
    }
}

/// Tokenize paragraphs with the bundled abbreviation list.
pub fn tokenize<S: AsRef<str>>(paragraphs: &[S]) -> TokenizedDocument {
    static DEFAULT: std::sync::OnceLock<Tokenizer> = std::sync::OnceLock::new();
    DEFAULT.get_or_init(Tokenizer::default).tokenize(paragraphs)
}

/// Tokenize a single paragraph of text.
pub fn tokenize_text(text: &str) -> TokenizedDocument {
    tokenize(&[text])
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || ('\u{0300}'..='\u{036F}').contains(&c)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_punctuation(c: char) -> bool {
    if c.is_ascii() {
        return c.is_ascii_punctuation() && !"$%&*+<=>@^`|~#".contains(c);
    }
    matches!(
        c,
        '\u{2018}'..='\u{201F}' | '\u{2010}'..='\u{2015}' | '\u{2026}' | '\u{00AB}' | '\u{00BB}'
            | '\u{00A1}' | '\u{00BF}' | '\u{00B7}' | '\u{2039}' | '\u{203A}'
    )
}

/// End of the word starting at `i`.
fn scan_word(cs: &[char], mut i: usize) -> usize {
    let n = cs.len();
    loop {
        while i < n && is_word_char(cs[i]) {
            i += 1;
        }
        if i + 1 >= n || !is_word_char(cs[i + 1]) {
            return i;
        }
        let (prev, next) = (cs[i - 1], cs[i + 1]);
        let joins = match cs[i] {
            c if is_apostrophe(c) => prev.is_alphabetic() && next.is_alphabetic(),
            '-' => true,
            '.' | ',' => prev.is_ascii_digit() && next.is_ascii_digit(),
            _ => false,
        };
        if !joins {
            return i;
        }
        i += 1;
    }
}

/// `U.S.`, `e.g.`, `a.m.`: two or more single letters each followed by a period.
fn dotted_acronym(cs: &[char], start: usize) -> Option<usize> {
    let n = cs.len();
    let mut i = start;
    let mut letters = 0;
    while i + 1 < n && cs[i].is_alphabetic() && cs[i + 1] == '.' {
        if i + 2 < n && is_word_char(cs[i + 2]) && !(i + 3 < n && cs[i + 3] == '.') {
            break;
        }
        letters += 1;
        i += 2;
        if i >= n || !cs[i].is_alphabetic() {
            break;
        }
    }
    (letters >= 2 && (i >= n || !is_word_char(cs[i]))).then_some(i)
}

/// Split offset of a trailing negation or clitic, if any.
fn split_clitic(word: &[char]) -> Option<usize> {
    let n = word.len();
    let lower: Vec<char> = word.iter().flat_map(|c| c.to_lowercase()).collect();
    if lower.len() != n {
        return None;
    }
    if n > 3 && lower[n - 3] == 'n' && is_apostrophe(lower[n - 2]) && lower[n - 1] == 't' {
        return lower[n - 4].is_alphabetic().then_some(n - 3);
    }
    let apos = lower.iter().rposition(|&c| is_apostrophe(c))?;
    if apos == 0 {
        return None;
    }
    let tail: String = lower[apos + 1..].iter().collect();
    CLITICS.contains(&tail.as_str()).then_some(apos)
}

fn is_terminal(t: &Token) -> bool {
    t.kind == TokenKind::Punct && matches!(t.text.as_str(), "." | "!" | "?" | "..." | "\u{2026}")
}

fn is_closer(t: &Token) -> bool {
    t.kind == TokenKind::Punct
        && matches!(
            t.text.as_str(),
            "\"" | "'" | "\u{201D}" | "\u{2019}" | ")" | "]" | "}" | "\u{00BB}"
        )
}

fn split_sentences(tokens: &[Token], first: usize, out: &mut Vec<std::ops::Range<usize>>) {
    let end = tokens.len();
    let mut start = first;
    let mut i = first;
    while i < end {
        if is_terminal(&tokens[i]) {
            let mut j = i + 1;
            while j < end
                && (is_terminal(&tokens[j]) || is_closer(&tokens[j]))
                && tokens[j].start == tokens[j - 1].end
            {
                j += 1;
            }
            out.push(start..j);
            start = j;
            i = j;
        } else {
            i += 1;
        }
    }
    if start < end {
        out.push(start..end);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize_text(text).tokens.into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn abbreviation_does_not_end_sentence() {
        let doc = tokenize_text("Dr. Smith won. He spoke.");
        assert_eq!(
            surfaces("Dr. Smith won. He spoke."),
            ["Dr.", "Smith", "won", ".", "He", "spoke", "."]
        );
        assert_eq!(doc.sentences, vec![0..4, 4..7]);
    }

    #[test]
    fn single_word() {
        let doc = tokenize_text("Hello");
        assert_eq!(doc.tokens.len(), 1);
        assert_eq!(doc.sentences.len(), 1);
    }

    #[test]
    fn contractions() {
        assert_eq!(surfaces("don't"), ["do", "n't"]);
        assert_eq!(surfaces("can't"), ["ca", "n't"]);
        assert_eq!(surfaces("It’s"), ["It", "’s"]);
        assert_eq!(surfaces("we'll"), ["we", "'ll"]);
        assert_eq!(surfaces("O'Brien"), ["O'Brien"]);
    }

    #[test]
    fn numbers_and_compounds() {
        assert_eq!(surfaces("1,000 well-known 3.5%"), ["1,000", "well-known", "3.5", "%"]);
        let doc = tokenize_text("1,000 well-known 3.5%");
        assert_eq!(doc.tokens[0].kind, TokenKind::Number);
        assert_eq!(doc.tokens[3].kind, TokenKind::Symbol);
    }

    #[test]
    fn acronyms_and_initials() {
        assert_eq!(surfaces("the U.S. economy"), ["the", "U.S.", "economy"]);
        assert_eq!(surfaces("John F. Kennedy"), ["John", "F.", "Kennedy"]);
        assert_eq!(surfaces("e.g. this"), ["e.g.", "this"]);
    }

    #[test]
    fn closing_quote_stays_in_sentence() {
        let doc = tokenize_text("He said \"stop.\" Then \"go!\"");
        assert_eq!(doc.sentences.len(), 2);
        let first: Vec<&str> = doc.sentence(0).iter().map(|t| t.text.as_str()).collect();
        assert_eq!(first, ["He", "said", "\"", "stop", ".", "\""]);
    }

    #[test]
    fn ellipsis_and_mixed_terminals() {
        assert_eq!(surfaces("Wait... What?!"), ["Wait", "...", "What", "?", "!"]);
        assert_eq!(tokenize_text("Wait... What?!").sentences.len(), 2);
    }

    #[test]
    fn paragraphs_break_sentences() {
        let doc = tokenize(&["No terminal here", "", "Second one."]);
        assert_eq!(doc.sentences, vec![0..3, 3..6]);
        assert_eq!(doc.tokens[3].paragraph, 2);
    }

    #[test]
    fn spans_are_char_offsets() {
        let text = "“Grüße” naïve.";
        let doc = tokenize_text(text);
        let cs: Vec<char> = text.chars().collect();
        for t in &doc.tokens {
            assert_eq!(cs[t.start..t.end].iter().collect::<String>(), t.text);
        }
    }
}
