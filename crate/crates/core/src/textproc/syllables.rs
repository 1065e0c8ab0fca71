use std::sync::OnceLock;

use regex::Regex;

use super::TextError;

/// Derivational suffixes counted as one syllable on top of their stem, so a
/// silent `e` in the stem (`lovely`, `careful`) is still recognised.
const SUFFIXES: [&str; 5] = ["ness", "less", "ment", "ful", "ly"];

/// Estimate the syllable count of an English word.
///
/// Vowel groups (`y` counts as a vowel except word-initially), minus silent
/// endings (`-e`, `-ed`, `-es`), plus vowel pairs that are usually split
/// across syllables (`piano`, `video`, `idea`, `happier`). `-ing` and a few
/// suffixes are counted separately from their stem. Non-letters are ignored.
pub fn count_syllables(word: &str) -> Result<u32, TextError> {
    let w: String = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if w.is_empty() {
        return Err(TextError::NoLetters(word.to_string()));
    }
    Ok(count_lower(&w))
}

fn count_lower(w: &str) -> u32 {
    if let Some(stem) = w.strip_suffix("ing") {
        if stem.chars().count() >= 2 && vowel_groups(stem) > 0 {
            return core(stem) + 1;
        }
    }
    for suffix in SUFFIXES {
        if let Some(stem) = w.strip_suffix(suffix) {
            if stem.chars().count() >= 3 {
                return count_lower(stem) + 1;
            }
        }
    }
    core(w)
}

fn is_vowel(c: char, pos: usize) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u') || (c == 'y' && pos > 0)
}

fn vowel_groups(w: &str) -> u32 {
    let mut n = 0;
    let mut prev = false;
    for (i, c) in w.chars().enumerate() {
        let v = is_vowel(c, i);
        if v && !prev {
            n += 1;
        }
        prev = v;
    }
    n
}

struct Patterns {
    split_pairs: Regex,
    split_ia_io: Regex,
    es_kept: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        split_pairs: Regex::new(r"eo|uo|iu|ii|ua[^r]|ua$|yi|[^aeiou]ea$|creat|ie(?:r|st)$|iet|oet")
            .unwrap(),
        split_ia_io: Regex::new(r"[^ctsg]i[ao]").unwrap(),
        es_kept: Regex::new(r"(?:s|x|z|ch|sh|ge|ce|se|ze)es$").unwrap(),
    })
}

fn core(w: &str) -> u32 {
    let groups = vowel_groups(w);
    let chars: Vec<char> = w.chars().collect();
    let n = chars.len();
    if n <= 3 {
        return groups.max(1);
    }
    let p = patterns();
    let before = |k: usize| chars[n - k];
    let mut count = groups as i64;
    if w.ends_with("ed") {
        if !matches!(before(3), 't' | 'd') && !is_vowel(before(3), n - 3) {
            count -= 1;
        }
    } else if w.ends_with("es") {
        if !p.es_kept.is_match(w) && !is_vowel(before(3), n - 3) {
            count -= 1;
        }
    } else if w.ends_with('e') {
        let le_after_consonant = w.ends_with("le") && !is_vowel(before(3), n - 3);
        if !le_after_consonant && !w.ends_with("ee") && !w.ends_with("ye") && !is_vowel(before(2), n - 2) {
            count -= 1;
        }
    }
    // ia/io split unless part of -tion, -sion, -cial, -gion, or final -ian/-ious
    count += p
        .split_ia_io
        .find_iter(w)
        .filter(|m| {
            let rest = &w[m.end()..];
            !(rest == "n" || rest == "us")
        })
        .count() as i64;
    count += p.split_pairs.find_iter(w).count() as i64;
    count.max(1) as u32
}
