//! Bundled linguistic resources.
//!
//! The raw file contents are exposed so their checksums can be pinned.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use super::PosTag;

pub const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");
pub const STOPWORDS: &str = include_str!("../../data/stopwords.txt");
pub const POS_LEXICON: &str = include_str!("../../data/pos_lexicon.tsv");
pub const POS_SUFFIXES: &str = include_str!("../../data/pos_suffixes.tsv");
pub const GENERAL_INQUIRER: &str = include_str!("../../data/general_inquirer.csv");

fn data_lines(raw: &str) -> impl Iterator<Item = &str> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn abbreviations() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| data_lines(ABBREVIATIONS).map(str::to_lowercase).collect())
}

pub fn stopwords() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| data_lines(STOPWORDS).map(str::to_lowercase).collect())
}

pub(crate) fn pos_lexicon() -> &'static HashMap<String, PosTag> {
    static MAP: OnceLock<HashMap<String, PosTag>> = OnceLock::new();
    MAP.get_or_init(|| {
        let mut map = HashMap::new();
        for line in data_lines(POS_LEXICON) {
            let mut cols = line.split('\t');
            let (Some(word), Some(tag)) = (cols.next(), cols.next()) else {
                panic!("bundled lexicon line without tag: {line:?}");
            };
            let tag: PosTag = tag.parse().expect("bundled lexicon tag");
            map.entry(word.to_string()).or_insert(tag);
        }
        map
    })
}

/// Suffix rules, longest suffix first.
pub(crate) fn pos_suffixes() -> &'static [(String, PosTag, usize)] {
    static RULES: OnceLock<Vec<(String, PosTag, usize)>> = OnceLock::new();
    RULES.get_or_init(|| {
        let mut rules: Vec<(String, PosTag, usize)> = data_lines(POS_SUFFIXES)
            .map(|line| {
                let cols: Vec<&str> = line.split('\t').collect();
                assert_eq!(cols.len(), 3, "bundled suffix rule: {line:?}");
                (
                    cols[0].to_string(),
                    cols[1].parse().expect("bundled suffix tag"),
                    cols[2].parse().expect("bundled suffix min length"),
                )
            })
            .collect();
        // stable: equal-length suffixes keep file order
        rules.sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()));
        rules
    })
}
