use serde::{Deserialize, Serialize};

use super::Document;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainFeatures {
    pub quoted_ratio: f64,
    pub external_link_ratio: f64,
    pub paragraph_count: f64,
    pub mean_paragraph_length: f64,
}

impl DomainFeatures {
    pub const NAMES: [&'static str; 4] = ["quoted_ratio", "external_link_ratio", "paragraph_count", "mean_paragraph_length"];

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.quoted_ratio,
            self.external_link_ratio,
            self.paragraph_count,
            self.mean_paragraph_length,
        ]
    }
}

pub fn domain_features(doc: &Document) -> DomainFeatures {
    let words = doc.tokens.word_count();
    let paragraphs = doc.paragraphs.len();
    DomainFeatures {
        quoted_ratio: if words == 0 {
            0.0
        } else {
            doc.quoted_words as f64 / words as f64
        },
        external_link_ratio: doc.external_links as f64 / doc.links.max(1) as f64,
        paragraph_count: paragraphs as f64,
        mean_paragraph_length: if paragraphs == 0 {
            0.0
        } else {
            words as f64 / paragraphs as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{article, Link, Orientation};

    #[test]
    fn paragraph_lengths() {
        let p1 = "w ".repeat(10);
        let p2 = "w ".repeat(20);
        let d = Document::from_paragraphs("x", &[p1, p2]);
        let f = domain_features(&d);
        assert_eq!(f.paragraph_count, 2.0);
        assert_eq!(f.mean_paragraph_length, 15.0);
        assert_eq!(f.external_link_ratio, 0.0);
        assert_eq!(f.quoted_ratio, 0.0);
    }

    #[test]
    fn links_and_quotes_from_article() {
        let mut a = article("a", "P", Orientation::Left, &["He said \"no way\" today."]);
        a.quoted_spans = crate::textproc::detect_quotes(&a.paragraphs);
        a.links = vec![
            Link { url: "https://x.org".into(), external: true },
            Link { url: "https://p.com/1".into(), external: false },
            Link { url: "https://y.org".into(), external: true },
        ];
        let f = domain_features(&Document::analyze(&a));
        assert!((f.external_link_ratio - 2.0 / 3.0).abs() < 1e-15);
        assert!((f.quoted_ratio - 2.0 / 5.0).abs() < 1e-15);
    }
}
