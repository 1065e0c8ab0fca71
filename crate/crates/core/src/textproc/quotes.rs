use crate::corpus::QuotedSpan;

/// Quoted spans in a list of paragraphs.
///
/// A span covers the characters strictly between a matched pair of double
/// quotes. Straight `"` toggles; `“` and `„` only open, `”` only closes. An
/// opener left unmatched at the end of its paragraph extends to the paragraph
/// end. Spans never nest and are returned in document order.
pub fn detect_quotes<S: AsRef<str>>(paragraphs: &[S]) -> Vec<QuotedSpan> {
    paragraphs
        .iter()
        .enumerate()
        .flat_map(|(p, text)| detect_quotes_in(p, text.as_ref()))
        .collect()
}

/// Quoted spans within one paragraph, tagged with `paragraph` as their index.
pub fn detect_quotes_in(paragraph: usize, text: &str) -> Vec<QuotedSpan> {
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    let mut len = 0;
    for (i, c) in text.chars().enumerate() {
        len = i + 1;
        match (c, open) {
            ('"' | '\u{201C}' | '\u{201E}', None) => open = Some(i + 1),
            ('"' | '\u{201D}', Some(start)) => {
                if i > start {
                    spans.push(QuotedSpan {
                        paragraph,
                        start,
                        end: i,
                    });
                }
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        if len > start {
            spans.push(QuotedSpan {
                paragraph,
                start,
                end: len,
            });
        }
    }
    spans
}
