//! Converter from the published BuzzFeed fact-check CSV plus locally archived
//! article HTML to the canonical JSONL corpus.
//!
//! Archived files live in one directory and are named by the lowercase hex
//! SHA-256 of the post URL, with an `.html` extension. HTML extraction is a
//! set of regex heuristics: `<p>` elements become paragraphs, `<a href>` inside
//! them become links, and the canonical URL (`<link rel="canonical">` or
//! `og:url`) determines the publisher domain for link externality.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::{Article, Corpus, CorpusError, Link, Orientation, Rating, Rejection};
use crate::textproc::detect_quotes;

/// Second-level labels under which registrations happen one level deeper.
const TWO_LEVEL_SUFFIXES: [&str; 12] = [
    "co.uk", "org.uk", "ac.uk", "gov.uk", "com.au", "net.au", "org.au", "co.nz", "co.jp", "com.br",
    "co.in", "com.mx",
];

#[derive(Debug)]
pub struct ConvertReport {
    pub corpus: Corpus,
    /// Post URLs without an archived article file.
    pub missing: Vec<String>,
    pub rejected: Vec<Rejection>,
}

#[derive(Debug, Deserialize)]
struct AnnotationRow {
    post_id: String,
    #[serde(rename = "Category")]
    category: String,
    #[serde(rename = "Page")]
    page: String,
    #[serde(rename = "Post URL")]
    post_url: String,
    #[serde(rename = "Rating")]
    rating: String,
}

fn orientation_from_category(s: &str) -> Option<Orientation> {
    match s.trim().to_lowercase().as_str() {
        "mainstream" => Some(Orientation::Mainstream),
        "left" => Some(Orientation::Left),
        "right" => Some(Orientation::Right),
        _ => None,
    }
}

fn rating_from_label(s: &str) -> Option<Rating> {
    match s.trim().to_lowercase().as_str() {
        "mostly true" => Some(Rating::MostlyTrue),
        "mixture of true and false" => Some(Rating::Mixture),
        "mostly false" => Some(Rating::MostlyFalse),
        "no factual content" => Some(Rating::NoFactual),
        _ => None,
    }
}

pub(crate) fn archive_key(post_url: &str) -> String {
    hex::encode(Sha256::digest(post_url.as_bytes()))
}

/// Convert the annotation CSV and archive directory into a corpus.
pub fn convert_buzzfeed(csv_path: &Path, archive_dir: &Path) -> Result<ConvertReport, CorpusError> {
    let mut reader = csv::Reader::from_path(csv_path)?;
    let mut articles = Vec::new();
    let mut missing = Vec::new();
    let mut rejected = Vec::new();
    for (i, row) in reader.deserialize::<AnnotationRow>().enumerate() {
        let line = i + 2;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                rejected.push(Rejection {
                    line,
                    field: None,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let Some(orientation) = orientation_from_category(&row.category) else {
            rejected.push(Rejection {
                line,
                field: Some("Category".into()),
                message: format!("unknown category {:?}", row.category),
            });
            continue;
        };
        let Some(rating) = rating_from_label(&row.rating) else {
            rejected.push(Rejection {
                line,
                field: Some("Rating".into()),
                message: format!("unknown rating {:?}", row.rating),
            });
            continue;
        };
        let file = archive_dir.join(format!("{}.html", archive_key(&row.post_url)));
        let html = match fs::read_to_string(&file) {
            Ok(h) => h,
            Err(_) => {
                missing.push(row.post_url);
                continue;
            }
        };
        let extracted = extract_html(&html);
        let article = Article {
            id: row.post_id.clone(),
            publisher: row.page.clone(),
            orientation,
            rating,
            title: extracted.title,
            quoted_spans: detect_quotes(&extracted.paragraphs),
            paragraphs: extracted.paragraphs,
            links: extracted.links,
            source_url: extracted.source_url,
        };
        match article.validate() {
            Ok(()) => articles.push(article),
            Err((field, message)) => rejected.push(Rejection {
                line,
                field: Some(field),
                message,
            }),
        }
    }
    Ok(ConvertReport {
        corpus: Corpus::try_new(articles)?,
        missing,
        rejected,
    })
}

#[derive(Debug, Default, PartialEq)]
pub(crate) struct Extracted {
    pub title: String,
    pub paragraphs: Vec<String>,
    pub links: Vec<Link>,
    pub source_url: Option<String>,
}

struct HtmlPatterns {
    paragraph: Regex,
    anchor: Regex,
    tag: Regex,
    title: Regex,
    canonical: Regex,
    og_url: Regex,
    script: Regex,
    space: Regex,
}

fn html_patterns() -> &'static HtmlPatterns {
    static P: OnceLock<HtmlPatterns> = OnceLock::new();
    P.get_or_init(|| HtmlPatterns {
        paragraph: Regex::new(r"(?is)<p(?:\s[^>]*)?>(.*?)</p\s*>").unwrap(),
        anchor: Regex::new(r#"(?is)<a\s[^>]*?href\s*=\s*["']([^"']+)["']"#).unwrap(),
        tag: Regex::new(r"(?s)<[^>]*>").unwrap(),
        title: Regex::new(r"(?is)<title[^>]*>(.*?)</title\s*>").unwrap(),
        canonical: Regex::new(r#"(?is)<link\s[^>]*?rel\s*=\s*["']canonical["'][^>]*?href\s*=\s*["']([^"']+)["']"#)
            .unwrap(),
        og_url: Regex::new(r#"(?is)<meta\s[^>]*?property\s*=\s*["']og:url["'][^>]*?content\s*=\s*["']([^"']+)["']"#)
            .unwrap(),
        script: Regex::new(r"(?is)<(script|style)[^>]*>.*?</(script|style)\s*>").unwrap(),
        space: Regex::new(r"\s+").unwrap(),
    })
}

fn decode_entities(s: &str) -> String {
    static NUMERIC: OnceLock<Regex> = OnceLock::new();
    let numeric = NUMERIC.get_or_init(|| Regex::new(r"&#(x[0-9a-fA-F]+|[0-9]+);").unwrap());
    let s = numeric.replace_all(s, |c: &regex::Captures| {
        let code = &c[1];
        let value = match code.strip_prefix('x') {
            Some(hex) => u32::from_str_radix(hex, 16).ok(),
            None => code.parse().ok(),
        };
        value.and_then(char::from_u32).map(String::from).unwrap_or_default()
    });
    s.replace("&nbsp;", " ")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&#39;", "'")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&ldquo;", "\u{201C}")
        .replace("&rdquo;", "\u{201D}")
        .replace("&lsquo;", "\u{2018}")
        .replace("&rsquo;", "\u{2019}")
        .replace("&mdash;", "\u{2014}")
        .replace("&ndash;", "\u{2013}")
        .replace("&amp;", "&")
}

fn clean_text(fragment: &str) -> String {
    let p = html_patterns();
    let stripped = p.tag.replace_all(fragment, |c: &regex::Captures| {
        if c[0].to_ascii_lowercase().starts_with("<br") {
            " "
        } else {
            ""
        }
    });
    let text = decode_entities(&stripped);
    p.space.replace_all(text.trim(), " ").into_owned()
}

pub(crate) fn extract_html(html: &str) -> Extracted {
    let p = html_patterns();
    let html = p.script.replace_all(html, " ");
    let source_url = p
        .canonical
        .captures(&html)
        .or_else(|| p.og_url.captures(&html))
        .map(|c| decode_entities(&c[1]));
    let own_domain = source_url.as_deref().and_then(registrable_domain);
    let title = p
        .title
        .captures(&html)
        .map(|c| clean_text(&c[1]))
        .unwrap_or_default();
    let mut paragraphs = Vec::new();
    let mut links = Vec::new();
    for cap in p.paragraph.captures_iter(&html) {
        let inner = &cap[1];
        let text = clean_text(inner);
        if text.is_empty() {
            continue;
        }
        for a in p.anchor.captures_iter(inner) {
            let url = decode_entities(&a[1]);
            let external = match (registrable_domain(&url), own_domain.as_deref()) {
                (Some(d), Some(own)) => d != own,
                (Some(_), None) => true,
                (None, _) => false,
            };
            links.push(Link { url, external });
        }
        paragraphs.push(text);
    }
    Extracted {
        title,
        paragraphs,
        links,
        source_url,
    }
}

/// Registrable domain of an absolute URL (`https://edition.cnn.com/x` ->
/// `cnn.com`). Relative URLs and non-web schemes yield `None`.
pub fn registrable_domain(url: &str) -> Option<String> {
    let rest = url
        .strip_prefix("https://")
        .or_else(|| url.strip_prefix("http://"))
        .or_else(|| url.strip_prefix("//"))?;
    let authority = rest.split(['/', '?', '#']).next()?;
    let host = authority.rsplit('@').next()?.split(':').next()?.trim_end_matches('.');
    let host = host.to_lowercase();
    let labels: Vec<&str> = host.split('.').filter(|l| !l.is_empty()).collect();
    if labels.len() < 2 {
        return (!host.is_empty()).then_some(host);
    }
    let last_two = labels[labels.len() - 2..].join(".");
    let take = if TWO_LEVEL_SUFFIXES.contains(&last_two.as_str()) { 3 } else { 2 };
    Some(labels[labels.len().saturating_sub(take)..].join("."))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains() {
        assert_eq!(registrable_domain("https://edition.cnn.com/x?y").as_deref(), Some("cnn.com"));
        assert_eq!(registrable_domain("http://www.bbc.co.uk/news").as_deref(), Some("bbc.co.uk"));
        assert_eq!(registrable_domain("//Politico.COM:443/a").as_deref(), Some("politico.com"));
        assert_eq!(registrable_domain("/relative/path"), None);
        assert_eq!(registrable_domain("mailto:x@y.org"), None);
    }

    #[test]
    fn extracts_paragraphs_links_and_quotes() {
        let html = r#"<html><head><title>Big &amp; Bold</title>
            <link rel="canonical" href="https://www.example.com/story">
            <script>var p = "<p>not text</p>";</script></head><body>
            <p class="lead">He said &quot;no way&quot; to <a href="https://other.org/a">them</a>.</p>
            <p>See <a href="/local">here</a> and <a href="https://news.example.com/b">there</a>.</p>
            <p>   </p></body></html>"#;
        let e = extract_html(html);
        assert_eq!(e.title, "Big & Bold");
        assert_eq!(e.paragraphs, ["He said \"no way\" to them.", "See here and there."]);
        assert_eq!(
            e.links.iter().map(|l| l.external).collect::<Vec<_>>(),
            [true, false, false]
        );
        assert_eq!(e.source_url.as_deref(), Some("https://www.example.com/story"));
        assert_eq!(detect_quotes(&e.paragraphs).len(), 1);
    }

    #[test]
    fn converts_csv_with_archive() {
        let dir = tempfile::tempdir().unwrap();
        let archive = dir.path().join("articles");
        fs::create_dir(&archive).unwrap();
        let url_a = "https://www.facebook.com/cnn/posts/1";
        let url_b = "https://www.facebook.com/cnn/posts/2";
        fs::write(
            archive.join(format!("{}.html", archive_key(url_a))),
            "<title>A</title><p>Body text.</p>",
        )
        .unwrap();
        let csv = format!(
            "account_id,post_id,Category,Page,Post URL,Date Published,Post Type,Rating,Debate,share_count,reaction_count,comment_count\n\
             1,1_1,mainstream,CNN Politics,{url_a},2016-09-19,link,mostly true,,1,2,3\n\
             1,1_2,mainstream,CNN Politics,{url_b},2016-09-19,link,mostly false,,1,2,3\n\
             1,1_3,centre,CNN Politics,{url_b},2016-09-19,link,mostly false,,1,2,3\n"
        );
        let csv_path = dir.path().join("facebook-fact-check.csv");
        fs::write(&csv_path, csv).unwrap();
        let report = convert_buzzfeed(&csv_path, &archive).unwrap();
        assert_eq!(report.corpus.len(), 1);
        assert_eq!(report.corpus.articles()[0].rating, Rating::MostlyTrue);
        assert_eq!(report.missing, [url_b]);
        assert_eq!(report.rejected[0].field.as_deref(), Some("Category"));
        assert_eq!(report.rejected[0].line, 4);
    }
}
