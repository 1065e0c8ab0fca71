//! Seeded generator of small synthetic news corpora.
//!
//! Used for fixtures and smoke runs when the annotated corpus is unavailable.
//! Hyperpartisan publishers (left and right) share one writing style and
//! differ from each other mostly in topic vocabulary; mainstream and satire
//! each have their own style. Every publisher also has a few signature words.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Article, Corpus, Link, Orientation, Rating};
use crate::seed;
use crate::textproc::detect_quotes;

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub publishers_per_orientation: usize,
    pub articles_per_publisher: usize,
    /// Satire articles from a single extra publisher; zero for none.
    pub satire_articles: usize,
    /// Probability that a sentence carries its orientation's style markers.
    pub style_strength: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            publishers_per_orientation: 3,
            articles_per_publisher: 20,
            satire_articles: 0,
            style_strength: 0.6,
            seed: 1,
        }
    }
}

const FUNCTION: &[&str] = &[
    "the", "a", "of", "to", "and", "in", "that", "for", "on", "with", "as", "was", "is", "it", "by", "at",
    "from", "this", "be", "have", "has", "an", "which", "their", "they", "are", "not", "but", "or", "its",
];
const CONTENT: &[&str] = &[
    "government", "state", "people", "week", "report", "plan", "officials", "campaign", "election", "vote",
    "policy", "country", "city", "law", "office", "money", "support", "issue", "public", "leaders", "group",
    "statement", "meeting", "members", "program", "system", "debate", "voters", "question", "change",
    "security", "economy", "health", "court", "rally", "candidate", "news", "press", "night", "year",
];
const VERBS: &[&str] = &[
    "said", "told", "made", "took", "announced", "called", "wanted", "asked", "showed", "found", "gave",
    "reported", "claimed", "noted", "added", "argued", "expected", "released", "planned", "raised",
];
const MAINSTREAM_STYLE: &[&str] = &[
    "according", "percent", "however", "additionally", "spokesperson", "analysis", "previously", "survey",
    "approximately", "respectively", "official", "department", "administration", "legislation",
];
const PARTISAN_STYLE: &[&str] = &[
    "totally", "absolutely", "disgusting", "shocking", "you", "your", "we", "our", "insane", "must",
    "never", "truth", "lies", "outrageous", "pathetic", "destroy", "share", "wow",
];
const LEFT_TOPIC: &[&str] = &["republicans", "trump", "gop", "billionaires", "racist", "bigots", "koch"];
const RIGHT_TOPIC: &[&str] = &["hillary", "liberals", "obama", "democrats", "leftists", "mainstream", "elites"];
const SATIRE_STYLE: &[&str] = &[
    "reportedly", "unnamed", "sources", "confirmed", "local", "man", "woman", "area", "spokesbeing",
    "nation", "giant", "ferret", "accidentally", "miracle", "clone", "toaster", "galaxy",
];

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

fn capitalize(w: &str) -> String {
    let mut cs = w.chars();
    match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => String::new(),
    }
}

struct Style {
    sentence_len: (usize, usize),
    paragraphs: (usize, usize),
    sentences_per_paragraph: (usize, usize),
    markers: Vec<&'static str>,
    exclaim: f64,
    quote: f64,
    external_links: (usize, usize),
    internal_links: (usize, usize),
}

fn style_for(o: Orientation) -> Style {
    match o {
        Orientation::Mainstream => Style {
            sentence_len: (14, 24),
            paragraphs: (8, 14),
            sentences_per_paragraph: (1, 3),
            markers: MAINSTREAM_STYLE.to_vec(),
            exclaim: 0.0,
            quote: 0.15,
            external_links: (0, 3),
            internal_links: (1, 3),
        },
        Orientation::Left | Orientation::Right => Style {
            sentence_len: (6, 13),
            paragraphs: (4, 10),
            sentences_per_paragraph: (1, 2),
            markers: PARTISAN_STYLE.to_vec(),
            exclaim: 0.25,
            quote: 0.25,
            external_links: (2, 6),
            internal_links: (0, 1),
        },
        Orientation::Satire => Style {
            sentence_len: (10, 18),
            paragraphs: (4, 8),
            sentences_per_paragraph: (1, 3),
            markers: SATIRE_STYLE.to_vec(),
            exclaim: 0.05,
            quote: 0.3,
            external_links: (0, 1),
            internal_links: (0, 1),
        },
    }
}

fn sentence(rng: &mut ChaCha8Rng, style: &Style, topic: &[&str], signature: &[String], strength: f64) -> String {
    let len = rng.gen_range(style.sentence_len.0..=style.sentence_len.1);
    let styled = rng.gen_bool(strength);
    let mut words: Vec<String> = Vec::with_capacity(len);
    for i in 0..len {
        let r: f64 = rng.gen();
        let w = if styled && r < 0.15 {
            pick(rng, &style.markers).to_string()
        } else if r < 0.22 && !topic.is_empty() {
            pick(rng, topic).to_string()
        } else if r < 0.25 && !signature.is_empty() {
            signature[rng.gen_range(0..signature.len())].clone()
        } else if r < 0.6 {
            pick(rng, FUNCTION).to_string()
        } else if r < 0.8 || i == 0 {
            pick(rng, CONTENT).to_string()
        } else {
            pick(rng, VERBS).to_string()
        };
        words.push(w);
    }
    words[0] = capitalize(&words[0]);
    let end = if styled && rng.gen_bool(style.exclaim) { "!" } else { "." };
    if rng.gen_bool(style.quote) && len > 4 {
        let cut = rng.gen_range(2..len - 1);
        let (head, tail) = words.split_at(cut);
        format!("{} \"{}{end}\"", head.join(" "), tail.join(" "))
    } else {
        format!("{}{end}", words.join(" "))
    }
}

fn rating_for(rng: &mut ChaCha8Rng, o: Orientation) -> Rating {
    let r: f64 = rng.gen();
    match o {
        Orientation::Satire => Rating::Unrated,
        Orientation::Mainstream => match r {
            r if r < 0.95 => Rating::MostlyTrue,
            r if r < 0.97 => Rating::Mixture,
            _ => Rating::NoFactual,
        },
        Orientation::Left | Orientation::Right => match r {
            r if r < 0.55 => Rating::MostlyTrue,
            r if r < 0.80 => Rating::Mixture,
            r if r < 0.92 => Rating::MostlyFalse,
            _ => Rating::NoFactual,
        },
    }
}

fn article(rng: &mut ChaCha8Rng, id: String, publisher: &str, o: Orientation, strength: f64) -> Article {
    let style = style_for(o);
    let topic: &[&str] = match o {
        Orientation::Left => LEFT_TOPIC,
        Orientation::Right => RIGHT_TOPIC,
        _ => &[],
    };
    let slug = publisher.to_lowercase().replace(' ', "");
    let signature: Vec<String> = (0..3).map(|i| format!("{slug}{i}")).collect();
    let n_par = rng.gen_range(style.paragraphs.0..=style.paragraphs.1);
    let paragraphs: Vec<String> = (0..n_par)
        .map(|_| {
            let n = rng.gen_range(style.sentences_per_paragraph.0..=style.sentences_per_paragraph.1);
            (0..n)
                .map(|_| sentence(rng, &style, topic, &signature, strength))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let domain = format!("{slug}.com");
    let mut links: Vec<Link> = (0..rng.gen_range(style.external_links.0..=style.external_links.1))
        .map(|i| Link {
            url: format!("https://source{i}.org/story"),
            external: true,
        })
        .collect();
    links.extend(
        (0..rng.gen_range(style.internal_links.0..=style.internal_links.1)).map(|i| Link {
            url: format!("https://www.{domain}/related/{i}"),
            external: false,
        }),
    );
    links.shuffle(rng);
    Article {
        title: capitalize(&format!("{} {} {}", pick(rng, CONTENT), pick(rng, VERBS), pick(rng, CONTENT))),
        quoted_spans: detect_quotes(&paragraphs),
        source_url: Some(format!("https://www.{domain}/{id}")),
        rating: rating_for(rng, o),
        id,
        publisher: publisher.to_string(),
        orientation: o,
        paragraphs,
        links,
    }
}

/// Generate a corpus. Output is a pure function of the config.
pub fn generate(config: &SyntheticConfig) -> Corpus {
    let mut articles = Vec::new();
    let mut stream = 0u64;
    for o in [Orientation::Mainstream, Orientation::Left, Orientation::Right] {
        for p in 0..config.publishers_per_orientation {
            let publisher = format!("{} Pub {}", capitalize(o.as_str()), p + 1);
            for j in 0..config.articles_per_publisher {
                let mut rng = seed::rng(config.seed, stream);
                stream += 1;
                let id = format!("{}-{}-{j:04}", o.as_str(), p + 1);
                articles.push(article(&mut rng, id, &publisher, o, config.style_strength));
            }
        }
    }
    for j in 0..config.satire_articles {
        let mut rng = seed::rng(config.seed, stream);
        stream += 1;
        articles.push(article(
            &mut rng,
            format!("satire-{j:04}"),
            "Satire Daily",
            Orientation::Satire,
            config.style_strength,
        ));
    }
    Corpus::new(articles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let cfg = SyntheticConfig {
            satire_articles: 5,
            ..Default::default()
        };
        let a = generate(&cfg);
        assert_eq!(a, generate(&cfg));
        assert_eq!(a.len(), 9 * 20 + 5);
        assert_eq!(a.publishers(Orientation::Left).len(), 3);
        for art in a.iter() {
            art.validate().unwrap();
        }
        let other = generate(&SyntheticConfig { seed: 2, ..cfg });
        assert_ne!(a, other);
    }
}
