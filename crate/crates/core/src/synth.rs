//! Seeded synthetic review corpus with restaurant-style categories.
//!
//! Vocabulary correlates with every characteristic: explicit aspects are
//! category nouns, implicit ones pronoun subjects; explicit opinions are
//! polarity adjectives, implicit ones polarity-bearing clauses that are not
//! annotated as spans. Some aspect terms contain ` and ` or ` is ` to
//! exercise the target parser.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acos::{Example, Quad, QuadType, Sentiment, Term};

pub const ASPECTS: [(&str, &[&str]); 9] = [
    ("FOOD#QUALITY", &["pizza", "fish and chips", "sushi", "pasta", "burger"]),
    ("FOOD#PRICES", &["lunch special", "entrees"]),
    ("FOOD#STYLE_OPTIONS", &["portions", "menu selection"]),
    ("SERVICE#GENERAL", &["waiter", "staff", "service"]),
    ("AMBIENCE#GENERAL", &["decor", "music", "patio"]),
    ("DRINKS#QUALITY", &["wine list", "coffee"]),
    ("LOCATION#GENERAL", &["location", "neighborhood"]),
    ("RESTAURANT#PRICES", &["prices", "bill"]),
    ("RESTAURANT#MISCELLANEOUS", &["what is included", "reservation system"]),
];

fn opinions(s: Sentiment) -> &'static [&'static str] {
    match s {
        Sentiment::Positive => &["great", "delicious", "friendly", "amazing", "fresh", "wonderful"],
        Sentiment::Negative => &["awful", "rude", "bland", "terrible", "overpriced", "greasy"],
        Sentiment::Neutral => &["average", "okay", "standard", "fine"],
    }
}

fn implicit_clauses(s: Sentiment) -> &'static [&'static str] {
    match s {
        Sentiment::Positive => &["we will come back", "worth every penny", "left with a smile"],
        Sentiment::Negative => &["we waited an hour", "never again", "sent it back twice"],
        Sentiment::Neutral => &["nothing to write home about", "as expected", "what you would expect"],
    }
}

const SUBJECTS: [&str; 3] = ["everything", "they", "this"];
const FILLERS: [&str; 5] = ["honestly", "overall", "last night", "on friday", "for a weekday"];

/// Generates `n` examples with 1 to 3 quadruples each. Quadruple types,
/// categories and polarities are drawn uniformly.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<Example> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| synthetic_example(&mut rng, format!("synth-{i}"))).collect()
}

fn synthetic_example(rng: &mut impl Rng, id: String) -> Example {
    let mut tokens: Vec<String> = Vec::new();
    let push = |tokens: &mut Vec<String>, phrase: &str| -> (usize, usize) {
        let start = tokens.len();
        tokens.extend(phrase.split_whitespace().map(str::to_owned));
        (start, tokens.len())
    };
    if rng.random_bool(0.5) {
        push(&mut tokens, FILLERS.choose(rng).unwrap());
    }
    let k = rng.random_range(1..=3);
    let mut specs = Vec::new();
    for j in 0..k {
        if j > 0 {
            push(&mut tokens, "and");
        }
        let qtype = *QuadType::ALL.choose(rng).unwrap();
        let (category, nouns) = *ASPECTS.choose(rng).unwrap();
        let sentiment = *Sentiment::ALL.choose(rng).unwrap();
        let opinion_word = *opinions(sentiment).choose(rng).unwrap();
        let clause = *implicit_clauses(sentiment).choose(rng).unwrap();
        let noun = *nouns.choose(rng).unwrap();
        let (aspect, opinion) = match qtype {
            QuadType::Eaeo => {
                push(&mut tokens, "the");
                let a = push(&mut tokens, noun);
                push(&mut tokens, "was");
                (Some(a), Some(push(&mut tokens, opinion_word)))
            }
            QuadType::Iaeo => {
                push(&mut tokens, SUBJECTS.choose(rng).unwrap());
                push(&mut tokens, "was");
                (None, Some(push(&mut tokens, opinion_word)))
            }
            QuadType::Eaio => {
                push(&mut tokens, "about the");
                let a = push(&mut tokens, noun);
                push(&mut tokens, clause);
                (Some(a), None)
            }
            QuadType::Iaio => {
                push(&mut tokens, clause);
                (None, None)
            }
        };
        specs.push((aspect, category, opinion, sentiment));
    }
    let term = |span: Option<(usize, usize)>| match span {
        Some((s, e)) => Term::explicit(&tokens, s, e).expect("span built in bounds"),
        None => Term::implicit(),
    };
    let quads = specs
        .iter()
        .map(|&(a, c, o, s)| Quad {
            aspect: term(a),
            category: c.to_owned(),
            opinion: term(o),
            sentiment: s,
        })
        .collect();
    Example::new(id, tokens.join(" "), quads).expect("spans built in bounds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acos::{parse_dataset, serialize_dataset, Split};

    #[test]
    fn seeded_and_valid() {
        let a = synthetic_corpus(50, 1);
        assert_eq!(a, synthetic_corpus(50, 1));
        assert_ne!(a, synthetic_corpus(50, 2));
        for x in &a {
            assert!((1..=3).contains(&x.quads.len()) || x.quads.len() < 3);
            assert!(!x.quads.is_empty());
        }
    }

    #[test]
    fn serializes_as_dataset() {
        let xs = synthetic_corpus(30, 4);
        let text = serialize_dataset(&xs);
        let back = parse_dataset(&text, Split::Train).unwrap();
        assert_eq!(serialize_dataset(&back), text);
        for (x, y) in xs.iter().zip(&back) {
            assert_eq!(x.quads, y.quads);
        }
    }

    #[test]
    fn covers_all_quad_types() {
        let xs = synthetic_corpus(100, 0);
        for t in QuadType::ALL {
            assert!(xs.iter().any(|x| x.quads.iter().any(|q| q.quad_type() == t)));
        }
    }
}
