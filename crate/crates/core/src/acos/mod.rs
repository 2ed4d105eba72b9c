//! Domain types for aspect-category-opinion-sentiment (ACOS) quadruples.
//!
//! A [`Quad`] keeps the token span of its aspect and opinion terms so that
//! generation-time ordering can use gold positions. Evaluation works on the
//! span-free [`SurfaceQuad`], which is all a generated string can carry.

mod dataset;
mod labels;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dataset::{load_dataset, parse_dataset, serialize_dataset, serialize_example, Split};
pub use labels::{
    characteristic_labels, Characteristic, CharacteristicLabels, ExplicitnessLabel, SentimentLabel,
};

/// Sentiment polarity. The derived order (negative < neutral < positive) is
/// used for canonical tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Negative,
    Neutral,
    Positive,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];

    /// Decodes the dataset integer code (0/1/2).
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Sentiment::Negative),
            1 => Some(Sentiment::Neutral),
            2 => Some(Sentiment::Positive),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Sentiment::Negative => 0,
            Sentiment::Neutral => 1,
            Sentiment::Positive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Negative => "negative",
            Sentiment::Neutral => "neutral",
            Sentiment::Positive => "positive",
        }
    }

    /// Case-insensitive inverse of [`Sentiment::as_str`].
    pub fn from_word(word: &str) -> Option<Self> {
        Sentiment::ALL
            .into_iter()
            .find(|s| s.as_str().eq_ignore_ascii_case(word))
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Location of a term in the owning sentence's whitespace token list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Span {
    Implicit,
    /// Half-open token range `[start, end)`.
    Explicit { start: usize, end: usize },
}

impl Span {
    pub fn is_explicit(&self) -> bool {
        matches!(self, Span::Explicit { .. })
    }

    pub fn end(&self) -> Option<usize> {
        match *self {
            Span::Explicit { end, .. } => Some(end),
            Span::Implicit => None,
        }
    }

    pub fn start(&self) -> Option<usize> {
        match *self {
            Span::Explicit { start, .. } => Some(start),
            Span::Implicit => None,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Span::Implicit => f.write_str("-1,-1"),
            Span::Explicit { start, end } => write!(f, "{start},{end}"),
        }
    }
}

/// An aspect or opinion term: a span plus its resolved text. The text is
/// empty iff the span is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    span: Span,
    text: String,
}

impl Term {
    pub fn implicit() -> Self {
        Term {
            span: Span::Implicit,
            text: String::new(),
        }
    }

    /// Resolves `[start, end)` against `tokens`.
    pub fn explicit<S: AsRef<str>>(tokens: &[S], start: usize, end: usize) -> Result<Self> {
        if start >= end || end > tokens.len() {
            return Err(Error::Shape(format!(
                "span {start},{end} out of bounds for {} tokens",
                tokens.len()
            )));
        }
        let text = tokens[start..end]
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(" ");
        Ok(Term {
            span: Span::Explicit { start, end },
            text,
        })
    }

    pub fn span(&self) -> Span {
        self.span
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn is_explicit(&self) -> bool {
        self.span.is_explicit()
    }

    /// The text, or `None` when implicit.
    pub fn surface(&self) -> Option<&str> {
        self.is_explicit().then_some(self.text.as_str())
    }
}

/// Explicit/implicit combination of a quadruple's aspect and opinion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QuadType {
    Eaeo,
    Iaeo,
    Eaio,
    Iaio,
}

impl QuadType {
    pub const ALL: [QuadType; 4] = [QuadType::Eaeo, QuadType::Iaeo, QuadType::Eaio, QuadType::Iaio];

    pub fn from_explicitness(aspect_explicit: bool, opinion_explicit: bool) -> Self {
        match (aspect_explicit, opinion_explicit) {
            (true, true) => QuadType::Eaeo,
            (false, true) => QuadType::Iaeo,
            (true, false) => QuadType::Eaio,
            (false, false) => QuadType::Iaio,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuadType::Eaeo => "EAEO",
            QuadType::Iaeo => "IAEO",
            QuadType::Eaio => "EAIO",
            QuadType::Iaio => "IAIO",
        }
    }
}

impl fmt::Display for QuadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A gold quadruple with span information.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub aspect: Term,
    pub category: String,
    pub opinion: Term,
    pub sentiment: Sentiment,
}

impl Quad {
    pub fn quad_type(&self) -> QuadType {
        quad_type(self)
    }

    pub fn surface(&self) -> SurfaceQuad {
        SurfaceQuad {
            aspect: self.aspect.surface().map(str::to_owned),
            category: self.category.clone(),
            opinion: self.opinion.surface().map(str::to_owned),
            sentiment: self.sentiment,
        }
    }
}

/// Classifies a quadruple by the explicitness of its aspect and opinion.
pub fn quad_type(q: &Quad) -> QuadType {
    QuadType::from_explicitness(q.aspect.is_explicit(), q.opinion.is_explicit())
}

/// A span-free quadruple: what a generated output can express and what
/// exact-match evaluation compares. `None` marks an implicit term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceQuad {
    pub aspect: Option<String>,
    pub category: String,
    pub opinion: Option<String>,
    pub sentiment: Sentiment,
}

impl SurfaceQuad {
    pub fn new(
        aspect: Option<&str>,
        category: &str,
        opinion: Option<&str>,
        sentiment: Sentiment,
    ) -> Self {
        SurfaceQuad {
            aspect: aspect.map(str::to_owned),
            category: category.to_owned(),
            opinion: opinion.map(str::to_owned),
            sentiment,
        }
    }

    pub fn quad_type(&self) -> QuadType {
        QuadType::from_explicitness(self.aspect.is_some(), self.opinion.is_some())
    }
}

/// A review sentence with its gold quadruple set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub id: String,
    pub text: String,
    pub tokens: Vec<String>,
    pub quads: Vec<Quad>,
}

impl Example {
    /// Tokenizes `text` on whitespace. Quadruples are kept in the given
    /// order; exact duplicates are dropped.
    pub fn new(id: impl Into<String>, text: impl Into<String>, quads: Vec<Quad>) -> Result<Self> {
        let text = text.into();
        let tokens: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
        for q in &quads {
            for term in [&q.aspect, &q.opinion] {
                if let Span::Explicit { start, end } = term.span {
                    if start >= end || end > tokens.len() {
                        return Err(Error::Shape(format!(
                            "span {start},{end} out of bounds for {} tokens",
                            tokens.len()
                        )));
                    }
                }
            }
        }
        let mut unique: Vec<Quad> = Vec::with_capacity(quads.len());
        for q in quads {
            if !unique.contains(&q) {
                unique.push(q);
            }
        }
        Ok(Example {
            id: id.into(),
            text,
            tokens,
            quads: unique,
        })
    }

    /// Deduplicated surface forms of the gold quadruples, in input order.
    pub fn surface_quads(&self) -> Vec<SurfaceQuad> {
        let mut out: Vec<SurfaceQuad> = Vec::with_capacity(self.quads.len());
        for q in &self.quads {
            let s = q.surface();
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    /// Number of quadruples of each type, indexed like [`QuadType::ALL`].
    pub fn type_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for q in &self.quads {
            counts[q.quad_type() as usize] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn quad_types_follow_explicitness() {
        let t = toks("the pizza was great");
        let a = Term::explicit(&t, 1, 2).unwrap();
        let o = Term::explicit(&t, 3, 4).unwrap();
        let mk = |a: Term, o: Term| Quad {
            aspect: a,
            category: "FOOD#QUALITY".into(),
            opinion: o,
            sentiment: Sentiment::Positive,
        };
        assert_eq!(quad_type(&mk(a.clone(), o.clone())), QuadType::Eaeo);
        assert_eq!(quad_type(&mk(Term::implicit(), o.clone())), QuadType::Iaeo);
        assert_eq!(quad_type(&mk(a, Term::implicit())), QuadType::Eaio);
        assert_eq!(
            quad_type(&mk(Term::implicit(), Term::implicit())),
            QuadType::Iaio
        );
    }

    #[test]
    fn explicit_term_resolves_text() {
        let t = toks("fish and chips were tasty");
        let term = Term::explicit(&t, 0, 3).unwrap();
        assert_eq!(term.text(), "fish and chips");
        assert_eq!(term.surface(), Some("fish and chips"));
        assert!(Term::explicit(&t, 3, 3).is_err());
        assert!(Term::explicit(&t, 4, 6).is_err());
        assert_eq!(Term::implicit().surface(), None);
        assert_eq!(Term::implicit().text(), "");
    }

    #[test]
    fn example_dedups_exact_duplicates() {
        let q = Quad {
            aspect: Term::implicit(),
            category: "SERVICE#GENERAL".into(),
            opinion: Term::implicit(),
            sentiment: Sentiment::Negative,
        };
        let x = Example::new("x", "it took an hour", vec![q.clone(), q]).unwrap();
        assert_eq!(x.quads.len(), 1);
    }

    #[test]
    fn sentiment_words_are_case_insensitive() {
        assert_eq!(Sentiment::from_word("Positive"), Some(Sentiment::Positive));
        assert_eq!(Sentiment::from_word("NEGATIVE"), Some(Sentiment::Negative));
        assert_eq!(Sentiment::from_word("okay"), None);
        assert!(Sentiment::Negative < Sentiment::Neutral && Sentiment::Neutral < Sentiment::Positive);
    }
}
