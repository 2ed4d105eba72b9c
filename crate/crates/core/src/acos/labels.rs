//! Example-level characteristic labels for the contrastive heads.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Example;
use crate::error::{Error, Result};

/// The three characteristics that each get a projection head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Characteristic {
    Sentiment,
    Aspect,
    Opinion,
}

impl Characteristic {
    pub const ALL: [Characteristic; 3] = [
        Characteristic::Sentiment,
        Characteristic::Aspect,
        Characteristic::Opinion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Characteristic::Sentiment => "sentiment",
            Characteristic::Aspect => "aspect",
            Characteristic::Opinion => "opinion",
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplicitnessLabel {
    AllExplicit,
    AllImplicit,
    Mixed,
}

impl SentimentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Negative => "negative",
            SentimentLabel::Neutral => "neutral",
            SentimentLabel::Positive => "positive",
            SentimentLabel::Mixed => "mixed",
        }
    }
}

impl ExplicitnessLabel {
    fn from_flags(any_explicit: bool, any_implicit: bool) -> Self {
        match (any_explicit, any_implicit) {
            (true, true) => ExplicitnessLabel::Mixed,
            (false, true) => ExplicitnessLabel::AllImplicit,
            _ => ExplicitnessLabel::AllExplicit,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ExplicitnessLabel::AllExplicit => "all-explicit",
            ExplicitnessLabel::AllImplicit => "all-implicit",
            ExplicitnessLabel::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacteristicLabels {
    pub sentiment: SentimentLabel,
    pub aspect: ExplicitnessLabel,
    pub opinion: ExplicitnessLabel,
}

impl CharacteristicLabels {
    pub fn label(&self, c: Characteristic) -> &'static str {
        match c {
            Characteristic::Sentiment => self.sentiment.as_str(),
            Characteristic::Aspect => self.aspect.as_str(),
            Characteristic::Opinion => self.opinion.as_str(),
        }
    }
}

/// Derives the sentiment, aspect and opinion labels of an example.
///
/// Sentiment is the shared polarity when every quadruple agrees and `mixed`
/// otherwise; aspect/opinion are `mixed` iff both explicit and implicit terms
/// occur.
pub fn characteristic_labels(x: &Example) -> Result<CharacteristicLabels> {
    let first = x.quads.first().ok_or(Error::NoQuadruples)?;
    let sentiment = if x.quads.iter().all(|q| q.sentiment == first.sentiment) {
        match first.sentiment {
            super::Sentiment::Negative => SentimentLabel::Negative,
            super::Sentiment::Neutral => SentimentLabel::Neutral,
            super::Sentiment::Positive => SentimentLabel::Positive,
        }
    } else {
        SentimentLabel::Mixed
    };
    let flags = |explicit: fn(&super::Quad) -> bool| {
        let any_e = x.quads.iter().any(explicit);
        let any_i = x.quads.iter().any(|q| !explicit(q));
        ExplicitnessLabel::from_flags(any_e, any_i)
    };
    Ok(CharacteristicLabels {
        sentiment,
        aspect: flags(|q| q.aspect.is_explicit()),
        opinion: flags(|q| q.opinion.is_explicit()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acos::{parse_dataset, Split};

    fn one(line: &str) -> Example {
        parse_dataset(line, Split::Train).unwrap().remove(0)
    }

    #[test]
    fn unanimous_example() {
        let x = one("good pizza and great pasta\t1,2 FOOD#QUALITY 2 0,1\t4,5 FOOD#QUALITY 2 3,4");
        let l = characteristic_labels(&x).unwrap();
        assert_eq!(l.sentiment, SentimentLabel::Positive);
        assert_eq!(l.aspect, ExplicitnessLabel::AllExplicit);
        assert_eq!(l.opinion, ExplicitnessLabel::AllExplicit);
    }

    #[test]
    fn disagreeing_polarity_is_mixed() {
        let x = one("good pizza bad pasta\t1,2 FOOD#QUALITY 2 0,1\t3,4 FOOD#QUALITY 0 2,3");
        assert_eq!(characteristic_labels(&x).unwrap().sentiment, SentimentLabel::Mixed);
    }

    #[test]
    fn explicit_and_implicit_aspects_are_mixed() {
        let x = one("good pizza overpriced\t1,2 FOOD#QUALITY 2 0,1\t-1,-1 RESTAURANT#PRICES 0 2,3");
        let l = characteristic_labels(&x).unwrap();
        assert_eq!(l.aspect, ExplicitnessLabel::Mixed);
        assert_eq!(l.opinion, ExplicitnessLabel::AllExplicit);
        assert_eq!(l.label(Characteristic::Aspect), "mixed");
    }

    #[test]
    fn all_implicit() {
        let x = one("it took an hour\t-1,-1 SERVICE#GENERAL 0 -1,-1");
        let l = characteristic_labels(&x).unwrap();
        assert_eq!(l.aspect, ExplicitnessLabel::AllImplicit);
        assert_eq!(l.opinion, ExplicitnessLabel::AllImplicit);
        assert_eq!(l.sentiment, SentimentLabel::Negative);
    }

    #[test]
    fn empty_example_is_an_error() {
        let x = Example::new("e", "nothing here", vec![]).unwrap();
        assert!(matches!(characteristic_labels(&x), Err(Error::NoQuadruples)));
    }
}
