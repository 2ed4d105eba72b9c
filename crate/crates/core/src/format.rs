//! Linearization of quadruple sets into generation targets.
//!
//! Two target styles are supported:
//!
//! * [`FormatStyle::GenNat`]:
//!   `<category description> | the <aspect> is <opinion> | <sentiment>`
//! * [`FormatStyle::Paraphrase`]:
//!   `<RAW#CATEGORY> is <great|okay|bad> because <aspect> is <opinion>`
//!
//! Implicit aspects are written `it` and implicit opinions `null`. Quads are
//! joined with [`QUAD_SEPARATOR`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::acos::{Example, Quad, Sentiment};
use crate::category::CategoryMap;
use crate::error::{Error, Result};

pub const QUAD_SEPARATOR: &str = " [SSEP] ";
pub const IMPLICIT_ASPECT: &str = "it";
pub const IMPLICIT_OPINION: &str = "null";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatStyle {
    #[default]
    GenNat,
    Paraphrase,
}

impl FormatStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            FormatStyle::GenNat => "gen-nat",
            FormatStyle::Paraphrase => "paraphrase",
        }
    }
}

impl fmt::Display for FormatStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormatStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "gen-nat" | "nat" => Ok(FormatStyle::GenNat),
            "paraphrase" => Ok(FormatStyle::Paraphrase),
            _ => Err(Error::Config(format!("unknown format style {s:?}"))),
        }
    }
}

/// Sentiment words of the paraphrase style.
pub fn paraphrase_word(s: Sentiment) -> &'static str {
    match s {
        Sentiment::Positive => "great",
        Sentiment::Neutral => "okay",
        Sentiment::Negative => "bad",
    }
}

pub(crate) fn paraphrase_sentiment(word: &str) -> Option<Sentiment> {
    Sentiment::ALL
        .into_iter()
        .find(|s| paraphrase_word(*s).eq_ignore_ascii_case(word))
}

/// Renders one quadruple.
pub fn linearize_quad(q: &Quad, style: FormatStyle, map: &CategoryMap) -> Result<String> {
    let opinion = q.opinion.surface().unwrap_or(IMPLICIT_OPINION);
    match style {
        FormatStyle::GenNat => {
            let desc = map.describe(&q.category)?;
            let subject = match q.aspect.surface() {
                Some(a) => format!("the {a}"),
                None => IMPLICIT_ASPECT.to_owned(),
            };
            Ok(format!("{desc} | {subject} is {opinion} | {}", q.sentiment))
        }
        FormatStyle::Paraphrase => {
            if !map.contains_raw(&q.category) {
                map.describe(&q.category)?;
            }
            let aspect = q.aspect.surface().unwrap_or(IMPLICIT_ASPECT);
            Ok(format!(
                "{} is {} because {aspect} is {opinion}",
                q.category,
                paraphrase_word(q.sentiment)
            ))
        }
    }
}

/// Scan order: quads with an explicit term come first, ascending by the
/// largest end index among their explicit spans; fully implicit quads come
/// last, ordered by category then sentiment.
pub fn order_quads(x: &Example) -> Vec<&Quad> {
    let mut quads: Vec<&Quad> = x.quads.iter().collect();
    quads.sort_by(|a, b| scan_cmp(a, b));
    quads
}

fn scan_key(q: &Quad) -> Option<usize> {
    q.aspect.span().end().max(q.opinion.span().end())
}

fn scan_cmp(a: &Quad, b: &Quad) -> Ordering {
    // `None` (no explicit span) sorts after every position.
    let pos = |s: Option<usize>| s.unwrap_or(usize::MAX);
    pos(scan_key(a))
        .cmp(&pos(scan_key(b)))
        .then_with(|| pos(a.aspect.span().start()).cmp(&pos(b.aspect.span().start())))
        .then_with(|| pos(a.opinion.span().start()).cmp(&pos(b.opinion.span().start())))
        .then_with(|| a.category.cmp(&b.category))
        .then_with(|| a.sentiment.cmp(&b.sentiment))
        .then_with(|| a.cmp(b))
}

/// Renders an example's full target string.
pub fn linearize_example(x: &Example, style: FormatStyle, map: &CategoryMap) -> Result<String> {
    if x.quads.is_empty() {
        return Err(Error::NoQuadruples);
    }
    let parts = order_quads(x)
        .into_iter()
        .map(|q| linearize_quad(q, style, map))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.join(QUAD_SEPARATOR))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acos::{parse_dataset, Split, Term};

    fn map() -> CategoryMap {
        CategoryMap::from_tsv(
            "FOOD#QUALITY\tthe food quality\nFOOD#PRICES\tthe food prices\nLOCATION#GENERAL\tthe location\nSERVICE#GENERAL\tthe service\n",
        )
        .unwrap()
    }

    fn quad(
        tokens: &[&str],
        aspect: Option<(usize, usize)>,
        cat: &str,
        opinion: Option<(usize, usize)>,
        s: Sentiment,
    ) -> Quad {
        let term = |span: Option<(usize, usize)>| match span {
            Some((a, b)) => Term::explicit(tokens, a, b).unwrap(),
            None => Term::implicit(),
        };
        Quad {
            aspect: term(aspect),
            category: cat.into(),
            opinion: term(opinion),
            sentiment: s,
        }
    }

    #[test]
    fn gen_nat_explicit() {
        let t = ["the", "pizza", "is", "delicious"];
        let q = quad(&t, Some((1, 2)), "FOOD#QUALITY", Some((3, 4)), Sentiment::Positive);
        assert_eq!(
            linearize_quad(&q, FormatStyle::GenNat, &map()).unwrap(),
            "the food quality | the pizza is delicious | positive"
        );
        assert_eq!(
            linearize_quad(&q, FormatStyle::Paraphrase, &map()).unwrap(),
            "FOOD#QUALITY is great because pizza is delicious"
        );
    }

    #[test]
    fn gen_nat_implicit_aspect_drops_article() {
        let t = ["too", "far"];
        let q = quad(&t, None, "LOCATION#GENERAL", Some((1, 2)), Sentiment::Negative);
        assert_eq!(
            linearize_quad(&q, FormatStyle::GenNat, &map()).unwrap(),
            "the location | it is far | negative"
        );
        let q = quad(&t, None, "LOCATION#GENERAL", None, Sentiment::Neutral);
        assert_eq!(
            linearize_quad(&q, FormatStyle::GenNat, &map()).unwrap(),
            "the location | it is null | neutral"
        );
        assert_eq!(
            linearize_quad(&q, FormatStyle::Paraphrase, &map()).unwrap(),
            "LOCATION#GENERAL is okay because it is null"
        );
    }

    #[test]
    fn unknown_category_is_an_error() {
        let q = quad(&["x"], None, "DRINKS#QUALITY", None, Sentiment::Neutral);
        assert!(matches!(
            linearize_quad(&q, FormatStyle::GenNat, &map()),
            Err(Error::UnknownCategory { .. })
        ));
        assert!(linearize_quad(&q, FormatStyle::Paraphrase, &map()).is_err());
    }

    #[test]
    fn scan_order_uses_last_explicit_end() {
        let t: Vec<&str> = "a b c d e f g h".split(' ').collect();
        let qa = quad(&t, Some((5, 7)), "FOOD#QUALITY", None, Sentiment::Positive);
        let qb = quad(&t, None, "FOOD#PRICES", Some((2, 4)), Sentiment::Negative);
        let x = Example::new("x", t.join(" "), vec![qa.clone(), qb.clone()]).unwrap();
        assert_eq!(order_quads(&x), vec![&qb, &qa]);
    }

    #[test]
    fn fully_implicit_quads_go_last() {
        let t: Vec<&str> = "a b c d e f g h".split(' ').collect();
        let iaio = quad(&t, None, "FOOD#PRICES", None, Sentiment::Negative);
        let eaeo = quad(&t, Some((2, 3)), "FOOD#QUALITY", Some((5, 6)), Sentiment::Positive);
        let x = Example::new("x", t.join(" "), vec![iaio.clone(), eaeo.clone()]).unwrap();
        assert_eq!(order_quads(&x), vec![&eaeo, &iaio]);
    }

    #[test]
    fn implicit_ties_break_on_category() {
        let xs = parse_dataset(
            "pricey but good\t-1,-1 FOOD#QUALITY 2 -1,-1\t-1,-1 FOOD#PRICES 0 -1,-1",
            Split::Test,
        )
        .unwrap();
        let order: Vec<&str> = order_quads(&xs[0]).iter().map(|q| q.category.as_str()).collect();
        assert_eq!(order, ["FOOD#PRICES", "FOOD#QUALITY"]);
        assert_eq!(order_quads(&xs[0]), order_quads(&xs[0]));
    }

    #[test]
    fn example_joins_with_separator() {
        let xs = parse_dataset(
            "the pizza is delicious but slow service\t1,2 FOOD#QUALITY 2 3,4\t6,7 SERVICE#GENERAL 0 5,6\n\
             the pizza is delicious\t1,2 FOOD#QUALITY 2 3,4\n",
            Split::Test,
        )
        .unwrap();
        let m = map();
        assert_eq!(
            linearize_example(&xs[0], FormatStyle::GenNat, &m).unwrap(),
            "the food quality | the pizza is delicious | positive [SSEP] the service | the service is slow | negative"
        );
        assert_eq!(
            linearize_example(&xs[1], FormatStyle::GenNat, &m).unwrap(),
            "the food quality | the pizza is delicious | positive"
        );
        let mut reversed = xs[0].clone();
        reversed.quads.reverse();
        assert_eq!(
            linearize_example(&reversed, FormatStyle::GenNat, &m).unwrap(),
            linearize_example(&xs[0], FormatStyle::GenNat, &m).unwrap()
        );
    }

    #[test]
    fn style_names_parse() {
        assert_eq!("gen-nat".parse::<FormatStyle>().unwrap(), FormatStyle::GenNat);
        assert_eq!("GEN_NAT".parse::<FormatStyle>().unwrap(), FormatStyle::GenNat);
        assert_eq!("paraphrase".parse::<FormatStyle>().unwrap(), FormatStyle::Paraphrase);
        assert!("json".parse::<FormatStyle>().is_err());
    }
}
