//! Recovery of quadruples from generated target strings.
//!
//! Parsing never fails as a whole: every `[SSEP]`-delimited segment that
//! cannot be read is dropped, counted and described in a warning, so that
//! partially malformed model outputs can still be scored.

use serde::Serialize;

use crate::acos::{Sentiment, SurfaceQuad};
use crate::category::CategoryMap;
use crate::format::{paraphrase_sentiment, FormatStyle, IMPLICIT_ASPECT, IMPLICIT_OPINION};

const SEGMENT_SEPARATOR: &str = "[SSEP]";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseOutcome {
    /// Recovered quadruples, duplicate-free, in output order.
    pub quads: Vec<SurfaceQuad>,
    /// Number of segments that failed to parse.
    pub dropped: usize,
    pub warnings: Vec<String>,
}

/// Parses one generated output. A blank string is an empty prediction with
/// no segments.
pub fn parse_output(s: &str, style: FormatStyle, map: &CategoryMap) -> ParseOutcome {
    let mut out = ParseOutcome::default();
    if s.trim().is_empty() {
        return out;
    }
    for (idx, segment) in s.split(SEGMENT_SEPARATOR).enumerate() {
        let segment = segment.trim();
        let parsed = match style {
            FormatStyle::GenNat => parse_gen_nat(segment, map),
            FormatStyle::Paraphrase => parse_paraphrase(segment, map),
        };
        match parsed {
            Ok(q) if out.quads.contains(&q) => {
                out.warnings
                    .push(format!("segment {idx}: duplicate quadruple ignored"));
            }
            Ok(q) => out.quads.push(q),
            Err(reason) => {
                out.dropped += 1;
                out.warnings
                    .push(format!("segment {idx} dropped ({reason}): {segment:?}"));
            }
        }
    }
    out
}

type SegmentResult = Result<SurfaceQuad, String>;

fn parse_gen_nat(segment: &str, map: &CategoryMap) -> SegmentResult {
    let fields: Vec<&str> = segment.split('|').map(str::trim).collect();
    let [category, statement, sentiment] = fields[..] else {
        return Err(format!("expected 3 fields, found {}", fields.len()));
    };
    let (raw, _) = map
        .resolve(category)
        .ok_or_else(|| format!("unknown category description {category:?}"))?;
    let (aspect, opinion) = split_statement(statement, true)?;
    let sentiment =
        Sentiment::from_word(sentiment).ok_or_else(|| format!("unknown sentiment {sentiment:?}"))?;
    Ok(SurfaceQuad {
        aspect,
        category: raw.to_owned(),
        opinion,
        sentiment,
    })
}

fn parse_paraphrase(segment: &str, map: &CategoryMap) -> SegmentResult {
    let (head, statement) = segment
        .split_once(" because ")
        .ok_or("missing \"because\"")?;
    let (category, word) = head
        .trim()
        .rsplit_once(" is ")
        .ok_or("missing category clause")?;
    let category = category.trim();
    if !map.contains_raw(category) {
        return Err(format!("unknown category {category:?}"));
    }
    let sentiment = paraphrase_sentiment(word.trim())
        .ok_or_else(|| format!("unknown sentiment word {word:?}"))?;
    let (aspect, opinion) = split_statement(statement.trim(), false)?;
    Ok(SurfaceQuad {
        aspect,
        category: category.to_owned(),
        opinion,
        sentiment,
    })
}

type Terms = (Option<String>, Option<String>);

/// Splits `<aspect> is <opinion>`. With `article`, explicit aspects carry a
/// leading `the` and both `it is ...` and `the it is ...` mean an implicit
/// aspect. Otherwise the aspect boundary is the last ` is `.
fn split_statement(statement: &str, article: bool) -> Result<Terms, String> {
    let implicit_prefix = format!("{IMPLICIT_ASPECT} is ");
    let rest = if article {
        if let Some(o) = statement.strip_prefix(&implicit_prefix) {
            return Ok((None, opinion_term(o)?));
        }
        let rest = statement
            .strip_prefix("the ")
            .ok_or("aspect clause must start with \"the\" or \"it\"")?;
        if let Some(o) = rest.strip_prefix(&implicit_prefix) {
            return Ok((None, opinion_term(o)?));
        }
        rest
    } else {
        if let Some(o) = statement.strip_prefix(&implicit_prefix) {
            return Ok((None, opinion_term(o)?));
        }
        statement
    };
    let (aspect, opinion) = rest.rsplit_once(" is ").ok_or("missing \" is \"")?;
    let aspect = aspect.trim();
    if aspect.is_empty() {
        return Err("empty aspect".into());
    }
    Ok((Some(aspect.to_owned()), opinion_term(opinion)?))
}

fn opinion_term(o: &str) -> Result<Option<String>, String> {
    match o.trim() {
        "" => Err("empty opinion".into()),
        IMPLICIT_OPINION => Ok(None),
        o => Ok(Some(o.to_owned())),
    }
}
