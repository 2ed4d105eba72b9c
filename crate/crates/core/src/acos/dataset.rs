//! Reader and writer for the ACOS release TSV layout:
//!
//! ```text
//! <sentence>\t<a_start>,<a_end> <CATEGORY> <sentiment code> <o_start>,<o_end>[\t...]
//! ```
//!
//! Spans index the whitespace tokens of the sentence, `-1,-1` marks an
//! implicit term, and sentiment codes are 0/1/2 for negative/neutral/positive.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{Example, Quad, Sentiment, Term};
use crate::error::{Error, Result};

/// Terms containing these would make generated targets ambiguous.
const RESERVED: [&str; 2] = ["|", "[SSEP]"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "dev" | "valid" | "validation" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::Config(format!("unknown split {other:?}"))),
        }
    }
}

/// Reads a dataset file. Example ids are `<split>-<line number>`.
pub fn load_dataset(path: impl AsRef<Path>, split: Split) -> Result<Vec<Example>> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&content, split)
}

/// Parses dataset content. LF and CRLF line endings are accepted; empty
/// lines are skipped.
pub fn parse_dataset(content: &str, split: Split) -> Result<Vec<Example>> {
    let mut out = Vec::new();
    for (idx, raw) in content.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        out.push(parse_line(line, lineno, split)?);
    }
    Ok(out)
}

fn parse_line(line: &str, lineno: usize, split: Split) -> Result<Example> {
    let err = |message: String| Error::Dataset {
        line: lineno,
        message,
    };
    let mut fields = line.split('\t');
    let text = fields.next().unwrap_or_default();
    if text.trim().is_empty() {
        return Err(err("empty sentence".into()));
    }
    let tokens: Vec<&str> = text.split_whitespace().collect();

    let mut quads: Vec<Quad> = Vec::new();
    for field in fields {
        if field.trim().is_empty() {
            continue;
        }
        let q = parse_quad(field, &tokens).map_err(err)?;
        if quads.contains(&q) {
            log::warn!("line {lineno}: dropping duplicate quadruple {field:?}");
            continue;
        }
        quads.push(q);
    }
    if quads.is_empty() {
        return Err(err("no quadruples".into()));
    }
    Example::new(format!("{split}-{lineno}"), text, quads).map_err(|e| err(e.to_string()))
}

fn parse_quad(field: &str, tokens: &[&str]) -> std::result::Result<Quad, String> {
    let parts: Vec<&str> = field.split_whitespace().collect();
    let [aspect, category, code, opinion] = parts[..] else {
        return Err(format!(
            "quadruple {field:?} must have 4 space-separated fields, found {}",
            parts.len()
        ));
    };
    let sentiment = code
        .parse::<u8>()
        .ok()
        .and_then(Sentiment::from_code)
        .ok_or_else(|| format!("unknown sentiment code {code:?}"))?;
    if category.is_empty() {
        return Err("empty category".into());
    }
    Ok(Quad {
        aspect: parse_term(aspect, tokens)?,
        category: category.to_owned(),
        opinion: parse_term(opinion, tokens)?,
        sentiment,
    })
}

fn parse_term(field: &str, tokens: &[&str]) -> std::result::Result<Term, String> {
    let (s, e) = field
        .split_once(',')
        .ok_or_else(|| format!("malformed span {field:?}"))?;
    let s: i64 = s.parse().map_err(|_| format!("malformed span {field:?}"))?;
    let e: i64 = e.parse().map_err(|_| format!("malformed span {field:?}"))?;
    if s == -1 && e == -1 {
        return Ok(Term::implicit());
    }
    if s < 0 || e < 0 {
        return Err(format!("malformed span {field:?}"));
    }
    let term = Term::explicit(tokens, s as usize, e as usize).map_err(|e| e.to_string())?;
    if let Some(r) = RESERVED.iter().find(|r| term.text().contains(**r)) {
        return Err(format!(
            "term {:?} contains reserved separator {r:?}",
            term.text()
        ));
    }
    Ok(term)
}

/// One dataset line (without the newline) for `x`.
pub fn serialize_example(x: &Example) -> String {
    let mut line = x.text.clone();
    for q in &x.quads {
        line.push('\t');
        line.push_str(&format!(
            "{} {} {} {}",
            q.aspect.span(),
            q.category,
            q.sentiment.code(),
            q.opinion.span()
        ));
    }
    line
}

/// Serializes examples with LF line endings.
pub fn serialize_dataset(xs: &[Example]) -> String {
    let mut out = String::new();
    for x in xs {
        out.push_str(&serialize_example(x));
        out.push('\n');
    }
    out
}
