//! Invertible mapping between raw category labels and natural descriptions.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Bijective raw label ↔ description map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryMap {
    to_desc: BTreeMap<String, String>,
    to_raw: BTreeMap<String, String>,
}

impl CategoryMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry. Fails on a duplicate raw label or description, or if
    /// the description contains a separator.
    pub fn insert(&mut self, raw: impl Into<String>, desc: impl Into<String>) -> Result<()> {
        let (raw, desc) = (raw.into(), desc.into());
        let bad = |m: String| Err(Error::Config(m));
        if raw.is_empty() || raw.chars().any(char::is_whitespace) {
            return bad(format!("invalid raw label {raw:?}"));
        }
        if desc.trim().is_empty() || desc.trim() != desc {
            return bad(format!("invalid description {desc:?} for {raw}"));
        }
        if desc.contains('|') || desc.contains("[SSEP]") {
            return bad(format!("description {desc:?} contains a separator"));
        }
        if self.to_desc.contains_key(&raw) {
            return bad(format!("duplicate raw label {raw}"));
        }
        if let Some(other) = self.to_raw.get(&desc) {
            return bad(format!("description {desc:?} used by both {other} and {raw}"));
        }
        self.to_raw.insert(desc.clone(), raw.clone());
        self.to_desc.insert(raw, desc);
        Ok(())
    }

    /// Parses `RAW_LABEL<TAB>description` lines. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_tsv(content: &str) -> Result<Self> {
        let mut map = CategoryMap::new();
        for (idx, line) in content.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::CategoryMap {
                line: idx + 1,
                message,
            };
            let (raw, desc) = line
                .split_once('\t')
                .ok_or_else(|| err("expected RAW_LABEL<TAB>description".into()))?;
            map.insert(raw.trim(), desc.trim()).map_err(|e| match e {
                Error::Config(m) => err(m),
                other => other,
            })?;
        }
        Ok(map)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&content)
    }

    /// Builds a map by applying [`mechanical_description`] to each label.
    pub fn mechanical<'a>(labels: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut map = CategoryMap::new();
        for raw in labels {
            if !map.contains_raw(raw) {
                map.insert(raw, mechanical_description(raw))?;
            }
        }
        Ok(map)
    }

    pub fn to_tsv(&self) -> String {
        self.iter().map(|(r, d)| format!("{r}\t{d}\n")).collect()
    }

    pub fn len(&self) -> usize {
        self.to_desc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_desc.is_empty()
    }

    pub fn contains_raw(&self, raw: &str) -> bool {
        self.to_desc.contains_key(raw)
    }

    /// Entries sorted by raw label.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.to_desc.iter().map(|(r, d)| (r.as_str(), d.as_str()))
    }

    /// The natural description of `raw`.
    pub fn describe(&self, raw: &str) -> Result<&str> {
        self.to_desc
            .get(raw)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownCategory {
                label: raw.to_owned(),
                nearest: self.nearest_raw(raw).map(str::to_owned),
            })
    }

    pub fn raw_for(&self, desc: &str) -> Option<&str> {
        self.to_raw.get(desc).map(String::as_str)
    }

    /// Resolves a generated category field to `(raw, description)`: an exact
    /// description match, else the longest description that prefixes
    /// `field` at a word boundary.
    pub fn resolve(&self, field: &str) -> Option<(&str, &str)> {
        let field = field.trim();
        if let Some((d, r)) = self.to_raw.get_key_value(field) {
            return Some((r.as_str(), d.as_str()));
        }
        self.to_raw
            .iter()
            .filter(|(d, _)| {
                field
                    .strip_prefix(d.as_str())
                    .is_some_and(|rest| rest.starts_with(char::is_whitespace))
            })
            .max_by_key(|(d, _)| d.len())
            .map(|(d, r)| (r.as_str(), d.as_str()))
    }

    fn nearest_raw(&self, raw: &str) -> Option<&str> {
        self.to_desc
            .keys()
            .map(|k| (strsim::levenshtein(k, raw), k))
            .min()
            .map(|(_, k)| k.as_str())
    }
}

/// Naturalizes a raw category label with the given map.
pub fn naturalize_category<'m>(raw: &str, map: &'m CategoryMap) -> Result<&'m str> {
    map.describe(raw)
}

const ENTITY_WORDS: [(&str, &str); 2] = [("OS", "operating system"), ("HARD_DISC", "hard drive")];
const ATTRIBUTE_WORDS: [(&str, &str); 1] = [("DESIGN_FEATURES", "features")];

fn words(part: &str, table: &[(&str, &str)]) -> String {
    table
        .iter()
        .find(|(k, _)| *k == part)
        .map(|(_, v)| (*v).to_owned())
        .unwrap_or_else(|| part.to_lowercase().replace('_', " "))
}

/// Default description for a raw label: lowercase, `#` and `_` become
/// spaces, a `GENERAL` attribute becomes an `overall` suffix, and the result
/// is prefixed with `the`. A few abbreviations are spelled out
/// (`OS`, `HARD_DISC`, `DESIGN_FEATURES`).
///
/// ```
/// use acos_quad::category::mechanical_description;
/// assert_eq!(mechanical_description("OS#GENERAL"), "the operating system overall");
/// assert_eq!(mechanical_description("HARD_DISC#PRICE"), "the hard drive price");
/// assert_eq!(mechanical_description("LAPTOP"), "the laptop");
/// ```
pub fn mechanical_description(raw: &str) -> String {
    match raw.split_once('#') {
        None => format!("the {}", words(raw, &ENTITY_WORDS)),
        Some((entity, "GENERAL")) => format!("the {} overall", words(entity, &ENTITY_WORDS)),
        Some((entity, attr)) => format!(
            "the {} {}",
            words(entity, &ENTITY_WORDS),
            words(attr, &ATTRIBUTE_WORDS)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CategoryMap {
        CategoryMap::from_tsv(
            "# comment\nFOOD#QUALITY\tthe food quality\nFOOD#GENERAL\tthe food\nLOCATION#GENERAL\tthe location\n",
        )
        .unwrap()
    }

    #[test]
    fn describe_and_invert() {
        let m = sample();
        assert_eq!(naturalize_category("FOOD#QUALITY", &m).unwrap(), "the food quality");
        assert_eq!(m.raw_for("the location"), Some("LOCATION#GENERAL"));
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn unknown_label_names_nearest() {
        let err = sample().describe("FOOD#QUALTY").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("FOOD#QUALTY") && msg.contains("nearest known label: \"FOOD#QUALITY\""), "{msg}");
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(CategoryMap::from_tsv("A#B\tthe a\nA#B\tthe b\n").is_err());
        match CategoryMap::from_tsv("A#B\tthe a\nA#C\tthe a\n").unwrap_err() {
            Error::CategoryMap { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
        assert!(CategoryMap::from_tsv("A#B the a\n").is_err());
        assert!(CategoryMap::from_tsv("A#B\tthe | a\n").is_err());
    }

    #[test]
    fn resolve_prefers_exact_then_longest_prefix() {
        let m = sample();
        assert_eq!(m.resolve(" the food "), Some(("FOOD#GENERAL", "the food")));
        assert_eq!(m.resolve("the food quality"), Some(("FOOD#QUALITY", "the food quality")));
        assert_eq!(
            m.resolve("the food quality overall"),
            Some(("FOOD#QUALITY", "the food quality"))
        );
        assert_eq!(m.resolve("the foodie"), None);
        assert_eq!(m.resolve("the ambience"), None);
    }

    #[test]
    fn mechanical_rule_matches_reference_rows() {
        assert_eq!(mechanical_description("FOOD#QUALITY"), "the food quality");
        assert_eq!(mechanical_description("FOOD#PRICES"), "the food prices");
        assert_eq!(mechanical_description("OS#GENERAL"), "the operating system overall");
        assert_eq!(mechanical_description("OS#DESIGN_FEATURES"), "the operating system features");
        assert_eq!(mechanical_description("HARD_DISC#PRICE"), "the hard drive price");
        assert_eq!(mechanical_description("OS"), "the operating system");
        assert_eq!(mechanical_description("HARD_DISC"), "the hard drive");
    }
}
