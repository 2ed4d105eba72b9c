//! Exact-match scoring and dataset statistics.
//!
//! Scores are micro-averaged: true positives, predictions and gold quads are
//! summed over the corpus before computing precision and recall. A predicted
//! quadruple counts only if aspect, category, opinion and sentiment all
//! match a gold quadruple of the same example. Per-type rows restrict the
//! corpus to the examples containing at least one gold quad of that type,
//! so an example can contribute to several rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::acos::{Example, QuadType, SurfaceQuad};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Counts {
    pub predicted: usize,
    pub gold: usize,
    pub matched: usize,
}

impl Counts {
    pub fn precision(&self) -> f64 {
        ratio(self.matched, self.predicted)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.matched, self.gold)
    }

    pub fn f1(&self) -> f64 {
        f1(self.precision(), self.recall())
    }

    fn add(&mut self, other: Counts) {
        self.predicted += other.predicted;
        self.gold += other.gold;
        self.matched += other.matched;
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub examples: usize,
    pub counts: Counts,
}

impl SplitScore {
    fn from_counts(counts: Counts, examples: usize) -> Self {
        SplitScore {
            precision: counts.precision(),
            recall: counts.recall(),
            f1: counts.f1(),
            examples,
            counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: Counts,
    pub examples: usize,
    pub per_split: BTreeMap<QuadType, SplitScore>,
    /// Generated segments that could not be parsed, when scoring parsed
    /// outputs.
    pub dropped_segments: usize,
}

/// Scores parsed predictions against gold examples, aligned by index.
pub fn score(preds: &[Vec<SurfaceQuad>], golds: &[Example]) -> Result<EvalReport> {
    let gold_sets: Vec<Vec<SurfaceQuad>> = golds.iter().map(Example::surface_quads).collect();
    score_surface(preds, &gold_sets)
}

/// Like [`score`] with span-free gold sets. Split membership is taken from
/// the gold side.
pub fn score_surface(preds: &[Vec<SurfaceQuad>], golds: &[Vec<SurfaceQuad>]) -> Result<EvalReport> {
    if preds.len() != golds.len() {
        return Err(Error::LengthMismatch {
            left: preds.len(),
            right: golds.len(),
        });
    }
    let mut total = Counts::default();
    let mut splits: BTreeMap<QuadType, (Counts, usize)> =
        QuadType::ALL.iter().map(|t| (*t, Default::default())).collect();
    for (pred, gold) in preds.iter().zip(golds) {
        let c = match_counts(pred, gold);
        total.add(c);
        let types: BTreeSet<QuadType> = gold.iter().map(SurfaceQuad::quad_type).collect();
        for t in types {
            let entry = splits.get_mut(&t).expect("all types present");
            entry.0.add(c);
            entry.1 += 1;
        }
    }
    Ok(EvalReport {
        precision: total.precision(),
        recall: total.recall(),
        f1: total.f1(),
        counts: total,
        examples: golds.len(),
        per_split: splits
            .into_iter()
            .map(|(t, (c, n))| (t, SplitScore::from_counts(c, n)))
            .collect(),
        dropped_segments: 0,
    })
}

fn match_counts(pred: &[SurfaceQuad], gold: &[SurfaceQuad]) -> Counts {
    let pred: BTreeSet<&SurfaceQuad> = pred.iter().collect();
    let gold: BTreeSet<&SurfaceQuad> = gold.iter().collect();
    Counts {
        predicted: pred.len(),
        gold: gold.len(),
        matched: pred.intersection(&gold).count(),
    }
}

impl EvalReport {
    pub fn with_dropped(mut self, dropped: usize) -> Self {
        self.dropped_segments = dropped;
        self
    }

    /// Aligned plain-text table, scores as percentages.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8} {:>9} {:>9} {:>9} {:>9}",
            "split", "precision", "recall", "f1", "examples"
        );
        let row = |s: &mut String, name: &str, p: f64, r: f64, f: f64, n: usize| {
            let _ = writeln!(
                s,
                "{name:<8} {:>9.2} {:>9.2} {:>9.2} {n:>9}",
                100.0 * p,
                100.0 * r,
                100.0 * f
            );
        };
        row(&mut s, "overall", self.precision, self.recall, self.f1, self.examples);
        for (t, sc) in &self.per_split {
            row(&mut s, t.as_str(), sc.precision, sc.recall, sc.f1, sc.examples);
        }
        let _ = writeln!(
            s,
            "predicted {} gold {} matched {} dropped segments {}",
            self.counts.predicted, self.counts.gold, self.counts.matched, self.dropped_segments
        );
        s
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeCount {
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub num_categories: usize,
    pub num_sentences: usize,
    pub num_quads: usize,
    pub per_type: BTreeMap<QuadType, TypeCount>,
    /// Total quads over sentences, rounded to two decimals.
    pub quads_per_sentence: f64,
    pub warnings: Vec<String>,
}

/// Corpus statistics. `num_categories_expected`, when given, only produces
/// a warning on mismatch.
pub fn dataset_stats(xs: &[Example], num_categories_expected: Option<usize>) -> DatasetStats {
    let mut warnings = Vec::new();
    let categories: BTreeSet<&str> = xs
        .iter()
        .flat_map(|x| x.quads.iter().map(|q| q.category.as_str()))
        .collect();
    let mut counts = [0usize; 4];
    for x in xs {
        for (acc, c) in counts.iter_mut().zip(x.type_counts()) {
            *acc += c;
        }
    }
    let total: usize = counts.iter().sum();
    let per_type = QuadType::ALL
        .iter()
        .map(|t| {
            let count = counts[*t as usize];
            let percent = if total == 0 {
                0.0
            } else {
                100.0 * count as f64 / total as f64
            };
            (*t, TypeCount { count, percent })
        })
        .collect();
    let quads_per_sentence = if xs.is_empty() {
        warnings.push("empty dataset: quads per sentence undefined, reported as 0".to_owned());
        0.0
    } else {
        (100.0 * total as f64 / xs.len() as f64).round() / 100.0
    };
    if let Some(expected) = num_categories_expected {
        if expected != categories.len() {
            warnings.push(format!(
                "expected {expected} categories, found {}",
                categories.len()
            ));
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    DatasetStats {
        num_categories: categories.len(),
        num_sentences: xs.len(),
        num_quads: total,
        per_type,
        quads_per_sentence,
        warnings,
    }
}

/// Formats a percentage with three significant digits (`66.4`, `9.57`).
pub fn three_significant(p: f64) -> String {
    if p == 0.0 {
        return "0".into();
    }
    let digits = (2 - p.abs().log10().floor() as i32).max(0) as usize;
    format!("{p:.digits$}")
}

impl DatasetStats {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<14} {}", "#Categories", self.num_categories);
        let _ = writeln!(s, "{:<14} {}", "#Sentences", self.num_sentences);
        for (t, c) in &self.per_type {
            let _ = writeln!(
                s,
                "{:<14} {} ({}%)",
                format!("#{t} Quads"),
                c.count,
                three_significant(c.percent)
            );
        }
        let _ = writeln!(s, "{:<14} {:.2}", "#Quads/Sent", self.quads_per_sentence);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acos::Sentiment;

    fn q(a: &str, o: &str) -> SurfaceQuad {
        fn opt(s: &str) -> Option<&str> {
            (!s.is_empty()).then_some(s)
        }
        SurfaceQuad::new(opt(a), "FOOD#QUALITY", opt(o), Sentiment::Positive)
    }

    #[test]
    fn half_matched() {
        let gold = vec![vec![q("pizza", "good"), q("pasta", "good")]];
        let pred = vec![vec![q("pizza", "good"), q("wine", "good")]];
        let r = score_surface(&pred, &gold).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (0.5, 0.5, 0.5));
        assert_eq!(r.counts.matched, 1);
    }

    #[test]
    fn identity_is_perfect() {
        let gold = vec![vec![q("pizza", "good")], vec![q("", ""), q("", "good")]];
        let r = score_surface(&gold, &gold).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
        assert_eq!(r.per_split[&QuadType::Iaio].f1, 1.0);
        assert_eq!(r.per_split[&QuadType::Iaio].examples, 1);
        assert_eq!(r.per_split[&QuadType::Eaio].examples, 0);
        assert_eq!(r.per_split[&QuadType::Eaio].f1, 0.0);
    }

    #[test]
    fn empty_predictions_score_zero() {
        let gold = vec![vec![q("pizza", "good")]];
        let r = score_surface(&[vec![]], &gold).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn sentiment_must_match_exactly() {
        let gold = vec![vec![q("pizza", "good")]];
        let mut p = q("pizza", "good");
        p.sentiment = Sentiment::Neutral;
        assert_eq!(score_surface(&[vec![p]], &gold).unwrap().counts.matched, 0);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            score_surface(&[vec![]], &[]),
            Err(Error::LengthMismatch { left: 1, right: 0 })
        ));
    }

    #[test]
    fn empty_dataset_stats() {
        let s = dataset_stats(&[], None);
        assert_eq!((s.num_sentences, s.num_quads, s.quads_per_sentence), (0, 0, 0.0));
        assert_eq!(s.warnings.len(), 1);
        assert!(s.per_type.values().all(|c| c.count == 0 && c.percent == 0.0));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(three_significant(66.4002), "66.4");
        assert_eq!(three_significant(9.5681), "9.57");
        assert_eq!(three_significant(5.9396), "5.94");
        assert_eq!(three_significant(100.0), "100");
    }
}
