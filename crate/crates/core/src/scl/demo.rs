//! Toy-scale training of the three characteristic heads.
//!
//! The encoder is a frozen token-hash embedding: every token maps to a fixed
//! pseudo-random vector derived from its bytes, and an example's hidden
//! states are the embeddings of its tokens. Only the projection heads are
//! trained, by gradient descent on the weighted contrastive losses (there is
//! no decoder, hence no cross-entropy term).

use std::collections::BTreeMap;
use std::io::Write;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{extend_batch, pool, scl_loss, HiddenStates, ProjectionHead, SclConfig};
use crate::acos::{characteristic_labels, Characteristic, Example};
use crate::error::{Error, Result};

/// Frozen embedding encoder keyed by a stable hash of each token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenHashEncoder {
    pub dim: usize,
    pub seed: u64,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl TokenHashEncoder {
    pub fn embed_token(&self, token: &str) -> Array1<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(fnv1a(token.as_bytes()) ^ self.seed);
        Array1::from_shape_simple_fn(self.dim, || rng.random_range(-1.0..1.0))
    }

    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Result<HiddenStates> {
        let mut states = Array2::zeros((tokens.len(), self.dim));
        for (mut row, tok) in states.outer_iter_mut().zip(tokens) {
            row.assign(&self.embed_token(tok.as_ref()));
        }
        HiddenStates::new(states)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoOptions {
    pub scl: SclConfig,
    pub steps: usize,
    pub encoder_dim: usize,
    pub head_dim: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions {
            scl: SclConfig::default(),
            steps: 300,
            encoder_dim: 64,
            head_dim: 32,
            batch_size: 32,
            learning_rate: 20.0,
        }
    }
}

/// Mean pairwise cosine within and across labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separation {
    pub intra: f64,
    pub inter: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeadReport {
    pub characteristic: Characteristic,
    /// Label counts over the corpus.
    pub labels: BTreeMap<String, usize>,
    pub skipped: bool,
    pub before: Option<Separation>,
    pub after: Option<Separation>,
    /// Unweighted contrastive loss of the last training step.
    pub final_loss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExportRow {
    pub id: String,
    pub characteristic: Characteristic,
    pub label: String,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub options: DemoOptions,
    pub heads: Vec<HeadReport>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub representations: Vec<ExportRow>,
}

impl DemoReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
            "head", "intra0", "inter0", "gap0", "intra", "inter", "gap"
        );
        for h in &self.heads {
            match (h.before, h.after) {
                (Some(b), Some(a)) => s.push_str(&format!(
                    "{:<10} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}\n",
                    h.characteristic.as_str(),
                    b.intra,
                    b.inter,
                    b.gap,
                    a.intra,
                    a.inter,
                    a.gap
                )),
                _ => s.push_str(&format!("{:<10} skipped\n", h.characteristic.as_str())),
            }
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

/// Mean intra-label and inter-label cosine similarity over all row pairs.
pub fn separation(reps: ArrayView2<f64>, labels: &[usize]) -> Separation {
    let norms = reps.map_axis(Axis(1), |r| r.dot(&r).sqrt().max(1e-12));
    let unit = &reps / &norms.insert_axis(Axis(1));
    let sims = unit.dot(&unit.t());
    let (mut intra, mut n_intra, mut inter, mut n_inter) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            if labels[i] == labels[j] {
                intra += sims[[i, j]];
                n_intra += 1;
            } else {
                inter += sims[[i, j]];
                n_inter += 1;
            }
        }
    }
    let intra = if n_intra > 0 { intra / n_intra as f64 } else { 0.0 };
    let inter = if n_inter > 0 { inter / n_inter as f64 } else { 0.0 };
    Separation {
        intra,
        inter,
        gap: intra - inter,
    }
}

fn step_seed(seed: u64, step: usize, head: usize) -> u64 {
    seed ^ (step as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((head as u64 + 1) << 56)
}

/// Trains one head per characteristic on `corpus` and reports separation
/// before and after training.
pub fn toy_demo(corpus: &[Example], opts: &DemoOptions) -> Result<DemoReport> {
    opts.scl.validate()?;
    if opts.batch_size == 0 || opts.encoder_dim == 0 || opts.head_dim == 0 {
        return Err(Error::Config("batch size and dimensions must be positive".into()));
    }
    if corpus.is_empty() {
        return Err(Error::Config("empty corpus".into()));
    }
    let encoder = TokenHashEncoder {
        dim: opts.encoder_dim,
        seed: opts.scl.rng_seed,
    };
    let mut pooled = Array2::zeros((corpus.len(), opts.encoder_dim));
    let mut labels = Vec::with_capacity(corpus.len());
    for (mut row, x) in pooled.outer_iter_mut().zip(corpus) {
        row.assign(&pool(&encoder.encode(&x.tokens)?, opts.scl.pooling));
        labels.push(characteristic_labels(x)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.scl.rng_seed);
    let mut warnings = Vec::new();
    let mut heads = Vec::new();
    let mut representations = Vec::new();
    for (c_idx, c) in Characteristic::ALL.into_iter().enumerate() {
        let names: Vec<&'static str> = labels.iter().map(|l| l.label(c)).collect();
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for n in &names {
            *counts.entry((*n).to_owned()).or_default() += 1;
        }
        let ids: BTreeMap<&str, usize> = counts.keys().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
        let y: Vec<usize> = names.iter().map(|n| ids[n]).collect();
        let mut head = ProjectionHead::random(opts.encoder_dim, opts.head_dim, &mut rng);
        if counts.len() < 2 {
            let w = format!("{c}: only one label present, head skipped");
            log::warn!("{w}");
            warnings.push(w);
            heads.push(HeadReport {
                characteristic: c,
                labels: counts,
                skipped: true,
                before: None,
                after: None,
                final_loss: None,
            });
            continue;
        }
        let before = separation(head.project_rows(pooled.view())?.view(), &y);
        let alpha = opts.scl.alpha[c_idx];
        let mut order: Vec<usize> = (0..corpus.len()).collect();
        let mut cursor = order.len();
        let mut final_loss = None;
        for step in 0..opts.steps {
            if cursor >= order.len() {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            let end = (cursor + opts.batch_size).min(order.len());
            let idx = &order[cursor..end];
            cursor = end;
            let x = pooled.select(Axis(0), idx);
            let yb: Vec<usize> = idx.iter().map(|&i| y[i]).collect();
            let h = head.project_rows(x.view())?;
            let cfg = SclConfig {
                rng_seed: step_seed(opts.scl.rng_seed, step, c_idx),
                ..opts.scl.clone()
            };
            let batch = extend_batch(h.view(), &yb, &cfg)?;
            let out = match scl_loss(&batch, opts.scl.tau) {
                Ok(out) => out,
                // A fully dropped-out view has no direction; skip the step.
                Err(Error::ZeroNorm { .. }) => continue,
                Err(e) => return Err(e),
            };
            final_loss = Some(out.loss);
            let g = batch.source_gradient(out.grad.view()) * alpha;
            let grad_w = g.t().dot(&x);
            let grad_b = g.sum_axis(Axis(0));
            head.weight.scaled_add(-opts.learning_rate, &grad_w);
            head.bias.scaled_add(-opts.learning_rate, &grad_b);
        }
        let trained = head.project_rows(pooled.view())?;
        let after = separation(trained.view(), &y);
        for (i, x) in corpus.iter().enumerate() {
            representations.push(ExportRow {
                id: x.id.clone(),
                characteristic: c,
                label: names[i].to_owned(),
                coords: trained.row(i).to_vec(),
            });
        }
        heads.push(HeadReport {
            characteristic: c,
            labels: counts,
            skipped: false,
            before: Some(before),
            after: Some(after),
            final_loss,
        });
    }
    Ok(DemoReport {
        options: opts.clone(),
        heads,
        warnings,
        representations,
    })
}

/// Writes `id<TAB>characteristic<TAB>label<TAB>x0<TAB>x1...` rows with a
/// header line.
pub fn write_representations_tsv(rows: &[ExportRow], mut w: impl Write) -> std::io::Result<()> {
    let dim = rows.first().map_or(0, |r| r.coords.len());
    let mut header = String::from("id\tcharacteristic\tlabel");
    for k in 0..dim {
        header.push_str(&format!("\tx{k}"));
    }
    writeln!(w, "{header}")?;
    for r in rows {
        write!(w, "{}\t{}\t{}", r.id, r.characteristic, r.label)?;
        for v in &r.coords {
            write!(w, "\t{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::synthetic_corpus;

    #[test]
    fn encoder_is_deterministic() {
        let e = TokenHashEncoder { dim: 8, seed: 3 };
        assert_eq!(e.embed_token("pizza"), e.embed_token("pizza"));
        assert_ne!(e.embed_token("pizza"), e.embed_token("pasta"));
    }

    #[test]
    fn zero_steps_leave_statistics_unchanged() {
        let corpus = synthetic_corpus(40, 1);
        let opts = DemoOptions {
            steps: 0,
            ..DemoOptions::default()
        };
        let r = toy_demo(&corpus, &opts).unwrap();
        for h in &r.heads {
            assert_eq!(h.before, h.after);
        }
    }

    #[test]
    fn single_label_head_is_skipped() {
        let corpus: Vec<Example> = synthetic_corpus(200, 2)
            .into_iter()
            .filter(|x| x.quads.iter().all(|q| q.aspect.is_explicit()))
            .collect();
        let opts = DemoOptions {
            steps: 5,
            ..DemoOptions::default()
        };
        let r = toy_demo(&corpus, &opts).unwrap();
        let aspect = &r.heads[1];
        assert!(aspect.skipped);
        assert_eq!(r.warnings.len(), 1);
        assert!(!r.heads[0].skipped);
    }

    #[test]
    fn export_format() {
        let rows = vec![ExportRow {
            id: "a".into(),
            characteristic: Characteristic::Opinion,
            label: "mixed".into(),
            coords: vec![0.5, -1.0],
        }];
        let mut buf = Vec::new();
        write_representations_tsv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "id\tcharacteristic\tlabel\tx0\tx1\na\topinion\tmixed\t0.5\t-1\n"
        );
    }
}
