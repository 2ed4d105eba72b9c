use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// How token states are reduced to one vector per example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pooling {
    #[default]
    Mean,
    Sum,
}

impl FromStr for Pooling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Pooling::Mean),
            "sum" => Ok(Pooling::Sum),
            _ => Err(Error::Config(format!("unknown pooling {s:?}"))),
        }
    }
}

/// Hyperparameters of the contrastive objective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SclConfig {
    /// Softmax temperature, > 0.
    pub tau: f64,
    /// Weights of the sentiment, aspect and opinion losses.
    pub alpha: [f64; 3],
    /// Dropout probability for the extra batch views, in `[0, 1)`.
    pub dropout_p: f64,
    pub rng_seed: u64,
    pub pooling: Pooling,
}

impl Default for SclConfig {
    fn default() -> Self {
        SclConfig {
            tau: 0.25,
            alpha: [0.05; 3],
            dropout_p: 0.1,
            rng_seed: 0,
            pooling: Pooling::Mean,
        }
    }
}

impl SclConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = [alpha; 3];
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::Config(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(0.0..1.0).contains(&self.dropout_p) {
            return Err(Error::Config(format!(
                "dropout must be in [0, 1), got {}",
                self.dropout_p
            )));
        }
        if self.alpha.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::Config(format!(
                "alpha must be finite and >= 0, got {:?}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Recognized keys: `tau`,
    /// `alpha` (all three weights), `alpha_sentiment`, `alpha_aspect`,
    /// `alpha_opinion`, `dropout`, `seed`, `pooling`. `#` starts a comment.
    pub fn apply_kv(mut self, content: &str) -> Result<Self> {
        for (idx, line) in content.lines().enumerate() {
            let line = line.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Config(format!("line {}: {m}", idx + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || {
                value
                    .parse::<f64>()
                    .map_err(|_| err(format!("{key}: not a number: {value:?}")))
            };
            match key {
                "tau" => self.tau = num()?,
                "alpha" => self.alpha = [num()?; 3],
                "alpha_sentiment" => self.alpha[0] = num()?,
                "alpha_aspect" => self.alpha[1] = num()?,
                "alpha_opinion" => self.alpha[2] = num()?,
                "dropout" | "dropout_p" => self.dropout_p = num()?,
                "seed" | "rng_seed" => {
                    self.rng_seed = value
                        .parse()
                        .map_err(|_| err(format!("seed: not an integer: {value:?}")))?
                }
                "pooling" => self.pooling = value.parse()?,
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn from_kv(content: &str) -> Result<Self> {
        SclConfig::default().apply_kv(content)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_kv(&content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SclConfig::default();
        assert_eq!((c.tau, c.alpha, c.dropout_p), (0.25, [0.05; 3], 0.1));
        c.validate().unwrap();
    }

    #[test]
    fn parses_key_values() {
        let c = SclConfig::from_kv("# laptop-l1\ntau = 0.25\nalpha=0.005\n\nalpha_opinion = 0.01 # override\nseed=7\npooling=sum\n")
            .unwrap();
        assert_eq!(c.alpha, [0.005, 0.005, 0.01]);
        assert_eq!(c.rng_seed, 7);
        assert_eq!(c.pooling, Pooling::Sum);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SclConfig::from_kv("tau = 0").is_err());
        assert!(SclConfig::from_kv("tau = -1").is_err());
        assert!(SclConfig::from_kv("dropout = 1.0").is_err());
        assert!(SclConfig::from_kv("alpha = nan").is_err());
        assert!(SclConfig::from_kv("beta = 1").is_err());
        assert!(SclConfig::from_kv("tau 0.3").is_err());
    }
}
