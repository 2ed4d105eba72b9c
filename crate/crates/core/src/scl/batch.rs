use ndarray::{concatenate, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SclConfig;
use crate::error::{Error, Result};

/// Characteristic representations of a mini-batch plus one dropout view of
/// each row.
///
/// Rows `N..2N` are the views of rows `0..N`, in order, with the same labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ReprBatch {
    /// `(2N, d)` representations.
    pub reps: Array2<f64>,
    pub labels: Vec<usize>,
    /// Source row of every row (`i` for originals, `i - N` for views).
    pub view_of: Vec<usize>,
    /// `(N, d)` dropout multipliers applied to build the views: 0 for dropped
    /// entries, `1 / (1 - p)` for kept ones.
    pub view_scale: Array2<f64>,
}

impl ReprBatch {
    /// Wraps an arbitrary batch without views. Used for checks on batches
    /// that already pair rows by label.
    pub fn from_rows(reps: Array2<f64>, labels: Vec<usize>) -> Result<Self> {
        if reps.nrows() != labels.len() {
            return Err(Error::Shape(format!(
                "{} rows but {} labels",
                reps.nrows(),
                labels.len()
            )));
        }
        let d = reps.ncols();
        Ok(ReprBatch {
            view_of: (0..labels.len()).collect(),
            view_scale: Array2::zeros((0, d)),
            reps,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of source rows. Zero for batches built with
    /// [`ReprBatch::from_rows`].
    pub fn num_sources(&self) -> usize {
        self.view_scale.nrows()
    }

    /// Maps a gradient over all rows back to the source rows through the
    /// dropout masks: `g_src = g[..N] + g[N..] * scale`.
    pub fn source_gradient(&self, grad: ArrayView2<f64>) -> Array2<f64> {
        let n = self.num_sources();
        let mut out = grad.slice(ndarray::s![..n, ..]).to_owned();
        out += &(&grad.slice(ndarray::s![n.., ..]) * &self.view_scale);
        out
    }
}

/// Appends one inverted-dropout view of every row. The mask is drawn from a
/// generator seeded with `cfg.rng_seed`.
pub fn extend_batch(reps: ArrayView2<f64>, labels: &[usize], cfg: &SclConfig) -> Result<ReprBatch> {
    let (n, d) = reps.dim();
    if n == 0 {
        return Err(Error::Shape("empty batch".into()));
    }
    if labels.len() != n {
        return Err(Error::Shape(format!("{n} rows but {} labels", labels.len())));
    }
    if !(0.0..1.0).contains(&cfg.dropout_p) {
        return Err(Error::Config(format!("dropout must be in [0, 1), got {}", cfg.dropout_p)));
    }
    let keep = 1.0 - cfg.dropout_p;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let view_scale = Array2::from_shape_simple_fn((n, d), || {
        if cfg.dropout_p == 0.0 || rng.random::<f64>() < keep {
            1.0 / keep
        } else {
            0.0
        }
    });
    let views = &reps * &view_scale;
    let all = concatenate(Axis(0), &[reps, views.view()]).expect("same width");
    Ok(ReprBatch {
        reps: all,
        labels: labels.iter().chain(labels).copied().collect(),
        view_of: (0..n).chain(0..n).collect(),
        view_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn cfg(p: f64, seed: u64) -> SclConfig {
        SclConfig {
            dropout_p: p,
            rng_seed: seed,
            ..SclConfig::default()
        }
    }

    #[test]
    fn no_dropout_copies_rows() {
        let reps = array![[1.0, 2.0], [3.0, 4.0]];
        let b = extend_batch(reps.view(), &[0, 1], &cfg(0.0, 1)).unwrap();
        assert_eq!(b.reps, array![[1.0, 2.0], [3.0, 4.0], [1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(b.labels, [0, 1, 0, 1]);
        assert_eq!(b.view_of, [0, 1, 0, 1]);
    }

    #[test]
    fn seeded_dropout_is_deterministic() {
        let reps = Array2::from_shape_fn((6, 10), |(i, j)| (i * 10 + j) as f64 + 1.0);
        let labels = [0, 1, 2, 0, 1, 2];
        let a = extend_batch(reps.view(), &labels, &cfg(0.1, 5)).unwrap();
        let b = extend_batch(reps.view(), &labels, &cfg(0.1, 5)).unwrap();
        assert_eq!(a, b);
        let c = extend_batch(reps.view(), &labels, &cfg(0.1, 6)).unwrap();
        assert_ne!(a.view_scale, c.view_scale);
        for v in a.view_scale.iter() {
            assert!(*v == 0.0 || (*v - 1.0 / 0.9).abs() < 1e-15);
        }
    }

    #[test]
    fn inverted_dropout_is_unbiased() {
        let src = array![[1.0, -2.0, 0.5, 3.0]];
        let trials = 10_000;
        let p = 0.1;
        let mut sum = Array2::<f64>::zeros((1, 4));
        for seed in 0..trials {
            let b = extend_batch(src.view(), &[0], &cfg(p, seed)).unwrap();
            sum += &b.reps.slice(ndarray::s![1.., ..]);
        }
        let mean = sum / trials as f64;
        for j in 0..4 {
            let x = src[[0, j]];
            // Var of x * Bernoulli(1-p) / (1-p) is x^2 p / (1-p).
            let sigma = (x * x * p / (1.0 - p) / trials as f64).sqrt();
            assert!((mean[[0, j]] - x).abs() < 3.0 * sigma, "coord {j}");
        }
    }

    #[test]
    fn source_gradient_folds_views() {
        let reps = array![[1.0, 2.0]];
        let mut b = extend_batch(reps.view(), &[0], &cfg(0.0, 1)).unwrap();
        b.view_scale = array![[0.0, 2.0]];
        let g = array![[1.0, 1.0], [3.0, 5.0]];
        assert_eq!(b.source_gradient(g.view()), array![[1.0, 11.0]]);
    }

    #[test]
    fn empty_batch_is_an_error() {
        assert!(extend_batch(Array2::zeros((0, 3)).view(), &[], &cfg(0.1, 0)).is_err());
    }
}
