use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::Rng;

use super::Pooling;
use crate::error::{Error, Result};

/// Token-level encoder states of one example, `(sequence length, hidden)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenStates(Array2<f64>);

impl HiddenStates {
    pub fn new(states: Array2<f64>) -> Result<Self> {
        if states.nrows() == 0 {
            return Err(Error::Shape("empty sequence".into()));
        }
        if states.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("hidden states".into()));
        }
        Ok(HiddenStates(states))
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn seq_len(&self) -> usize {
        self.0.nrows()
    }

    pub fn dim(&self) -> usize {
        self.0.ncols()
    }
}

/// Reduces the sequence axis.
pub fn pool(h: &HiddenStates, pooling: Pooling) -> Array1<f64> {
    let sum = h.0.sum_axis(Axis(0));
    match pooling {
        Pooling::Sum => sum,
        Pooling::Mean => sum / h.seq_len() as f64,
    }
}

/// Affine map `W v + b` with `W` of shape `(out, in)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionHead {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

impl ProjectionHead {
    pub const DEFAULT_DIM: usize = 1024;

    pub fn new(weight: Array2<f64>, bias: Array1<f64>) -> Result<Self> {
        if weight.nrows() != bias.len() {
            return Err(Error::Shape(format!(
                "weight has {} rows, bias has {} entries",
                weight.nrows(),
                bias.len()
            )));
        }
        Ok(ProjectionHead { weight, bias })
    }

    pub fn identity(dim: usize) -> Self {
        ProjectionHead {
            weight: Array2::eye(dim),
            bias: Array1::zeros(dim),
        }
    }

    /// Uniform Glorot initialization, zero bias.
    pub fn random(in_dim: usize, out_dim: usize, rng: &mut impl Rng) -> Self {
        let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let weight = Array2::from_shape_simple_fn((out_dim, in_dim), || rng.random_range(-limit..limit));
        ProjectionHead {
            weight,
            bias: Array1::zeros(out_dim),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.nrows()
    }

    pub fn project(&self, v: ArrayView1<f64>) -> Result<Array1<f64>> {
        if v.len() != self.in_dim() {
            return Err(Error::Shape(format!(
                "head expects {} inputs, got {}",
                self.in_dim(),
                v.len()
            )));
        }
        Ok(self.weight.dot(&v) + &self.bias)
    }

    /// Projects each row of `x`, `(n, in)` to `(n, out)`.
    pub fn project_rows(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.in_dim() {
            return Err(Error::Shape(format!(
                "head expects {} inputs, got {}",
                self.in_dim(),
                x.ncols()
            )));
        }
        Ok(x.dot(&self.weight.t()) + &self.bias)
    }
}

pub fn project(v: ArrayView1<f64>, head: &ProjectionHead) -> Result<Array1<f64>> {
    head.project(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mean_pooling() {
        let one = HiddenStates::new(array![[1.0, -2.0, 3.0]]).unwrap();
        assert_eq!(pool(&one, Pooling::Mean), array![1.0, -2.0, 3.0]);
        let two = HiddenStates::new(array![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(pool(&two, Pooling::Mean), array![0.5, 0.5]);
        assert_eq!(pool(&two, Pooling::Sum), array![1.0, 1.0]);
    }

    #[test]
    fn mean_pooling_matches_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = Array2::from_shape_simple_fn((5, 8), || rng.random_range(-1.0..1.0));
        let pooled = pool(&HiddenStates::new(m.clone()).unwrap(), Pooling::Mean);
        for j in 0..8 {
            let mut s = 0.0;
            for i in 0..5 {
                s += m[[i, j]];
            }
            assert!((pooled[j] - s / 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hidden_states_validation() {
        assert!(HiddenStates::new(Array2::zeros((0, 4))).is_err());
        assert!(HiddenStates::new(array![[f64::NAN]]).is_err());
    }

    #[test]
    fn projection_cases() {
        let v = array![1.0, 2.0, 3.0];
        assert_eq!(project(v.view(), &ProjectionHead::identity(3)).unwrap(), v);
        let b = array![0.5, -1.0];
        let zero = ProjectionHead::new(Array2::zeros((2, 3)), b.clone()).unwrap();
        assert_eq!(zero.project(v.view()).unwrap(), b);
        assert!(zero.project(array![1.0].view()).is_err());
        assert!(ProjectionHead::new(Array2::zeros((2, 3)), array![1.0]).is_err());
    }

    #[test]
    fn projection_matches_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let head = ProjectionHead {
            weight: Array2::from_shape_simple_fn((4, 6), || rng.random_range(-1.0..1.0)),
            bias: Array1::from_shape_simple_fn(4, || rng.random_range(-1.0..1.0)),
        };
        let v = Array1::from_shape_simple_fn(6, || rng.random_range(-1.0..1.0));
        let out = head.project(v.view()).unwrap();
        for r in 0..4 {
            let mut s = head.bias[r];
            for c in 0..6 {
                s += head.weight[[r, c]] * v[c];
            }
            assert!((out[r] - s).abs() < 1e-14);
        }
        let rows = head.project_rows(v.view().insert_axis(Axis(0))).unwrap();
        assert!((&rows.row(0) - &out).iter().all(|d| d.abs() < 1e-14));
    }
}
