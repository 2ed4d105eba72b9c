use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::{ReprBatch, SclConfig};
use crate::error::{Error, Result};

/// Batch loss, per-row losses and the gradient of the batch loss with
/// respect to every representation row.
#[derive(Debug, Clone, PartialEq)]
pub struct SclLoss {
    pub loss: f64,
    pub per_row: Vec<f64>,
    pub grad: Array2<f64>,
}

/// Contrastive loss of an extended batch.
pub fn scl_loss(batch: &ReprBatch, tau: f64) -> Result<SclLoss> {
    contrastive_loss(batch.reps.view(), &batch.labels, tau)
}

/// Mean over rows of the supervised contrastive loss with cosine similarity,
/// with its analytic gradient.
///
/// With `z_ib = cos(h_i, h_b) / tau`, row `i` contributes
/// `lse_{b != i} z_ib - mean_{p in P(i)} z_ip`. Its derivative with respect
/// to `z_ib` is `softmax_i(b) - [b in P(i)] / |P(i)|`; these coefficients
/// are pushed through the cosine (normalization) Jacobian.
pub fn contrastive_loss(reps: ArrayView2<f64>, labels: &[usize], tau: f64) -> Result<SclLoss> {
    let m = reps.nrows();
    if labels.len() != m {
        return Err(Error::Shape(format!("{m} rows but {} labels", labels.len())));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Config(format!("tau must be > 0, got {tau}")));
    }
    if reps.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("representations".into()));
    }
    let norms: Array1<f64> = reps.map_axis(Axis(1), |r| r.dot(&r).sqrt());
    if let Some(row) = norms.iter().position(|n| *n == 0.0) {
        return Err(Error::ZeroNorm { row });
    }
    let positives: Vec<usize> = (0..m)
        .map(|i| (0..m).filter(|&j| j != i && labels[j] == labels[i]).count())
        .collect();
    if let Some(row) = positives.iter().position(|c| *c == 0) {
        return Err(Error::NoPositive { row });
    }

    let unit = &reps / &norms.view().insert_axis(Axis(1));
    let logits = unit.dot(&unit.t()) / tau;

    let inv_m = 1.0 / m as f64;
    let mut per_row = Vec::with_capacity(m);
    let mut coef = Array2::<f64>::zeros((m, m));
    for i in 0..m {
        let z = logits.row(i);
        let others: Vec<usize> = (0..m).filter(|&b| b != i).collect();
        let top = others
            .iter()
            .copied()
            .fold(others[0], |a, b| if z[b] > z[a] { b } else { a });
        let max = z[top];
        let shifted: Vec<f64> = (0..m).map(|b| (z[b] - max).exp()).collect();
        let rest: f64 = others.iter().filter(|&&b| b != top).map(|&b| shifted[b]).sum();
        let denom = 1.0 + rest;
        let pos: Vec<usize> = others.iter().copied().filter(|&p| labels[p] == labels[i]).collect();
        let n_pos = pos.len() as f64;
        let gap = pos.iter().map(|&p| max - z[p]).sum::<f64>() / n_pos;
        per_row.push(gap + rest.ln_1p());
        for &b in &others {
            let c = if labels[b] == labels[i] {
                // denom - n_pos * shifted[b], free of cancellation
                let excess = shifted[b] * pos.iter().map(|&p| (z[p] - z[b]).exp_m1()).sum::<f64>()
                    + others
                        .iter()
                        .filter(|&&q| labels[q] != labels[i])
                        .map(|&q| shifted[q])
                        .sum::<f64>();
                -excess / (n_pos * denom)
            } else {
                shifted[b] / denom
            };
            coef[[i, b]] = inv_m * c;
        }
    }
    let loss = per_row.iter().sum::<f64>() * inv_m;

    // d loss / d cos_ij, symmetric since cos_ij = cos_ji.
    let sym = (&coef + &coef.t()) / tau;
    let d_unit = sym.dot(&unit);
    let radial = (&d_unit * &unit).sum_axis(Axis(1));
    let grad = (d_unit - &unit * &radial.insert_axis(Axis(1))) / &norms.insert_axis(Axis(1));
    Ok(SclLoss {
        loss,
        per_row,
        grad,
    })
}

/// `ce + a1 * sentiment + a2 * aspect + a3 * opinion`.
pub fn total_loss(ce: f64, scl_sent: f64, scl_asp: f64, scl_op: f64, cfg: &SclConfig) -> Result<f64> {
    let inputs = [ce, scl_sent, scl_asp, scl_op];
    if let Some(v) = inputs.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("loss term {v}")));
    }
    let [a1, a2, a3] = cfg.alpha;
    Ok(ce + a1 * scl_sent + a2 * scl_asp + a3 * scl_op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn single_pair_has_zero_loss() {
        let b = ReprBatch::from_rows(array![[0.3, -1.2], [0.3, -1.2]], vec![4, 4]).unwrap();
        let out = scl_loss(&b, 0.25).unwrap();
        assert!(out.loss.abs() < 1e-12);
        assert!(out.grad.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn identical_rows_give_log_of_partners() {
        for n in 1..=5 {
            let reps = Array2::from_elem((2 * n, 3), 0.7);
            let out = contrastive_loss(reps.view(), &vec![0; 2 * n], 0.25).unwrap();
            let expected = ((2 * n - 1) as f64).ln();
            assert!((out.loss - expected).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn orthogonal_pair_case() {
        let reps = array![[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        let out = contrastive_loss(reps.view(), &[0, 0, 0, 0], 0.25).unwrap();
        for l in &out.per_row {
            assert!((l - 2.7027).abs() < 1e-4, "{l}");
        }
    }

    #[test]
    fn errors() {
        let reps = array![[1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(
            contrastive_loss(reps.view(), &[0, 1], 0.25),
            Err(Error::NoPositive { row: 0 })
        ));
        assert!(contrastive_loss(reps.view(), &[0, 0], 0.0).is_err());
        assert!(contrastive_loss(reps.view(), &[0, 0], -1.0).is_err());
        let zero = array![[0.0, 0.0], [0.0, 1.0]];
        assert!(matches!(
            contrastive_loss(zero.view(), &[0, 0], 0.25),
            Err(Error::ZeroNorm { row: 0 })
        ));
    }

    #[test]
    fn scale_invariance() {
        let reps = array![[1.0, 0.5, -0.2], [0.1, 2.0, 0.3], [0.9, 0.4, 0.0], [-0.3, 1.5, 0.6]];
        let labels = [0, 1, 0, 1];
        let base = contrastive_loss(reps.view(), &labels, 0.25).unwrap().loss;
        let scaled = &reps * &array![[3.0], [0.01], [7.5], [1.2]];
        let other = contrastive_loss(scaled.view(), &labels, 0.25).unwrap().loss;
        assert!((base - other).abs() < 1e-12);
    }

    #[test]
    fn weighted_total() {
        let cfg = SclConfig::default();
        assert!((total_loss(1.0, 2.0, 2.0, 2.0, &cfg).unwrap() - 1.3).abs() < 1e-12);
        let ablated = SclConfig::default().with_alpha(0.0);
        assert_eq!(total_loss(0.7, 5.0, 6.0, 7.0, &ablated).unwrap(), 0.7);
        assert!(total_loss(f64::NAN, 0.0, 0.0, 0.0, &cfg).is_err());
        assert!(total_loss(0.0, f64::INFINITY, 0.0, 0.0, &cfg).is_err());
    }
}
