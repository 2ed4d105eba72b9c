//! Verification of the contrastive loss: a direct double-summation
//! reference, a central finite-difference gradient check and the suite run
//! by `acos scl-check`.

use ndarray::{array, Array2, ArrayView2};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{contrastive_loss, extend_batch, ReprBatch, SclConfig, SclLoss};
use crate::error::Result;

/// Coordinates beyond which only a sample is checked.
const FULL_CHECK_LIMIT: usize = 10_000;

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for k in 0..a.len() {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// The loss written as the literal double sum over positives and batch
/// members, mean over rows. No max shift; meant for small checks.
pub fn reference_loss(reps: ArrayView2<f64>, labels: &[usize], tau: f64) -> f64 {
    let rows: Vec<Vec<f64>> = reps.outer_iter().map(|r| r.to_vec()).collect();
    let m = rows.len();
    let mut total = 0.0;
    for i in 0..m {
        let mut sum = 0.0;
        let mut count = 0usize;
        for p in 0..m {
            if p == i || labels[p] != labels[i] {
                continue;
            }
            let zp = cosine(&rows[i], &rows[p]) / tau;
            // -log(e^zp / sum_b e^zb) = log(1 + sum_{b != i,p} e^(zb - zp))
            let mut ratio = 0.0;
            for b in 0..m {
                if b != i && b != p {
                    ratio += (cosine(&rows[i], &rows[b]) / tau - zp).exp();
                }
            }
            sum += ratio.ln_1p();
            count += 1;
        }
        total += sum / count as f64;
    }
    total / m as f64
}

/// Outcome of comparing analytic and numerical gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradCheck {
    pub max_rel_error: f64,
    pub max_abs_error: f64,
    pub max_abs_analytic: f64,
    pub max_abs_numeric: f64,
    pub coordinates: usize,
}

/// Maximum relative error between the analytic gradient and central
/// differences with step `h`.
pub fn grad_check(batch: &ReprBatch, tau: f64, h: f64) -> Result<f64> {
    Ok(grad_check_detailed(batch, tau, h, contrastive_loss)?.max_rel_error)
}

/// Gradient check against an arbitrary loss implementation. The relative
/// error of a coordinate is `|a - g| / max(|a|, |g|, 1e-8)`.
pub fn grad_check_detailed<F>(batch: &ReprBatch, tau: f64, h: f64, loss_fn: F) -> Result<GradCheck>
where
    F: Fn(ArrayView2<f64>, &[usize], f64) -> Result<SclLoss>,
{
    let analytic = loss_fn(batch.reps.view(), &batch.labels, tau)?.grad;
    let (m, d) = batch.reps.dim();
    let total = m * d;
    let coords: Vec<usize> = if total > FULL_CHECK_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        sample(&mut rng, total, total / 10).into_vec()
    } else {
        (0..total).collect()
    };
    let mut reps = batch.reps.clone();
    let mut out = GradCheck {
        max_rel_error: 0.0,
        max_abs_error: 0.0,
        max_abs_analytic: 0.0,
        max_abs_numeric: 0.0,
        coordinates: coords.len(),
    };
    for c in coords {
        let (r, k) = (c / d, c % d);
        let orig = reps[[r, k]];
        reps[[r, k]] = orig + h;
        let plus = loss_fn(reps.view(), &batch.labels, tau)?.loss;
        reps[[r, k]] = orig - h;
        let minus = loss_fn(reps.view(), &batch.labels, tau)?.loss;
        reps[[r, k]] = orig;
        let numeric = (plus - minus) / (2.0 * h);
        let a = analytic[[r, k]];
        let diff = (a - numeric).abs();
        let rel = diff / a.abs().max(numeric.abs()).max(1e-8);
        out.max_rel_error = out.max_rel_error.max(rel);
        out.max_abs_error = out.max_abs_error.max(diff);
        out.max_abs_analytic = out.max_abs_analytic.max(a.abs());
        out.max_abs_numeric = out.max_abs_numeric.max(numeric.abs());
    }
    Ok(out)
}

/// A random valid extended batch: `N` in `1..=max_n` source rows of width
/// `2..=max_d` with entries in `[-1, 1)`, up to three labels, and one
/// dropout view (p = 0.1) per row.
pub fn random_batch(rng: &mut impl Rng, max_n: usize, max_d: usize) -> ReprBatch {
    loop {
        let n = rng.random_range(1..=max_n);
        let d = rng.random_range(2..=max_d.max(2));
        let classes = rng.random_range(1..=3);
        let reps = Array2::from_shape_simple_fn((n, d), || rng.random_range(-1.0..1.0));
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        let cfg = SclConfig {
            dropout_p: 0.1,
            rng_seed: rng.random(),
            ..SclConfig::default()
        };
        let batch = extend_batch(reps.view(), &labels, &cfg).expect("valid shapes");
        let nonzero = batch
            .reps
            .outer_iter()
            .all(|r| r.iter().any(|v| v.abs() > 1e-3));
        if nonzero {
            return batch;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub tau: f64,
    pub oracle_cases: usize,
    pub grad_cases: usize,
    pub step: f64,
    pub oracle_tolerance: f64,
    pub grad_tolerance: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            tau: 0.25,
            oracle_cases: 1000,
            grad_cases: 100,
            step: 1e-5,
            oracle_tolerance: 1e-9,
            grad_tolerance: 1e-4,
        }
    }
}

/// A failing case, serialized so it can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayCase {
    pub check: String,
    pub tau: f64,
    pub reps: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub error: f64,
}

impl ReplayCase {
    fn new(check: &str, batch: &ReprBatch, tau: f64, error: f64) -> Self {
        ReplayCase {
            check: check.to_owned(),
            tau,
            reps: batch.reps.outer_iter().map(|r| r.to_vec()).collect(),
            labels: batch.labels.clone(),
            error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCase {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub oracle_matches: usize,
    pub max_oracle_rel_error: f64,
    pub grad_passes: usize,
    pub max_grad_rel_error: f64,
    pub closed_form: Vec<ClosedFormCase>,
    pub failures: Vec<ReplayCase>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.oracle_matches == self.options.oracle_cases
            && self.grad_passes == self.options.grad_cases
            && self.closed_form.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}/{} oracle matches (max rel err {:.3e}), {}/{} gradient checks (max grad rel err {:.3e} < {:.0e})",
            self.oracle_matches,
            self.options.oracle_cases,
            self.max_oracle_rel_error,
            self.grad_passes,
            self.options.grad_cases,
            self.max_grad_rel_error,
            self.options.grad_tolerance,
        );
        for c in &self.closed_form {
            s.push_str(&format!(
                "\n{}: {:.6} (expected {:.6}) {}",
                c.name,
                c.value,
                c.expected,
                if c.passed { "ok" } else { "FAILED" }
            ));
        }
        s
    }
}

/// Runs the oracle, closed-form and gradient checks against `loss_fn`.
pub fn run_suite<F>(opts: &SuiteOptions, loss_fn: F) -> Result<SuiteReport>
where
    F: Fn(ArrayView2<f64>, &[usize], f64) -> Result<SclLoss> + Copy,
{
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut failures = Vec::new();
    let tau = opts.tau;

    let mut oracle_matches = 0;
    let mut max_oracle = 0.0f64;
    for _ in 0..opts.oracle_cases {
        let batch = random_batch(&mut rng, 8, 16);
        let fast = loss_fn(batch.reps.view(), &batch.labels, tau)?.loss;
        let slow = reference_loss(batch.reps.view(), &batch.labels, tau);
        let rel = (fast - slow).abs() / slow.abs().max(f64::MIN_POSITIVE);
        max_oracle = max_oracle.max(rel);
        if rel < opts.oracle_tolerance {
            oracle_matches += 1;
        } else if failures.len() < 3 {
            failures.push(ReplayCase::new("oracle", &batch, tau, rel));
        }
    }

    let mut grad_passes = 0;
    let mut max_grad = 0.0f64;
    for _ in 0..opts.grad_cases {
        let batch = random_batch(&mut rng, 8, 16);
        let check = grad_check_detailed(&batch, tau, opts.step, loss_fn)?;
        max_grad = max_grad.max(check.max_rel_error);
        if check.max_rel_error < opts.grad_tolerance {
            grad_passes += 1;
        } else if failures.len() < 6 {
            failures.push(ReplayCase::new("gradient", &batch, tau, check.max_rel_error));
        }
    }

    let mut closed_form = Vec::new();
    let mut case = |name: &str, value: f64, expected: f64, tolerance: f64| {
        closed_form.push(ClosedFormCase {
            name: name.to_owned(),
            value,
            expected,
            tolerance,
            passed: (value - expected).abs() < tolerance,
        });
    };
    let pair = array![[0.4, -1.0, 2.0], [0.4, -1.0, 2.0]];
    case("single pair", loss_fn(pair.view(), &[0, 0], tau)?.loss, 0.0, 1e-12);
    let n = 4;
    let same = Array2::from_elem((2 * n, 5), 1.0);
    case(
        "identical batch, N=4",
        loss_fn(same.view(), &vec![0; 2 * n], tau)?.loss,
        ((2 * n - 1) as f64).ln(),
        1e-9,
    );
    let ortho = array![[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
    case(
        "orthogonal pair, tau=0.25",
        loss_fn(ortho.view(), &[0; 4], 0.25)?.loss,
        2.7027,
        1e-4,
    );

    Ok(SuiteReport {
        options: opts.clone(),
        oracle_matches,
        max_oracle_rel_error: max_oracle,
        grad_passes,
        max_grad_rel_error: max_grad,
        closed_form,
        failures,
    })
}
