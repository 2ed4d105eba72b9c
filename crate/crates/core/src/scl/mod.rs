//! Supervised contrastive objective over example-level characteristics.
//!
//! For each characteristic (sentiment, aspect, opinion) the pooled encoder
//! state of every example goes through its own affine head. The batch of
//! head outputs is extended with one dropout view per row, and each row `i`
//! is scored against all other rows `B(i)` of the extended batch:
//!
//! ```text
//! L_i = -1/|P(i)| * sum_{p in P(i)} log( exp(sim(h_i, h_p)/tau) / sum_{b in B(i)} exp(sim(h_i, h_b)/tau) )
//! ```
//!
//! where `P(i)` are the rows of `B(i)` sharing `i`'s label and `sim` is
//! cosine similarity. The batch loss is the mean of `L_i` over rows.

mod batch;
mod check;
mod config;
pub mod demo;
mod head;
mod loss;

pub use batch::{extend_batch, ReprBatch};
pub use check::{
    grad_check, grad_check_detailed, random_batch, reference_loss, run_suite, GradCheck,
    ReplayCase, SuiteOptions, SuiteReport,
};
pub use config::{Pooling, SclConfig};
pub use head::{pool, project, HiddenStates, ProjectionHead};
pub use loss::{contrastive_loss, scl_loss, total_loss, SclLoss};
