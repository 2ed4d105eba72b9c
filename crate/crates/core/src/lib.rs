//! Toolkit for generative ACOS (aspect, category, opinion, sentiment)
//! quadruple extraction.
//!
//! * [`acos`]: domain types, the dataset TSV reader/writer and example-level
//!   characteristic labels.
//! * [`category`] and [`format`]: natural category descriptions and the
//!   linearization of quadruple sets into generation targets.
//! * [`parse`]: the inverse, robust to malformed model outputs.
//! * [`eval`]: exact-match precision/recall/F1 and dataset statistics.
//! * [`scl`]: the supervised contrastive objective over characteristic
//!   representations, its gradient checks and a toy training demo.
//!
//! ```
//! use acos_quad::acos::{parse_dataset, Split};
//! use acos_quad::format::{linearize_example, FormatStyle};
//! use acos_quad::parse::parse_output;
//! use acos_quad::profile::DatasetKind;
//!
//! let xs = parse_dataset("the pizza was great\t1,2 FOOD#QUALITY 2 3,4\n", Split::Test)?;
//! let map = DatasetKind::Rest.category_map();
//! let target = linearize_example(&xs[0], FormatStyle::GenNat, &map)?;
//! assert_eq!(target, "the food quality | the pizza is great | positive");
//! let parsed = parse_output(&target, FormatStyle::GenNat, &map);
//! assert_eq!(parsed.quads, xs[0].surface_quads());
//! # Ok::<(), acos_quad::Error>(())
//! ```

pub mod acos;
pub mod category;
pub mod cli;
mod error;
pub mod eval;
pub mod format;
pub mod parse;
pub mod profile;
pub mod scl;
pub mod synth;

pub use error::{Error, Result};

/// Guide chapters, compiled so their snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dataset.md")]
    mod dataset {}
    #[doc = include_str!("../../../book/src/categories.md")]
    mod categories {}
    #[doc = include_str!("../../../book/src/targets.md")]
    mod targets {}
    #[doc = include_str!("../../../book/src/parsing.md")]
    mod parsing {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/contrastive.md")]
    mod contrastive {}
    #[doc = include_str!("../../../book/src/demo.md")]
    mod demo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
