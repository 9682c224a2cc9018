//! Lexicon-based data augmentation for under-resourced languages.
//!
//! The crate turns a bilingual word list into training data:
//!
//! - [`synth`] rewrites source-language text word by word into pseudo
//!   target-language text, either plain sentences or labeled sentences
//!   whose annotations are carried over unchanged.
//! - [`align`] trains IBM Model 1 on a small parallel corpus and induces
//!   extra lexicon entries from symmetrized alignments.
//! - [`distill`] swaps pseudo labels for a teacher model's predictions.
//! - [`mix`] upsamples, concatenates and shuffles corpora for training.
//! - [`report`] summarizes lexicons and pipeline runs.
//!
//! Batch loops run on rayon when the `parallel` feature is enabled (the
//! default); results are identical to the sequential path.

pub mod align;
pub mod corpus;
pub mod distill;
pub mod error;
pub mod exec;
pub mod lexicon;
pub mod mix;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
pub use exec::Execution;
