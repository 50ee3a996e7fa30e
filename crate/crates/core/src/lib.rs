//! Build a multilingual relation-extraction dataset framed as reading
//! comprehension, generate its evaluation partitions and score predictions.
//!
//! The pipeline runs in stages, each a pure function of its inputs:
//!
//! 1. [`ingestion`]: load the KB dump and per-language corpora, align them.
//! 2. [`denormalize`]: replace property/value ids with per-language text.
//! 3. [`slotfill`]: distant-supervision positives and type-matched negatives.
//! 4. [`querify`]: template instantiation into question/context/answer examples.
//! 5. [`splits`], [`stats`], [`evalscore`], [`baselines`]: everything downstream.
//!
//! [`pipeline`] wires the stages to files for the command-line tool.

pub mod baselines;
pub mod config;
pub mod denormalize;
pub mod error;
pub mod evalscore;
pub mod ingestion;
pub mod jsonl;
pub mod pipeline;
pub mod querify;
pub mod slotfill;
pub mod splits;
pub mod stats;
pub mod text;
pub mod tsv;

pub use error::{Error, Result};
