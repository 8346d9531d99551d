//! Hierarchical graph embeddings for attributed graphs.
//!
//! The crate builds unsupervised graph-level embeddings by combining three
//! ingredients: a spectral coarsening pyramid over each input graph,
//! truncated-Krylov graph convolutions run at every pyramid level, and a
//! Jensen-Shannon mutual-information objective trained with negative
//! sampling across graphs of a batch. Around that core it ships dataset
//! ingestion (TU format, IDX images, synthetic generators), diagnostic
//! experiments (Weisfeiler-Lehman structural-noise sensitivity, spectral
//! distance correlation under coarsening), a downstream classification and
//! transfer harness, and test-side oracles.
//!
//! With the default `parallel` feature the embarrassingly parallel loops
//! (per-graph pyramid builds, experiment trials, evaluation runs) run on
//! rayon; disabling the feature yields a fully sequential build that
//! produces bit-identical results.

pub mod coarsen;
pub mod error;
pub mod eval;
pub mod graph;
pub mod linalg;
pub mod ndiff;
pub mod oracles;
pub mod par;
pub mod seed;
pub mod spectral;
pub mod synth;
pub mod trainer;
pub mod wl;

pub use error::{Error, Result};
