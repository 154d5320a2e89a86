//! Joint sub-band and discrete power allocation for multi-cell downlink
//! networks.
//!
//! The crate has four layers:
//!
//! - [`netmodel`]: scenario configuration, random channel realizations, and
//!   the SINR/utility arithmetic.
//! - [`solvers`]: an exhaustive-search oracle and a genetic algorithm over
//!   per-cell power vectors, with greedy sub-band assignment.
//! - [`dataset`]: solver-labeled sample generation, the bit-level
//!   input/output encodings, CSV persistence, and train/test splitting.
//! - [`dnn`]: a from-scratch feed-forward network with stacked
//!   sparse-autoencoder pretraining, a softmax head, fine-tuning, and
//!   allocation-level evaluation metrics.
//!
//! Everything is deterministic given explicit seeds; data-parallel loops
//! (behind the default `parallel` feature) derive per-index seeds so their
//! results are identical to the sequential fallback.

pub mod dataset;
pub mod dnn;
pub mod netmodel;
pub mod par;
pub mod solvers;
