//! A stochastic model for the plenoptic function: a camera performing a
//! Bernoulli random walk in front of a 1-D "wall" process, producing a
//! vector process of overlapping views.
//!
//! The crate provides, end to end:
//!
//! - [`walk`]: random-walk sampling and exact recurrence/return analytics
//!   (Catalan-number closed forms, first-passage limits).
//! - [`reality`]: generators for the wall models: static discrete i.i.d.,
//!   binary field with BSC innovations, Gaussian AR(1) field.
//! - [`view`]: assembly of the vector process from a path and a reality.
//! - [`entropy`]: closed-form entropy-rate bounds for the static and dynamic
//!   models, memory-constrained conditional bounds, and the Jensen tail bound.
//! - [`detect`]: trajectory-increment detectors and Monte-Carlo estimation of
//!   the detection error probability feeding the Fano slack term.
//! - [`rd`]: rate-distortion machinery: Blahut-Arimoto, Shannon-lower-bound
//!   composition for the AR(1) field, Toeplitz eigenvalue checks.
//! - [`codec`]: an operational DPCM + ECSQ coding harness with trajectory
//!   side information and memory 1 or infinite.
//! - [`oracle`]: brute-force exact conditional entropies and exact Bayes
//!   detection error on tiny instances, used as ground truth for the bounds.
//! - [`experiments`]: seeded, reproducible experiment runners with CSV/JSON
//!   output, surfaced by the `plenoptic` binary.
//!
//! Everything is deterministic given a master seed; see [`seed`] for the
//! seed-splitting rule used to keep parallel trials schedule-independent.

pub mod codec;
pub mod detect;
pub mod entropy;
mod error;
pub mod experiments;
pub mod oracle;
pub mod rd;
pub mod reality;
pub mod seed;
pub mod view;
pub mod walk;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
