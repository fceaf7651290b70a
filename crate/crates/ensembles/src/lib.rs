//! Pure-state ensembles and their moment operators.
//!
//! An ensemble is a set of normalized states with probability weights,
//! either listed explicitly ([`WeightedEnsemble`]) or described implicitly
//! by a sampler over a continuous measure ([`StateSampler`]). The central
//! object built from either is the k-th moment operator
//!
//! ```text
//! rho^(k) = sum_i p_i (|psi_i><psi_i|)^{tensor k}
//! ```
//!
//! which fully encodes what any observer averaging k replicas can learn
//! about the ensemble. Moments are estimated by streaming rank-1 updates
//! through a [`MomentAccumulator`], which also tracks a Frobenius-norm
//! standard error for the Monte Carlo mean.
//!
//! Samplers draw from counter-based RNG streams: sample `i` of a sampler
//! with seed `s` is produced by a fresh generator keyed on `(s, i)`, so a
//! stream is reproducible bit for bit regardless of evaluation order or
//! thread count, and any sample can be regenerated from its `(seed,
//! stream-id)` pair alone.
//!
//! The crate also provides the spectral information measures attached to a
//! single density operator: von Neumann entropy, subentropy (the accessible
//! information of the minimizing ensemble with that average state), and the
//! fourth-norm effective dimension.

mod ensemble;
mod measures;
mod moment;
mod sampler;
mod serialize;

pub use ensemble::{WeightedEnsemble, WEIGHT_TOL};
pub use measures::{
    effective_dimension, subentropy, von_neumann_entropy, DEGENERACY_SPLIT, DEGENERACY_TOL,
};
pub use moment::{
    estimate_moment, moment_operator, tensor_power_vec, MomentAccumulator, MomentOperator,
};
pub use sampler::{
    sample_haar_state, stream_rng, EnsembleSampler, HaarSampler, RandomPhaseSampler, StateSampler,
    UniformPhaseSampler,
};
pub use serialize::{ensemble_from_json, ensemble_to_json, moment_from_json, moment_to_json};

/// Errors for ensemble construction, moment accumulation, and serialization.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ensemble is empty")]
    EmptyEnsemble,

    #[error("ensemble weight {0} is negative")]
    NegativeWeight(f64),

    #[error("ensemble weights sum to {got}, expected 1 within {tol}")]
    WeightsNotNormalized { got: f64, tol: f64 },

    #[error("state dimension {got} does not match ensemble dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("replica dimension {dim}^{k} exceeds cap {cap}")]
    ReplicaCap { dim: usize, k: usize, cap: usize },

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: u64, need: u64 },

    #[error("malformed serialized object: {0}")]
    Malformed(String),

    #[error(transparent)]
    Core(#[from] numeric_core::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
