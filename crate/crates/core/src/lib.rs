//! Schwinger-Dyson signature kernels.
//!
//! The kernel `K_SD(γ, σ)` is the large-N limit of the normalised expected
//! trace of a random unitary development of the path `γ ∗ ←σ`. This crate
//! computes it three independent ways:
//!
//! * grid schemes for the quadratic functional equation
//!   `K(s,t) = 1 − ∫_s^t ∫_s^r K(s,u) K(u,r) ⟨dγ_u, dγ_r⟩` ([`sdkernel`]),
//! * the series `Σ_I i^{|I|} φ(I) S^I(γ)` contracting the signature against
//!   free semicircular moments ([`sdkernel::series_oracle`], [`freeprob`]),
//! * Monte-Carlo over GUE developments ([`randomdev`]).
//!
//! The classical signature kernel is available both as a truncated series
//! ([`signature`]) and as the large-N limit of Ginibre GL developments.
//! [`mmd`] builds Gram matrices and MMD distances on top of either kernel.

pub mod error;
pub mod freeprob;
pub mod mmd;
pub mod paths;
pub mod randomdev;
pub mod sdkernel;
pub mod signature;
pub(crate) mod sum;

pub use error::{Error, Result};
pub use paths::{IncrementSequence, Partition, PartitionSpec, Path};
