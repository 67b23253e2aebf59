//! MDS convertible codes in the merge regime: constructions, conversion
//! engines, and brute-force optimality verification.
//!
//! A convertible code pairs an initial `[n_i, k_i]` MDS code with a final
//! `[n_f, k_f]` MDS code and a procedure that turns `lambda` initial
//! codewords into one final codeword (`k_f = lambda * k_i`). This crate
//! builds such pairs with provably minimal conversion cost and *measures*
//! that cost instead of taking it on faith:
//!
//! - [`gf`] — exact GF(p^m) arithmetic with canonical integer encoding;
//! - [`linalg`] — dense matrices over a field, Cauchy/Vandermonde builders,
//!   superregularity and proportional-column checks;
//! - [`mds`] — scalar `[n, k]` MDS codes, erasure decoding, brute-force MDS
//!   verification;
//! - [`access`] — access-optimal constructions (Cauchy subgroup families and
//!   the GRS family), the conversion engine, and per-disk access accounting;
//! - [`bandwidth`] — bandwidth-optimal vector codes via piggybacking with
//!   sub-packetization `r_f / gcd(r_f, r_i)` and sub-symbol accounting;
//! - [`json`] — serde descriptors for every on-disk artifact;
//! - [`cli`] — the `convcode` command-line front end.
//!
//! Everything is exact (no floating point) and deterministic: construction
//! set choices are canonical, and all randomized verification flows through
//! one seeded generator.
//!
//! ```
//! use convcode::{build_subgroup_mult, Field, MergeParams, MultVariant};
//!
//! // merge two [9, 5] codewords into one [14, 10] codeword over GF(13)
//! let params = MergeParams::new(5, 4, 4, 2)?;
//! let field = Field::gf(13)?;
//! let pair = build_subgroup_mult(&params, &field, MultVariant::B, None)?;
//!
//! let inputs = vec![
//!     pair.initial().encode_values(&[1, 2, 3, 4, 5])?,
//!     pair.initial().encode_values(&[6, 7, 8, 9, 10])?,
//! ];
//! let (merged, trace) = pair.convert(&inputs)?;
//! assert!(pair.final_code().contains(&merged));
//! assert_eq!(trace.disks_read(), 8); // lambda * r_f, not lambda * k_i
//! assert_eq!(trace.disks_written(), 4);
//! # Ok::<(), convcode::Error>(())
//! ```

// index-based loops mirror the row/column arithmetic they implement
#![allow(clippy::needless_range_loop)]

pub mod access;
pub mod bandwidth;
pub mod cli;
pub mod gf;
pub mod json;
pub mod linalg;
pub mod mds;

pub use access::{
    access_cost_bound, build_default, build_grs, build_subgroup_add, build_subgroup_mult,
    build_triply_extended, verify_access_optimal, verify_parallel_block_reconstructible,
    AccessTrace, AddVariant, ConversionPlan, ConvertiblePair, Family, MergeParams, MultVariant,
};
pub use bandwidth::{
    bandwidth_bound, build_vector_pair, min_subpacketization, multi_rf_subpacketization,
    verify_bandwidth_optimal, BandwidthTrace, BwParams, VectorCodePair, VectorCodeword,
};
pub use gf::{Field, FieldElement, FieldSpec};
pub use linalg::{
    cauchy, extended_vandermonde, scalar_multiple_of, triply_extended_vandermonde, vandermonde,
    Matrix, OrderedSet,
};
pub use mds::{Codeword, MdsCode, Representation};

use thiserror::Error as ThisError;

/// Errors shared by the whole crate.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("sets are not disjoint: {0}")]
    NotDisjoint(String),
    #[error("duplicate element: {0}")]
    DuplicateElement(String),
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
