//! A hash function built from hybrid quantum walks on a finite path
//! graph, plus the statistical harness used to evaluate it.
//!
//! Each input bit selects which walk advances the quantum state: a `1`
//! applies one step of a lackadaisical (self-loop weighted) coined walk
//! on the 3n-dimensional coin ⊗ position space, a `0` applies a
//! continuous-time walk unitary `exp(-iAt)` inside the self-loop block
//! via a projection embedding. After the last bit the state is measured
//! in the position basis and each vertex probability is floored into a
//! k-bit segment; the concatenated segments are the `n * k`-bit hash.
//!
//! ```
//! use qwhash::{qhf, Message, QhfParams};
//!
//! let params = QhfParams::default();
//! let hash = qhf(&Message::parse("1011001").unwrap(), &params).unwrap();
//! assert_eq!(hash.len(), 165);
//! assert_eq!(hash.hex().len(), 42);
//! ```
//!
//! The [`analysis`] module provides the seeded, reproducible evaluation
//! battery: collision omega counts, avalanche statistics, per-bit toggle
//! uniformity, an input-edit sensitivity suite, and the birthday bound.

pub mod analysis;
pub mod bits;
mod error;
pub mod hash;
pub mod linalg;
pub mod tol;
pub mod walk;

pub use bits::BitString;
pub use error::{Error, Result};
pub use hash::{
    encode_distribution, encode_segment, evolve, initial_state, measure_positions, qhf,
    HashValue, Message, PositionDistribution, Qhf, QhfParams,
};
pub use linalg::{
    apply, eig_hermitian, expm_hermitian, path_adjacency, ComplexMat, ComplexVec,
    SpectralDecomposition,
};
pub use walk::{
    build_coin, build_lqw, build_p_embed, build_shift, hybrid_step, Boundary, CoinDirection,
    CoinKind, WalkOperators,
};
