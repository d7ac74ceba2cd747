//! Normative numeric tolerances, centralized so no module invents its own
//! magic numbers.
//!
//! | Constant              | Basis                                          |
//! |-----------------------|------------------------------------------------|
//! | exact-arithmetic      | IEEE 754 f64 round-off on small dense matrices |
//! | iterative             | eigensolver convergence behaviour              |
//! | statistical           | accumulation over many evolution steps         |

/// Maximum `|M[i][j] - conj(M[j][i])|` for a matrix accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-12;

/// Maximum entry of `|U†U - I|` for a matrix accepted as unitary.
pub const UNITARITY: f64 = 1e-10;

/// Stricter unitarity bound applied to the 3x3 coins, which are built from
/// closed-form entries and carry almost no round-off.
pub const COIN_UNITARITY: f64 = 1e-12;

/// Maximum entry of `|V diag(w) V† - M|` for an accepted eigendecomposition.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Maximum deviation from pairwise orthonormality of eigenvector columns.
pub const EIG_ORTHONORMALITY: f64 = 1e-10;

/// Off-diagonal decay threshold (relative to the matrix scale) at which the
/// Jacobi eigensolver declares convergence.
pub const EIG_OFFDIAG_DECAY: f64 = 1e-14;

/// Component magnitude below which an eigenvector entry is treated as zero
/// when fixing the global phase of each column.
pub const EIG_PHASE_PIVOT: f64 = 1e-12;

/// Maximum change of a squared norm under an operation that preserves it.
pub const NORM_PRESERVATION: f64 = 1e-12;

/// Maximum entry error of `exp(-iM(t1+t2)) - exp(-iMt1) exp(-iMt2)`.
pub const SEMIGROUP: f64 = 1e-9;

/// Maximum deviation of a renormalized position distribution's total from 1.
pub const PROB_SUM: f64 = 1e-9;

/// Slack accepted around [0, 1] for probabilities before clamping; values
/// further out are contract violations rather than round-off.
pub const PROB_RANGE_SLACK: f64 = 1e-12;

/// Squared norm at or below which a projected state counts as the zero
/// vector, making renormalization a degenerate-state error.
pub const DEGENERATE_NORM_SQ: f64 = 1e-300;
