//! Symmetric-subspace machinery and Weingarten calculus.
//!
//! Permutation operators on k-fold replica spaces, Haar moment operators,
//! Gram/Weingarten matrices, and the k-fold twirl. This layer is the analytic
//! oracle against which every Monte Carlo estimator in the workspace is
//! checked.
//!
//! Conventions. A permutation `pi` acts on replica slots by moving the state
//! in slot m to slot pi(m):
//!
//! ```text
//! <j_1..j_k| op(pi) |i_1..i_k> = prod_m delta(j_{pi(m)}, i_m)
//! ```
//!
//! which makes `pi -> op(pi)` a group homomorphism. Composite indices put
//! slot 0 in the most significant position, matching the Kronecker-product
//! convention in `numeric-core`.

mod perm;
mod symbasis;
mod table;
mod twirl;

pub use perm::{enumerate_permutations, Permutation, PERMUTATION_ORDER_CAP};
pub use symbasis::{arrangements, occupations, sym_basis_isometry, sym_coords, Occupation};
pub use table::WeingartenTable;
pub use twirl::{haar_moment, haar_twirl, permutation_operator, sym_dim, sym_projector};

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moment order k={k} exceeds the cap {cap}")]
    OrderCap { k: usize, cap: usize },

    #[error("replica dimension {dim} exceeds the cap {cap} per axis")]
    SizeCap { dim: usize, cap: usize },

    #[error("mapping {mapping:?} is not a bijection on 0..{k}")]
    NotABijection { mapping: Vec<usize>, k: usize },

    #[error("Gram matrix is singular for k={k} > D={d}")]
    SingularGram { k: usize, d: usize },

    #[error("symmetric-subspace dimension overflows for D={d}, k={k}")]
    SymDimOverflow { d: usize, k: usize },

    #[error("operator dimension {got} does not match D^k = {expected}")]
    Shape { got: usize, expected: usize },

    #[error(transparent)]
    Core(#[from] numeric_core::Error),
}
