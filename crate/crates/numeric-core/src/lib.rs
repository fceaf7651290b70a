//! Dense complex linear algebra and multi-qubit tensor plumbing.
//!
//! Everything here works on `nalgebra` dense matrices over `Complex<f64>`.
//! States live on D = 2^N dimensional spaces; replica (k-copy) operators are
//! dense D^k x D^k matrices and are capped at 4096 entries per axis, which is
//! ample for the subsystem sizes this workspace targets (N_A <= 4 at k = 3,
//! N_A <= 2 at k = 5, and so on).
//!
//! Index convention, fixed once and tested: **qubit 0 is the most significant
//! bit** of a computational-basis index. Basis state |b_0 b_1 .. b_{N-1}>
//! has index sum_q b_q * 2^(N-1-q).

mod error;
mod linalg;
mod state;

pub use error::{Error, Result};
pub use linalg::{
    eigh, hs_distance, kron, kron_power, partial_trace, schatten_norm, trace_distance, SchattenP,
    KRON_AXIS_CAP,
};
pub use state::{Bipartition, DensityOperator, StateVector, Subsystem};

use num_complex::Complex;

/// Scalar type used throughout the workspace.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Largest entrywise deviation from Hermiticity accepted by operations that
/// require a Hermitian input (relative to the matrix scale).
pub const HERMITICITY_TOL: f64 = 1e-8;

/// Dense replica (k-copy) operators are capped at this many entries per axis.
pub const REPLICA_AXIS_CAP: usize = 4096;

/// Norm tolerance for states flagged as normalized, and trace tolerance for
/// density operators flagged as states.
pub const STATE_TOL: f64 = 1e-10;

/// Eigenvalues of density operators above this negative floor are clipped to
/// zero; anything below it is a hard error.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Largest entry magnitude of `m`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation of `m` from its own adjoint.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}
