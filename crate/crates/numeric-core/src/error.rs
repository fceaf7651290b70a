use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    Shape {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("operator size {got} exceeds cap {cap} per axis")]
    SizeCap { got: usize, cap: usize },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("state norm {norm} is not 1 within {tol:.1e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("trace {trace} is not 1 within {tol:.1e}")]
    NotUnitTrace { trace: f64, tol: f64 },

    #[error("eigenvalue {value:.3e} below the negative floor {floor:.1e}")]
    NegativeEigenvalue { value: f64, floor: f64 },

    #[error("amplitude vector length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("invalid bipartition: {reason}")]
    InvalidBipartition { reason: String },
}
