use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::{
    hermiticity_deviation, max_abs, CMatrix, CVector, C64, EIGENVALUE_FLOOR, HERMITICITY_TOL,
    STATE_TOL,
};

/// Pure state on N qubits as a dense amplitude vector of length D = 2^N.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: CVector,
    num_qubits: usize,
    normalized: bool,
}

impl StateVector {
    /// Wraps an amplitude vector, flagging it as normalized when its norm is
    /// 1 within tolerance.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len });
        }
        let num_qubits = len.trailing_zeros() as usize;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let normalized = (norm_sq - 1.0).abs() <= STATE_TOL;
        Ok(Self {
            amplitudes,
            num_qubits,
            normalized,
        })
    }

    /// As `new`, but errors unless the vector is normalized.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let sv = Self::new(amplitudes)?;
        if !sv.normalized {
            return Err(Error::NotNormalized {
                norm: sv.norm(),
                tol: STATE_TOL,
            });
        }
        Ok(sv)
    }

    /// Computational basis state |index> on `num_qubits` qubits.
    pub fn computational_basis(num_qubits: usize, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(index < dim, "basis index {index} out of range for {num_qubits} qubits");
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Self {
            amplitudes,
            num_qubits,
            normalized: true,
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns a normalized copy; errors on the zero vector.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: 0.0, tol: STATE_TOL });
        }
        Ok(Self {
            amplitudes: self.amplitudes.map(|a| a / n),
            num_qubits: self.num_qubits,
            normalized: true,
        })
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Rank-one projector |psi><psi| as a raw matrix (no normalization check).
    pub fn projector(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        m
    }

    /// Density operator |psi><psi| of a normalized state.
    pub fn density(&self) -> Result<DensityOperator> {
        if !self.normalized {
            return Err(Error::NotNormalized {
                norm: self.norm(),
                tol: STATE_TOL,
            });
        }
        DensityOperator::new(self.projector())
    }
}

/// Hermitian positive-semidefinite matrix with a lazily computed, cached
/// eigendecomposition (eigenvalues descending, clipped at zero).
///
/// Construction symmetrizes the input after checking the Hermiticity
/// deviation, so downstream spectral code never sees the raw asymmetry.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    is_state: bool,
    eig: OnceLock<(Vec<f64>, CMatrix)>,
}

impl DensityOperator {
    /// Unit-trace density operator (a quantum state).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::build(matrix, true)
    }

    /// Hermitian PSD operator without the unit-trace requirement
    /// (e.g. an unnormalized conditional block of a larger state).
    pub fn new_unnormalized(matrix: CMatrix) -> Result<Self> {
        Self::build(matrix, false)
    }

    fn build(matrix: CMatrix, is_state: bool) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Shape {
                context: "density operator must be square",
                got: matrix.ncols(),
                expected: matrix.nrows(),
            });
        }
        let scale = max_abs(&matrix).max(1.0);
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: HERMITICITY_TOL,
            });
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        if is_state {
            let trace: C64 = matrix.trace();
            if (trace.re - 1.0).abs() > STATE_TOL * matrix.nrows() as f64 || trace.im.abs() > STATE_TOL {
                return Err(Error::NotUnitTrace {
                    trace: trace.re,
                    tol: STATE_TOL,
                });
            }
        }
        Ok(Self {
            matrix,
            is_state,
            eig: OnceLock::new(),
        })
    }

    /// Maximally mixed state I/D.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::identity(dim, dim).scale(1.0 / dim as f64);
        Self {
            matrix: m,
            is_state: true,
            eig: OnceLock::new(),
        }
    }

    /// Diagonal density operator from a probability vector (not renormalized).
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = C64::new(p, 0.0);
        }
        Self::build(m, true)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_state(&self) -> bool {
        self.is_state
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr rho^2.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    fn eig_pair(&self) -> Result<&(Vec<f64>, CMatrix)> {
        // OnceLock::get_or_init can't propagate errors; validate negative
        // eigenvalues eagerly on first access instead.
        if let Some(pair) = self.eig.get() {
            return Ok(pair);
        }
        let (vals, vecs) = crate::linalg::eigh(&self.matrix)?;
        let mut clipped = Vec::with_capacity(vals.len());
        for &v in vals.iter() {
            if v < EIGENVALUE_FLOOR * self.dim() as f64 {
                return Err(Error::NegativeEigenvalue {
                    value: v,
                    floor: EIGENVALUE_FLOOR,
                });
            }
            clipped.push(v.max(0.0));
        }
        let _ = self.eig.set((clipped, vecs));
        Ok(self.eig.get().expect("eigendecomposition cache just filled"))
    }

    /// Eigenvalues in descending order, clipped at zero.
    pub fn eigenvalues(&self) -> Result<&[f64]> {
        Ok(&self.eig_pair()?.0)
    }

    /// Eigenvectors as matrix columns, ordered to match `eigenvalues`.
    pub fn eigenvectors(&self) -> Result<&CMatrix> {
        Ok(&self.eig_pair()?.1)
    }

    /// Schatten p-norm from the cached spectrum (valid because the operator
    /// is PSD, so singular values equal eigenvalues).
    pub fn schatten(&self, p: crate::SchattenP) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(crate::linalg::schatten_from_singular_values(ev, p))
    }

    /// sqrt(rho) via the cached eigendecomposition.
    pub fn sqrt_matrix(&self) -> Result<CMatrix> {
        let (vals, vecs) = self.eig_pair()?;
        let d = self.dim();
        let mut scaled = vecs.clone();
        for j in 0..d {
            let s = vals[j].sqrt();
            for i in 0..d {
                scaled[(i, j)] *= s;
            }
        }
        Ok(&scaled * vecs.adjoint())
    }
}

/// Which side of a bipartition an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Split of qubits 0..N-1 into two disjoint ordered lists.
///
/// The listed order defines the bit order inside each reduced index, first
/// listed qubit most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    qubits_a: Vec<usize>,
    qubits_b: Vec<usize>,
    num_qubits: usize,
}

impl Bipartition {
    pub fn new(qubits_a: Vec<usize>, qubits_b: Vec<usize>) -> Result<Self> {
        let num_qubits = qubits_a.len() + qubits_b.len();
        let mut seen = vec![false; num_qubits];
        for &q in qubits_a.iter().chain(qubits_b.iter()) {
            if q >= num_qubits {
                return Err(Error::InvalidBipartition {
                    reason: format!("qubit {q} out of range 0..{num_qubits}"),
                });
            }
            if seen[q] {
                return Err(Error::InvalidBipartition {
                    reason: format!("qubit {q} listed twice"),
                });
            }
            seen[q] = true;
        }
        Ok(Self {
            qubits_a,
            qubits_b,
            num_qubits,
        })
    }

    /// A = qubits 0..n_a (most significant block), B = the rest.
    pub fn contiguous(n_a: usize, num_qubits: usize) -> Self {
        assert!(n_a <= num_qubits);
        Self {
            qubits_a: (0..n_a).collect(),
            qubits_b: (n_a..num_qubits).collect(),
            num_qubits,
        }
    }

    pub fn qubits_a(&self) -> &[usize] {
        &self.qubits_a
    }

    pub fn qubits_b(&self) -> &[usize] {
        &self.qubits_b
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn n_a(&self) -> usize {
        self.qubits_a.len()
    }

    pub fn n_b(&self) -> usize {
        self.qubits_b.len()
    }

    pub fn dim_a(&self) -> usize {
        1 << self.qubits_a.len()
    }

    pub fn dim_b(&self) -> usize {
        1 << self.qubits_b.len()
    }

    /// Full-space basis index with the reduced indices `ia`, `ib` installed
    /// at this bipartition's qubit positions (qubit 0 = MSB convention).
    pub fn assemble_index(&self, ia: usize, ib: usize) -> usize {
        let n = self.num_qubits;
        let mut idx = 0usize;
        for (t, &q) in self.qubits_a.iter().enumerate() {
            let bit = (ia >> (self.qubits_a.len() - 1 - t)) & 1;
            idx |= bit << (n - 1 - q);
        }
        for (t, &q) in self.qubits_b.iter().enumerate() {
            let bit = (ib >> (self.qubits_b.len() - 1 - t)) & 1;
            idx |= bit << (n - 1 - q);
        }
        idx
    }
}
