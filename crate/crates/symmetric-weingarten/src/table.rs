use nalgebra::DMatrix;

use crate::perm::{enumerate_permutations, Permutation};
use crate::{Error, Result};

/// Condition numbers above this trigger a warning on table construction.
const CONDITION_WARN: f64 = 1e10;

/// Gram and Weingarten matrices for the k-fold twirl at dimension D.
///
/// Rows and columns are indexed by the lexicographic permutation order of
/// `enumerate_permutations(k)`.
#[derive(Debug, Clone)]
pub struct WeingartenTable {
    k: usize,
    d: usize,
    permutations: Vec<Permutation>,
    gram: DMatrix<f64>,
    weingarten: DMatrix<f64>,
}

impl WeingartenTable {
    /// Builds G[s][p] = D^{#cycles(sigma_s^{-1} . pi_p)} and its inverse.
    /// The Gram matrix is singular for k > D, which is rejected up front.
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if k > d {
            return Err(Error::SingularGram { k, d });
        }
        Self::build(k, d, false)
    }

    /// As `new`, but for k > D inverts on the nonsingular eigenspace only.
    ///
    /// For k > D the permutation operators are linearly dependent and G has a
    /// kernel, but that kernel consists exactly of the linear relations among
    /// the operators, so any solution of G c = t yields the same twirl output.
    /// The pseudoinverse picks the minimum-norm one.
    pub fn new_pseudoinverse(k: usize, d: usize) -> Result<Self> {
        Self::build(k, d, true)
    }

    fn build(k: usize, d: usize, pseudo: bool) -> Result<Self> {
        let permutations = enumerate_permutations(k)?;
        let n = permutations.len();
        let inverses: Vec<Permutation> = permutations.iter().map(|p| p.inverse()).collect();
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for s in 0..n {
            for p in 0..n {
                let cycles = inverses[s].compose(&permutations[p]).cycle_count();
                gram[(s, p)] = (d as f64).powi(cycles as i32);
            }
        }

        // Symmetric positive-(semi)definite inverse through the spectral
        // decomposition; also yields the condition number for the warning.
        let eig = gram.clone().symmetric_eigen();
        let max_ev = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let min_ev = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
        let cutoff = max_ev * 1e-12;
        if !pseudo {
            if min_ev <= 0.0 || min_ev <= max_ev * 1e-14 {
                return Err(Error::SingularGram { k, d });
            }
            let cond = max_ev / min_ev;
            if cond > CONDITION_WARN {
                log::warn!(
                    "Weingarten Gram matrix poorly conditioned at k={k}, D={d}: condition number {cond:.3e}"
                );
            }
        }
        let v = &eig.eigenvectors;
        let inv_diag = DMatrix::from_diagonal(
            &eig.eigenvalues
                .map(|x| if pseudo && x <= cutoff { 0.0 } else { 1.0 / x }),
        );
        let weingarten = v * inv_diag * v.transpose();

        Ok(Self {
            k,
            d,
            permutations,
            gram,
            weingarten,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.permutations
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn weingarten(&self) -> &DMatrix<f64> {
        &self.weingarten
    }

    /// Weingarten function of a single permutation, Wg(pi, D): the table
    /// entry pairing pi against the identity.
    pub fn wg(&self, pi: &Permutation) -> f64 {
        let idx = self
            .permutations
            .iter()
            .position(|p| p == pi)
            .expect("permutation order matches the table order");
        self.weingarten[(0, idx)]
    }
}
