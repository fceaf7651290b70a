use numeric_core::{CMatrix, DensityOperator, StateVector, C64};

use crate::{Error, Result};

/// Tolerance for the sum of ensemble weights.
pub const WEIGHT_TOL: f64 = 1e-9;

/// A finite ensemble of normalized pure states with probability weights.
///
/// Weights must be nonnegative and sum to 1 within [`WEIGHT_TOL`]; all
/// states must share one dimension and be normalized.
#[derive(Debug, Clone)]
pub struct WeightedEnsemble {
    entries: Vec<(f64, StateVector)>,
    dim: usize,
    total_weight: f64,
}

impl WeightedEnsemble {
    pub fn new(entries: Vec<(f64, StateVector)>) -> Result<Self> {
        let dim = entries.first().ok_or(Error::EmptyEnsemble)?.1.dim();
        let mut total_weight = 0.0;
        for (w, state) in &entries {
            if *w < 0.0 {
                return Err(Error::NegativeWeight(*w));
            }
            if state.dim() != dim {
                return Err(Error::DimensionMismatch {
                    got: state.dim(),
                    expected: dim,
                });
            }
            if !state.is_normalized() {
                return Err(Error::Core(numeric_core::Error::NotNormalized {
                    norm: state.norm(),
                    tol: numeric_core::STATE_TOL,
                }));
            }
            total_weight += *w;
        }
        if (total_weight - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::WeightsNotNormalized {
                got: total_weight,
                tol: WEIGHT_TOL,
            });
        }
        Ok(Self {
            entries,
            dim,
            total_weight,
        })
    }

    /// Equal-weight ensemble over the given states.
    pub fn uniform(states: Vec<StateVector>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::EmptyEnsemble);
        }
        let w = 1.0 / n as f64;
        Self::new(states.into_iter().map(|s| (w, s)).collect())
    }

    pub fn entries(&self) -> &[(f64, StateVector)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Average state `sum_i p_i |psi_i><psi_i|` of the ensemble.
    pub fn average_state(&self) -> Result<DensityOperator> {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (w, state) in &self.entries {
            acc.gerc(C64::new(*w, 0.0), state.amplitudes(), state.amplitudes(), C64::new(1.0, 0.0));
        }
        Ok(DensityOperator::new(acc)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use numeric_core::CVector;

    fn basis(dim: usize, i: usize) -> StateVector {
        let mut v = CVector::zeros(dim);
        v[i] = C64::new(1.0, 0.0);
        StateVector::new(v).unwrap()
    }

    #[test]
    fn accepts_normalized_weights() {
        let ens = WeightedEnsemble::new(vec![(0.5, basis(2, 0)), (0.5, basis(2, 1))]).unwrap();
        assert_eq!(ens.len(), 2);
        assert_eq!(ens.dim(), 2);
        assert_abs_diff_eq!(ens.total_weight(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_weight_sum() {
        let err = WeightedEnsemble::new(vec![(0.5, basis(2, 0)), (0.6, basis(2, 1))]).unwrap_err();
        assert!(matches!(err, Error::WeightsNotNormalized { .. }));
    }

    #[test]
    fn rejects_negative_weight() {
        let err = WeightedEnsemble::new(vec![(1.2, basis(2, 0)), (-0.2, basis(2, 1))]).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight(_)));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let err = WeightedEnsemble::new(vec![(0.5, basis(2, 0)), (0.5, basis(4, 1))]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rejects_unnormalized_state() {
        let v = CVector::from_element(2, C64::new(1.0, 0.0));
        let state = StateVector::new(v).unwrap();
        assert!(!state.is_normalized());
        let err = WeightedEnsemble::new(vec![(1.0, state)]).unwrap_err();
        assert!(matches!(err, Error::Core(_)));
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(
            WeightedEnsemble::new(vec![]).unwrap_err(),
            Error::EmptyEnsemble
        ));
        assert!(matches!(
            WeightedEnsemble::uniform(vec![]).unwrap_err(),
            Error::EmptyEnsemble
        ));
    }

    #[test]
    fn average_state_of_basis_mixture_is_diagonal() {
        let ens = WeightedEnsemble::new(vec![(0.25, basis(2, 0)), (0.75, basis(2, 1))]).unwrap();
        let avg = ens.average_state().unwrap();
        assert_abs_diff_eq!(avg.matrix()[(0, 0)].re, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(avg.matrix()[(1, 1)].re, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(avg.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }
}
