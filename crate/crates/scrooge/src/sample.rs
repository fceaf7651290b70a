//! Rejection sampling from the Scrooge ensemble.

use ensembles::{sample_haar_state, stream_rng, StateSampler};
use numeric_core::{CMatrix, DensityOperator, StateVector};
use rand::Rng;

use crate::Result;

/// Draws one state from Scrooge(`sigma`).
///
/// Haar proposals `|phi>` are accepted with probability
/// `<phi|sigma|phi> / ||sigma||_inf` and mapped to
/// `sqrt(sigma)|phi>` normalized. The envelope `D ||sigma||_inf`
/// dominates the Scrooge density `D <phi|sigma|phi>` pointwise, so
/// accepted draws carry the exact Scrooge measure. Expected proposals
/// per draw: `D ||sigma||_inf`.
///
/// A numerically rank-deficient `sigma` restricts the output to its
/// support: `sqrt(sigma)` annihilates the kernel, so returned states are
/// those of the Scrooge ensemble of the support-restricted operator.
///
/// The dimension of `sigma` must be a power of two (states model qubit
/// registers). Repeated draws should go through [`ScroogeSampler`], which
/// precomputes the matrix square root once.
pub fn sample_scrooge_state<R: Rng + ?Sized>(
    sigma: &DensityOperator,
    rng: &mut R,
) -> Result<StateVector> {
    let sqrt = sigma.sqrt_matrix()?;
    let sup = sigma.eigenvalues()?.first().copied().unwrap_or(0.0);
    Ok(scrooge_draw(&sqrt, sup, sigma.dim(), rng))
}

fn scrooge_draw<R: Rng + ?Sized>(
    sqrt: &CMatrix,
    sup: f64,
    dim: usize,
    rng: &mut R,
) -> StateVector {
    loop {
        let phi = sample_haar_state(dim, rng);
        let mut u = sqrt * phi.amplitudes();
        // ||sqrt(sigma) phi||^2 = <phi|sigma|phi>, the unnormalized
        // Scrooge density. q = 0 never accepts, so the division is safe.
        let q = u.norm_squared();
        if rng.gen::<f64>() * sup < q {
            u.unscale_mut(q.sqrt());
            return StateVector::new(u).expect("normalized by construction");
        }
    }
}

/// Seeded stream sampler for Scrooge(`sigma`); draw `i` is a function of
/// `(seed, i)` alone, independent of thread count or draw order.
#[derive(Debug, Clone)]
pub struct ScroogeSampler {
    sqrt: CMatrix,
    sup: f64,
    dim: usize,
    seed: u64,
}

impl ScroogeSampler {
    pub fn new(sigma: &DensityOperator, seed: u64) -> Result<Self> {
        Ok(Self {
            sqrt: sigma.sqrt_matrix()?,
            sup: sigma.eigenvalues()?.first().copied().unwrap_or(0.0),
            dim: sigma.dim(),
            seed,
        })
    }
}

impl StateSampler for ScroogeSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, index: u64) -> StateVector {
        let mut rng = stream_rng(self.seed, index);
        scrooge_draw(&self.sqrt, self.sup, self.dim, &mut rng)
    }

    fn kind(&self) -> String {
        format!("scrooge(d={})", self.dim)
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use numeric_core::{C64, CVector};

    fn pure_sigma(dim: usize, basis: usize) -> DensityOperator {
        let psi = StateVector::computational_basis(dim.trailing_zeros() as usize, basis);
        psi.density().unwrap()
    }

    #[test]
    fn pure_sigma_always_returns_the_support_state() {
        let sigma = pure_sigma(4, 2);
        let mut rng = stream_rng(5, 0);
        for _ in 0..20 {
            let psi = sample_scrooge_state(&sigma, &mut rng).unwrap();
            // equality up to global phase: |<a|psi>| = 1
            let overlap = psi.amplitudes()[2].norm();
            assert!((overlap - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn draws_are_normalized_and_deterministic() {
        let p = [0.55, 0.25, 0.15, 0.05];
        let sigma = DensityOperator::from_probabilities(&p).unwrap();
        let s = ScroogeSampler::new(&sigma, 42).unwrap();
        let a = s.sample(7);
        let b = s.sample(7);
        assert!(a.is_normalized());
        assert_eq!(a.amplitudes().as_slice(), b.amplitudes().as_slice());
        assert_ne!(
            a.amplitudes().as_slice(),
            s.sample(8).amplitudes().as_slice()
        );
    }

    #[test]
    fn rank_deficient_sigma_stays_on_support() {
        // support = span{|0>, |1>} inside dimension 4
        let p = [0.7, 0.3, 0.0, 0.0];
        let sigma = DensityOperator::from_probabilities(&p).unwrap();
        let s = ScroogeSampler::new(&sigma, 9).unwrap();
        for i in 0..50 {
            let psi = s.sample(i);
            assert!(psi.amplitudes()[2].norm() < 1e-12);
            assert!(psi.amplitudes()[3].norm() < 1e-12);
        }
    }

    #[test]
    fn kind_and_seed_are_reported() {
        let sigma = DensityOperator::maximally_mixed(8);
        let s = ScroogeSampler::new(&sigma, 3).unwrap();
        assert_eq!(s.kind(), "scrooge(d=8)");
        assert_eq!(s.seed(), 3);
        assert_eq!(s.dim(), 8);
    }

    #[test]
    fn maximally_mixed_sigma_reproduces_the_haar_stream() {
        // sqrt(I/D) is proportional to I and the acceptance ratio is
        // identically 1, so draw i is the Haar draw i up to normalization.
        let sigma = DensityOperator::maximally_mixed(4);
        let s = ScroogeSampler::new(&sigma, 11).unwrap();
        let direct: CVector = {
            let mut rng = stream_rng(11, 3);
            let phi = sample_haar_state(4, &mut rng);
            phi.amplitudes().clone()
        };
        let via_scrooge = s.sample(3);
        // one accept consumes one uniform after the Gaussians; amplitudes
        // agree up to the global normalization already fixed by both paths
        let ratio: Vec<C64> = direct
            .iter()
            .zip(via_scrooge.amplitudes().iter())
            .map(|(a, b)| a / b)
            .collect();
        for r in &ratio {
            assert!((r - ratio[0]).norm() < 1e-12);
        }
    }
}
