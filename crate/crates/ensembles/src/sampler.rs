use num_complex::Complex;
use numeric_core::{CVector, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, WeightedEnsemble};

/// Generator for sample `index` of the stream keyed by `seed`.
///
/// Each index gets an independent ChaCha stream, so sample i can be
/// regenerated without drawing samples 0..i first, and parallel consumers
/// produce identical values regardless of scheduling.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a Haar-random pure state: i.i.d. complex Gaussian amplitudes,
/// normalized. Unitary invariance follows from the rotation invariance of
/// the Gaussian vector.
///
/// `dim` must be a power of two (states model qubit registers).
pub fn sample_haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    assert!(dim.is_power_of_two(), "state dimension must be a power of two");
    let mut v = CVector::zeros(dim);
    for j in 0..dim {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        v[j] = Complex::new(re, im);
    }
    let norm = v.norm();
    v.unscale_mut(norm);
    StateVector::new(v).expect("normalized by construction")
}

/// A reproducible source of random pure states.
///
/// `sample(index)` is a pure function of `(seed, kind, index)`: identical
/// seed and kind give a bit-identical stream. Independent indices may be
/// drawn concurrently.
pub trait StateSampler: Send + Sync {
    /// Hilbert-space dimension of the produced states.
    fn dim(&self) -> usize;

    /// The `index`-th state of the stream.
    fn sample(&self, index: u64) -> StateVector;

    /// Short label naming the distribution, for logs and result files.
    fn kind(&self) -> String;

    /// Stream seed, recorded so any sample can be replayed.
    fn seed(&self) -> u64;
}

/// Haar-distributed pure states in dimension `dim`.
#[derive(Debug, Clone)]
pub struct HaarSampler {
    dim: usize,
    seed: u64,
}

impl HaarSampler {
    /// `dim` must be a power of two.
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim.is_power_of_two(), "state dimension must be a power of two");
        Self { dim, seed }
    }
}

impl StateSampler for HaarSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, index: u64) -> StateVector {
        let mut rng = stream_rng(self.seed, index);
        sample_haar_state(self.dim, &mut rng)
    }

    fn kind(&self) -> String {
        format!("haar(d={})", self.dim)
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

/// Builds `sum_j sqrt(w_j) e^{i theta_j} |j>` with phases drawn uniformly.
///
/// The residual normalization error from the weight sum and from rounding
/// is divided out so the result is an exact unit vector.
fn phase_state(sqrt_weights: &[f64], rng: &mut impl Rng) -> StateVector {
    let mut v = CVector::zeros(sqrt_weights.len());
    for (j, r) in sqrt_weights.iter().enumerate() {
        let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        v[j] = Complex::from_polar(*r, theta);
    }
    let norm = v.norm();
    v.unscale_mut(norm);
    StateVector::new(v).expect("normalized by construction")
}

/// States with fixed amplitude magnitudes `sqrt(w_j)` and i.i.d. uniform
/// phases on each component.
#[derive(Debug, Clone)]
pub struct RandomPhaseSampler {
    sqrt_weights: Vec<f64>,
    seed: u64,
}

impl RandomPhaseSampler {
    /// `weights` must be nonnegative, sum to 1 within [`crate::WEIGHT_TOL`],
    /// and have power-of-two length.
    pub fn new(weights: &[f64], seed: u64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        if !weights.len().is_power_of_two() {
            return Err(Error::Core(numeric_core::Error::NotPowerOfTwo {
                len: weights.len(),
            }));
        }
        let mut total = 0.0;
        for &w in weights {
            if w < 0.0 {
                return Err(Error::NegativeWeight(w));
            }
            total += w;
        }
        if (total - 1.0).abs() > crate::WEIGHT_TOL {
            return Err(Error::WeightsNotNormalized {
                got: total,
                tol: crate::WEIGHT_TOL,
            });
        }
        Ok(Self {
            sqrt_weights: weights.iter().map(|w| w.sqrt()).collect(),
            seed,
        })
    }
}

impl StateSampler for RandomPhaseSampler {
    fn dim(&self) -> usize {
        self.sqrt_weights.len()
    }

    fn sample(&self, index: u64) -> StateVector {
        let mut rng = stream_rng(self.seed, index);
        phase_state(&self.sqrt_weights, &mut rng)
    }

    fn kind(&self) -> String {
        format!("random-phase(d={})", self.sqrt_weights.len())
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

/// Equal-magnitude phase states `d^{-1/2} sum_j e^{i theta_j} |j>`.
///
/// This is [`RandomPhaseSampler`] with uniform weights `1/d`; the RNG
/// consumption matches exactly, so the two agree bit for bit under the
/// same seed.
#[derive(Debug, Clone)]
pub struct UniformPhaseSampler {
    inner: RandomPhaseSampler,
}

impl UniformPhaseSampler {
    /// `dim` must be a power of two.
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim.is_power_of_two(), "state dimension must be a power of two");
        let weights = vec![1.0 / dim as f64; dim];
        let inner = RandomPhaseSampler::new(&weights, seed).expect("uniform weights are valid");
        Self { inner }
    }
}

impl StateSampler for UniformPhaseSampler {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn sample(&self, index: u64) -> StateVector {
        self.inner.sample(index)
    }

    fn kind(&self) -> String {
        format!("uniform-phase(d={})", self.inner.dim())
    }

    fn seed(&self) -> u64 {
        self.inner.seed()
    }
}

/// Draws entries of a finite [`WeightedEnsemble`] with their weights.
#[derive(Debug, Clone)]
pub struct EnsembleSampler {
    ensemble: WeightedEnsemble,
    cumulative: Vec<f64>,
    seed: u64,
}

impl EnsembleSampler {
    pub fn new(ensemble: WeightedEnsemble, seed: u64) -> Self {
        let mut cumulative = Vec::with_capacity(ensemble.len());
        let mut acc = 0.0;
        for (w, _) in ensemble.entries() {
            acc += w;
            cumulative.push(acc);
        }
        Self {
            ensemble,
            cumulative,
            seed,
        }
    }
}

impl StateSampler for EnsembleSampler {
    fn dim(&self) -> usize {
        self.ensemble.dim()
    }

    fn sample(&self, index: u64) -> StateVector {
        let mut rng = stream_rng(self.seed, index);
        let total = *self.cumulative.last().expect("ensemble is nonempty");
        let u = rng.gen::<f64>() * total;
        let pos = self.cumulative.partition_point(|&c| c < u);
        let pos = pos.min(self.ensemble.len() - 1);
        self.ensemble.entries()[pos].1.clone()
    }

    fn kind(&self) -> String {
        format!(
            "weighted-ensemble(d={}, n={})",
            self.ensemble.dim(),
            self.ensemble.len()
        )
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}
