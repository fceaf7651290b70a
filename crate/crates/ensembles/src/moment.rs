use nalgebra::DMatrix;
use numeric_core::{CMatrix, CVector, StateVector, C64, REPLICA_AXIS_CAP};
use rayon::prelude::*;

use crate::{Error, Result, StateSampler, WeightedEnsemble};

/// Chunk count for the parallel reduction in [`estimate_moment`]. Fixed so
/// that the floating-point summation order, and hence the result, does not
/// depend on the number of worker threads.
const REDUCTION_CHUNKS: u64 = 8;

fn replica_dim(dim: usize, k: usize) -> Result<usize> {
    let rdim = dim
        .checked_pow(k as u32)
        .filter(|&r| r <= REPLICA_AXIS_CAP)
        .ok_or(Error::ReplicaCap {
            dim,
            k,
            cap: REPLICA_AXIS_CAP,
        })?;
    Ok(rdim)
}

/// `psi^{tensor k}` as a dense vector of length `dim(psi)^k`, with replica 0
/// as the most significant index block.
pub fn tensor_power_vec(psi: &CVector, k: usize) -> CVector {
    let d = psi.len();
    let mut cur = CVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..k {
        let mut next = CVector::zeros(cur.len() * d);
        for (i, a) in cur.iter().enumerate() {
            let base = i * d;
            for j in 0..d {
                next[base + j] = a * psi[j];
            }
        }
        cur = next;
    }
    cur
}

/// A k-th moment operator on `k` replicas of a `base_dim`-dimensional
/// system: Hermitian, positive semidefinite, trace 1 up to estimation error,
/// and supported on the symmetric subspace.
#[derive(Debug, Clone)]
pub struct MomentOperator {
    matrix: CMatrix,
    base_dim: usize,
    k: usize,
}

impl MomentOperator {
    pub fn new(matrix: CMatrix, base_dim: usize, k: usize) -> Result<Self> {
        let rdim = replica_dim(base_dim, k)?;
        if matrix.nrows() != rdim || matrix.ncols() != rdim {
            return Err(Error::Core(numeric_core::Error::Shape {
                context: "moment operator matrix",
                got: matrix.nrows(),
                expected: rdim,
            }));
        }
        Ok(Self {
            matrix,
            base_dim,
            k,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn replica_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Streaming accumulator for `mean of w_i X_i` where `X_i` is the rank-1
/// replica projector of a sampled state. Tracks the running sum, the count,
/// and the sum of squared Frobenius norms, from which it reports the
/// Frobenius-norm standard error of the mean.
///
/// Accumulators over disjoint sample ranges merge associatively; merging in
/// a fixed order keeps results deterministic.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    base_dim: usize,
    k: usize,
    sum: CMatrix,
    count: u64,
    sum_sq_frob: f64,
}

impl MomentAccumulator {
    pub fn new(base_dim: usize, k: usize) -> Result<Self> {
        let rdim = replica_dim(base_dim, k)?;
        Ok(Self {
            base_dim,
            k,
            sum: DMatrix::zeros(rdim, rdim),
            count: 0,
            sum_sq_frob: 0.0,
        })
    }

    /// Adds `(|psi><psi|)^{tensor k}` with weight 1.
    pub fn add_state(&mut self, psi: &StateVector) -> Result<()> {
        if psi.dim() != self.base_dim {
            return Err(Error::DimensionMismatch {
                got: psi.dim(),
                expected: self.base_dim,
            });
        }
        let v = tensor_power_vec(psi.amplitudes(), self.k);
        self.add_weighted_outer(1.0, &v)
    }

    /// Adds `w * v v^dagger` for a replica-space vector `v` of length
    /// `base_dim^k`. Used by importance-weighted estimators where `w`
    /// varies per sample.
    pub fn add_weighted_outer(&mut self, w: f64, v: &CVector) -> Result<()> {
        if v.len() != self.sum.nrows() {
            return Err(Error::DimensionMismatch {
                got: v.len(),
                expected: self.sum.nrows(),
            });
        }
        self.sum
            .gerc(C64::new(w, 0.0), v, v, C64::new(1.0, 0.0));
        let nsq = v.norm_squared();
        self.sum_sq_frob += (w * nsq) * (w * nsq);
        self.count += 1;
        Ok(())
    }

    /// Folds another accumulator over the same `(base_dim, k)` into this one.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.base_dim != self.base_dim || other.k != self.k {
            return Err(Error::DimensionMismatch {
                got: other.sum.nrows(),
                expected: self.sum.nrows(),
            });
        }
        self.sum += &other.sum;
        self.count += other.count;
        self.sum_sq_frob += other.sum_sq_frob;
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Sample mean, symmetrized to remove rounding skew.
    pub fn mean(&self) -> Result<MomentOperator> {
        if self.count == 0 {
            return Err(Error::TooFewSamples { got: 0, need: 1 });
        }
        let mut m = &self.sum / C64::new(self.count as f64, 0.0);
        let adj = m.adjoint();
        m += adj;
        m.unscale_mut(2.0);
        MomentOperator::new(m, self.base_dim, self.k)
    }

    /// Frobenius-norm standard error of the mean:
    /// `sqrt(sum_i ||X_i - mean||_F^2 / (n-1)) / sqrt(n)`. Zero when fewer
    /// than two samples have been added.
    pub fn std_error(&self) -> f64 {
        let n = self.count as f64;
        if self.count < 2 {
            return 0.0;
        }
        let var = (self.sum_sq_frob - self.sum.norm_squared() / n) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// Exact k-th moment `sum_i p_i (|psi_i><psi_i|)^{tensor k}` of a finite
/// ensemble.
pub fn moment_operator(ens: &WeightedEnsemble, k: usize) -> Result<MomentOperator> {
    let rdim = replica_dim(ens.dim(), k)?;
    let mut sum = CMatrix::zeros(rdim, rdim);
    for (w, state) in ens.entries() {
        let v = tensor_power_vec(state.amplitudes(), k);
        sum.gerc(C64::new(*w, 0.0), &v, &v, C64::new(1.0, 0.0));
    }
    MomentOperator::new(sum, ens.dim(), k)
}

/// Monte Carlo estimate of the k-th moment from `n` sampler draws, with its
/// Frobenius standard error.
///
/// Samples use stream indices `0..n`, partitioned into a fixed number of
/// chunks that are reduced in index order, so the result is bit-identical
/// for any thread count.
pub fn estimate_moment(
    sampler: &dyn StateSampler,
    k: usize,
    n: u64,
) -> Result<(MomentOperator, f64)> {
    if n < 2 {
        return Err(Error::TooFewSamples { got: n, need: 2 });
    }
    let chunk_len = n.div_ceil(REDUCTION_CHUNKS);
    let starts: Vec<u64> = (0..REDUCTION_CHUNKS)
        .map(|c| c * chunk_len)
        .filter(|&s| s < n)
        .collect();
    let partials: Vec<Result<MomentAccumulator>> = starts
        .par_iter()
        .map(|&start| {
            let mut acc = MomentAccumulator::new(sampler.dim(), k)?;
            for i in start..(start + chunk_len).min(n) {
                acc.add_state(&sampler.sample(i))?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = MomentAccumulator::new(sampler.dim(), k)?;
    for partial in partials {
        total.merge(&partial?)?;
    }
    let err = total.std_error();
    Ok((total.mean()?, err))
}
