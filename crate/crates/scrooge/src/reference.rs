//! Scrooge k-th moments: Monte Carlo estimator and deterministic proxy.

use ensembles::{
    sample_haar_state, stream_rng, tensor_power_vec, MomentAccumulator, MomentOperator,
};
use numeric_core::{kron_power, DensityOperator, C64};
use rayon::prelude::*;
use serde::Serialize;
use symmetric_weingarten::haar_moment;

use crate::{Error, Result};

/// Minimum Monte Carlo sample count accepted by [`scrooge_moment_mc`].
pub const MIN_MC_SAMPLES: usize = 100;

/// Fixed chunk count for parallel reduction; estimates are bit-identical
/// across thread counts because chunk boundaries never move.
const REDUCTION_CHUNKS: u64 = 8;

const REFERENCE_SCHEMA: &str = "scrooge-reference/v1";

/// How the moment held by a [`ScroogeReference`] was produced.
#[derive(Debug, Clone)]
pub enum MomentProvenance {
    /// Importance-weighted Monte Carlo with a Frobenius error bar.
    MonteCarlo {
        n_samples: usize,
        seed: u64,
        std_error: f64,
    },
    /// Deterministic surrogate `(D sigma)^(x)k rho_Haar^(k)`.
    Proxy,
}

/// A k-th moment of Scrooge(`sigma`) together with the density operator
/// it refers to and how it was computed.
#[derive(Debug, Clone)]
pub struct ScroogeReference {
    sigma: DensityOperator,
    moment: MomentOperator,
    provenance: MomentProvenance,
}

impl ScroogeReference {
    /// Deterministic proxy reference; see [`scrooge_moment_proxy`].
    pub fn proxy(sigma: &DensityOperator, k: usize) -> Result<Self> {
        let moment = scrooge_moment_proxy(sigma, k)?;
        Ok(Self {
            sigma: sigma.clone(),
            moment,
            provenance: MomentProvenance::Proxy,
        })
    }

    pub fn sigma(&self) -> &DensityOperator {
        &self.sigma
    }

    pub fn moment(&self) -> &MomentOperator {
        &self.moment
    }

    pub fn order(&self) -> usize {
        self.moment.order()
    }

    pub fn provenance(&self) -> &MomentProvenance {
        &self.provenance
    }

    pub fn is_proxy(&self) -> bool {
        matches!(self.provenance, MomentProvenance::Proxy)
    }

    /// Frobenius error bar of the held moment; zero for the proxy, which
    /// is deterministic (its deviation from the true moment is systematic,
    /// not statistical).
    pub fn std_error(&self) -> f64 {
        match self.provenance {
            MomentProvenance::MonteCarlo { std_error, .. } => std_error,
            MomentProvenance::Proxy => 0.0,
        }
    }

    pub fn n_samples(&self) -> usize {
        match self.provenance {
            MomentProvenance::MonteCarlo { n_samples, .. } => n_samples,
            MomentProvenance::Proxy => 0,
        }
    }

    /// Provenance dump: spectrum of sigma, order, sample count, seed, and
    /// the moment matrix in row-major `[re, im]` pairs. One-way record for
    /// reproducibility, not a round-trip format (sigma itself is reduced
    /// to its eigenvalues).
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct ReferenceJson<'a> {
            schema: &'static str,
            kind: &'static str,
            base_dim: usize,
            order: usize,
            n_samples: usize,
            seed: Option<u64>,
            std_error: f64,
            sigma_eigenvalues: &'a [f64],
            moment: Vec<[f64; 2]>,
        }
        let m = self.moment.matrix();
        let n = m.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        let (kind, seed) = match self.provenance {
            MomentProvenance::MonteCarlo { seed, .. } => ("monte-carlo", Some(seed)),
            MomentProvenance::Proxy => ("proxy", None),
        };
        let doc = ReferenceJson {
            schema: REFERENCE_SCHEMA,
            kind,
            base_dim: self.moment.base_dim(),
            order: self.moment.order(),
            n_samples: self.n_samples(),
            seed,
            std_error: self.std_error(),
            sigma_eigenvalues: self.sigma.eigenvalues()?,
            moment: data,
        };
        Ok(serde_json::to_string(&doc).expect("plain data serializes"))
    }
}

/// Monte Carlo estimate of the k-th moment of Scrooge(`sigma`),
/// `D * E_phi[ (sqrt(sigma)|phi><phi|sqrt(sigma))^(x)k / <phi|sigma|phi>^(k-1) ]`
/// over Haar `|phi>`.
///
/// Each Haar draw contributes the normalized state
/// `u = sqrt(sigma)|phi> / ||..||` with importance weight
/// `w = D <phi|sigma|phi>` (mean 1); no draws are rejected. The estimate
/// is the weighted average of `(|u><u|)^(x)k`, so its trace is the sample
/// mean of `w`: 1 in expectation, converging at the reported error rate.
/// For pure `sigma` every term is proportional to the same projector and
/// only the trace fluctuates.
///
/// Requires `n >= MIN_MC_SAMPLES` and `D^k` within the replica cap.
/// Draw `i` depends only on `(seed, i)`; results are bit-identical across
/// thread counts.
pub fn scrooge_moment_mc(
    sigma: &DensityOperator,
    k: usize,
    n: usize,
    seed: u64,
) -> Result<ScroogeReference> {
    if n < MIN_MC_SAMPLES {
        return Err(Error::Ensembles(ensembles::Error::TooFewSamples {
            got: n as u64,
            need: MIN_MC_SAMPLES as u64,
        }));
    }
    let dim = sigma.dim();
    let sqrt = sigma.sqrt_matrix()?;
    let total_n = n as u64;
    let chunk_len = total_n.div_ceil(REDUCTION_CHUNKS);
    let starts: Vec<u64> = (0..REDUCTION_CHUNKS)
        .map(|c| c * chunk_len)
        .filter(|&s| s < total_n)
        .collect();
    let partials: Vec<Result<MomentAccumulator>> = starts
        .par_iter()
        .map(|&start| {
            let stop = (start + chunk_len).min(total_n);
            let mut acc = MomentAccumulator::new(dim, k)?;
            for i in start..stop {
                let mut rng = stream_rng(seed, i);
                let phi = sample_haar_state(dim, &mut rng);
                let mut u = &sqrt * phi.amplitudes();
                let q = u.norm_squared();
                let w = dim as f64 * q;
                if q > 0.0 {
                    u.unscale_mut(q.sqrt());
                }
                let v = tensor_power_vec(&u, k);
                acc.add_weighted_outer(w, &v)?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = MomentAccumulator::new(dim, k)?;
    for partial in partials {
        total.merge(&partial?)?;
    }
    let std_error = total.std_error();
    let moment = total.mean()?;
    Ok(ScroogeReference {
        sigma: sigma.clone(),
        moment,
        provenance: MomentProvenance::MonteCarlo {
            n_samples: n,
            seed,
            std_error,
        },
    })
}

/// Deterministic moment surrogate `(D sigma)^(x)k rho_Haar^(k)`, the exact
/// k-th moment of the unnormalized ensemble `{sqrt(D sigma)|phi>}`.
///
/// `sigma^(x)k` commutes with every replica permutation and hence with the
/// symmetric projector, so the product is Hermitian and PSD. Its trace is
/// `D^k Tr(sigma^(x)k P_sym) / D_k`, close to 1 at low purity but not
/// exactly 1. The trace-norm distance to the true Scrooge moment scales
/// as k ||sigma||_2; it vanishes identically at k = 1 and at
/// sigma = I/D, where the proxy equals sigma and the Haar moment exactly.
pub fn scrooge_moment_proxy(sigma: &DensityOperator, k: usize) -> Result<MomentOperator> {
    let dim = sigma.dim();
    let haar = haar_moment(dim, k)?;
    let sk = kron_power(sigma.matrix(), k)?;
    let mut m = &sk * &haar;
    m *= C64::new((dim as f64).powi(k as i32), 0.0);
    // exact commutation makes the product Hermitian; symmetrize rounding
    let adj = m.adjoint();
    m += adj;
    m.unscale_mut(2.0);
    Ok(MomentOperator::new(m, dim, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use numeric_core::{max_abs, StateVector};

    fn tilted_sigma() -> DensityOperator {
        DensityOperator::from_probabilities(&[0.4, 0.3, 0.2, 0.1]).unwrap()
    }

    #[test]
    fn proxy_at_k1_is_sigma() {
        let sigma = tilted_sigma();
        let proxy = scrooge_moment_proxy(&sigma, 1).unwrap();
        let diff = proxy.matrix() - sigma.matrix();
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn proxy_at_maximally_mixed_is_haar() {
        let sigma = DensityOperator::maximally_mixed(4);
        let proxy = scrooge_moment_proxy(&sigma, 2).unwrap();
        let haar = haar_moment(4, 2).unwrap();
        let diff = proxy.matrix() - haar;
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn proxy_commutes_with_sigma_replicas() {
        let sigma = tilted_sigma();
        let proxy = scrooge_moment_proxy(&sigma, 2).unwrap();
        let sk = kron_power(sigma.matrix(), 2).unwrap();
        let comm = proxy.matrix() * &sk - &sk * proxy.matrix();
        assert!(max_abs(&comm) < 1e-12);
    }

    #[test]
    fn proxy_trace_is_symmetric_polynomial() {
        // trace = D^k h_k(lambda) / D_k; at k = 2,
        // h_2 = (p1^2 + p2)/2 with p_r the power sums
        let p = [0.4, 0.3, 0.2, 0.1];
        let sigma = DensityOperator::from_probabilities(&p).unwrap();
        let proxy = scrooge_moment_proxy(&sigma, 2).unwrap();
        let p2: f64 = p.iter().map(|x| x * x).sum();
        let h2 = (1.0 + p2) / 2.0;
        let expected = 16.0 * h2 / 10.0;
        assert!((proxy.trace() - expected).abs() < 1e-12);
    }

    #[test]
    fn mc_k1_recovers_sigma() {
        let sigma = tilted_sigma();
        let r = scrooge_moment_mc(&sigma, 1, 20_000, 71).unwrap();
        let diff = r.moment().matrix() - sigma.matrix();
        let frob = diff.norm();
        assert!(
            frob <= 5.0 * r.std_error(),
            "frob {frob:.3e} vs se {:.3e}",
            r.std_error()
        );
    }

    #[test]
    fn mc_maximally_mixed_qubit_matches_swap_form() {
        // Scrooge(I/2) = Haar, second moment (I + SWAP)/6
        let sigma = DensityOperator::maximally_mixed(2);
        let r = scrooge_moment_mc(&sigma, 2, 30_000, 72).unwrap();
        let haar = haar_moment(2, 2).unwrap();
        let diff = r.moment().matrix() - haar;
        assert!(diff.norm() <= 3.0 * r.std_error());
    }

    #[test]
    fn mc_pure_sigma_is_the_replica_projector() {
        let a = StateVector::computational_basis(2, 1);
        let sigma = a.density().unwrap();
        let r = scrooge_moment_mc(&sigma, 3, 200, 73).unwrap();
        let t = r.moment().trace();
        assert!((t - 1.0).abs() <= 5.0 * r.std_error());
        // direction is exact: normalized estimate equals the projector
        let mut normalized = r.moment().matrix().clone();
        normalized.unscale_mut(t);
        let expected = tensor_power_vec(a.amplitudes(), 3);
        for i in 0..normalized.nrows() {
            for j in 0..normalized.ncols() {
                let want = expected[i] * expected[j].conj();
                assert!((normalized[(i, j)] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mc_rejects_small_sample_counts() {
        let sigma = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            scrooge_moment_mc(&sigma, 2, 50, 0).unwrap_err(),
            Error::Ensembles(ensembles::Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn mc_is_deterministic_across_runs() {
        let sigma = tilted_sigma();
        let a = scrooge_moment_mc(&sigma, 2, 500, 9).unwrap();
        let b = scrooge_moment_mc(&sigma, 2, 500, 9).unwrap();
        assert_eq!(
            a.moment().matrix().as_slice(),
            b.moment().matrix().as_slice()
        );
        assert_eq!(a.std_error(), b.std_error());
    }

    #[test]
    fn provenance_json_carries_the_record() {
        let sigma = DensityOperator::maximally_mixed(2);
        let r = scrooge_moment_mc(&sigma, 2, 200, 5).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(doc["schema"], "scrooge-reference/v1");
        assert_eq!(doc["kind"], "monte-carlo");
        assert_eq!(doc["n_samples"], 200);
        assert_eq!(doc["seed"], 5);
        assert_eq!(doc["sigma_eigenvalues"].as_array().unwrap().len(), 2);
        assert_eq!(doc["moment"].as_array().unwrap().len(), 16);

        let p = ScroogeReference::proxy(&sigma, 2).unwrap();
        assert!(p.is_proxy());
        let doc: serde_json::Value = serde_json::from_str(&p.to_json().unwrap()).unwrap();
        assert_eq!(doc["kind"], "proxy");
        assert_eq!(doc["seed"], serde_json::Value::Null);
    }
}
