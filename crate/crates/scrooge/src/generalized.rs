//! Outcome-weighted mixtures of Scrooge moments over a measured subsystem.

use ensembles::MomentOperator;
use numeric_core::{max_abs, Bipartition, CMatrix, DensityOperator, C64};
use rayon::prelude::*;

use crate::{scrooge_moment_mc, Error, Result, ScroogeReference};

/// Outcomes whose probability falls below this floor are dropped and the
/// remaining weights renormalized; rank-deficient marginals otherwise
/// produce 0/0 conditional states.
pub const CONDITIONAL_WEIGHT_FLOOR: f64 = 1e-12;

/// Two conditional states within this entrywise tolerance share one
/// Scrooge moment computation.
pub const CONDITIONAL_MATCH_TOL: f64 = 1e-10;

/// The mixture `sum_z <z|sigma_B|z> rho_Scrooge^(k)(sigma_A|z)` over
/// measurement outcomes `z` on subsystem B, with
/// `sigma_A|z = (I (x) <z|) sigma (I (x) |z>) / <z|sigma_B|z>`.
///
/// Outcomes with numerically identical conditional states are grouped
/// into classes and share one Monte Carlo moment; symmetric inputs
/// (for example Hamming-weight-conserving states measured in the
/// computational basis) collapse exponentially many outcomes into a
/// handful of classes.
#[derive(Debug, Clone)]
pub struct GeneralizedScroogeReference {
    outcomes: Vec<usize>,
    weights: Vec<f64>,
    conditionals: Vec<DensityOperator>,
    class_of: Vec<usize>,
    class_references: Vec<ScroogeReference>,
    moment: MomentOperator,
    std_error: f64,
    dropped_weight: f64,
}

impl GeneralizedScroogeReference {
    /// Retained outcome labels `z`, ascending.
    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    /// Renormalized outcome probabilities, aligned with `outcomes`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Conditional states, aligned with `outcomes`.
    pub fn conditionals(&self) -> &[DensityOperator] {
        &self.conditionals
    }

    /// Class index of each retained outcome.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_distinct_conditionals(&self) -> usize {
        self.class_references.len()
    }

    /// One Scrooge reference per distinct conditional state.
    pub fn class_references(&self) -> &[ScroogeReference] {
        &self.class_references
    }

    /// The mixed moment on the A replicas.
    pub fn moment(&self) -> &MomentOperator {
        &self.moment
    }

    /// Error bar of the mixed moment: weighted quadrature sum of the
    /// per-class Monte Carlo errors.
    pub fn std_error(&self) -> f64 {
        self.std_error
    }

    /// Probability mass removed by the weight floor.
    pub fn dropped_weight(&self) -> f64 {
        self.dropped_weight
    }

    pub fn order(&self) -> usize {
        self.moment.order()
    }

    pub fn dim_a(&self) -> usize {
        self.moment.base_dim()
    }
}

/// Builds the generalized Scrooge reference of `sigma_ab` for measurement
/// of subsystem B in `basis_b` (columns are the basis states; `None`
/// means the computational basis).
///
/// Outcomes below [`CONDITIONAL_WEIGHT_FLOOR`] are dropped and logged.
/// Each distinct conditional state (grouped within
/// [`CONDITIONAL_MATCH_TOL`]) gets an `n`-sample Monte Carlo Scrooge
/// moment seeded by `seed` plus its class index, so the whole reference
/// is deterministic in `(sigma_ab, basis_b, k, n, seed)`.
pub fn generalized_scrooge_reference(
    sigma_ab: &DensityOperator,
    part: &Bipartition,
    basis_b: Option<&CMatrix>,
    k: usize,
    n: usize,
    seed: u64,
) -> Result<GeneralizedScroogeReference> {
    let da = part.dim_a();
    let db = part.dim_b();
    if sigma_ab.dim() != da * db {
        return Err(Error::DimensionMismatch {
            got: sigma_ab.dim(),
            expected: da * db,
        });
    }
    if let Some(v) = basis_b {
        if v.nrows() != db || v.ncols() != db {
            return Err(Error::DimensionMismatch {
                got: v.nrows().max(v.ncols()),
                expected: db,
            });
        }
        let dev = max_abs(&(v * v.adjoint() - CMatrix::identity(db, db)));
        if dev > 1e-8 {
            return Err(Error::BasisNotUnitary { deviation: dev });
        }
    }

    let blocks = conditional_blocks(sigma_ab, part, basis_b);

    let mut outcomes = Vec::new();
    let mut raw_weights = Vec::new();
    let mut conditionals = Vec::new();
    let mut dropped = 0usize;
    let mut dropped_weight = 0.0;
    for (z, block) in blocks.iter().enumerate() {
        let w: f64 = (0..da).map(|a| block[(a, a)].re).sum();
        if w < CONDITIONAL_WEIGHT_FLOOR {
            dropped += 1;
            dropped_weight += w.max(0.0);
            continue;
        }
        let mut cond = block.clone();
        cond.unscale_mut(w);
        outcomes.push(z);
        raw_weights.push(w);
        conditionals.push(DensityOperator::new(cond)?);
    }
    if outcomes.is_empty() {
        return Err(Error::DegenerateWeights {
            floor: CONDITIONAL_WEIGHT_FLOOR,
        });
    }
    if dropped > 0 {
        log::info!(
            "dropped {dropped} of {db} outcomes below weight floor \
             (mass {dropped_weight:.3e}); weights renormalized"
        );
    }
    let wsum: f64 = raw_weights.iter().sum();
    let weights: Vec<f64> = raw_weights.iter().map(|w| w / wsum).collect();

    // group numerically identical conditionals into classes
    let mut class_of = Vec::with_capacity(conditionals.len());
    let mut reps: Vec<usize> = Vec::new();
    for (i, cond) in conditionals.iter().enumerate() {
        let found = reps.iter().position(|&r| {
            max_abs(&(cond.matrix() - conditionals[r].matrix())) <= CONDITIONAL_MATCH_TOL
        });
        let c = match found {
            Some(c) => c,
            None => {
                reps.push(i);
                reps.len() - 1
            }
        };
        class_of.push(c);
    }

    let class_references: Vec<ScroogeReference> = reps
        .iter()
        .enumerate()
        .map(|(c, &rep)| scrooge_moment_mc(&conditionals[rep], k, n, seed.wrapping_add(c as u64)))
        .collect::<Result<_>>()?;

    let rdim = class_references[0].moment().replica_dim();
    let mut class_weight = vec![0.0f64; reps.len()];
    for (i, &c) in class_of.iter().enumerate() {
        class_weight[c] += weights[i];
    }
    let mut mixed = CMatrix::zeros(rdim, rdim);
    let mut var = 0.0;
    for (c, reference) in class_references.iter().enumerate() {
        let wc = class_weight[c];
        mixed += reference.moment().matrix() * C64::new(wc, 0.0);
        var += (wc * reference.std_error()).powi(2);
    }
    let moment = MomentOperator::new(mixed, da, k)?;
    Ok(GeneralizedScroogeReference {
        outcomes,
        weights,
        conditionals,
        class_of,
        class_references,
        moment,
        std_error: var.sqrt(),
        dropped_weight,
    })
}

/// Unnormalized conditional blocks `M_z[a,a'] = <a z|sigma|a' z>` (with
/// `|z>` drawn from `basis_b` when given). `tr M_z = <z|sigma_B|z>`.
fn conditional_blocks(
    sigma_ab: &DensityOperator,
    part: &Bipartition,
    basis_b: Option<&CMatrix>,
) -> Vec<CMatrix> {
    let da = part.dim_a();
    let db = part.dim_b();
    let m = sigma_ab.matrix();
    match basis_b {
        None => (0..db)
            .map(|z| {
                CMatrix::from_fn(da, da, |a, ap| {
                    m[(part.assemble_index(a, z), part.assemble_index(ap, z))]
                })
            })
            .collect(),
        Some(v) => {
            // per A-index pair (a <= a'), rotate the B block and keep its
            // diagonal: diag(V^H B V)[z] = <v_z| B |v_z>
            let pairs: Vec<(usize, usize)> = (0..da)
                .flat_map(|a| (a..da).map(move |ap| (a, ap)))
                .collect();
            let rotated: Vec<((usize, usize), Vec<C64>)> = pairs
                .par_iter()
                .map(|&(a, ap)| {
                    let block = CMatrix::from_fn(db, db, |b, bp| {
                        m[(part.assemble_index(a, b), part.assemble_index(ap, bp))]
                    });
                    let t = &block * v;
                    let diag: Vec<C64> = (0..db)
                        .map(|z| (0..db).map(|b| v[(b, z)].conj() * t[(b, z)]).sum())
                        .collect();
                    ((a, ap), diag)
                })
                .collect();
            let mut blocks = vec![CMatrix::zeros(da, da); db];
            for ((a, ap), diag) in rotated {
                for (z, &val) in diag.iter().enumerate() {
                    blocks[z][(a, ap)] = val;
                    if a != ap {
                        blocks[z][(ap, a)] = val.conj();
                    }
                }
            }
            blocks
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ensembles::{sample_haar_state, stream_rng};
    use numeric_core::{kron, CVector, StateVector};
    use symmetric_weingarten::haar_moment;

    fn diag_sigma_a() -> DensityOperator {
        DensityOperator::from_probabilities(&[0.7, 0.3]).unwrap()
    }

    #[test]
    fn pure_marginal_reduces_to_a_single_scrooge_reference() {
        // sigma_AB = sigma_A (x) |0><0|_B: only outcome 0 survives
        let sa = diag_sigma_a();
        let pb = StateVector::computational_basis(1, 0).density().unwrap();
        let m = kron(sa.matrix(), pb.matrix()).unwrap();
        let sigma = DensityOperator::new(m).unwrap();
        let part = Bipartition::contiguous(1, 2);
        let r = generalized_scrooge_reference(&sigma, &part, None, 2, 300, 40).unwrap();
        assert_eq!(r.outcomes(), &[0]);
        assert_eq!(r.weights(), &[1.0]);
        assert_eq!(r.num_distinct_conditionals(), 1);
        assert!(r.dropped_weight() < 1e-15);
        let direct = scrooge_moment_mc(&sa, 2, 300, 40).unwrap();
        assert_eq!(
            r.moment().matrix().as_slice(),
            direct.moment().matrix().as_slice()
        );
    }

    #[test]
    fn maximally_mixed_input_collapses_to_one_haar_class() {
        let sigma = DensityOperator::maximally_mixed(8);
        let part = Bipartition::contiguous(1, 3);
        let r = generalized_scrooge_reference(&sigma, &part, None, 2, 5_000, 41).unwrap();
        assert_eq!(r.num_distinct_conditionals(), 1);
        assert_eq!(r.outcomes().len(), 4);
        for &w in r.weights() {
            assert!((w - 0.25).abs() < 1e-12);
        }
        let haar = haar_moment(2, 2).unwrap();
        let diff = r.moment().matrix() - haar;
        assert!(diff.norm() <= 5.0 * r.std_error());
    }

    #[test]
    fn hamming_symmetric_state_groups_outcomes_by_weight() {
        // |Psi_j> = sum_w c_w |chi_w>_A (x) |Dicke_w>_B: the conditional
        // state of z depends only on the Hamming weight of z, so the
        // 16 outcomes land in at most n_b + 1 = 5 classes.
        let (na, nb) = (2usize, 4usize);
        let (da, db) = (1usize << na, 1usize << nb);
        let part = Bipartition::contiguous(na, na + nb);
        let mut m = CMatrix::zeros(da * db, da * db);
        let mixture = [(0.6, 900u64), (0.4, 901u64)];
        for (p, base_seed) in mixture {
            let mut psi = CVector::zeros(da * db);
            for w in 0..=nb {
                let mut rng = stream_rng(base_seed, w as u64);
                let chi = sample_haar_state(da, &mut rng);
                let members: Vec<usize> =
                    (0..db).filter(|z| z.count_ones() as usize == w).collect();
                let amp = 1.0 / ((nb + 1) as f64 * members.len() as f64).sqrt();
                for &z in &members {
                    for a in 0..da {
                        psi[part.assemble_index(a, z)] = chi.amplitudes()[a] * amp;
                    }
                }
            }
            let norm = psi.norm();
            psi.unscale_mut(norm);
            m.gerc(C64::new(p, 0.0), &psi, &psi, C64::new(1.0, 0.0));
        }
        let sigma = DensityOperator::new(m).unwrap();
        let r = generalized_scrooge_reference(&sigma, &part, None, 2, 200, 42).unwrap();
        assert_eq!(r.outcomes().len(), db);
        assert_eq!(r.num_distinct_conditionals(), nb + 1);
        // weights agree within a weight class
        for (i, &z) in r.outcomes().iter().enumerate() {
            for (j, &zp) in r.outcomes().iter().enumerate() {
                if z.count_ones() == zp.count_ones() {
                    assert!((r.weights()[i] - r.weights()[j]).abs() < 1e-12);
                    assert_eq!(r.class_of()[i], r.class_of()[j]);
                }
            }
        }
    }

    #[test]
    fn rotated_basis_concentrates_plus_states() {
        // sigma_AB = sigma_A (x) |++><++|; in the Hadamard basis on B only
        // outcome 0 survives and the conditional state is sigma_A
        let sa = diag_sigma_a();
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
        );
        let hh = kron(&h, &h).unwrap();
        let plus2 = {
            let v = CVector::from_element(4, C64::new(0.5, 0.0));
            StateVector::new(v).unwrap().density().unwrap()
        };
        let m = kron(sa.matrix(), plus2.matrix()).unwrap();
        let sigma = DensityOperator::new(m).unwrap();
        let part = Bipartition::contiguous(1, 3);
        let r = generalized_scrooge_reference(&sigma, &part, Some(&hh), 2, 300, 43).unwrap();
        assert_eq!(r.outcomes(), &[0]);
        assert!(max_abs(&(r.conditionals()[0].matrix() - sa.matrix())) < 1e-12);
        // the rotated extraction leaves ulp-level residue in the
        // conditional state, so compare moments numerically, not bitwise
        let direct = scrooge_moment_mc(&sa, 2, 300, 43).unwrap();
        let diff = r.moment().matrix() - direct.moment().matrix();
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn interface_errors_are_reported() {
        let sigma = DensityOperator::maximally_mixed(8);
        let part = Bipartition::contiguous(1, 2);
        assert!(matches!(
            generalized_scrooge_reference(&sigma, &part, None, 2, 300, 0).unwrap_err(),
            Error::DimensionMismatch { got: 8, expected: 4 }
        ));

        let part = Bipartition::contiguous(1, 3);
        let skewed = CMatrix::from_fn(4, 4, |i, j| C64::new((i + j) as f64, 0.0));
        assert!(matches!(
            generalized_scrooge_reference(&sigma, &part, Some(&skewed), 2, 300, 0).unwrap_err(),
            Error::BasisNotUnitary { .. }
        ));

        assert!(matches!(
            generalized_scrooge_reference(&sigma, &part, None, 2, 10, 0).unwrap_err(),
            Error::Ensembles(ensembles::Error::TooFewSamples { .. })
        ));
    }
}
