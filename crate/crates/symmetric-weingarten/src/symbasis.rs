//! Orthonormal basis of the symmetric subspace, and coordinate maps into it.
//!
//! Any k-th moment operator is supported on the symmetric subspace, so
//! spectral work (trace distances between moment operators, reference
//! moments) can run at dimension D_k = binom(D+k-1, k) instead of D^k.
//! At D = 64, k = 2 that is 2080 instead of 4096; at D = 16, k = 3 it is
//! 816 instead of 4096 — the difference between seconds and minutes per
//! eigendecomposition.

use itertools::Itertools;
use numeric_core::{CMatrix, CVector, C64, REPLICA_AXIS_CAP};

use crate::{Error, Result};

/// Sorted multiset of k basis indices: one symmetric-basis label.
pub type Occupation = Vec<usize>;

/// All occupations of k slots over d levels, lexicographic in the sorted
/// tuple; length equals `sym_dim(d, k)`.
pub fn occupations(d: usize, k: usize) -> Vec<Occupation> {
    (0..d).combinations_with_replacement(k).collect()
}

/// Number of distinct arrangements of a sorted tuple, k!/prod(counts!).
/// Number of distinct orderings of a sorted index tuple, `k! / prod_i m_i!`
/// over the multiplicities `m_i` of its repeated entries.
pub fn arrangements(tuple: &[usize]) -> f64 {
    let k = tuple.len();
    let mut numer = 1.0f64;
    for j in 2..=k {
        numer *= j as f64;
    }
    let mut denom = 1.0f64;
    let mut run = 1usize;
    for t in 1..k {
        if tuple[t] == tuple[t - 1] {
            run += 1;
            denom *= run as f64;
        } else {
            run = 1;
        }
    }
    numer / denom
}

/// Coordinates of psi^(x)k in the orthonormal symmetric basis:
/// entry for occupation m is sqrt(k!/prod m_i!) * prod_t psi_{m_t}.
/// For a normalized psi the result is a unit vector.
pub fn sym_coords(psi: &CVector, occs: &[Occupation]) -> CVector {
    let mut out = CVector::zeros(occs.len());
    for (row, tuple) in occs.iter().enumerate() {
        let mut prod = C64::new(arrangements(tuple).sqrt(), 0.0);
        for &idx in tuple {
            prod *= psi[idx];
        }
        out[row] = prod;
    }
    out
}

/// Isometry V from the symmetric subspace into the full replica space:
/// columns are the orthonormal symmetric basis vectors, so V^dagger V = I
/// and V V^dagger = P_sym. Only for replica dimensions within the cap.
pub fn sym_basis_isometry(d: usize, k: usize) -> Result<CMatrix> {
    let mut dim = 1usize;
    for _ in 0..k {
        dim = dim.saturating_mul(d);
    }
    if dim > REPLICA_AXIS_CAP {
        return Err(Error::SizeCap {
            dim,
            cap: REPLICA_AXIS_CAP,
        });
    }
    let occs = occupations(d, k);
    // Map a sorted digit tuple to its occupation row by binary search.
    let mut v = CMatrix::zeros(dim, occs.len());
    let mut digits = vec![0usize; k];
    for index in 0..dim {
        let mut rem = index;
        for m in (0..k).rev() {
            digits[m] = rem % d;
            rem /= d;
        }
        let mut sorted = digits.clone();
        sorted.sort_unstable();
        let row = occs
            .binary_search(&sorted)
            .expect("every sorted tuple is an occupation");
        v[(index, row)] = C64::new(1.0 / arrangements(&sorted).sqrt(), 0.0);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twirl::{haar_moment, sym_dim, sym_projector};
    use numeric_core::max_abs;

    #[test]
    fn occupation_count_matches_sym_dim() {
        for (d, k) in [(2usize, 2usize), (2, 3), (3, 2), (4, 3), (5, 4)] {
            assert_eq!(occupations(d, k).len() as u128, sym_dim(d, k).unwrap());
        }
        assert_eq!(occupations(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn isometry_is_isometric_onto_sym_subspace() {
        for (d, k) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let v = sym_basis_isometry(d, k).unwrap();
            let dk = sym_dim(d, k).unwrap() as usize;
            assert!(max_abs(&(v.adjoint() * &v - CMatrix::identity(dk, dk))) < 1e-12);
            let p = sym_projector(d, k).unwrap();
            assert!(max_abs(&(&v * v.adjoint() - p)) < 1e-12);
        }
    }

    #[test]
    fn sym_coords_agree_with_isometry() {
        let psi = CVector::from_vec(vec![
            C64::new(0.3, 0.4),
            C64::new(-0.5, 0.1),
            C64::new(0.2, -0.2),
        ]);
        let k = 3;
        let occs = occupations(3, k);
        let coords = sym_coords(&psi, &occs);

        let mut full = CVector::zeros(27);
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    full[i * 9 + j * 3 + l] = psi[i] * psi[j] * psi[l];
                }
            }
        }
        let v = sym_basis_isometry(3, k).unwrap();
        let projected = v.adjoint() * full;
        assert!((&coords - &projected).norm() < 1e-12);

        // Norm of the coordinates equals ||psi||^k.
        let norm = psi.norm();
        assert!((coords.norm() - norm.powi(k as i32)).abs() < 1e-12);
    }

    #[test]
    fn compressed_haar_moment_is_maximally_mixed() {
        for (d, k) in [(2usize, 2usize), (3, 2), (2, 3)] {
            let v = sym_basis_isometry(d, k).unwrap();
            let m = haar_moment(d, k).unwrap();
            let dk = sym_dim(d, k).unwrap() as usize;
            let compressed = v.adjoint() * m * &v;
            let expect = CMatrix::identity(dk, dk).scale(1.0 / dk as f64);
            assert!(max_abs(&(compressed - expect)) < 1e-12);
        }
    }
}
