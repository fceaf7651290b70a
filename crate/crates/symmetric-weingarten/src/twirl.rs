use numeric_core::{CMatrix, C64, REPLICA_AXIS_CAP};

use crate::perm::{enumerate_permutations, Permutation};
use crate::table::WeingartenTable;
use crate::{Error, Result};

fn replica_dim(d: usize, k: usize) -> Result<usize> {
    let mut dim = 1usize;
    for _ in 0..k {
        dim = dim.checked_mul(d).unwrap_or(usize::MAX);
        if dim > REPLICA_AXIS_CAP {
            return Err(Error::SizeCap {
                dim,
                cap: REPLICA_AXIS_CAP,
            });
        }
    }
    Ok(dim)
}

/// Composite index for digit i_m in slot m, slot 0 most significant.
fn assemble(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &dig| acc * d + dig)
}

fn disassemble(mut index: usize, d: usize, k: usize, out: &mut [usize]) {
    for m in (0..k).rev() {
        out[m] = index % d;
        index /= d;
    }
}

/// Row index paired with column `col` in the permutation operator: the digit
/// in slot m of the column becomes the digit in slot pi(m) of the row.
fn permuted_row(pi: &Permutation, col: usize, d: usize, scratch: &mut [usize], digits: &mut [usize]) -> usize {
    let k = pi.order();
    disassemble(col, d, k, digits);
    for m in 0..k {
        scratch[pi.apply(m)] = digits[m];
    }
    assemble(scratch, d)
}

/// Dense permutation operator on the k-fold replica space of dimension D^k.
/// Unitary; trace D^{#cycles(pi)}.
pub fn permutation_operator(pi: &Permutation, d: usize) -> Result<CMatrix> {
    let k = pi.order();
    let dim = replica_dim(d, k)?;
    let mut out = CMatrix::zeros(dim, dim);
    let mut scratch = vec![0usize; k];
    let mut digits = vec![0usize; k];
    for col in 0..dim {
        let row = permuted_row(pi, col, d, &mut scratch, &mut digits);
        out[(row, col)] = C64::new(1.0, 0.0);
    }
    Ok(out)
}

/// Dimension of the symmetric subspace, binom(D + k - 1, k), exactly.
pub fn sym_dim(d: usize, k: usize) -> Result<u128> {
    assert!(k >= 1, "sym_dim needs k >= 1");
    // binom(d + k - 1, k) with interleaved divisions keeps intermediates exact.
    let mut num = 1u128;
    for j in 1..=k as u128 {
        num = num
            .checked_mul(d as u128 + j - 1)
            .ok_or(Error::SymDimOverflow { d, k })?;
        num /= j;
    }
    Ok(num)
}

/// Projector onto the symmetric subspace, P = (1/k!) sum_pi op(pi).
pub fn sym_projector(d: usize, k: usize) -> Result<CMatrix> {
    let dim = replica_dim(d, k)?;
    let perms = enumerate_permutations(k)?;
    let mut p = CMatrix::zeros(dim, dim);
    let mut scratch = vec![0usize; k];
    let mut digits = vec![0usize; k];
    let w = C64::new(1.0 / perms.len() as f64, 0.0);
    for pi in &perms {
        for col in 0..dim {
            let row = permuted_row(pi, col, d, &mut scratch, &mut digits);
            p[(row, col)] += w;
        }
    }
    Ok(p)
}

/// k-th moment operator of the Haar ensemble, P_sym / D_k.
pub fn haar_moment(d: usize, k: usize) -> Result<CMatrix> {
    let dk = sym_dim(d, k)? as f64;
    let mut p = sym_projector(d, k)?;
    p.scale_mut(1.0 / dk);
    Ok(p)
}

/// k-fold Haar twirl E_U[U^(x)k A U^(x)k-dagger] via the Weingarten formula:
/// sum over sigma, pi of Wg[sigma][pi] Tr(A op(pi)^dagger) op(sigma).
///
/// Valid for any k within the permutation cap, including k > D, where the
/// pseudoinverse Weingarten table is used (see `WeingartenTable`).
pub fn haar_twirl(a: &CMatrix, k: usize, d: usize) -> Result<CMatrix> {
    let table = WeingartenTable::new_pseudoinverse(k, d)?;
    haar_twirl_with(a, &table)
}

/// As `haar_twirl` but reusing a prebuilt table.
pub fn haar_twirl_with(a: &CMatrix, table: &WeingartenTable) -> Result<CMatrix> {
    let (k, d) = (table.k(), table.d());
    let dim = replica_dim(d, k)?;
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::Shape {
            got: a.nrows(),
            expected: dim,
        });
    }
    let perms = table.permutations();
    let nf = perms.len();
    let mut scratch = vec![0usize; k];
    let mut digits = vec![0usize; k];

    // Tr(A op(pi)^dagger) = sum_col A[(row(col), col)].
    let mut traces = vec![C64::new(0.0, 0.0); nf];
    for (p, pi) in perms.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for col in 0..dim {
            let row = permuted_row(pi, col, d, &mut scratch, &mut digits);
            acc += a[(row, col)];
        }
        traces[p] = acc;
    }

    // coeff_sigma = sum_pi Wg[sigma][pi] tr_pi, then accumulate the sparse
    // permutation operators directly.
    let mut out = CMatrix::zeros(dim, dim);
    for (s, sigma) in perms.iter().enumerate() {
        let mut coeff = C64::new(0.0, 0.0);
        for p in 0..nf {
            coeff += traces[p] * C64::new(table.weingarten()[(s, p)], 0.0);
        }
        if coeff.norm() == 0.0 {
            continue;
        }
        for col in 0..dim {
            let row = permuted_row(sigma, col, d, &mut scratch, &mut digits);
            out[(row, col)] += coeff;
        }
    }
    Ok(out)
}
