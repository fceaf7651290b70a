use crate::error::{Error, Result};
use crate::state::{Bipartition, Subsystem};
use crate::{hermiticity_deviation, max_abs, CMatrix, C64, HERMITICITY_TOL};

/// Kronecker products refuse to build matrices wider than this per axis.
pub const KRON_AXIS_CAP: usize = 1 << 20;

/// Kronecker product a (x) b with an output-size guard.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape {
            context: "kron: left factor must be square",
            got: a.ncols(),
            expected: a.nrows(),
        });
    }
    if b.nrows() != b.ncols() {
        return Err(Error::Shape {
            context: "kron: right factor must be square",
            got: b.ncols(),
            expected: b.nrows(),
        });
    }
    let out = a.nrows().checked_mul(b.nrows()).unwrap_or(usize::MAX);
    if out > KRON_AXIS_CAP {
        return Err(Error::SizeCap {
            got: out,
            cap: KRON_AXIS_CAP,
        });
    }
    Ok(a.kronecker(b))
}

/// k-fold Kronecker power, same size guard as `kron`.
pub fn kron_power(a: &CMatrix, k: usize) -> Result<CMatrix> {
    assert!(k >= 1, "kron_power needs k >= 1");
    let mut out = a.clone();
    for _ in 1..k {
        out = kron(&out, a)?;
    }
    Ok(out)
}

/// Partial trace of an operator on the full space down to one side of a
/// bipartition. Hermiticity and trace are preserved exactly (up to rounding).
pub fn partial_trace(op: &CMatrix, part: &Bipartition, keep: Subsystem) -> Result<CMatrix> {
    let d = 1usize << part.num_qubits();
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::Shape {
            context: "partial_trace: operator dimension must be 2^N of the bipartition",
            got: op.nrows(),
            expected: d,
        });
    }
    let (d_keep, d_sum) = match keep {
        Subsystem::A => (part.dim_a(), part.dim_b()),
        Subsystem::B => (part.dim_b(), part.dim_a()),
    };
    // Precompute the bit masks each reduced index contributes to the full index.
    let keep_base: Vec<usize> = (0..d_keep)
        .map(|i| match keep {
            Subsystem::A => part.assemble_index(i, 0),
            Subsystem::B => part.assemble_index(0, i),
        })
        .collect();
    let sum_base: Vec<usize> = (0..d_sum)
        .map(|i| match keep {
            Subsystem::A => part.assemble_index(0, i),
            Subsystem::B => part.assemble_index(i, 0),
        })
        .collect();
    let mut out = CMatrix::zeros(d_keep, d_keep);
    for i in 0..d_keep {
        for j in 0..d_keep {
            let mut acc = C64::new(0.0, 0.0);
            for &s in &sum_base {
                acc += op[(keep_base[i] | s, keep_base[j] | s)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in descending order
/// with eigenvectors as the matching columns.
///
/// The input is symmetrized after the deviation check, so callers may pass
/// matrices carrying rounding-level asymmetry.
pub fn eigh(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if h.nrows() != h.ncols() {
        return Err(Error::Shape {
            context: "eigh: matrix must be square",
            got: h.ncols(),
            expected: h.nrows(),
        });
    }
    let scale = max_abs(h).max(1.0);
    let dev = hermiticity_deviation(h);
    if dev > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: HERMITICITY_TOL,
        });
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    // nalgebra returns the spectrum in no particular order.
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((vals, vecs))
}

/// Schatten-p exponents supported by `schatten_norm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenP {
    One,
    Two,
    Four,
    Infinity,
}

pub(crate) fn schatten_from_singular_values(sv: &[f64], p: SchattenP) -> f64 {
    match p {
        SchattenP::One => sv.iter().sum(),
        SchattenP::Two => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
        SchattenP::Four => sv.iter().map(|s| s.powi(4)).sum::<f64>().powf(0.25),
        SchattenP::Infinity => sv.iter().fold(0.0f64, |m, &s| m.max(s)),
    }
}

/// Schatten p-norm (p-norm of the singular value vector) of any matrix.
pub fn schatten_norm(op: &CMatrix, p: SchattenP) -> f64 {
    if let SchattenP::Two = p {
        // Frobenius norm needs no decomposition.
        return op.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    let sv = op.clone().svd(false, false).singular_values;
    schatten_from_singular_values(sv.as_slice(), p)
}

fn difference_spectrum(a: &CMatrix, b: &CMatrix) -> Result<Vec<f64>> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::Shape {
            context: "distance: operands must share dimensions",
            got: b.nrows(),
            expected: a.nrows(),
        });
    }
    let (vals, _) = eigh(&(a - b))?;
    Ok(vals)
}

/// Trace distance (1/2) ||a - b||_1 between Hermitian operators.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let vals = difference_spectrum(a, b)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Hilbert-Schmidt distance (1/2) ||a - b||_2.
pub fn hs_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::Shape {
            context: "distance: operands must share dimensions",
            got: b.nrows(),
            expected: a.nrows(),
        });
    }
    Ok(0.5 * schatten_norm(&(a - b), SchattenP::Two))
}
