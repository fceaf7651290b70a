//! Randomized invariant checks: metric axioms for the distances, Schatten
//! monotonicity, and the Hilbert-Schmidt / trace-distance sandwich.

use nalgebra::DMatrix;
use num_complex::Complex64;
use numeric_core::{
    eigh, hs_distance, schatten_norm, trace_distance, CMatrix, SchattenP,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()).scale(0.5)
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    w.scale(1.0 / tr)
}

#[test]
fn schatten_monotone_on_random_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(2..9);
        let h = random_hermitian(n, &mut rng);
        let n1 = schatten_norm(&h, SchattenP::One);
        let n2 = schatten_norm(&h, SchattenP::Two);
        let n4 = schatten_norm(&h, SchattenP::Four);
        let ninf = schatten_norm(&h, SchattenP::Infinity);
        assert!(n1 >= n2 - 1e-10 && n2 >= n4 - 1e-10 && n4 >= ninf - 1e-10);
        // Cross-check p = 1 and p = inf against the eigenvalues directly.
        let (vals, _) = eigh(&h).unwrap();
        let sum_abs: f64 = vals.iter().map(|v| v.abs()).sum();
        let max_abs = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        assert!((n1 - sum_abs).abs() < 1e-8 * sum_abs.max(1.0));
        assert!((ninf - max_abs).abs() < 1e-8 * max_abs.max(1.0));
    }
}

#[test]
fn trace_distance_is_a_metric_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let n = 1 << rng.gen_range(1..4);
        let a = random_density(n, &mut rng);
        let b = random_density(n, &mut rng);
        let c = random_density(n, &mut rng);
        let dab = trace_distance(&a, &b).unwrap();
        let dba = trace_distance(&b, &a).unwrap();
        let dac = trace_distance(&a, &c).unwrap();
        let dcb = trace_distance(&c, &b).unwrap();
        assert!((dab - dba).abs() < 1e-12);
        assert!(dab >= 0.0);
        assert!(dab <= dac + dcb + 1e-12);
        assert!(trace_distance(&a, &a).unwrap() < 1e-12);
        // Density operators stay within distance 1.
        assert!(dab <= 1.0 + 1e-12);
    }
}

#[test]
fn hs_sandwiches_trace_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = 1 << rng.gen_range(1..4);
        let a = random_density(n, &mut rng);
        let b = random_density(n, &mut rng);
        let hs = hs_distance(&a, &b).unwrap();
        let tr = trace_distance(&a, &b).unwrap();
        assert!(hs <= tr + 1e-12);
        assert!(tr <= (n as f64).sqrt() * hs + 1e-12);
    }
}
