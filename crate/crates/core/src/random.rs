//! Seeded generators of random states, operators and unitaries.
//!
//! Used by property tests, the acceptance suite and the examples. All draws
//! are Haar / Ginibre style from complex Gaussian entries.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{gram_schmidt, ComplexMatrix, ComplexVector};

pub type JanusRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> JanusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix with independent standard complex Gaussian entries.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let entries = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, entries).expect("shape matches entry count")
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    random_matrix(n, n, rng).hermitian_part().expect("square")
}

/// Haar-random unit vector.
pub fn random_pure(dim: usize, rng: &mut impl Rng) -> ComplexVector {
    let v = ComplexVector::new((0..dim).map(|_| gaussian(rng)).collect()).expect("dim > 0");
    v.normalized()
        .expect("Gaussian vector is nonzero almost surely")
}

/// Unitary from Gram–Schmidt on Ginibre columns.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_matrix(n, n, rng);
    let cols: Vec<ComplexVector> = (0..n).map(|c| g.column(c)).collect();
    let basis = gram_schmidt(&cols, 1e-12);
    assert_eq!(basis.len(), n, "Ginibre matrix was singular");
    let mut u = ComplexMatrix::zeros(n, n);
    for (c, v) in basis.iter().enumerate() {
        for r in 0..n {
            u.set(r, c, v[r]);
        }
    }
    u
}

/// Full-rank density operator `G G† / tr(G G†)`.
pub fn random_density(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_matrix(n, n, rng);
    let gg = g.matmul(&g.adjoint()).expect("square");
    let tr = gg.trace().re;
    gg.hermitian_part().expect("square").scale_real(1.0 / tr)
}

/// Random probability vector of length `n` (normalized exponentials).
pub fn random_weights(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Hermitian `U diag(values) U†` with a Haar-random `U`.
pub fn random_with_spectrum(values: &[f64], rng: &mut impl Rng) -> ComplexMatrix {
    let u = random_unitary(values.len(), rng);
    u.matmul(&ComplexMatrix::diagonal(values))
        .and_then(|m| m.matmul(&u.adjoint()))
        .expect("square")
        .hermitian_part()
        .expect("square")
}
