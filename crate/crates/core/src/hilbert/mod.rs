//! Dense complex linear algebra for small composite Hilbert spaces.
//!
//! Everything here is immutable after construction: operations return new
//! values and never mutate their inputs.

mod eigen;
mod matrix;
mod spectral;
mod svd;
mod tensor;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use spectral::{
    spectral_decompose, spectral_decompose_with, SpectralDecomposition, SpectralPair,
};
pub use svd::singular_values;
pub use tensor::{
    apply_on_site, check_site_dims, partial_trace, reduce_pure_to_site, reduce_to_site, Kron,
};

use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Modified Gram–Schmidt. Vectors whose residual norm falls below `drop_tol`
/// are discarded, so the output is an orthonormal basis of their span.
pub fn gram_schmidt(vectors: &[ComplexVector], drop_tol: f64) -> Vec<ComplexVector> {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.inner(&w);
                w = w.sub(&b.scale(overlap));
            }
        }
        let n = w.norm();
        if n > drop_tol {
            basis.push(w.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
    basis
}
