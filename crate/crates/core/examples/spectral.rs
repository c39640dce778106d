//! Spectral decompositions with degenerate clusters, and Schmidt analysis.

use janus::harness::epr_state;
use janus::hilbert::{spectral_decompose, ComplexMatrix, ComplexVector, Kron};
use janus::quantum::{is_separable_pure, QuantumState};
use janus::random::{random_with_spectrum, seeded};

fn main() -> janus::Result<()> {
    let pauli_x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?;
    for pair in spectral_decompose(&pauli_x)?.pairs() {
        println!(
            "X: eigenvalue {:+.12} rank {}\n{}",
            pair.value,
            pair.rank(),
            pair.projector
        );
    }

    let mut rng = seeded(3);
    let m = random_with_spectrum(&[-1.0, 2.0, 2.0, 2.0 + 1e-12, 5.0], &mut rng);
    let dec = spectral_decompose(&m)?;
    println!("rotated spectrum with a near-degenerate triple:");
    for pair in dec.pairs() {
        println!("  {:.12} rank {}", pair.value, pair.rank());
    }
    println!(
        "  reconstruction error {:e}, projector defect {:e}",
        dec.reconstruct().max_abs_diff(&m),
        dec.projector_defect()
    );

    let plus = ComplexVector::from_real(&[0.6, 0.8])?;
    let product = QuantumState::pure(plus.tensor(&ComplexVector::basis(2, 1)), &[2, 2])?;
    for (name, s) in [("product", product), ("EPR", epr_state())] {
        let a = is_separable_pure(&s)?;
        println!(
            "{name}: separable = {}, Schmidt coefficients {:?}",
            a.separable, a.coefficients
        );
    }
    Ok(())
}
