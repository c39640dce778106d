//! Compatible observables as random variables on one Kolmogorov space.

use janus::harness::{classical_embedding, embedding_report, EprScenario};
use janus::hilbert::{ComplexMatrix, ComplexVector};
use janus::quantum::{Observable, QuantumState};

fn main() -> janus::Result<()> {
    let scn = EprScenario::standard(10f64.to_radians(), 40f64.to_radians());
    let (a, b) = scn.observables();
    let emb = classical_embedding(&scn.state, (&a, 0), (&b, 1))?;
    for (atom, w) in emb.space.atoms().iter().zip(emb.space.weights()) {
        println!("  {atom:<10} {w:.12}");
    }
    println!("{}\n", embedding_report(&scn.state, (&a, 0), (&b, 1))?);

    // same-site pair that commutes
    let state = QuantumState::pure(ComplexVector::from_real(&[0.6, 0.0, 0.8])?, &[3])?;
    let f = Observable::diagonal("F", &[1.0, 1.0, 2.0])?;
    let g = Observable::diagonal("G", &[0.0, 3.0, 3.0])?;
    println!("{}\n", embedding_report(&state, (&f, 0), (&g, 0))?);

    // and one that does not
    let qubit = QuantumState::pure(ComplexVector::basis(2, 0), &[2])?;
    let x = Observable::new(
        "X",
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?,
    )?;
    let z = Observable::diagonal("Z", &[1.0, -1.0])?;
    if let Err(e) = classical_embedding(&qubit, (&x, 0), (&z, 0)) {
        println!("X with Z: {e}");
    }
    Ok(())
}
