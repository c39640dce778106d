//! Projective update of single-system and composite states.

use janus::harness::anticorrelated_state;
use janus::hilbert::{ComplexMatrix, ComplexVector};
use janus::quantum::{
    born_probability, luders_update, luders_update_at, marginal_state, outcome_distribution,
    Observable, QuantumState,
};
use janus::Complex64;

fn show(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.6}", z.re)).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> janus::Result<()> {
    // degenerate outcome: the projection keeps the superposition inside the eigenspace
    let obs = Observable::diagonal("A", &[1.0, 1.0, 2.0])?;
    let psi = ComplexVector::from_real(&[1.0, 1.0, 1.0])?
        .normalized()
        .expect("nonzero");
    let state = QuantumState::pure(psi, &[3])?;
    for (x, p) in outcome_distribution(&state, &obs)?.entries() {
        println!("p(A = {x}) = {p:.12}");
    }
    let post = luders_update(&state, &obs, 1.0)?;
    println!("after A = 1: {}", show(post.as_pure().unwrap().entries()));

    // density operators update as E rho E / tr(E rho E)
    let rho = ComplexMatrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]])?;
    let mixed = QuantumState::density(rho, &[2])?;
    let z = Observable::diagonal("Z", &[1.0, -1.0])?;
    println!(
        "\nmixed qubit: p(Z = +1) = {:.12}",
        born_probability(&mixed, &z, 1.0)?
    );
    println!("{}", luders_update(&mixed, &z, 1.0)?.density_matrix());

    // composite state: number observable on site 1 of (|01> + |10>)/sqrt2
    let bell = anticorrelated_state();
    let n = Observable::diagonal("N", &[0.0, 1.0])?;
    let post = luders_update_at(&bell, 0, &n, 0.0)?;
    println!(
        "\nanticorrelated pair, site 1 finds 0: {}",
        show(post.as_pure().unwrap().entries())
    );
    println!(
        "site 2 marginal before:\n{}",
        marginal_state(&bell, 1)?.density_matrix()
    );
    println!(
        "site 2 marginal after:\n{}",
        marginal_state(&post, 1)?.density_matrix()
    );

    match luders_update(
        &QuantumState::pure(ComplexVector::basis(2, 0), &[2])?,
        &z,
        -1.0,
    ) {
        Err(e) => println!("\nconditioning on Z = -1 in |0>: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
