//! p(x)·p(y|x) from the updated state against the joint p(x,y).

use janus::harness::{two_step_vs_direct, EprScenario};
use janus::quantum::{Observable, QuantumState};
use janus::random::{random_hermitian, random_pure, seeded};

fn main() -> janus::Result<()> {
    let scn = EprScenario::standard(0.0, 25f64.to_radians());
    let (a, b) = scn.observables();
    println!("{}\n", two_step_vs_direct(&scn.state, &a, &b)?);

    let mut rng = seeded(2024);
    let state = QuantumState::pure(random_pure(12, &mut rng), &[3, 4])?;
    let a = Observable::new("A", random_hermitian(3, &mut rng))?;
    let b = Observable::new("B", random_hermitian(4, &mut rng))?;
    let report = two_step_vs_direct(&state, &a, &b)?;
    println!(
        "random 3x4 state: {} rows, max |diff| = {:e}, pass = {}",
        report.rows().len(),
        report.max_difference(),
        report.passed()
    );
    Ok(())
}
