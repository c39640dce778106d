//! Two commuting observables read off one nondegenerate observable C.

use janus::hilbert::ComplexMatrix;
use janus::quantum::{joint_refinement, Observable};
use janus::random::{random_unitary, seeded};

fn main() -> janus::Result<()> {
    // A and B share an eigenbasis hidden by a random unitary
    let mut rng = seeded(7);
    let u = random_unitary(4, &mut rng);
    let conj = |d: &[f64]| -> janus::Result<ComplexMatrix> {
        u.matmul(&ComplexMatrix::diagonal(d))?.matmul(&u.adjoint())
    };
    let a = Observable::new("A", conj(&[1.0, 1.0, -1.0, -1.0])?)?;
    let b = Observable::new("B", conj(&[0.0, 5.0, 5.0, 5.0])?)?;

    let r = joint_refinement(&a, &b)?;
    println!(
        "refining observable {} with spectrum {:?}",
        r.refining.label(),
        r.refining.outcomes()
    );
    println!("  {:>4} {:>8} {:>8}", "c", "f(c)", "g(c)");
    for (&(c, fa), &(_, gb)) in r.first.table().iter().zip(r.second.table()) {
        println!("  {c:>4} {fa:>8.4} {gb:>8.4}");
    }
    println!(
        "|f(C) - A| = {:e}",
        r.reconstruct_first().max_abs_diff(a.matrix())
    );
    println!(
        "|g(C) - B| = {:e}",
        r.reconstruct_second().max_abs_diff(b.matrix())
    );

    let x = Observable::new(
        "X",
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?,
    )?;
    let z = Observable::diagonal("Z", &[1.0, -1.0])?;
    if let Err(e) = joint_refinement(&x, &z) {
        println!("X, Z: {e}");
    }
    Ok(())
}
