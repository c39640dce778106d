//! Joint polarizer statistics on (|xx> + |yy>)/sqrt2 and the state left
//! behind by a "+" at site 1.

use janus::harness::{epr_joint_probabilities, polarizer_observable, EprScenario};
use janus::hilbert::{ComplexVector, Kron};
use janus::quantum::{bipartite_luders_update, conditional_probability, site_probability};

fn main() -> janus::Result<()> {
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}",
        "a-b deg", "p++", "p+-", "p-+", "p--"
    );
    for deg in (0..=90).step_by(15) {
        let t = epr_joint_probabilities(&EprScenario::standard(0.0, (deg as f64).to_radians()))?;
        println!(
            "{deg:>8} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            t.pp, t.pm, t.mp, t.mm
        );
    }

    let a = 35f64.to_radians();
    let scn = EprScenario::standard(a, 0.0);
    let pol_a = polarizer_observable(a);
    let p_plus = site_probability(&scn.state, 0, &pol_a, 1.0)?;
    let post = bipartite_luders_update(&scn.state, &pol_a, 1.0)?;
    let dir = ComplexVector::from_real(&[a.cos(), a.sin()])?;
    println!(
        "\na = 35 deg: p(+) = {p_plus:.12}, |<a,a|psi'>| = {:.12}",
        post.overlap_with(&dir.tensor(&dir))?
    );

    // Malus: after "+" at a, site 2 passes a polarizer at b with cos²(a-b)
    for b_deg in [0.0_f64, 20.0, 35.0, 80.0] {
        let b = b_deg.to_radians();
        let p =
            conditional_probability(&scn.state, (&pol_a, 1.0), (&polarizer_observable(b), 1.0))?;
        println!(
            "  p(+ at {b_deg:>4} | + at 35) = {p:.12}  cos² = {:.12}",
            (a - b).cos().powi(2)
        );
    }
    Ok(())
}
