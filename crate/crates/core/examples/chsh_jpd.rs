//! CHSH values and joint-distribution existence for quantum and
//! hand-made behaviors.

use janus::harness::{epr_state, polarizer_observable};
use janus::jpd::{behavior_from_quantum, chsh_value, jpd_feasible, BehaviorTable, Witness};

fn verdict(name: &str, b: &BehaviorTable) -> janus::Result<()> {
    let v = jpd_feasible(b)?;
    let (idx, s) = chsh_value(b).max_abs();
    let w = match v.witness {
        Witness::Distribution(_) => "distribution".to_string(),
        Witness::ViolatedInequality { index, value } => {
            format!("combination #{index} = {value:.10}")
        }
    };
    println!(
        "{name:<28} max|S| = {:.10} (#{idx})  jpd exists = {:<5}  witness: {w}",
        s.abs(),
        v.exists
    );
    Ok(())
}

fn main() -> janus::Result<()> {
    let state = epr_state();
    let pol = |deg: f64| polarizer_observable(deg.to_radians());
    let optimal = behavior_from_quantum(&state, [&pol(0.0), &pol(45.0)], [&pol(22.5), &pol(67.5)])?;
    verdict("EPR, optimal angles", &optimal)?;
    let degenerate =
        behavior_from_quantum(&state, [&pol(0.0), &pol(0.0)], [&pol(22.5), &pol(67.5)])?;
    verdict("EPR, equal site-1 settings", &degenerate)?;

    let labels = |p: &str| [format!("{p}1"), format!("{p}2")];
    let corr = [0.5, 0.0, 0.0, 0.5];
    let anti = [0.0, 0.5, 0.5, 0.0];
    let pr_box = BehaviorTable::new(labels("A"), labels("B"), [[corr, corr], [corr, anti]])?;
    verdict("PR box", &pr_box)?;
    let noise = BehaviorTable::new(labels("A"), labels("B"), [[[0.25; 4]; 2]; 2])?;
    for lambda in [0.4, 0.5, 0.6] {
        verdict(
            &format!("PR box, visibility {lambda}"),
            &pr_box.mix(&noise, lambda)?,
        )?;
    }
    Ok(())
}
