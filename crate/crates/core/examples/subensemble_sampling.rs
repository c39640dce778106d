//! Seeded outcome records and the statistics of a selected subensemble.

use janus::harness::{
    conditional_statistics, joint_frequencies, sample_outcomes, EprScenario, SampleMode,
};

fn main() -> janus::Result<()> {
    let a = 0.0;
    let b = 30f64.to_radians();
    let scn = EprScenario::standard(a, b);
    let (pa, pb) = scn.observables();
    for mode in [SampleMode::Direct, SampleMode::TwoStep] {
        let run = sample_outcomes(&scn.state, &pa, &pb, 100_000, 0x4A4E5553, mode)?;
        println!(
            "{mode}: joint frequencies (--, -+, +-, ++) = {:.4?}",
            joint_frequencies(&run)
        );
        let plus = conditional_statistics(&run, 1.0)?;
        println!(
            "  subensemble x = +1: {} records, p(+|+) = {:.4} (cos² = {:.4})",
            plus.count,
            plus.frequency(1.0).unwrap(),
            (a - b).cos().powi(2)
        );
    }
    Ok(())
}
