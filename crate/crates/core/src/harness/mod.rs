//! The two calculi run against each other.
//!
//! [`EprScenario`] is the polarizer-pair setup on `(|xx⟩ + |yy⟩)/√2`.
//! [`two_step_vs_direct`] and [`embedding_report`] tabulate pairs of numbers
//! that must coincide, and [`sample_outcomes`] draws seeded outcome records
//! for subensemble statistics.

mod embedding;
mod report;
mod sampling;

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::format::fmt_outcome;
use crate::hilbert::{ComplexMatrix, ComplexVector};
use crate::quantum::{
    bipartite_luders_update, joint_distribution, site_probability, Observable, QuantumState,
};

pub use embedding::{classical_embedding, embedding_report, ClassicalEmbedding};
pub use report::{ComparisonReport, ComparisonRow};
pub use sampling::{
    chi_square, conditional_statistics, joint_frequencies, sample_outcomes, splitmix64,
    EmpiricalDistribution, SampleMode, SampleRecord, SampleRun,
};

/// Site labels of the two photon channels.
pub const SITE_LABELS: [&str; 2] = ["ν₁", "ν₂"];

/// Comparison tolerance for tabulated identities.
pub const REPORT_TOL: f64 = 1e-10;

/// Linear-polarizer observable labelled `pol<degrees>`: `+1` on `cos a|x⟩ + sin a|y⟩`, `−1` on the
/// orthogonal direction.
pub fn polarizer_observable(angle: f64) -> Observable {
    let (s, c) = (2.0 * angle).sin_cos();
    let m = ComplexMatrix::from_real_rows(&[&[c, s], &[s, -c]]).expect("2x2 rows");
    Observable::new(
        format!("pol{}", crate::format::fmt_g(angle.to_degrees())),
        m,
    )
    .expect("real symmetric 2x2")
}

/// `(|xx⟩ + |yy⟩)/√2` on `C² ⊗ C²`.
pub fn epr_state() -> QuantumState {
    let v = ComplexVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).expect("nonempty");
    QuantumState::pure(v, &[2, 2]).expect("normalized")
}

/// `(|01⟩ + |10⟩)/√2` on `C² ⊗ C²`.
pub fn anticorrelated_state() -> QuantumState {
    let v = ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).expect("nonempty");
    QuantumState::pure(v, &[2, 2]).expect("normalized")
}

#[derive(Debug, Clone)]
pub struct EprScenario {
    pub state: QuantumState,
    /// Polarizer orientation at site I, radians.
    pub angle_a: f64,
    /// Polarizer orientation at site II, radians.
    pub angle_b: f64,
    pub site_labels: [String; 2],
}

impl EprScenario {
    pub fn standard(angle_a: f64, angle_b: f64) -> Self {
        Self::with_state(epr_state(), angle_a, angle_b).expect("standard state is two-site pure")
    }

    /// Any two-qubit pure state in place of the standard one.
    pub fn with_state(state: QuantumState, angle_a: f64, angle_b: f64) -> Result<Self> {
        if state.site_dims() != [2, 2] || !state.is_pure() {
            return Err(crate::Error::SiteMismatch(
                "polarizer scenarios need a pure state on two 2-dimensional sites".into(),
            ));
        }
        Ok(Self {
            state,
            angle_a,
            angle_b,
            site_labels: SITE_LABELS.map(String::from),
        })
    }

    pub fn observables(&self) -> (Observable, Observable) {
        (
            polarizer_observable(self.angle_a).with_label("a"),
            polarizer_observable(self.angle_b).with_label("b"),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprTable {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl EprTable {
    pub fn as_array(&self) -> [f64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }
}

/// `p_{±±}(a, b)` from the joint Born table of the two polarizers.
pub fn epr_joint_probabilities(scn: &EprScenario) -> Result<EprTable> {
    let (a, b) = scn.observables();
    let joint = joint_distribution(&scn.state, &a, &b)?;
    // outcomes ascend, so index 1 is +1
    Ok(EprTable {
        pp: joint.at(1, 1),
        pm: joint.at(1, 0),
        mp: joint.at(0, 1),
        mm: joint.at(0, 0),
    })
}

/// Rows `p(x)·p(y|x)` (two-step) against the joint `p(x, y)` (direct), with
/// `obs1` on the first site and `obs2` on the second.
pub fn two_step_vs_direct(
    state: &QuantumState,
    obs1: &Observable,
    obs2: &Observable,
) -> Result<ComparisonReport> {
    let joint = joint_distribution(state, obs1, obs2)?;
    let zero = obs1.tolerances().zero_prob;
    let mut report = ComparisonReport::new("two-step vs direct", "two-step", "direct", REPORT_TOL);
    for (i, &x) in joint.first_outcomes().iter().enumerate() {
        let px = site_probability(state, 0, obs1, x)?;
        let updated = if px > zero {
            Some(bipartite_luders_update(state, obs1, x)?)
        } else {
            None
        };
        for (j, &y) in joint.second_outcomes().iter().enumerate() {
            let two_step = match &updated {
                Some(u) => px * site_probability(u, 1, obs2, y)?,
                None => 0.0,
            };
            report.push(
                format!("p({},{})", fmt_outcome(x), fmt_outcome(y)),
                two_step,
                joint.at(i, j),
            );
        }
    }
    Ok(report)
}
