//! Compatible observables as random variables on one classical space.

use crate::classical::{
    conditional_probability_classical, probability, FiniteProbSpace, RandomVariable,
};
use crate::error::{Error, Result};
use crate::format::fmt_outcome;
use crate::quantum::{
    born_probability, check_site, commutator_norm, local_weight, luders_update, luders_update_at,
    site_probability, Observable, QuantumState,
};

use super::{ComparisonReport, REPORT_TOL};

/// Space of joint outcomes `(x, y)` weighted by `‖Ê^A(x) Ê^B(y) Ψ‖²`, with
/// `A` and `B` as the two coordinate random variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEmbedding {
    pub space: FiniteProbSpace,
    pub first: RandomVariable,
    pub second: RandomVariable,
}

impl ClassicalEmbedding {
    pub fn into_parts(self) -> (FiniteProbSpace, RandomVariable, RandomVariable) {
        (self.space, self.first, self.second)
    }
}

/// Builds the classical picture of `obs1` on `site1` and `obs2` on `site2`.
/// A same-site pair must commute.
pub fn classical_embedding(
    state: &QuantumState,
    first: (&Observable, usize),
    second: (&Observable, usize),
) -> Result<ClassicalEmbedding> {
    let (a, site_a) = first;
    let (b, site_b) = second;
    check_site(state, site_a, a)?;
    check_site(state, site_b, b)?;
    if site_a == site_b {
        let commutator = commutator_norm(a, b)?;
        if commutator > a.tolerances().commute {
            return Err(Error::NotCompatible {
                first: a.label().to_string(),
                second: b.label().to_string(),
                commutator,
            });
        }
    }

    let xs = a.outcomes();
    let ys = b.outcomes();
    let mut weights = Vec::with_capacity(xs.len() * ys.len());
    for pa in a.spectrum().pairs() {
        for pb in b.spectrum().pairs() {
            let w = if site_a == site_b {
                let product = pa.projector.matmul(&pb.projector)?;
                local_weight(state, &[(site_a, &product)])?
            } else {
                local_weight(state, &[(site_a, &pa.projector), (site_b, &pb.projector)])?
            };
            weights.push(w);
        }
    }
    // absorb rounding so the space validates; the drift is far below REPORT_TOL
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        for w in &mut weights {
            *w /= total;
        }
    }

    let space = FiniteProbSpace::bipartite(
        xs.iter().map(|&x| fmt_outcome(x)).collect(),
        ys.iter().map(|&y| fmt_outcome(y)).collect(),
        weights,
    )?;
    let first_values = xs
        .iter()
        .flat_map(|&x| std::iter::repeat_n(x, ys.len()))
        .collect();
    let second_values = xs.iter().flat_map(|_| ys.iter().copied()).collect();
    Ok(ClassicalEmbedding {
        space,
        first: RandomVariable::new(a.label(), first_values),
        second: RandomVariable::new(b.label(), second_values),
    })
}

fn quantum_probability(state: &QuantumState, site: usize, obs: &Observable, x: f64) -> Result<f64> {
    if state.sites() == 1 {
        born_probability(state, obs, x)
    } else {
        site_probability(state, site, obs, x)
    }
}

fn quantum_update(
    state: &QuantumState,
    site: usize,
    obs: &Observable,
    x: f64,
) -> Result<QuantumState> {
    if state.sites() == 1 {
        luders_update(state, obs, x)
    } else {
        luders_update_at(state, site, obs, x)
    }
}

/// Classical against quantum values of every marginal `p(A=x)`, `p(B=y)`
/// and every defined conditional `p(B=y | A=x)`.
pub fn embedding_report(
    state: &QuantumState,
    first: (&Observable, usize),
    second: (&Observable, usize),
) -> Result<ComparisonReport> {
    let emb = classical_embedding(state, first, second)?;
    let (a, site_a) = first;
    let (b, site_b) = second;
    let zero = a.tolerances().zero_prob;
    let mut report =
        ComparisonReport::new("classical embedding", "classical", "quantum", REPORT_TOL);

    for x in a.outcomes() {
        report.push(
            format!("p({}={})", a.label(), fmt_outcome(x)),
            probability(&emb.space, &emb.first, x)?,
            quantum_probability(state, site_a, a, x)?,
        );
    }
    for y in b.outcomes() {
        report.push(
            format!("p({}={})", b.label(), fmt_outcome(y)),
            probability(&emb.space, &emb.second, y)?,
            quantum_probability(state, site_b, b, y)?,
        );
    }
    for x in a.outcomes() {
        if quantum_probability(state, site_a, a, x)? <= zero {
            continue;
        }
        let updated = quantum_update(state, site_a, a, x)?;
        for y in b.outcomes() {
            report.push(
                format!(
                    "p({}={} | {}={})",
                    b.label(),
                    fmt_outcome(y),
                    a.label(),
                    fmt_outcome(x)
                ),
                conditional_probability_classical(&emb.space, (&emb.first, x), (&emb.second, y))?,
                quantum_probability(&updated, site_b, b, y)?,
            );
        }
    }
    Ok(report)
}
