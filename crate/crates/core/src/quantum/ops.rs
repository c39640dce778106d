use crate::error::{Error, Result};
use crate::hilbert::{
    apply_on_site, reduce_pure_to_site, reduce_to_site, singular_values, ComplexMatrix,
};
use crate::tolerance::Tolerances;

use super::observable::{embed, Observable};
use super::state::{QuantumState, StateKind};

/// Born probabilities of every outcome of one observable, outcomes increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    entries: Vec<(f64, f64)>,
}

impl OutcomeDistribution {
    pub(crate) fn new(entries: Vec<(f64, f64)>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn outcomes(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.1).collect()
    }
}

fn check_dim(state: &QuantumState, obs: &Observable) -> Result<()> {
    if obs.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: obs.dim(),
        });
    }
    Ok(())
}

pub(crate) fn check_site(state: &QuantumState, site: usize, obs: &Observable) -> Result<()> {
    let Some(&d) = state.site_dims().get(site) else {
        return Err(Error::SiteMismatch(format!(
            "site {} does not exist in a {}-site state",
            site + 1,
            state.sites()
        )));
    };
    if d != obs.dim() {
        return Err(Error::SiteMismatch(format!(
            "observable `{}` has dimension {}, site {} has dimension {d}",
            obs.label(),
            obs.dim(),
            site + 1
        )));
    }
    Ok(())
}

/// `p(A=x; ψ) = ‖Ê(x)ψ‖²`, or `tr(Ê(x) ρ Ê(x))` for density operators.
pub fn born_probability(state: &QuantumState, obs: &Observable, outcome: f64) -> Result<f64> {
    check_dim(state, obs)?;
    state.projector_weight(obs.projector(outcome)?)
}

pub fn outcome_distribution(state: &QuantumState, obs: &Observable) -> Result<OutcomeDistribution> {
    check_dim(state, obs)?;
    let entries = obs
        .spectrum()
        .pairs()
        .iter()
        .map(|p| Ok((p.value, state.projector_weight(&p.projector)?)))
        .collect::<Result<_>>()?;
    Ok(OutcomeDistribution::new(entries))
}

fn normalize_projected(kind: StateKind, site_dims: &[usize]) -> QuantumState {
    let kind = match kind {
        StateKind::Pure(v) => {
            let n = v.norm();
            StateKind::Pure(v.scale(num_complex::Complex64::new(1.0 / n, 0.0)))
        }
        StateKind::Density(m) => {
            let h = m.hermitian_part().expect("square");
            let tr = h.trace().re;
            StateKind::Density(h.scale_real(1.0 / tr))
        }
    };
    QuantumState::from_parts(kind, site_dims.to_vec())
}

fn zero_probability_guard(p: f64, tol: &Tolerances) -> Result<()> {
    if p <= tol.zero_prob {
        return Err(Error::ZeroProbabilityOutcome { probability: p });
    }
    Ok(())
}

/// Lüders update `ψ → Ê(x)ψ / ‖Ê(x)ψ‖` (or `ÊρÊ / tr(ÊρÊ)`).
pub fn luders_update(state: &QuantumState, obs: &Observable, outcome: f64) -> Result<QuantumState> {
    check_dim(state, obs)?;
    let projector = obs.projector(outcome)?;
    let p = state.projector_weight(projector)?;
    zero_probability_guard(p, obs.tolerances())?;
    let projected = state.project(projector)?;
    Ok(normalize_projected(projected, state.site_dims()))
}

/// Lüders update with `obs` acting on one site of a composite state:
/// the projector is `I ⊗ … ⊗ Ê(x) ⊗ … ⊗ I`.
pub fn luders_update_at(
    state: &QuantumState,
    site: usize,
    obs: &Observable,
    outcome: f64,
) -> Result<QuantumState> {
    if state.sites() < 2 {
        return Err(Error::SiteMismatch(format!(
            "site-local update needs a composite state, got {} site(s)",
            state.sites()
        )));
    }
    check_site(state, site, obs)?;
    let local = obs.projector(outcome)?;
    let dims = state.site_dims();
    let (projected, p) = match state.kind() {
        StateKind::Pure(v) => {
            let w = apply_on_site(v, dims, site, local)?;
            let p = w.norm_sqr();
            (StateKind::Pure(w), p)
        }
        StateKind::Density(_) => {
            let full = embed(dims, &[(site, local)])?;
            let p = state.projector_weight(&full)?;
            (state.project(&full)?, p)
        }
    };
    zero_probability_guard(p, obs.tolerances())?;
    Ok(normalize_projected(projected, dims))
}

/// `|Ψ_{A=x}⟩ = (Ê^A(x) ⊗ I)|Ψ⟩ / ‖·‖` with `obs` on the first site.
pub fn bipartite_luders_update(
    state: &QuantumState,
    obs: &Observable,
    outcome: f64,
) -> Result<QuantumState> {
    luders_update_at(state, 0, obs, outcome)
}

/// Weight of a product of site-local projectors.
pub(crate) fn local_weight(
    state: &QuantumState,
    factors: &[(usize, &ComplexMatrix)],
) -> Result<f64> {
    match state.kind() {
        StateKind::Pure(v) => {
            let mut w = v.clone();
            for (site, op) in factors {
                w = apply_on_site(&w, state.site_dims(), *site, op)?;
            }
            Ok(w.norm_sqr().clamp(0.0, 1.0))
        }
        StateKind::Density(_) => state.projector_weight(&embed(state.site_dims(), factors)?),
    }
}

/// Born probability of `obs` placed on one site, i.e. of the lifted observable.
pub fn site_probability(
    state: &QuantumState,
    site: usize,
    obs: &Observable,
    outcome: f64,
) -> Result<f64> {
    check_site(state, site, obs)?;
    local_weight(state, &[(site, obs.projector(outcome)?)])
}

/// `p(B=y | A=x; Ψ) = p(B=y; Ψ_{A=x})` with `A` on site 1 and `B` on site 2.
pub fn conditional_probability(
    state: &QuantumState,
    first: (&Observable, f64),
    second: (&Observable, f64),
) -> Result<f64> {
    let updated = bipartite_luders_update(state, first.0, first.1)?;
    check_site(&updated, 1, second.0)?;
    site_probability(&updated, 1, second.0, second.1)
}

/// Table of `p(x, y) = ‖(Ê^A(x) ⊗ Ê^B(y))Ψ‖²`, rows indexed by the outcomes
/// of the first observable.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    first_outcomes: Vec<f64>,
    second_outcomes: Vec<f64>,
    probabilities: Vec<f64>,
}

impl JointDistribution {
    pub fn first_outcomes(&self) -> &[f64] {
        &self.first_outcomes
    }

    pub fn second_outcomes(&self) -> &[f64] {
        &self.second_outcomes
    }

    /// Probability at row `i`, column `j`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.probabilities[i * self.second_outcomes.len() + j]
    }

    /// Probability of the outcome pair nearest to `(x, y)`.
    pub fn get(&self, x: f64, y: f64) -> Option<f64> {
        let i = nearest(&self.first_outcomes, x)?;
        let j = nearest(&self.second_outcomes, y)?;
        Some(self.at(i, j))
    }

    /// `(x, y, p)` triples in row-major order.
    pub fn entries(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.probabilities.len());
        for (i, &x) in self.first_outcomes.iter().enumerate() {
            for (j, &y) in self.second_outcomes.iter().enumerate() {
                out.push((x, y, self.at(i, j)));
            }
        }
        out
    }

    pub fn first_marginal(&self) -> Vec<f64> {
        (0..self.first_outcomes.len())
            .map(|i| (0..self.second_outcomes.len()).map(|j| self.at(i, j)).sum())
            .collect()
    }

    pub fn second_marginal(&self) -> Vec<f64> {
        (0..self.second_outcomes.len())
            .map(|j| (0..self.first_outcomes.len()).map(|i| self.at(i, j)).sum())
            .collect()
    }
}

fn nearest(values: &[f64], x: f64) -> Option<usize> {
    let tol = 1e-9 * (1.0 + values.iter().map(|v| v.abs()).fold(0.0, f64::max));
    values.iter().position(|v| (v - x).abs() <= tol)
}

/// Joint outcome table of `obs1` on site 1 and `obs2` on site 2.
pub fn joint_distribution(
    state: &QuantumState,
    obs1: &Observable,
    obs2: &Observable,
) -> Result<JointDistribution> {
    check_site(state, 0, obs1)?;
    check_site(state, 1, obs2)?;
    let mut probabilities = Vec::with_capacity(obs1.spectrum().len() * obs2.spectrum().len());
    for pa in obs1.spectrum().pairs() {
        for pb in obs2.spectrum().pairs() {
            probabilities.push(local_weight(
                state,
                &[(0, &pa.projector), (1, &pb.projector)],
            )?);
        }
    }
    Ok(JointDistribution {
        first_outcomes: obs1.outcomes(),
        second_outcomes: obs2.outcomes(),
        probabilities,
    })
}

/// Reduced state `ρ^(i) = Tr_{rest}|Ψ⟩⟨Ψ|` of one site.
pub fn marginal_state(state: &QuantumState, site: usize) -> Result<QuantumState> {
    if site >= state.sites() {
        return Err(Error::SiteMismatch(format!(
            "site {} does not exist in a {}-site state",
            site + 1,
            state.sites()
        )));
    }
    let reduced = match state.kind() {
        StateKind::Pure(v) => reduce_pure_to_site(v, state.site_dims(), site)?,
        StateKind::Density(m) => reduce_to_site(m, state.site_dims(), site)?,
    };
    let reduced = reduced.hermitian_part()?;
    Ok(QuantumState::from_parts(
        StateKind::Density(reduced),
        vec![state.site_dims()[site]],
    ))
}

/// Schmidt coefficients of a pure bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtAnalysis {
    /// Schmidt rank equals one.
    pub separable: bool,
    /// Coefficients above the Schmidt tolerance, descending.
    pub coefficients: Vec<f64>,
    /// Every singular value of the amplitude matrix, descending.
    pub singular_values: Vec<f64>,
}

impl SchmidtAnalysis {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }
}

pub fn is_separable_pure(state: &QuantumState) -> Result<SchmidtAnalysis> {
    is_separable_pure_with(state, &Tolerances::default())
}

/// Schmidt analysis via the singular values of the `d1 × d2` amplitude matrix.
pub fn is_separable_pure_with(state: &QuantumState, tol: &Tolerances) -> Result<SchmidtAnalysis> {
    let v = state.as_pure().ok_or(Error::NotPure)?;
    if state.sites() != 2 {
        return Err(Error::SiteMismatch(format!(
            "Schmidt analysis needs exactly two sites, got {}",
            state.sites()
        )));
    }
    let (d1, d2) = (state.site_dims()[0], state.site_dims()[1]);
    let amplitudes = ComplexMatrix::new(d1, d2, v.entries().to_vec())?;
    let singular_values = singular_values(&amplitudes);
    let coefficients: Vec<f64> = singular_values
        .iter()
        .copied()
        .filter(|&s| s > tol.schmidt)
        .collect();
    Ok(SchmidtAnalysis {
        separable: coefficients.len() == 1,
        coefficients,
        singular_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ComplexVector;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn z() -> Observable {
        Observable::diagonal("Z", &[1.0, -1.0]).unwrap()
    }

    /// Diagonal observable whose eigenvalues are the basis labels 0 and 1.
    fn bit() -> Observable {
        Observable::diagonal("bit", &[0.0, 1.0]).unwrap()
    }

    fn bell_01_10() -> QuantumState {
        let s = FRAC_1_SQRT_2;
        QuantumState::pure(
            ComplexVector::from_real(&[0.0, s, s, 0.0]).unwrap(),
            &[2, 2],
        )
        .unwrap()
    }

    fn aspect() -> QuantumState {
        let s = FRAC_1_SQRT_2;
        QuantumState::pure(
            ComplexVector::from_real(&[s, 0.0, 0.0, s]).unwrap(),
            &[2, 2],
        )
        .unwrap()
    }

    fn polarizer(angle: f64) -> Observable {
        let (c, s) = ((2.0 * angle).cos(), (2.0 * angle).sin());
        Observable::new(
            "pol",
            ComplexMatrix::from_real_rows(&[&[c, s], &[s, -c]]).unwrap(),
        )
        .unwrap()
    }

    fn ket(entries: &[f64]) -> QuantumState {
        QuantumState::pure_normalized(ComplexVector::from_real(entries).unwrap(), &[entries.len()])
            .unwrap()
    }

    #[test]
    fn born_eigenstate_and_superposition() {
        assert_eq!(born_probability(&ket(&[1.0, 0.0]), &z(), 1.0).unwrap(), 1.0);
        let p = born_probability(&ket(&[1.0, 1.0]), &z(), 1.0).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_on_aspect_state_is_half_for_every_angle() {
        let state = aspect();
        for k in 0..12 {
            let a = k as f64 * PI / 12.0;
            let p = site_probability(&state, 0, &polarizer(a), 1.0).unwrap();
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn born_errors() {
        let state = ket(&[1.0, 0.0]);
        assert!(matches!(
            born_probability(&state, &z(), 3.0),
            Err(Error::UnknownOutcome { .. })
        ));
        let big = Observable::diagonal("D", &[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            born_probability(&state, &big, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_born_matches_pure() {
        let state = ket(&[0.6, 0.8]);
        let rho = QuantumState::density(state.density_matrix(), &[2]).unwrap();
        for x in [1.0, -1.0] {
            let a = born_probability(&state, &z(), x).unwrap();
            let b = born_probability(&rho, &z(), x).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
        assert!((outcome_distribution(&rho, &z()).unwrap().total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_onto_degenerate_eigenspace() {
        let psi = ket(&[1.0, 1.0, 1.0]);
        let obs = Observable::diagonal("D", &[5.0, 5.0, 1.0]).unwrap();
        let post = luders_update(&psi, &obs, 5.0).unwrap();
        let expected = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!(post.as_pure().unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn eigenstate_is_fixed_point() {
        let psi = ket(&[1.0, 0.0]);
        let post = luders_update(&psi, &z(), 1.0).unwrap();
        assert_eq!(post, psi);
    }

    #[test]
    fn orthogonal_outcome_is_zero_probability() {
        let psi = ket(&[0.0, 1.0]);
        assert!(matches!(
            luders_update(&psi, &z(), 1.0),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
    }

    #[test]
    fn update_is_idempotent() {
        let mut rng = crate::random::seeded(4);
        let psi = QuantumState::pure(crate::random::random_pure(3, &mut rng), &[3]).unwrap();
        let obs = Observable::new("H", crate::random::random_hermitian(3, &mut rng)).unwrap();
        let x = obs.outcomes()[1];
        let once = luders_update(&psi, &obs, x).unwrap();
        let twice = luders_update(&once, &obs, x).unwrap();
        assert!(once.operator_distance(&twice) < 1e-12);
    }

    #[test]
    fn density_update() {
        let rho = QuantumState::density(ComplexMatrix::diagonal(&[0.2, 0.3, 0.5]), &[3]).unwrap();
        let obs = Observable::diagonal("D", &[1.0, 1.0, 2.0]).unwrap();
        let post = luders_update(&rho, &obs, 1.0).unwrap();
        let expected = ComplexMatrix::diagonal(&[0.4, 0.6, 0.0]);
        assert!(post.density_matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn bell_update_collapses_to_01() {
        let post = bipartite_luders_update(&bell_01_10(), &bit(), 0.0).unwrap();
        assert!(
            post.as_pure()
                .unwrap()
                .max_abs_diff(&ComplexVector::basis(4, 1))
                < 1e-15
        );
        let site2 = marginal_state(&post, 1).unwrap();
        let one = ComplexVector::basis(2, 1);
        assert!(site2.density_matrix().max_abs_diff(&one.outer(&one)) < 1e-15);
    }

    #[test]
    fn aspect_update_yields_aa() {
        let a = 0.3;
        let post = bipartite_luders_update(&aspect(), &polarizer(a), 1.0).unwrap();
        let ka = ComplexVector::from_real(&[a.cos(), a.sin()]).unwrap();
        let overlap = post.overlap_with(&ka.kron(&ka)).unwrap();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_update_factorizes() {
        let psi1 = ComplexVector::from_real(&[0.6, 0.8]).unwrap();
        let psi2 = ComplexVector::from_real(&[0.8, 0.0, 0.6]).unwrap();
        let state = QuantumState::product(&[psi1.clone(), psi2.clone()]).unwrap();
        let post = bipartite_luders_update(&state, &z(), -1.0).unwrap();
        let expected = ComplexVector::basis(2, 1).kron(&psi2);
        assert!(post.as_pure().unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn site_update_rejects_single_site_and_bad_dims() {
        let psi = ket(&[1.0, 0.0]);
        assert!(matches!(
            bipartite_luders_update(&psi, &z(), 1.0),
            Err(Error::SiteMismatch(_))
        ));
        let three = Observable::diagonal("T", &[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            bipartite_luders_update(&aspect(), &three, 1.0),
            Err(Error::SiteMismatch(_))
        ));
    }

    #[test]
    fn aspect_conditional_is_malus_law() {
        let (a, b) = (0.2, 0.9);
        let p =
            conditional_probability(&aspect(), (&polarizer(a), 1.0), (&polarizer(b), 1.0)).unwrap();
        assert!((p - (a - b).cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn separable_conditional_equals_unconditional() {
        let state = QuantumState::product(&[
            ComplexVector::from_real(&[0.6, 0.8]).unwrap(),
            ComplexVector::from_real(&[0.28, 0.96]).unwrap(),
        ])
        .unwrap();
        let b = polarizer(0.4);
        for x in [1.0, -1.0] {
            for y in [1.0, -1.0] {
                let c = conditional_probability(&state, (&z(), x), (&b, y)).unwrap();
                let u = site_probability(&state, 1, &b, y).unwrap();
                assert!((c - u).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_perfect_anticorrelation() {
        let p = conditional_probability(&bell_01_10(), (&bit(), 0.0), (&bit(), 1.0)).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn aspect_joint_table() {
        let (a, b) = (0.1, 0.7);
        let joint = joint_distribution(&aspect(), &polarizer(a), &polarizer(b)).unwrap();
        let c2 = (a - b).cos().powi(2);
        assert!((joint.get(1.0, 1.0).unwrap() - 0.5 * c2).abs() < 1e-12);
        assert!((joint.get(-1.0, -1.0).unwrap() - 0.5 * c2).abs() < 1e-12);
        assert!((joint.get(1.0, -1.0).unwrap() - 0.5 * (1.0 - c2)).abs() < 1e-12);
        let equal = joint_distribution(&aspect(), &polarizer(a), &polarizer(a)).unwrap();
        assert!(equal.get(1.0, -1.0).unwrap() < 1e-15);
        assert!(equal.get(-1.0, 1.0).unwrap() < 1e-15);
    }

    #[test]
    fn product_joint_factorizes() {
        let state = QuantumState::product(&[
            ComplexVector::from_real(&[0.6, 0.8]).unwrap(),
            ComplexVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap(),
        ])
        .unwrap();
        let b = polarizer(1.1);
        let joint = joint_distribution(&state, &z(), &b).unwrap();
        for (x, y, p) in joint.entries() {
            let px = site_probability(&state, 0, &z(), x).unwrap();
            let py = site_probability(&state, 1, &b, y).unwrap();
            assert!((p - px * py).abs() < 1e-12);
        }
    }

    #[test]
    fn marginals() {
        let s = QuantumState::product(&[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)])
            .unwrap();
        let m = marginal_state(&s, 1).unwrap();
        let one = ComplexVector::basis(2, 1);
        assert!(m.density_matrix().max_abs_diff(&one.outer(&one)) < 1e-15);
        let m = marginal_state(&bell_01_10(), 1).unwrap();
        assert!(
            m.density_matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                < 1e-15
        );
        assert!(matches!(marginal_state(&s, 2), Err(Error::SiteMismatch(_))));
    }

    #[test]
    fn schmidt_examples() {
        let s = QuantumState::product(&[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)])
            .unwrap();
        let an = is_separable_pure(&s).unwrap();
        assert!(an.separable);
        assert_eq!(an.coefficients, vec![1.0]);

        let an = is_separable_pure(&bell_01_10()).unwrap();
        assert!(!an.separable);
        assert_eq!(an.rank(), 2);
        for c in an.coefficients {
            assert!((c - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn schmidt_tolerance_boundary() {
        let eps: f64 = 1e-13;
        let norm = (1.0 + eps * eps).sqrt();
        let v = ComplexVector::from_real(&[1.0 / norm, 0.0, 0.0, eps / norm]).unwrap();
        let state = QuantumState::pure(v, &[2, 2]).unwrap();
        let an = is_separable_pure(&state).unwrap();
        // oracle: the amplitude matrix is diag(1, ε)/norm, so its SVD is read off directly
        assert!((an.singular_values[1] - eps / norm).abs() < 1e-25);
        assert!(an.separable);
        let eps: f64 = 1e-11;
        let norm = (1.0 + eps * eps).sqrt();
        let v = ComplexVector::from_real(&[1.0 / norm, 0.0, 0.0, eps / norm]).unwrap();
        assert!(
            !is_separable_pure(&QuantumState::pure(v, &[2, 2]).unwrap())
                .unwrap()
                .separable
        );
    }

    #[test]
    fn schmidt_rejects_density() {
        let rho =
            QuantumState::density(ComplexMatrix::identity(4).scale_real(0.25), &[2, 2]).unwrap();
        assert!(matches!(is_separable_pure(&rho), Err(Error::NotPure)));
    }
}
