//! Commuting observables as functions of one nondegenerate observable.

use crate::error::{Error, Result};
use crate::hilbert::{gram_schmidt, hermitian_eigen, ComplexMatrix, ComplexVector};

use super::observable::{commutator_norm, Observable};

/// Finite lookup table from eigenvalues of the refining observable to
/// eigenvalues of one of the refined observables.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeMap {
    table: Vec<(f64, f64)>,
}

impl OutcomeMap {
    pub fn table(&self) -> &[(f64, f64)] {
        &self.table
    }

    pub fn apply(&self, c: f64) -> Option<f64> {
        self.table
            .iter()
            .find(|(k, _)| (k - c).abs() <= 1e-9 * (1.0 + c.abs()))
            .map(|&(_, v)| v)
    }
}

/// `Â = f(Ĉ)`, `B̂ = g(Ĉ)` with `Ĉ` nondegenerate.
#[derive(Debug, Clone)]
pub struct JointRefinement {
    pub refining: Observable,
    pub first: OutcomeMap,
    pub second: OutcomeMap,
}

impl JointRefinement {
    /// `Σ_c f(c)·P_c`.
    pub fn reconstruct_first(&self) -> ComplexMatrix {
        self.refining
            .spectrum()
            .apply_function(|c| self.first.apply(c).expect("map covers the spectrum"))
    }

    pub fn reconstruct_second(&self) -> ComplexMatrix {
        self.refining
            .spectrum()
            .apply_function(|c| self.second.apply(c).expect("map covers the spectrum"))
    }
}

/// Intersects the eigenspaces of two commuting observables and labels every
/// vector of an orthonormal basis of each intersection with a distinct
/// eigenvalue `1, 2, 3, …` of the refining observable.
pub fn joint_refinement(a: &Observable, b: &Observable) -> Result<JointRefinement> {
    let tol = *a.tolerances();
    let commutator = commutator_norm(a, b)?;
    if commutator > tol.commute {
        return Err(Error::NotCompatible {
            first: a.label().to_string(),
            second: b.label().to_string(),
            commutator,
        });
    }
    let n = a.dim();
    let mut labelled: Vec<(f64, f64, ComplexVector)> = Vec::with_capacity(n);
    for pa in a.spectrum().pairs() {
        for pb in b.spectrum().pairs() {
            // for commuting projectors the product projects onto the intersection
            let product = pa.projector.matmul(&pb.projector)?.hermitian_part()?;
            if product.trace().re < 0.5 {
                continue;
            }
            let eig = hermitian_eigen(&product)?;
            for (value, vector) in eig.values.iter().zip(eig.vectors) {
                if *value > 0.5 {
                    labelled.push((pa.value, pb.value, vector));
                }
            }
        }
    }
    let vectors: Vec<ComplexVector> = labelled.iter().map(|l| l.2.clone()).collect();
    let basis = gram_schmidt(&vectors, 1e-6);
    if basis.len() != n {
        return Err(Error::NotCompatible {
            first: a.label().to_string(),
            second: b.label().to_string(),
            commutator,
        });
    }

    let mut spaces = Vec::with_capacity(n);
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for (k, ((x, y, _), v)) in labelled.iter().zip(basis).enumerate() {
        let c = (k + 1) as f64;
        spaces.push((c, vec![v]));
        first.push((c, *x));
        second.push((c, *y));
    }
    let refining =
        Observable::from_eigenspaces(format!("C[{},{}]", a.label(), b.label()), spaces, n, tol);
    Ok(JointRefinement {
        refining,
        first: OutcomeMap { table: first },
        second: OutcomeMap { table: second },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_unitary, seeded};
    use crate::tolerance::SPEC_TOL;

    #[test]
    fn diagonal_refinement() {
        let a = Observable::diagonal("A", &[1.0, 1.0, 2.0]).unwrap();
        let b = Observable::diagonal("B", &[3.0, 4.0, 4.0]).unwrap();
        let r = joint_refinement(&a, &b).unwrap();
        assert_eq!(r.refining.outcomes(), vec![1.0, 2.0, 3.0]);
        assert!(r.refining.spectrum().pairs().iter().all(|p| p.rank() == 1));
        let f: Vec<f64> = r.first.table().iter().map(|e| e.1).collect();
        let g: Vec<f64> = r.second.table().iter().map(|e| e.1).collect();
        assert_eq!(f, vec![1.0, 1.0, 2.0]);
        assert_eq!(g, vec![3.0, 4.0, 4.0]);
        assert!(r.reconstruct_first().max_abs_diff(a.matrix()) < SPEC_TOL);
        assert!(r.reconstruct_second().max_abs_diff(b.matrix()) < SPEC_TOL);
    }

    #[test]
    fn identity_partner_gives_constant_map() {
        let a = Observable::diagonal("A", &[0.0, 5.0, 5.0, 7.0]).unwrap();
        let id = Observable::new("I", ComplexMatrix::identity(4)).unwrap();
        let r = joint_refinement(&a, &id).unwrap();
        assert_eq!(r.refining.outcomes().len(), 4);
        assert!(r
            .second
            .table()
            .iter()
            .all(|&(_, v)| (v - 1.0).abs() < 1e-12));
        assert!(r.reconstruct_first().max_abs_diff(a.matrix()) < SPEC_TOL);
    }

    #[test]
    fn incompatible_pair_rejected() {
        let x = Observable::new(
            "X",
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let z = Observable::diagonal("Z", &[1.0, -1.0]).unwrap();
        assert!(matches!(
            joint_refinement(&x, &z),
            Err(Error::NotCompatible { .. })
        ));
    }

    #[test]
    fn build_then_recover_round_trip() {
        let mut rng = seeded(31);
        for _ in 0..10 {
            let n = 5;
            let d = [1.0, 2.0, 3.0, 4.0, 5.0];
            let f = |c: f64| if c < 2.5 { -1.0 } else { 1.0 };
            let g = |c: f64| (c - 3.0).abs();
            let u = random_unitary(n, &mut rng);
            let conj = |values: Vec<f64>| {
                u.matmul(&ComplexMatrix::diagonal(&values))
                    .unwrap()
                    .matmul(&u.adjoint())
                    .unwrap()
                    .hermitian_part()
                    .unwrap()
            };
            let a = Observable::new("A", conj(d.iter().map(|&c| f(c)).collect())).unwrap();
            let b = Observable::new("B", conj(d.iter().map(|&c| g(c)).collect())).unwrap();
            let r = joint_refinement(&a, &b).unwrap();
            // Every refined eigenvector is an eigenvector of A and B with the mapped values,
            // and the (f, g) pairs match those of the construction (as a multiset).
            let mut recovered: Vec<(f64, f64)> = r
                .first
                .table()
                .iter()
                .zip(r.second.table())
                .map(|(x, y)| (x.1, y.1))
                .collect();
            let mut expected: Vec<(f64, f64)> = d.iter().map(|&c| (f(c), g(c))).collect();
            let key = |p: &(f64, f64)| (p.0 * 1000.0 + p.1) as i64;
            let round = |v: &mut Vec<(f64, f64)>| {
                for p in v.iter_mut() {
                    *p = ((p.0 * 1e6).round() / 1e6, (p.1 * 1e6).round() / 1e6);
                }
            };
            round(&mut recovered);
            round(&mut expected);
            recovered.sort_by_key(key);
            expected.sort_by_key(key);
            assert_eq!(recovered, expected);
            assert!(r.reconstruct_first().max_abs_diff(a.matrix()) < SPEC_TOL);
            assert!(r.reconstruct_second().max_abs_diff(b.matrix()) < SPEC_TOL);
        }
    }
}
