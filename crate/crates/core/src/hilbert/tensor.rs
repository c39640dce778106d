use super::{ComplexMatrix, ComplexVector, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::{MAX_DIM, MAX_SITE_DIM};

/// Tensor (Kronecker) product of two operands of the same kind.
pub trait Kron {
    fn tensor(&self, other: &Self) -> Self;
}

impl Kron for ComplexVector {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

impl Kron for ComplexMatrix {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

/// Validates a site factorization against the dimension caps and returns the
/// composite dimension.
pub fn check_site_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::SiteMismatch(
            "site dimensions must be positive".into(),
        ));
    }
    if let Some(&d) = dims.iter().find(|&&d| d > MAX_SITE_DIM) {
        return Err(Error::DimensionTooLarge {
            dim: d,
            cap: MAX_SITE_DIM,
        });
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| {
        let t = acc * d;
        (t <= MAX_DIM).then_some(t)
    });
    total.ok_or(Error::DimensionTooLarge {
        dim: dims.iter().product(),
        cap: MAX_DIM,
    })
}

/// Partial trace of a bipartite operator on `H₁ ⊗ H₂` (`dims = (d1, d2)`),
/// keeping site `keep` (0 or 1).
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: (usize, usize),
    keep: usize,
) -> Result<ComplexMatrix> {
    reduce_to_site(rho, &[dims.0, dims.1], keep)
}

/// Traces out every site except `keep` from an operator on `⊗ dims`.
pub fn reduce_to_site(rho: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    let total = check_site_dims(dims)?;
    if !rho.is_square() || rho.rows() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: rho.rows(),
        });
    }
    if keep >= dims.len() {
        return Err(Error::SiteMismatch(format!(
            "site {keep} out of range for {} sites",
            dims.len()
        )));
    }
    // composite index = (left · d + i) · right + r
    let d = dims[keep];
    let left: usize = dims[..keep].iter().product();
    let right: usize = dims[keep + 1..].iter().product();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = ZERO;
            for l in 0..left {
                for r in 0..right {
                    let row = (l * d + i) * right + r;
                    let col = (l * d + j) * right + r;
                    acc += rho.get(row, col);
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Applies a single-site operator to a state vector on `⊗ dims` without
/// forming the composite operator.
pub fn apply_on_site(
    v: &ComplexVector,
    dims: &[usize],
    site: usize,
    op: &ComplexMatrix,
) -> Result<ComplexVector> {
    let total = check_site_dims(dims)?;
    if v.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: v.dim(),
        });
    }
    let d = *dims.get(site).ok_or_else(|| {
        Error::SiteMismatch(format!("site {site} out of range for {} sites", dims.len()))
    })?;
    if !op.is_square() || op.rows() != d {
        return Err(Error::SiteMismatch(format!(
            "operator of dimension {} applied to site {site} of dimension {d}",
            op.rows()
        )));
    }
    let left: usize = dims[..site].iter().product();
    let right: usize = dims[site + 1..].iter().product();
    let src = v.entries();
    let mut out = vec![ZERO; total];
    for l in 0..left {
        for i in 0..d {
            for j in 0..d {
                let a = op.get(i, j);
                if a == ZERO {
                    continue;
                }
                let dst = (l * d + i) * right;
                let from = (l * d + j) * right;
                for r in 0..right {
                    out[dst + r] += a * src[from + r];
                }
            }
        }
    }
    ComplexVector::new(out)
}

/// Reduced density operator of one site of a pure state, `Tr_rest |ψ⟩⟨ψ|`,
/// computed from the amplitudes directly.
pub fn reduce_pure_to_site(
    v: &ComplexVector,
    dims: &[usize],
    keep: usize,
) -> Result<ComplexMatrix> {
    let total = check_site_dims(dims)?;
    if v.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: v.dim(),
        });
    }
    if keep >= dims.len() {
        return Err(Error::SiteMismatch(format!(
            "site {keep} out of range for {} sites",
            dims.len()
        )));
    }
    let d = dims[keep];
    let left: usize = dims[..keep].iter().product();
    let right: usize = dims[keep + 1..].iter().product();
    let psi = v.entries();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = ZERO;
            for l in 0..left {
                for r in 0..right {
                    acc += psi[(l * d + i) * right + r] * psi[(l * d + j) * right + r].conj();
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ONE;
    use crate::random::{random_density, seeded};
    use num_complex::Complex64;

    /// Independent oracle: explicit four-index summation over (i, k; j, l).
    fn brute_force_trace_second(rho: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(d1, d1);
        for i in 0..d1 {
            for j in 0..d1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d2 {
                    acc += rho.get(i * d2 + k, j * d2 + k);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn vector_kron_layout() {
        let k0 = ComplexVector::basis(2, 0);
        let k1 = ComplexVector::basis(2, 1);
        let v = k0.tensor(&k1);
        assert_eq!(v.entries(), &[ZERO, ONE, ZERO, ZERO]);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ComplexVector::from_real(&[s, s]).unwrap();
        let w = plus.tensor(&k0);
        let expected = ComplexVector::from_real(&[s, 0.0, s, 0.0]).unwrap();
        assert!(w.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn identity_kron_identity() {
        let i4 = ComplexMatrix::identity(2).tensor(&ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn trace_of_product_basis_state() {
        let v = ComplexVector::basis(2, 0).kron(&ComplexVector::basis(2, 1));
        let rho = v.outer(&v);
        let kept = partial_trace(&rho, (2, 2), 1).unwrap();
        let one = ComplexVector::basis(2, 1);
        assert!(kept.max_abs_diff(&one.outer(&one)) < 1e-15);
    }

    #[test]
    fn maximally_entangled_marginal() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexVector::from_real(&[0.0, s, s, 0.0]).unwrap();
        let kept = partial_trace(&psi.outer(&psi), (2, 2), 1).unwrap();
        assert!(kept.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn product_of_random_densities() {
        let mut rng = seeded(11);
        for _ in 0..20 {
            let r1 = random_density(2, &mut rng);
            let r2 = random_density(2, &mut rng);
            let rho = r1.kron(&r2);
            let kept = partial_trace(&rho, (2, 2), 0).unwrap();
            assert!(kept.max_abs_diff(&r1) < 1e-12);
            assert!(kept.max_abs_diff(&brute_force_trace_second(&rho, 2, 2)) < 1e-14);
        }
    }

    #[test]
    fn matches_brute_force_on_unequal_dims() {
        let mut rng = seeded(12);
        let rho = random_density(6, &mut rng);
        let fast = partial_trace(&rho, (3, 2), 0).unwrap();
        assert!(fast.max_abs_diff(&brute_force_trace_second(&rho, 3, 2)) < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let rho = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&rho, (2, 3), 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(
            check_site_dims(&[65]),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(matches!(
            check_site_dims(&[64, 64, 2]),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert_eq!(check_site_dims(&[64, 64]).unwrap(), 4096);
    }

    #[test]
    fn middle_site_of_three() {
        let a = ComplexVector::basis(2, 1);
        let b = ComplexVector::from_real(&[0.6, 0.8, 0.0]).unwrap();
        let c = ComplexVector::basis(2, 0);
        let psi = a.kron(&b).kron(&c);
        let kept = reduce_to_site(&psi.outer(&psi), &[2, 3, 2], 1).unwrap();
        assert!(kept.max_abs_diff(&b.outer(&b)) < 1e-15);
        let direct = reduce_pure_to_site(&psi, &[2, 3, 2], 1).unwrap();
        assert!(direct.max_abs_diff(&kept) < 1e-15);
    }

    #[test]
    fn site_application_matches_embedded_operator() {
        let mut rng = seeded(13);
        let v = crate::random::random_pure(12, &mut rng);
        let op = crate::random::random_matrix(3, 3, &mut rng);
        let full = ComplexMatrix::identity(2)
            .kron(&op)
            .kron(&ComplexMatrix::identity(2));
        let fast = apply_on_site(&v, &[2, 3, 2], 1, &op).unwrap();
        assert!(fast.max_abs_diff(&full.apply(&v).unwrap()) < 1e-13);
    }
}
