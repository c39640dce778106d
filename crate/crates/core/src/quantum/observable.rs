use crate::error::{Error, Result};
use crate::hilbert::{
    check_site_dims, spectral_decompose_with, ComplexMatrix, ComplexVector, SpectralDecomposition,
    SpectralPair,
};
use crate::tolerance::Tolerances;

/// A Hermitian operator together with its spectral decomposition
/// `Â = Σ_x x·Ê(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    label: String,
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
    tol: Tolerances,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(label, matrix, Tolerances::default())
    }

    pub fn with_tolerances(
        label: impl Into<String>,
        matrix: ComplexMatrix,
        tol: Tolerances,
    ) -> Result<Self> {
        let spectrum = spectral_decompose_with(&matrix, &tol)?;
        Ok(Self {
            label: label.into(),
            matrix,
            spectrum,
            tol,
        })
    }

    /// Observable with eigenvalue `values[i]` on the standard basis vector `e_i`.
    pub fn diagonal(label: impl Into<String>, values: &[f64]) -> Result<Self> {
        Self::new(label, ComplexMatrix::diagonal(values))
    }

    /// Builds `Σ x·P_x` from known orthonormal eigenspace bases, skipping the
    /// numerical diagonalization.
    pub(crate) fn from_eigenspaces(
        label: impl Into<String>,
        spaces: Vec<(f64, Vec<ComplexVector>)>,
        dim: usize,
        tol: Tolerances,
    ) -> Self {
        let spectrum = SpectralDecomposition::from_bases(spaces, dim);
        let matrix = spectrum.reconstruct();
        Self {
            label: label.into(),
            matrix,
            spectrum,
            tol,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Distinct eigenvalues in increasing order.
    pub fn outcomes(&self) -> Vec<f64> {
        self.spectrum.values()
    }

    pub fn cluster_tol(&self) -> f64 {
        self.tol.cluster_tol(self.spectrum.max_abs_value())
    }

    /// Index of the spectral cluster nearest to `outcome`.
    pub fn outcome_index(&self, outcome: f64) -> Result<usize> {
        self.spectrum
            .position(outcome, self.cluster_tol())
            .ok_or_else(|| Error::UnknownOutcome {
                label: self.label.clone(),
                outcome,
            })
    }

    pub fn pair(&self, outcome: f64) -> Result<&SpectralPair> {
        Ok(&self.spectrum.pairs()[self.outcome_index(outcome)?])
    }

    /// `Ê(x)` for the cluster matching `outcome`.
    pub fn projector(&self, outcome: f64) -> Result<&ComplexMatrix> {
        Ok(&self.pair(outcome)?.projector)
    }

    /// `f(Â)`: eigenspaces whose images under `f` coincide are merged.
    pub fn map_spectrum(&self, label: impl Into<String>, f: impl Fn(f64) -> f64) -> Self {
        let mut spaces: Vec<(f64, Vec<ComplexVector>)> = Vec::new();
        let images: Vec<f64> = self.outcomes().into_iter().map(&f).collect();
        let max_abs = images.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let tol = self.tol.cluster_tol(max_abs);
        for (pair, y) in self.spectrum.pairs().iter().zip(images) {
            match spaces.iter_mut().find(|(v, _)| (v - y).abs() <= tol) {
                Some((_, basis)) => basis.extend(pair.basis.iter().cloned()),
                None => spaces.push((y, pair.basis.clone())),
            }
        }
        Self::from_eigenspaces(label, spaces, self.dim(), self.tol)
    }

    /// `I ⊗ … ⊗ Â ⊗ … ⊗ I` acting on site `site` of `⊗ site_dims`.
    pub fn lift(&self, site: usize, site_dims: &[usize]) -> Result<Self> {
        check_site_dims(site_dims)?;
        let d = *site_dims.get(site).ok_or_else(|| {
            Error::SiteMismatch(format!(
                "site {site} out of range for {} sites",
                site_dims.len()
            ))
        })?;
        if d != self.dim() {
            return Err(Error::SiteMismatch(format!(
                "observable `{}` has dimension {}, site {site} has dimension {d}",
                self.label,
                self.dim()
            )));
        }
        if site_dims.len() == 1 {
            return Ok(self.clone());
        }
        let left: usize = site_dims[..site].iter().product();
        let right: usize = site_dims[site + 1..].iter().product();
        let total = left * d * right;
        let spaces = self
            .spectrum
            .pairs()
            .iter()
            .map(|pair| {
                let mut basis = Vec::with_capacity(left * pair.rank() * right);
                for l in 0..left {
                    let el = ComplexVector::basis(left, l);
                    for b in &pair.basis {
                        let lb = el.kron(b);
                        for r in 0..right {
                            basis.push(lb.kron(&ComplexVector::basis(right, r)));
                        }
                    }
                }
                (pair.value, basis)
            })
            .collect();
        Ok(Self::from_eigenspaces(
            format!("{}@{}", self.label, site + 1),
            spaces,
            total,
            self.tol,
        ))
    }
}

/// Places each `(site, operator)` factor into the tensor product, filling the
/// remaining sites with identities.
pub fn embed(site_dims: &[usize], factors: &[(usize, &ComplexMatrix)]) -> Result<ComplexMatrix> {
    check_site_dims(site_dims)?;
    let mut acc: Option<ComplexMatrix> = None;
    for (site, &d) in site_dims.iter().enumerate() {
        let factor = match factors.iter().find(|(s, _)| *s == site) {
            Some((_, op)) => {
                if !op.is_square() || op.rows() != d {
                    return Err(Error::SiteMismatch(format!(
                        "operator of dimension {} placed on site {site} of dimension {d}",
                        op.rows()
                    )));
                }
                (*op).clone()
            }
            None => ComplexMatrix::identity(d),
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.kron(&factor),
        });
    }
    if let Some((s, _)) = factors.iter().find(|(s, _)| *s >= site_dims.len()) {
        return Err(Error::SiteMismatch(format!(
            "site {s} out of range for {} sites",
            site_dims.len()
        )));
    }
    Ok(acc.expect("at least one site"))
}

/// Whether `max|[Â, B̂]| ≤ COMMUTE_TOL`.
pub fn compatible(a: &Observable, b: &Observable) -> Result<bool> {
    compatible_with(a, b, &Tolerances::default())
}

pub fn compatible_with(a: &Observable, b: &Observable, tol: &Tolerances) -> Result<bool> {
    Ok(commutator_norm(a, b)? <= tol.commute)
}

pub(crate) fn commutator_norm(a: &Observable, b: &Observable) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.matrix().commutator(b.matrix())?.max_abs())
}
