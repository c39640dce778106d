use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{check_site_dims, hermitian_eigen, ComplexMatrix, ComplexVector};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Pure(ComplexVector),
    Density(ComplexMatrix),
}

/// A pure state vector or density operator on `H₁ ⊗ H₂ ⊗ …`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    kind: StateKind,
    site_dims: Vec<usize>,
}

impl QuantumState {
    pub fn pure(vector: ComplexVector, site_dims: &[usize]) -> Result<Self> {
        Self::pure_with(vector, site_dims, &Tolerances::default())
    }

    pub fn pure_with(vector: ComplexVector, site_dims: &[usize], tol: &Tolerances) -> Result<Self> {
        let total = check_site_dims(site_dims)?;
        if vector.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: vector.dim(),
            });
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::InvalidState(format!(
                "state vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            kind: StateKind::Pure(vector),
            site_dims: site_dims.to_vec(),
        })
    }

    /// Normalizes `vector` before validating it.
    pub fn pure_normalized(vector: ComplexVector, site_dims: &[usize]) -> Result<Self> {
        let v = vector
            .normalized()
            .ok_or_else(|| Error::InvalidState("zero vector cannot be normalized".into()))?;
        Self::pure(v, site_dims)
    }

    pub fn density(matrix: ComplexMatrix, site_dims: &[usize]) -> Result<Self> {
        Self::density_with(matrix, site_dims, &Tolerances::default())
    }

    pub fn density_with(
        matrix: ComplexMatrix,
        site_dims: &[usize],
        tol: &Tolerances,
    ) -> Result<Self> {
        let total = check_site_dims(site_dims)?;
        if !matrix.is_square() || matrix.rows() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: matrix.rows(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > tol.herm {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol.norm {
            return Err(Error::InvalidState(format!(
                "density operator has trace {trace}, expected 1"
            )));
        }
        let min_eig = hermitian_eigen(&matrix)?
            .values
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -tol.psd {
            return Err(Error::InvalidState(format!(
                "density operator has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self {
            kind: StateKind::Density(matrix),
            site_dims: site_dims.to_vec(),
        })
    }

    /// `|ψ₁⟩ ⊗ |ψ₂⟩ ⊗ …`, each factor normalized.
    pub fn product(factors: &[ComplexVector]) -> Result<Self> {
        let mut dims = Vec::with_capacity(factors.len());
        let mut acc: Option<ComplexVector> = None;
        for f in factors {
            let f = f
                .normalized()
                .ok_or_else(|| Error::InvalidState("zero factor in product state".into()))?;
            dims.push(f.dim());
            acc = Some(match acc {
                None => f,
                Some(a) => a.kron(&f),
            });
        }
        let v = acc.ok_or_else(|| Error::InvalidState("product of no factors".into()))?;
        Self::pure(v, &dims)
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_parts(kind: StateKind, site_dims: Vec<usize>) -> Self {
        Self { kind, site_dims }
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kind, StateKind::Pure(_))
    }

    pub fn as_pure(&self) -> Option<&ComplexVector> {
        match &self.kind {
            StateKind::Pure(v) => Some(v),
            StateKind::Density(_) => None,
        }
    }

    /// `|ψ⟩⟨ψ|` for pure states, `ρ` itself otherwise.
    pub fn density_matrix(&self) -> ComplexMatrix {
        match &self.kind {
            StateKind::Pure(v) => v.outer(v),
            StateKind::Density(m) => m.clone(),
        }
    }

    /// `⟨ψ|P|ψ⟩` or `tr(Pρ)` for an orthogonal projector `P`.
    pub(crate) fn projector_weight(&self, projector: &ComplexMatrix) -> Result<f64> {
        let w = match &self.kind {
            StateKind::Pure(v) => projector.image_norm_sqr(v)?,
            StateKind::Density(m) => projector.matmul(m)?.trace().re,
        };
        Ok(w.clamp(0.0, 1.0))
    }

    /// Unnormalized `P|ψ⟩` or `PρP`.
    pub(crate) fn project(&self, projector: &ComplexMatrix) -> Result<StateKind> {
        Ok(match &self.kind {
            StateKind::Pure(v) => StateKind::Pure(projector.apply(v)?),
            StateKind::Density(m) => StateKind::Density(projector.matmul(m)?.matmul(projector)?),
        })
    }

    /// Entrywise max distance between the density operators of two states.
    pub fn operator_distance(&self, other: &QuantumState) -> f64 {
        self.density_matrix().max_abs_diff(&other.density_matrix())
    }

    /// `|⟨φ|ψ⟩|` for pure states, `sqrt(⟨φ|ρ|φ⟩)` for densities.
    pub fn overlap_with(&self, phi: &ComplexVector) -> Result<f64> {
        match &self.kind {
            StateKind::Pure(v) => {
                if v.dim() != phi.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: v.dim(),
                        found: phi.dim(),
                    });
                }
                Ok(phi.inner(v).norm())
            }
            StateKind::Density(m) => Ok(phi.inner(&m.apply(phi)?).re.max(0.0).sqrt()),
        }
    }
}
