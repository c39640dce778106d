use super::{gram_schmidt, hermitian_eigen, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::tolerance::{Tolerances, MAX_DIM};

/// One eigenvalue with the orthogonal projector onto its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair {
    pub value: f64,
    pub projector: ComplexMatrix,
    /// Orthonormal basis of the eigenspace (`rank` vectors).
    pub basis: Vec<ComplexVector>,
}

impl SpectralPair {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// `M = Σ_i x_i E_i` with strictly increasing `x_i` and mutually orthogonal
/// projectors `E_i` summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pairs: Vec<SpectralPair>,
    source_dim: usize,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from orthonormal eigenspace bases; used when
    /// the spectrum is known by construction.
    pub(crate) fn from_bases(
        mut spaces: Vec<(f64, Vec<ComplexVector>)>,
        source_dim: usize,
    ) -> Self {
        spaces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let pairs = spaces
            .into_iter()
            .map(|(value, basis)| SpectralPair {
                value,
                projector: projector_from(&basis, source_dim),
                basis,
            })
            .collect();
        Self { pairs, source_dim }
    }

    pub fn pairs(&self) -> &[SpectralPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.pairs.iter().map(|p| p.value.abs()).fold(0.0, f64::max)
    }

    /// Index of the eigenvalue nearest to `outcome`, if within `tol`.
    pub fn position(&self, outcome: f64, tol: f64) -> Option<usize> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (i, (p.value - outcome).abs()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// `Σ_i f(x_i) E_i`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.source_dim, self.source_dim);
        for p in &self.pairs {
            acc = acc
                .add(&p.projector.scale_real(f(p.value)))
                .expect("projectors share the source dimension");
        }
        acc
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_function(|x| x)
    }

    /// Largest of the orthogonality, completeness and idempotence defects.
    pub fn projector_defect(&self) -> f64 {
        let n = self.source_dim;
        let mut worst: f64 = 0.0;
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, p) in self.pairs.iter().enumerate() {
            let sq = p.projector.matmul(&p.projector).expect("square");
            worst = worst.max(sq.max_abs_diff(&p.projector));
            worst = worst.max(p.projector.hermitian_deviation());
            for q in &self.pairs[i + 1..] {
                worst = worst.max(p.projector.matmul(&q.projector).expect("square").max_abs());
            }
            sum = sum.add(&p.projector).expect("square");
        }
        worst.max(sum.max_abs_diff(&ComplexMatrix::identity(n)))
    }
}

fn projector_from(basis: &[ComplexVector], dim: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for v in basis {
        p = p
            .add(&v.outer(v))
            .expect("basis vectors share the dimension");
    }
    p
}

/// Spectral decomposition using the default tolerances.
pub fn spectral_decompose(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    spectral_decompose_with(m, &Tolerances::default())
}

/// Diagonalizes a Hermitian matrix and merges eigenvalues closer than
/// `cluster_rel · (1 + max|λ|)` into a single degenerate eigenspace.
pub fn spectral_decompose_with(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: m.rows(),
            cap: MAX_DIM,
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol.herm {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = hermitian_eigen(m)?;
    let max_abs = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let cluster_tol = tol.cluster_tol(max_abs);

    let mut spaces: Vec<(f64, Vec<ComplexVector>)> = Vec::new();
    let mut members: Vec<f64> = Vec::new();
    let mut vectors: Vec<ComplexVector> = Vec::new();
    for (value, vector) in eig.values.iter().zip(eig.vectors) {
        if let Some(&last) = members.last() {
            if value - last > cluster_tol {
                spaces.push(close_cluster(&members, &vectors));
                members.clear();
                vectors.clear();
            }
        }
        members.push(*value);
        vectors.push(vector);
    }
    if !members.is_empty() {
        spaces.push(close_cluster(&members, &vectors));
    }
    Ok(SpectralDecomposition::from_bases(spaces, m.rows()))
}

fn close_cluster(values: &[f64], vectors: &[ComplexVector]) -> (f64, Vec<ComplexVector>) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let basis = gram_schmidt(vectors, 1e-8);
    debug_assert_eq!(basis.len(), vectors.len(), "eigenvectors lost rank");
    (mean, basis)
}
