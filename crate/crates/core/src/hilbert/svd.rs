//! Singular values by one-sided (Hestenes) Jacobi orthogonalization.
//!
//! Column norms of the orthogonalized matrix carry high relative accuracy,
//! which matters for Schmidt coefficients far below machine epsilon.

use num_complex::Complex64;

use super::ComplexMatrix;

const MAX_SWEEPS: usize = 60;

/// Singular values of `m` in descending order (`min(rows, cols)` of them).
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // work on the orientation with fewer columns
    let work = if m.cols() > m.rows() {
        m.adjoint()
    } else {
        m.clone()
    };
    let rows = work.rows();
    let cols = work.cols();
    let mut columns: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| (0..rows).map(|r| work.get(r, c)).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for j in 0..cols {
            for k in j + 1..cols {
                let alpha: f64 = columns[j].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = columns[k].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = columns[j]
                    .iter()
                    .zip(&columns[k])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase_c = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let a = columns[j][r];
                    let b = columns[k][r] * phase_c;
                    columns[j][r] = a * c - b * s;
                    columns[k][r] = a * s + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}
