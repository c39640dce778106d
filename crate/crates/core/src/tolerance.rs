//! Numerical tolerances shared by every calculus.

/// Max |M − M†| accepted for a Hermitian matrix.
pub const HERM_TOL: f64 = 1e-10;
/// Max |P² − P| accepted for a projector, also used for orthogonality and completeness.
pub const PROJ_TOL: f64 = 1e-10;
/// Deviation of a norm or trace from 1 accepted for a state.
pub const NORM_TOL: f64 = 1e-10;
/// Max |Σ x E(x) − M| accepted for a spectral reconstruction.
pub const SPEC_TOL: f64 = 1e-9;
/// Relative factor of the eigenvalue clustering threshold `factor · (1 + max|λ|)`.
pub const CLUSTER_REL: f64 = 1e-9;
/// Most negative eigenvalue accepted in a density operator.
pub const PSD_TOL: f64 = 1e-10;
/// Outcomes with probability at or below this cannot be conditioned on.
pub const ZERO_PROB_TOL: f64 = 1e-12;
/// Schmidt coefficients at or below this do not count toward the Schmidt rank.
pub const SCHMIDT_TOL: f64 = 1e-12;
/// Max |[A, B]| for two observables to count as compatible.
pub const COMMUTE_TOL: f64 = 1e-10;
/// Matching tolerance of a joint-distribution witness.
pub const FEAS_TOL: f64 = 1e-9;

/// Per-site dimension cap.
pub const MAX_SITE_DIM: usize = 64;
/// Composite dimension cap.
pub const MAX_DIM: usize = 4096;

/// Overridable bundle of the tolerance constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub proj: f64,
    pub norm: f64,
    pub spec: f64,
    pub cluster_rel: f64,
    pub psd: f64,
    pub zero_prob: f64,
    pub schmidt: f64,
    pub commute: f64,
    pub feas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: HERM_TOL,
            proj: PROJ_TOL,
            norm: NORM_TOL,
            spec: SPEC_TOL,
            cluster_rel: CLUSTER_REL,
            psd: PSD_TOL,
            zero_prob: ZERO_PROB_TOL,
            schmidt: SCHMIDT_TOL,
            commute: COMMUTE_TOL,
            feas: FEAS_TOL,
        }
    }
}

impl Tolerances {
    /// Absolute clustering threshold for a spectrum whose largest magnitude is `max_abs`.
    pub fn cluster_tol(&self, max_abs: f64) -> f64 {
        self.cluster_rel * (1.0 + max_abs)
    }

    /// Sets one tolerance by its short name (`herm`, `proj`, `norm`, `spec`,
    /// `cluster`, `psd`, `zero-prob`, `schmidt`, `commute`, `feas`).
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!(
                "tolerance `{name}` must be a finite non-negative number"
            ));
        }
        let slot = match name {
            "herm" => &mut self.herm,
            "proj" => &mut self.proj,
            "norm" => &mut self.norm,
            "spec" => &mut self.spec,
            "cluster" => &mut self.cluster_rel,
            "psd" => &mut self.psd,
            "zero-prob" | "zero_prob" => &mut self.zero_prob,
            "schmidt" => &mut self.schmidt,
            "commute" => &mut self.commute,
            "feas" => &mut self.feas,
            _ => return Err(format!("unknown tolerance `{name}`")),
        };
        *slot = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_tol_scales_with_spectrum() {
        let t = Tolerances::default();
        assert_eq!(t.cluster_tol(0.0), 1e-9);
        assert!((t.cluster_tol(9.0) - 1e-8).abs() < 1e-20);
    }

    #[test]
    fn set_by_name() {
        let mut t = Tolerances::default();
        t.set("zero-prob", 1e-6).unwrap();
        assert_eq!(t.zero_prob, 1e-6);
        assert!(t.set("bogus", 1.0).is_err());
        assert!(t.set("herm", -1.0).is_err());
    }
}
