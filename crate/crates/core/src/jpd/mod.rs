//! Joint-probability-distribution existence for two-site, two-setting,
//! binary-outcome behaviors.
//!
//! A behavior admits a jpd when one distribution over the 16 outcome
//! quadruples `(a₁, a₂, b₁, b₂) ∈ {±1}⁴` reproduces all four pairwise tables.
//! [`jpd_feasible`] answers this twice: by a direct linear-feasibility search
//! and by the CHSH (Fine) criterion, and reports whether the two agree.

mod simplex;

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{joint_distribution, Observable, QuantumState};
use crate::tolerance::Tolerances;

pub use simplex::{phase_one, PhaseOne};

const TABLE_TOL: f64 = 1e-10;
const SIGNALING_TOL: f64 = 1e-8;

/// Outcome cell order of every 2×2 table: `(+,+), (+,−), (−,+), (−,−)`.
pub const CELLS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Sign patterns over `(E₁₁, E₁₂, E₂₁, E₂₂)` with an odd number of minus
/// signs, in lexicographic order with `+` before `−`.
pub const CHSH_PATTERNS: [[i8; 4]; 8] = [
    [1, 1, 1, -1],
    [1, 1, -1, 1],
    [1, -1, 1, 1],
    [1, -1, -1, -1],
    [-1, 1, 1, 1],
    [-1, 1, -1, -1],
    [-1, -1, 1, -1],
    [-1, -1, -1, 1],
];

/// Four pairwise outcome tables `p(x, y | Aᵢ, Bⱼ)` of a two-site experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorTable {
    site1: [String; 2],
    site2: [String; 2],
    tables: [[[f64; 4]; 2]; 2],
}

impl BehaviorTable {
    /// Validates normalization and no-signaling.
    pub fn new(site1: [String; 2], site2: [String; 2], tables: [[[f64; 4]; 2]; 2]) -> Result<Self> {
        let b = Self::raw(site1, site2, tables)?;
        let deviation = b.signaling_deviation();
        if deviation > SIGNALING_TOL {
            return Err(Error::SignalingBehavior { deviation });
        }
        Ok(b)
    }

    /// Validates normalization only; no-signaling is left to [`jpd_feasible`].
    pub fn raw(site1: [String; 2], site2: [String; 2], tables: [[[f64; 4]; 2]; 2]) -> Result<Self> {
        for (i, row) in tables.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                if t.iter().any(|p| !p.is_finite() || *p < -TABLE_TOL) {
                    return Err(Error::InvalidBehavior(format!(
                        "table ({}, {}) has a negative entry",
                        site1[i], site2[j]
                    )));
                }
                let total: f64 = t.iter().sum();
                if (total - 1.0).abs() > TABLE_TOL {
                    return Err(Error::InvalidBehavior(format!(
                        "table ({}, {}) sums to {total}",
                        site1[i], site2[j]
                    )));
                }
            }
        }
        Ok(Self {
            site1,
            site2,
            tables,
        })
    }

    /// Behavior generated by a distribution over quadruples; `joint[k]` is
    /// the weight of the quadruple whose bits (a₁, a₂, b₁, b₂), most
    /// significant first, are 0 for `+1` and 1 for `−1`.
    pub fn from_joint(joint: &[f64; 16]) -> Result<Self> {
        let mut tables = [[[0.0; 4]; 2]; 2];
        for (k, &w) in joint.iter().enumerate() {
            let bits = quadruple_bits(k);
            for i in 0..2 {
                for j in 0..2 {
                    tables[i][j][bits[i] * 2 + bits[2 + j]] += w;
                }
            }
        }
        Self::new(default_labels("A"), default_labels("B"), tables)
    }

    pub fn site1_labels(&self) -> &[String; 2] {
        &self.site1
    }

    pub fn site2_labels(&self) -> &[String; 2] {
        &self.site2
    }

    pub fn tables(&self) -> &[[[f64; 4]; 2]; 2] {
        &self.tables
    }

    /// `[p++, p+−, p−+, p−−]` for settings `(Aᵢ, Bⱼ)`.
    pub fn table(&self, i: usize, j: usize) -> &[f64; 4] {
        &self.tables[i][j]
    }

    /// `E(i, j) = Σ x·y·p(x, y)`.
    pub fn correlator(&self, i: usize, j: usize) -> f64 {
        let t = &self.tables[i][j];
        t[0] - t[1] - t[2] + t[3]
    }

    /// Largest disagreement between marginals that should coincide.
    pub fn signaling_deviation(&self) -> f64 {
        let t = &self.tables;
        let plus1 = |i: usize, j: usize| t[i][j][0] + t[i][j][1];
        let plus2 = |i: usize, j: usize| t[i][j][0] + t[i][j][2];
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            worst = worst.max((plus1(i, 0) - plus1(i, 1)).abs());
        }
        for j in 0..2 {
            worst = worst.max((plus2(0, j) - plus2(1, j)).abs());
        }
        worst
    }

    /// Mixture `λ·self + (1 − λ)·other`.
    pub fn mix(&self, other: &BehaviorTable, lambda: f64) -> Result<Self> {
        let mut tables = self.tables;
        for i in 0..2 {
            for j in 0..2 {
                for c in 0..4 {
                    tables[i][j][c] =
                        lambda * self.tables[i][j][c] + (1.0 - lambda) * other.tables[i][j][c];
                }
            }
        }
        Self::new(self.site1.clone(), self.site2.clone(), tables)
    }
}

fn default_labels(prefix: &str) -> [String; 2] {
    [format!("{prefix}1"), format!("{prefix}2")]
}

/// Bits `(a₁, a₂, b₁, b₂)` of quadruple index `k`.
fn quadruple_bits(k: usize) -> [usize; 4] {
    [(k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1]
}

/// The eight signed CHSH combinations of a behavior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshValues {
    pub values: [f64; 8],
}

impl ChshValues {
    /// Index and value of the first combination with the largest magnitude.
    pub fn max_abs(&self) -> (usize, f64) {
        let mut best = (0, self.values[0]);
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if v.abs() > best.1.abs() {
                best = (i, v);
            }
        }
        best
    }
}

pub fn chsh_value(b: &BehaviorTable) -> ChshValues {
    let e = [
        b.correlator(0, 0),
        b.correlator(0, 1),
        b.correlator(1, 0),
        b.correlator(1, 1),
    ];
    let mut values = [0.0; 8];
    for (v, pattern) in values.iter_mut().zip(CHSH_PATTERNS) {
        *v = pattern.iter().zip(e).map(|(&s, e)| s as f64 * e).sum();
    }
    ChshValues { values }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Weights of the 16 quadruples, indexed as in [`BehaviorTable::from_joint`].
    Distribution([f64; 16]),
    ViolatedInequality {
        index: usize,
        value: f64,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Distribution(w) => {
                let parts: Vec<String> = w.iter().map(|x| format!("{x:.6}")).collect();
                write!(f, "distribution [{}]", parts.join(" "))
            }
            Witness::ViolatedInequality { index, value } => {
                write!(f, "CHSH combination #{index} = {value:.12}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JpdVerdict {
    pub exists: bool,
    pub witness: Witness,
    pub chsh: ChshValues,
    /// Answer of the direct feasibility search.
    pub feasible_by_search: bool,
    /// Answer of the CHSH criterion.
    pub feasible_by_chsh: bool,
    /// Residual `Σ|Aq − p|` of the best nonnegative quadruple distribution.
    pub infeasibility: f64,
}

impl JpdVerdict {
    pub fn methods_agree(&self) -> bool {
        self.feasible_by_search == self.feasible_by_chsh
    }
}

pub fn jpd_feasible(b: &BehaviorTable) -> Result<JpdVerdict> {
    jpd_feasible_with(b, &Tolerances::default())
}

/// Maximum over the 16 matching constraints of |Σ q − p|.
pub fn witness_residual(b: &BehaviorTable, q: &[f64; 16]) -> f64 {
    let (rows, rhs) = matching_system(b);
    rows.iter()
        .zip(rhs)
        .map(|(row, p)| (row.iter().zip(q).map(|(a, x)| a * x).sum::<f64>() - p).abs())
        .fold(0.0, f64::max)
}

fn matching_system(b: &BehaviorTable) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rows = Vec::with_capacity(16);
    let mut rhs = Vec::with_capacity(16);
    for i in 0..2 {
        for j in 0..2 {
            for cell in 0..4 {
                let (x, y) = (cell / 2, cell % 2);
                let row = (0..16)
                    .map(|k| {
                        let bits = quadruple_bits(k);
                        if bits[i] == x && bits[2 + j] == y {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect();
                rows.push(row);
                rhs.push(b.tables[i][j][cell]);
            }
        }
    }
    (rows, rhs)
}

pub fn jpd_feasible_with(b: &BehaviorTable, tol: &Tolerances) -> Result<JpdVerdict> {
    let deviation = b.signaling_deviation();
    if deviation > SIGNALING_TOL {
        return Err(Error::SignalingBehavior { deviation });
    }
    let chsh = chsh_value(b);
    let (max_idx, max_val) = chsh.max_abs();
    let feasible_by_chsh = max_val.abs() <= 2.0 + tol.feas;

    let (rows, rhs) = matching_system(b);
    let solution = phase_one(&rows, &rhs);
    let mut q = [0.0; 16];
    q.copy_from_slice(&solution.x);
    let feasible_by_search =
        solution.infeasibility <= tol.feas && witness_residual(b, &q) <= tol.feas;

    let exists = feasible_by_search;
    let witness = if exists {
        Witness::Distribution(q)
    } else {
        Witness::ViolatedInequality {
            index: max_idx,
            value: max_val,
        }
    };
    Ok(JpdVerdict {
        exists,
        witness,
        chsh,
        feasible_by_search,
        feasible_by_chsh,
        infeasibility: solution.infeasibility,
    })
}

/// Fills the four tables from joint Born probabilities. The larger eigenvalue
/// of each observable is the `+1` outcome.
pub fn behavior_from_quantum(
    state: &QuantumState,
    site1: [&Observable; 2],
    site2: [&Observable; 2],
) -> Result<BehaviorTable> {
    for obs in site1.iter().chain(site2.iter()) {
        let clusters = obs.spectrum().len();
        if clusters != 2 {
            return Err(Error::OutcomeArity {
                label: obs.label().to_string(),
                clusters,
            });
        }
    }
    let mut tables = [[[0.0; 4]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let joint = joint_distribution(state, site1[i], site2[j])?;
            // row/column 1 is the larger eigenvalue
            tables[i][j] = [
                joint.at(1, 1),
                joint.at(1, 0),
                joint.at(0, 1),
                joint.at(0, 0),
            ];
        }
    }
    BehaviorTable::new(
        [site1[0].label().to_string(), site1[1].label().to_string()],
        [site2[0].label().to_string(), site2[1].label().to_string()],
        tables,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product_behavior() -> BehaviorTable {
        BehaviorTable::new(
            default_labels("A"),
            default_labels("B"),
            [[[0.25; 4]; 2]; 2],
        )
        .unwrap()
    }

    #[test]
    fn patterns_are_odd_and_sorted() {
        for p in CHSH_PATTERNS {
            assert_eq!(p.iter().filter(|&&s| s < 0).count() % 2, 1);
        }
        let key = |p: &[i8; 4]| {
            p.iter()
                .map(|&s| if s > 0 { '0' } else { '1' })
                .collect::<String>()
        };
        let keys: Vec<String> = CHSH_PATTERNS.iter().map(key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn fair_coins_have_zero_chsh() {
        let c = chsh_value(&product_behavior());
        assert!(c.values.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn deterministic_correlation_saturates_at_two() {
        let t = [1.0, 0.0, 0.0, 0.0];
        let b = BehaviorTable::new(default_labels("A"), default_labels("B"), [[t; 2]; 2]).unwrap();
        let (_, v) = chsh_value(&b).max_abs();
        assert!((v.abs() - 2.0).abs() < 1e-15);
        assert!(jpd_feasible(&b).unwrap().exists);
    }

    #[test]
    fn product_behavior_has_product_witness() {
        let v = jpd_feasible(&product_behavior()).unwrap();
        assert!(v.exists && v.methods_agree());
        let Witness::Distribution(q) = v.witness else {
            panic!("expected distribution")
        };
        assert!(witness_residual(&product_behavior(), &q) < 1e-9);
    }

    #[test]
    fn pr_box_is_infeasible() {
        let corr = [0.5, 0.0, 0.0, 0.5];
        let anti = [0.0, 0.5, 0.5, 0.0];
        let b = BehaviorTable::new(
            default_labels("A"),
            default_labels("B"),
            [[corr, corr], [corr, anti]],
        )
        .unwrap();
        let v = jpd_feasible(&b).unwrap();
        assert!(!v.exists && v.methods_agree());
        assert!(
            matches!(v.witness, Witness::ViolatedInequality { index: 0, value } if (value - 4.0).abs() < 1e-12)
        );
    }

    #[test]
    fn signaling_is_rejected() {
        let t1 = [0.5, 0.0, 0.0, 0.5];
        let t2 = [0.9, 0.0, 0.1, 0.0];
        let labels = (default_labels("A"), default_labels("B"));
        assert!(matches!(
            BehaviorTable::new(labels.0.clone(), labels.1.clone(), [[t1, t2], [t1, t1]]),
            Err(Error::SignalingBehavior { .. })
        ));
        let raw = BehaviorTable::raw(labels.0, labels.1, [[t1, t2], [t1, t1]]).unwrap();
        assert!(matches!(
            jpd_feasible(&raw),
            Err(Error::SignalingBehavior { .. })
        ));
    }

    #[test]
    fn invalid_tables() {
        let bad = [0.5, 0.5, 0.5, -0.5];
        assert!(matches!(
            BehaviorTable::raw(default_labels("A"), default_labels("B"), [[bad; 2]; 2]),
            Err(Error::InvalidBehavior(_))
        ));
        let short = [0.5, 0.2, 0.2, 0.0];
        assert!(matches!(
            BehaviorTable::raw(default_labels("A"), default_labels("B"), [[short; 2]; 2]),
            Err(Error::InvalidBehavior(_))
        ));
    }

    #[test]
    fn from_joint_round_trip() {
        let mut q = [0.0; 16];
        q[0] = 0.5;
        q[15] = 0.25;
        q[6] = 0.25;
        let b = BehaviorTable::from_joint(&q).unwrap();
        assert!(witness_residual(&b, &q) < 1e-15);
        assert!(jpd_feasible(&b).unwrap().exists);
    }

    #[test]
    fn arity_check() {
        let three = Observable::diagonal("T", &[1.0, 2.0, 3.0]).unwrap();
        let two = Observable::diagonal("Z", &[1.0, -1.0]).unwrap();
        let state = QuantumState::product(&[
            crate::hilbert::ComplexVector::basis(3, 0),
            crate::hilbert::ComplexVector::basis(2, 0),
        ])
        .unwrap();
        assert!(matches!(
            behavior_from_quantum(&state, [&three, &three], [&two, &two]),
            Err(Error::OutcomeArity { clusters: 3, .. })
        ));
    }
}
