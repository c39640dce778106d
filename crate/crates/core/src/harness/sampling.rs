//! Seeded Monte Carlo outcome records and subensemble statistics.
//!
//! Trial `t` of a run with seed `s` draws from its own ChaCha8 stream keyed
//! by `splitmix64(s ^ splitmix64(t))`, so a run is bit-identical however the
//! trials are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantum::{
    bipartite_luders_update, joint_distribution, site_probability, JointDistribution, Observable,
    QuantumState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleMode {
    /// `(x, y)` from the joint table in one draw.
    Direct,
    /// `x` from the Born rule, then `y` from the updated state.
    TwoStep,
}

impl std::str::FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(SampleMode::Direct),
            "two-step" | "twostep" | "two_step" => Ok(SampleMode::TwoStep),
            other => Err(Error::InvalidArgument(format!(
                "unknown sampling mode `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for SampleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SampleMode::Direct => "direct",
            SampleMode::TwoStep => "two-step",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    pub trial: u64,
    pub first: f64,
    pub second: f64,
    pub first_index: usize,
    pub second_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    pub seed: u64,
    pub trials: u64,
    pub mode: SampleMode,
    /// Spectrum of the first observable, ascending.
    pub first_outcomes: Vec<f64>,
    /// Spectrum of the second observable, ascending.
    pub second_outcomes: Vec<f64>,
    pub records: Vec<SampleRecord>,
}

impl SampleRun {
    /// Counts per outcome pair, row-major over the two spectra.
    pub fn counts(&self) -> Vec<u64> {
        let n2 = self.second_outcomes.len();
        let mut counts = vec![0; self.first_outcomes.len() * n2];
        for r in &self.records {
            counts[r.first_index * n2 + r.second_index] += 1;
        }
        counts
    }

    /// Records whose two outcome values differ (up to `1e-9·(1 + |x|)`).
    pub fn discordant(&self) -> usize {
        self.records
            .iter()
            .filter(|r| (r.first - r.second).abs() > 1e-9 * (1.0 + r.first.abs()))
            .count()
    }

    fn first_index_of(&self, x: f64) -> Option<usize> {
        let scale = self
            .first_outcomes
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = 1e-9 * (1.0 + scale);
        self.first_outcomes
            .iter()
            .position(|v| (v - x).abs() <= tol)
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

/// Inverse CDF in index order: the first cell whose cumulative weight
/// exceeds `u·total`, or the last nonzero cell when rounding runs out.
fn pick(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut cum = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cum += w;
        if target < cum {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Draws `trials` outcome pairs of `obs1` on the first site and `obs2` on
/// the second.
pub fn sample_outcomes(
    state: &QuantumState,
    obs1: &Observable,
    obs2: &Observable,
    trials: u64,
    seed: u64,
    mode: SampleMode,
) -> Result<SampleRun> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let joint = joint_distribution(state, obs1, obs2)?;
    let xs = joint.first_outcomes().to_vec();
    let ys = joint.second_outcomes().to_vec();
    let zero = obs1.tolerances().zero_prob;

    let records: Vec<SampleRecord> = match mode {
        SampleMode::Direct => {
            let cells: Vec<f64> = joint.entries().iter().map(|e| e.2).collect();
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let k = pick(&cells, rng.gen::<f64>());
                    record(t, &xs, &ys, k / ys.len(), k % ys.len())
                })
                .collect()
        }
        SampleMode::TwoStep => {
            let mut first = Vec::with_capacity(xs.len());
            let mut conditionals = Vec::with_capacity(xs.len());
            for &x in &xs {
                let p = site_probability(state, 0, obs1, x)?;
                if p > zero {
                    let updated = bipartite_luders_update(state, obs1, x)?;
                    let cond = ys
                        .iter()
                        .map(|&y| site_probability(&updated, 1, obs2, y))
                        .collect::<Result<Vec<f64>>>()?;
                    first.push(p);
                    conditionals.push(cond);
                } else {
                    first.push(0.0);
                    conditionals.push(Vec::new());
                }
            }
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let i = pick(&first, rng.gen::<f64>());
                    let j = pick(&conditionals[i], rng.gen::<f64>());
                    record(t, &xs, &ys, i, j)
                })
                .collect()
        }
    };

    Ok(SampleRun {
        seed,
        trials,
        mode,
        first_outcomes: xs,
        second_outcomes: ys,
        records,
    })
}

fn record(trial: u64, xs: &[f64], ys: &[f64], i: usize, j: usize) -> SampleRecord {
    SampleRecord {
        trial,
        first: xs[i],
        second: ys[j],
        first_index: i,
        second_index: j,
    }
}

/// Relative frequencies of the second outcome within one subensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub filter: f64,
    /// Size of the subensemble.
    pub count: u64,
    /// `(y, frequency)` over the whole second spectrum.
    pub entries: Vec<(f64, f64)>,
}

impl EmpiricalDistribution {
    pub fn frequency(&self, y: f64) -> Option<f64> {
        let tol = 1e-9 * (1.0 + y.abs());
        self.entries
            .iter()
            .find(|(v, _)| (v - y).abs() <= tol)
            .map(|e| e.1)
    }
}

/// Second-site statistics of the records whose first outcome is `x`.
pub fn conditional_statistics(run: &SampleRun, x: f64) -> Result<EmpiricalDistribution> {
    let empty = || Error::EmptySubensemble;
    let i = run.first_index_of(x).ok_or_else(empty)?;
    let mut counts = vec![0u64; run.second_outcomes.len()];
    for r in run.records.iter().filter(|r| r.first_index == i) {
        counts[r.second_index] += 1;
    }
    let count: u64 = counts.iter().sum();
    if count == 0 {
        return Err(empty());
    }
    let entries = run
        .second_outcomes
        .iter()
        .zip(&counts)
        .map(|(&y, &c)| (y, c as f64 / count as f64))
        .collect();
    Ok(EmpiricalDistribution {
        filter: x,
        count,
        entries,
    })
}

/// Empirical joint frequencies, row-major over the two spectra.
pub fn joint_frequencies(run: &SampleRun) -> Vec<f64> {
    run.counts()
        .iter()
        .map(|&c| c as f64 / run.trials as f64)
        .collect()
}

/// Pearson statistic of a run against a joint table and its degrees of
/// freedom; cells with zero expected weight are skipped.
pub fn chi_square(run: &SampleRun, joint: &JointDistribution) -> (f64, usize) {
    let n = run.trials as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (c, (_, _, p)) in run.counts().iter().zip(joint.entries()) {
        if p > 1e-12 {
            let expected = n * p;
            stat += (*c as f64 - expected).powi(2) / expected;
            cells += 1;
        }
    }
    (stat, cells.saturating_sub(1))
}
