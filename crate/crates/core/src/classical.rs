//! Classical calculus of probabilities on finite sample spaces.
//!
//! Events are level sets of random variables over the power-set σ-algebra;
//! conditioning on `A = x` is Bayes' rule, `P → P(· | A = x)`. Composite
//! systems carry a site structure `Ω = Ω₁ × Ω₂` with atoms stored row-major.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::tolerance::{MAX_DIM, ZERO_PROB_TOL};

const MASS_TOL: f64 = 1e-12;
const SEPARABLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomLabel {
    Single(String),
    Pair(String, String),
}

impl fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomLabel::Single(s) => write!(f, "{s}"),
            AtomLabel::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// Label sets of the two factors of `Ω₁ × Ω₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteStructure {
    pub first: Vec<String>,
    pub second: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProbSpace {
    atoms: Vec<AtomLabel>,
    weights: Vec<f64>,
    sites: Option<SiteStructure>,
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidSpace(format!(
            "weight {w} is not a nonnegative number"
        )));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidSpace(format!(
            "total mass {total}, expected 1"
        )));
    }
    Ok(())
}

fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidSpace(format!("duplicate atom label `{l}`")));
        }
    }
    Ok(())
}

impl FiniteProbSpace {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSpace("sample space is empty".into()));
        }
        if labels.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: labels.len(),
                cap: MAX_DIM,
            });
        }
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: weights.len(),
            });
        }
        check_unique(&labels)?;
        check_weights(&weights)?;
        Ok(Self {
            atoms: labels.into_iter().map(AtomLabel::Single).collect(),
            weights,
            sites: None,
        })
    }

    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len().max(1);
        Self::new(labels, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(labels: Vec<String>, index: usize) -> Result<Self> {
        let mut weights = vec![0.0; labels.len()];
        *weights
            .get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("atom index {index} out of range")))? =
            1.0;
        Self::new(labels, weights)
    }

    /// Site-structured space on `first × second` with weights in row-major order.
    pub fn bipartite(first: Vec<String>, second: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidSpace(
                "site label sets must be nonempty".into(),
            ));
        }
        let n = first.len() * second.len();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                cap: MAX_DIM,
            });
        }
        if weights.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: weights.len(),
            });
        }
        check_unique(&first)?;
        check_unique(&second)?;
        check_weights(&weights)?;
        let atoms = first
            .iter()
            .flat_map(|a| {
                second
                    .iter()
                    .map(move |b| AtomLabel::Pair(a.clone(), b.clone()))
            })
            .collect();
        Ok(Self {
            atoms,
            weights,
            sites: Some(SiteStructure { first, second }),
        })
    }

    pub fn atoms(&self) -> &[AtomLabel] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn site_structure(&self) -> Option<&SiteStructure> {
        self.sites.as_ref()
    }

    pub fn weight_of(&self, label: &AtomLabel) -> Option<f64> {
        self.atoms
            .iter()
            .position(|a| a == label)
            .map(|i| self.weights[i])
    }

    fn sites_or_err(&self) -> Result<&SiteStructure> {
        self.sites.as_ref().ok_or(Error::NotSiteStructured)
    }

    fn with_weights(&self, weights: Vec<f64>) -> Self {
        Self {
            atoms: self.atoms.clone(),
            weights,
            sites: self.sites.clone(),
        }
    }

    /// Sum of |P(ω) − Q(ω)| / 2 over a shared atom list.
    pub fn total_variation(&self, other: &FiniteProbSpace) -> Result<f64> {
        if self.atoms != other.atoms {
            return Err(Error::InvalidSpace(
                "total variation needs identical atom lists".into(),
            ));
        }
        Ok(0.5
            * self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }
}

/// A real-valued map defined on every atom of one space.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable {
    label: String,
    values: Vec<f64>,
}

impl RandomVariable {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            values,
        }
    }

    pub fn from_fn(
        space: &FiniteProbSpace,
        label: impl Into<String>,
        f: impl Fn(&AtomLabel) -> f64,
    ) -> Self {
        Self::new(label, space.atoms.iter().map(f).collect())
    }

    pub fn constant(space: &FiniteProbSpace, label: impl Into<String>, value: f64) -> Self {
        Self::new(label, vec![value; space.len()])
    }

    /// `A(ω₁, ω₂) = f(ω_site)` on a site-structured space (`site` is 0 or 1).
    pub fn on_site(
        space: &FiniteProbSpace,
        site: usize,
        label: impl Into<String>,
        f: impl Fn(&str) -> f64,
    ) -> Result<Self> {
        space.sites_or_err()?;
        if site > 1 {
            return Err(Error::SiteMismatch(format!(
                "classical spaces have two sites, got index {site}"
            )));
        }
        let values = space
            .atoms
            .iter()
            .map(|a| match a {
                AtomLabel::Pair(x, y) => f(if site == 0 { x } else { y }),
                AtomLabel::Single(_) => unreachable!("site-structured atoms are pairs"),
            })
            .collect();
        Ok(Self::new(label, values))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Distinct values in increasing order.
    pub fn range(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        for v in sorted {
            if out.last().is_none_or(|&l| !matches_value(l, v)) {
                out.push(v);
            }
        }
        out
    }

    fn check(&self, space: &FiniteProbSpace) -> Result<()> {
        if self.values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: self.values.len(),
            });
        }
        Ok(())
    }

    fn indicator<'a>(&'a self, value: f64) -> impl Iterator<Item = bool> + 'a {
        self.values.iter().map(move |&v| matches_value(v, value))
    }
}

/// Level-set membership `rv(ω) = value`, up to `1e-9·(1 + |value|)`.
fn matches_value(v: f64, value: f64) -> bool {
    (v - value).abs() <= 1e-9 * (1.0 + value.abs())
}

/// `P(rv = value)`.
pub fn probability(space: &FiniteProbSpace, rv: &RandomVariable, value: f64) -> Result<f64> {
    rv.check(space)?;
    Ok(space
        .weights
        .iter()
        .zip(rv.indicator(value))
        .filter(|(_, hit)| *hit)
        .map(|(w, _)| w)
        .sum::<f64>()
        .min(1.0))
}

/// `P(rv₁ = v₁, rv₂ = v₂)`.
pub fn joint_probability(
    space: &FiniteProbSpace,
    first: (&RandomVariable, f64),
    second: (&RandomVariable, f64),
) -> Result<f64> {
    first.0.check(space)?;
    second.0.check(space)?;
    Ok(space
        .weights
        .iter()
        .zip(first.0.indicator(first.1).zip(second.0.indicator(second.1)))
        .filter(|(_, (a, b))| *a && *b)
        .map(|(w, _)| w)
        .sum())
}

/// Bayes update `P → P_{rv=value}`: atoms outside the event get weight 0, the
/// rest are rescaled by `1 / P(rv = value)`.
pub fn bayes_condition(
    space: &FiniteProbSpace,
    rv: &RandomVariable,
    value: f64,
) -> Result<FiniteProbSpace> {
    let p = probability(space, rv, value)?;
    if p <= ZERO_PROB_TOL {
        return Err(Error::ZeroProbabilityOutcome { probability: p });
    }
    let weights = space
        .weights
        .iter()
        .zip(rv.indicator(value))
        .map(|(&w, hit)| if hit { w / p } else { 0.0 })
        .collect();
    Ok(space.with_weights(weights))
}

/// `P(B = y | A = x)` through the updated measure `P_{A=x}`.
pub fn conditional_probability_classical(
    space: &FiniteProbSpace,
    first: (&RandomVariable, f64),
    second: (&RandomVariable, f64),
) -> Result<f64> {
    let updated = bayes_condition(space, first.0, first.1)?;
    probability(&updated, second.0, second.1)
}

/// Product measure `P⁽¹⁾ ⊗ P⁽²⁾` on `Ω₁ × Ω₂`.
pub fn product_space(s1: &FiniteProbSpace, s2: &FiniteProbSpace) -> Result<FiniteProbSpace> {
    let first: Vec<String> = s1.atoms.iter().map(|a| a.to_string()).collect();
    let second: Vec<String> = s2.atoms.iter().map(|a| a.to_string()).collect();
    let weights = s1
        .weights
        .iter()
        .flat_map(|a| s2.weights.iter().map(move |b| a * b))
        .collect();
    FiniteProbSpace::bipartite(first, second, weights)
}

/// Marginal on one site: row sums (`site = 0`) or column sums (`site = 1`).
pub fn marginal(space: &FiniteProbSpace, site: usize) -> Result<FiniteProbSpace> {
    let sites = space.sites_or_err()?;
    let (n1, n2) = (sites.first.len(), sites.second.len());
    let (labels, weights) = match site {
        0 => (
            sites.first.clone(),
            (0..n1)
                .map(|i| space.weights[i * n2..(i + 1) * n2].iter().sum())
                .collect(),
        ),
        1 => (
            sites.second.clone(),
            (0..n2)
                .map(|j| (0..n1).map(|i| space.weights[i * n2 + j]).sum())
                .collect(),
        ),
        _ => {
            return Err(Error::SiteMismatch(format!(
                "classical spaces have two sites, got index {site}"
            )))
        }
    };
    FiniteProbSpace::new(labels, weights)
}

/// Independence of the site coordinates: `P(ω₁, ω₂) = P⁽¹⁾(ω₁)·P⁽²⁾(ω₂)` for
/// every atom within 1e-10.
pub fn is_separable(space: &FiniteProbSpace) -> Result<bool> {
    let sites = space.sites_or_err()?;
    let m1 = marginal(space, 0)?;
    let m2 = marginal(space, 1)?;
    let n2 = sites.second.len();
    Ok(space
        .weights
        .iter()
        .enumerate()
        .all(|(k, &w)| (w - m1.weights[k / n2] * m2.weights[k % n2]).abs() <= SEPARABLE_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_weights, seeded};
    use rand::Rng;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn bits() -> Vec<String> {
        labels(&["0", "1"])
    }

    fn correlated() -> FiniteProbSpace {
        FiniteProbSpace::bipartite(bits(), bits(), vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    fn bit_rv(space: &FiniteProbSpace, site: usize) -> RandomVariable {
        RandomVariable::on_site(space, site, if site == 0 { "A" } else { "B" }, |s| {
            s.parse().unwrap()
        })
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(FiniteProbSpace::new(bits(), vec![0.5, 0.6]).is_err());
        assert!(FiniteProbSpace::new(bits(), vec![1.5, -0.5]).is_err());
        assert!(FiniteProbSpace::new(labels(&["a", "a"]), vec![0.5, 0.5]).is_err());
        assert!(FiniteProbSpace::new(vec![], vec![]).is_err());
    }

    #[test]
    fn conditioning_perfect_correlation() {
        let s = correlated();
        let a = bit_rv(&s, 0);
        let post = bayes_condition(&s, &a, 0.0).unwrap();
        assert_eq!(post.weights(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn conditioning_on_certain_event_is_identity() {
        let s = FiniteProbSpace::uniform(labels(&["a", "b", "c"])).unwrap();
        let c = RandomVariable::constant(&s, "C", 7.0);
        assert_eq!(bayes_condition(&s, &c, 7.0).unwrap(), s);
    }

    #[test]
    fn conditioning_on_null_event() {
        let s = correlated();
        let a = bit_rv(&s, 0);
        assert!(matches!(
            bayes_condition(&s, &a, 2.0),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
        let b = bit_rv(&s, 1);
        let post = bayes_condition(&s, &a, 0.0).unwrap();
        assert!(matches!(
            bayes_condition(&post, &b, 1.0),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
    }

    #[test]
    fn probability_examples() {
        let s = FiniteProbSpace::bipartite(bits(), bits(), vec![0.25; 4]).unwrap();
        assert_eq!(probability(&s, &bit_rv(&s, 0), 0.0).unwrap(), 0.5);
        let pm = FiniteProbSpace::point_mass(labels(&["x", "y"]), 1).unwrap();
        let rv = RandomVariable::new("R", vec![3.0, 4.0]);
        assert_eq!(probability(&pm, &rv, 4.0).unwrap(), 1.0);
        assert_eq!(probability(&pm, &rv, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn probability_matches_exhaustive_sum() {
        let mut rng = seeded(41);
        for _ in 0..50 {
            let n = rng.gen_range(1..20);
            let w = random_weights(n, &mut rng);
            let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
            let s = FiniteProbSpace::new(names, w.clone()).unwrap();
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0..3) as f64).collect();
            let rv = RandomVariable::new("R", vals.clone());
            for target in [0.0, 1.0, 2.0] {
                let mut oracle = 0.0;
                for i in 0..n {
                    if vals[i] == target {
                        oracle += w[i];
                    }
                }
                assert!((probability(&s, &rv, target).unwrap() - oracle).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn product_of_fair_coins_is_uniform() {
        let coin = FiniteProbSpace::uniform(bits()).unwrap();
        let p = product_space(&coin, &coin).unwrap();
        assert_eq!(p.weights(), &[0.25; 4]);
        assert!(is_separable(&p).unwrap());
        assert_eq!(marginal(&p, 0).unwrap(), coin);
        assert_eq!(marginal(&p, 1).unwrap(), coin);
    }

    #[test]
    fn point_mass_times_arbitrary() {
        let pm = FiniteProbSpace::point_mass(bits(), 0).unwrap();
        let arb = FiniteProbSpace::new(labels(&["a", "b", "c"]), vec![0.2, 0.3, 0.5]).unwrap();
        let p = product_space(&pm, &arb).unwrap();
        assert_eq!(&p.weights()[..3], &[0.2, 0.3, 0.5]);
        assert_eq!(&p.weights()[3..], &[0.0; 3]);
        assert_eq!(marginal(&p, 1).unwrap(), arb);
    }

    #[test]
    fn marginals_of_correlated_are_fair() {
        let s = correlated();
        let coin = FiniteProbSpace::uniform(bits()).unwrap();
        assert_eq!(marginal(&s, 0).unwrap(), coin);
        assert_eq!(marginal(&s, 1).unwrap(), coin);
        let flat = FiniteProbSpace::uniform(bits()).unwrap();
        assert!(matches!(marginal(&flat, 0), Err(Error::NotSiteStructured)));
        assert!(matches!(is_separable(&flat), Err(Error::NotSiteStructured)));
    }

    #[test]
    fn marginal_matches_summation_oracle() {
        let mut rng = seeded(42);
        for _ in 0..20 {
            let (n1, n2) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let w = random_weights(n1 * n2, &mut rng);
            let l1: Vec<String> = (0..n1).map(|i| format!("a{i}")).collect();
            let l2: Vec<String> = (0..n2).map(|i| format!("b{i}")).collect();
            let s = FiniteProbSpace::bipartite(l1, l2, w.clone()).unwrap();
            let m2 = marginal(&s, 1).unwrap();
            for j in 0..n2 {
                let mut oracle = 0.0;
                for (k, wk) in w.iter().enumerate() {
                    if k % n2 == j {
                        oracle += wk;
                    }
                }
                assert!((m2.weights()[j] - oracle).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn separability_examples() {
        assert!(!is_separable(&correlated()).unwrap());
        let product = [0.25; 4];
        let corr = [0.5, 0.0, 0.0, 0.5];
        let mix: Vec<f64> = product
            .iter()
            .zip(corr)
            .map(|(p, c)| 0.999 * p + 0.001 * c)
            .collect();
        // direct check: P(00) = 0.25025 against marginal product 0.25
        assert!((mix[0] - 0.5 * 0.5).abs() > 1e-10);
        let s = FiniteProbSpace::bipartite(bits(), bits(), mix).unwrap();
        assert!(!is_separable(&s).unwrap());
    }

    #[test]
    fn conditional_examples() {
        let s = correlated();
        let (a, b) = (bit_rv(&s, 0), bit_rv(&s, 1));
        assert_eq!(
            conditional_probability_classical(&s, (&a, 0.0), (&b, 0.0)).unwrap(),
            1.0
        );
        assert_eq!(probability(&s, &b, 0.0).unwrap(), 0.5);

        let coin = FiniteProbSpace::new(bits(), vec![0.3, 0.7]).unwrap();
        let other = FiniteProbSpace::new(bits(), vec![0.9, 0.1]).unwrap();
        let p = product_space(&coin, &other).unwrap();
        let (a, b) = (bit_rv(&p, 0), bit_rv(&p, 1));
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                let c = conditional_probability_classical(&p, (&a, x), (&b, y)).unwrap();
                assert!((c - probability(&p, &b, y).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conditional_matches_bayes_ratio() {
        let mut rng = seeded(43);
        for _ in 0..50 {
            let w = random_weights(9, &mut rng);
            let l: Vec<String> = (0..3).map(|i| i.to_string()).collect();
            let s = FiniteProbSpace::bipartite(l.clone(), l, w).unwrap();
            let (a, b) = (bit_rv(&s, 0), bit_rv(&s, 1));
            for x in [0.0, 1.0, 2.0] {
                for y in [0.0, 1.0, 2.0] {
                    let ratio = joint_probability(&s, (&a, x), (&b, y)).unwrap()
                        / probability(&s, &a, x).unwrap();
                    let c = conditional_probability_classical(&s, (&a, x), (&b, y)).unwrap();
                    assert!((c - ratio).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn site_two_marginal_shift_after_conditioning() {
        let s = correlated();
        let a = bit_rv(&s, 0);
        let post = bayes_condition(&s, &a, 0.0).unwrap();
        let tv = marginal(&post, 1)
            .unwrap()
            .total_variation(&marginal(&s, 1).unwrap())
            .unwrap();
        assert!((tv - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rv_range() {
        let rv = RandomVariable::new("R", vec![2.0, 1.0, 2.0, 1.0 + 1e-12]);
        assert_eq!(rv.range(), vec![1.0, 2.0]);
    }
}
