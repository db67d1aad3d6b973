//! Shared domain types: weight vectors on the unit simplex, grid cells of
//! `[0, 1]`, complementary cell pairings and objective-space points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ λᵢ = 1`.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Tolerance used by the pairing identity `A.lo + B.hi = 1`.
pub const PAIRING_TOL: f64 = 1e-15;

/// A point on the unit (p−1)-simplex: `p ≥ 2` nonnegative weights summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::dim(format!(
                "weight vector needs at least 2 components, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Domain(format!(
                "weight component {w} is not a nonnegative finite number"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Domain(format!("weights sum to {sum}, expected 1")));
        }
        Ok(WeightVector(weights))
    }

    /// Bi-objective weight `(λ₁, 1 − λ₁)`.
    pub fn pair(lambda1: f64) -> Result<Self> {
        Self::new(vec![lambda1, 1.0 - lambda1])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// True when every component is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&w| w > 0.0)
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Scale positive values so they sum to one.
pub fn normalise(values: &[f64]) -> Result<WeightVector> {
    if values.len() < 2 {
        return Err(Error::dim(format!(
            "cannot normalise {} value(s); need at least 2",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateSample(format!(
            "normalise requires positive finite values, got {v}"
        )));
    }
    let total: f64 = values.iter().sum();
    Ok(WeightVector(values.iter().map(|v| v / total).collect()))
}

/// A closed cell `[lo, hi]` of the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subinterval {
    lo: f64,
    hi: f64,
}

impl Subinterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
            return Err(Error::Domain(format!(
                "[{lo}, {hi}] is not a subinterval of [0, 1]"
            )));
        }
        Ok(Subinterval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Uniform draw from the open interval `(lo, hi)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.sample(rand::distr::Open01);
            let x = self.lo + (self.hi - self.lo) * u;
            if x > self.lo && x < self.hi {
                return x;
            }
        }
    }
}

pub fn midpoint(cell: &Subinterval) -> f64 {
    cell.midpoint()
}

/// Split `[0, 1]` into `d` cells `[k/d, (k+1)/d]`.
pub fn grid(d: usize) -> Result<Vec<Subinterval>> {
    if d == 0 {
        return Err(Error::dim("grid depth d must be at least 1"));
    }
    let df = d as f64;
    Ok((0..d)
        .map(|k| Subinterval {
            lo: k as f64 / df,
            hi: (k + 1) as f64 / df,
        })
        .collect())
}

/// Complementary pairing of grid cells: cell `k` with cell `d−1−k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPairing {
    pub pairs: Vec<(Subinterval, Subinterval)>,
    /// The unpaired middle cell, present iff `d` is odd.
    pub odd_center: Option<Subinterval>,
}

pub fn pair_intervals(d: usize) -> Result<IntervalPairing> {
    if d < 2 {
        return Err(Error::dim(format!("pairing needs d >= 2, got {d}")));
    }
    let cells = grid(d)?;
    let pairs = (0..d / 2).map(|k| (cells[k], cells[d - 1 - k])).collect();
    // 1-indexed ⌈d/2⌉-th cell
    let odd_center = (d % 2 == 1).then(|| cells[d.div_ceil(2) - 1]);
    Ok(IntervalPairing { pairs, odd_center })
}

/// An image `c(x) ∈ ℝᵖ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectivePoint(pub Vec<f64>);

impl ObjectivePoint {
    pub fn new(values: Vec<f64>) -> Self {
        ObjectivePoint(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Euclidean distance; dimensions are assumed equal.
    pub fn distance(&self, other: &ObjectivePoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<Vec<f64>> for ObjectivePoint {
    fn from(v: Vec<f64>) -> Self {
        ObjectivePoint(v)
    }
}

/// Every tunable used by the samplers and the adaptive search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub p: usize,
    /// Depth: number of equal cells per weight axis.
    pub d: usize,
    /// Number of LHS shuffle rounds.
    pub s: usize,
    /// Allowed deviation of the midpoint sum from 1.
    pub delta: f64,
    /// Gap threshold for adaptive subdivision.
    pub tau: f64,
    /// Redundancy bound on distinct/solved.
    pub rho: f64,
    pub alpha: Vec<f64>,
    pub seed: u64,
    pub budget: u64,
    pub max_depth: usize,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 12;

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            p: 2,
            d: 10,
            s: 1,
            delta: 0.05,
            tau: 0.0,
            rho: 0.0,
            alpha: Vec::new(),
            seed: 0,
            budget: DEFAULT_BUDGET,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::config(format!("p must be >= 2, got {}", self.p)));
        }
        if self.d < 1 {
            return Err(Error::config("d must be >= 1"));
        }
        if self.s < 1 {
            return Err(Error::config("s must be >= 1"));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::config(format!(
                "delta must be >= 0, got {}",
                self.delta
            )));
        }
        if !(self.tau >= 0.0) {
            return Err(Error::config(format!("tau must be >= 0, got {}", self.tau)));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::config(format!(
                "rho must lie in [0, 1], got {}",
                self.rho
            )));
        }
        if let Some(a) = self.alpha.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(Error::config(format!(
                "alpha entries must be positive, got {a}"
            )));
        }
        if !self.alpha.is_empty() && self.alpha.len() != self.p {
            return Err(Error::config(format!(
                "alpha has {} entries but p = {}",
                self.alpha.len(),
                self.p
            )));
        }
        if self.budget < 1 {
            return Err(Error::config("budget must be >= 1"));
        }
        if self.max_depth < 1 {
            return Err(Error::config("max_depth must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_to(x: f64, places: i32) -> f64 {
        let f = 10f64.powi(places);
        (x * f).round() / f
    }

    #[test]
    fn normalise_matches_worked_example() {
        let w = normalise(&[0.06637717, 0.843031]).unwrap();
        assert_eq!(round_to(w[0], 3), 0.073);
        assert_eq!(round_to(w[1], 3), 0.927);

        let w = normalise(&[0.3932133, 0.7270519]).unwrap();
        assert_eq!(round_to(w[0], 4), 0.3510);
        assert_eq!(round_to(w[1], 4), 0.6490);

        let w = normalise(&[0.5, 0.5]).unwrap();
        assert_eq!(w.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn normalise_rejects_bad_input() {
        assert!(matches!(
            normalise(&[0.0, 1.0]),
            Err(Error::DegenerateSample(_))
        ));
        assert!(matches!(
            normalise(&[-0.1, 1.0]),
            Err(Error::DegenerateSample(_))
        ));
        assert!(matches!(normalise(&[1.0]), Err(Error::Dimension(_))));
        assert!(matches!(normalise(&[]), Err(Error::Dimension(_))));
    }

    #[test]
    fn grid_cells() {
        let g = grid(4).unwrap();
        let bounds: Vec<(f64, f64)> = g.iter().map(|c| (c.lo(), c.hi())).collect();
        assert_eq!(
            bounds,
            vec![(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)]
        );

        let g = grid(1).unwrap();
        assert_eq!((g[0].lo(), g[0].hi()), (0.0, 1.0));

        let g = grid(3).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!((g[0].lo(), g[0].hi()), (0.0, 1.0 / 3.0));
        assert_eq!((g[1].lo(), g[1].hi()), (1.0 / 3.0, 2.0 / 3.0));
        assert_eq!((g[2].lo(), g[2].hi()), (2.0 / 3.0, 1.0));

        assert!(matches!(grid(0), Err(Error::Dimension(_))));
    }

    #[test]
    fn grid_cells_share_endpoints_and_width() {
        for d in 1..200 {
            let g = grid(d).unwrap();
            for w in g.windows(2) {
                assert_eq!(w[0].hi().to_bits(), w[1].lo().to_bits());
            }
            for c in &g {
                assert!((c.width() - 1.0 / d as f64).abs() <= 1e-15);
            }
            assert_eq!(g[0].lo(), 0.0);
            assert_eq!(g[d - 1].hi(), 1.0);
        }
    }

    #[test]
    fn pairing_examples() {
        let p = pair_intervals(4).unwrap();
        assert_eq!(p.pairs.len(), 2);
        assert_eq!((p.pairs[0].0.lo(), p.pairs[0].0.hi()), (0.0, 0.25));
        assert_eq!((p.pairs[0].1.lo(), p.pairs[0].1.hi()), (0.75, 1.0));
        assert_eq!((p.pairs[1].0.lo(), p.pairs[1].0.hi()), (0.25, 0.5));
        assert_eq!((p.pairs[1].1.lo(), p.pairs[1].1.hi()), (0.5, 0.75));
        assert!(p.odd_center.is_none());

        let p = pair_intervals(2).unwrap();
        assert_eq!(p.pairs.len(), 1);
        assert_eq!((p.pairs[0].0.hi(), p.pairs[0].1.lo()), (0.5, 0.5));

        let p = pair_intervals(5).unwrap();
        assert_eq!(p.pairs.len(), 2);
        let c = p.odd_center.unwrap();
        assert_eq!((c.lo(), c.hi()), (2.0 / 5.0, 3.0 / 5.0));

        assert!(matches!(pair_intervals(1), Err(Error::Dimension(_))));
    }

    #[test]
    fn pairing_invariants() {
        for d in 2..150 {
            let p = pair_intervals(d).unwrap();
            assert_eq!(p.pairs.len(), d / 2);
            assert_eq!(p.odd_center.is_some(), d % 2 == 1);
            let mut covered = 0;
            for (a, b) in &p.pairs {
                assert!((a.lo() + b.hi() - 1.0).abs() <= PAIRING_TOL);
                assert!((a.hi() + b.lo() - 1.0).abs() <= PAIRING_TOL);
                assert!((midpoint(a) + midpoint(b) - 1.0).abs() <= PAIRING_TOL);
                covered += 2;
            }
            covered += p.odd_center.is_some() as usize;
            assert_eq!(covered, d);
        }
    }

    #[test]
    fn midpoints() {
        let g = grid(4).unwrap();
        assert_eq!(midpoint(&g[0]), 0.125);
        assert_eq!(midpoint(&g[3]), 0.875);
        assert_eq!(midpoint(&grid(3).unwrap()[1]), 0.5);
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![1.0]).is_err());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.5, -0.5]).is_err());
        let w: std::result::Result<WeightVector, _> = serde_json::from_str("[0.25,0.75]");
        assert!(w.is_ok());
        let w: std::result::Result<WeightVector, _> = serde_json::from_str("[0.25,0.8]");
        assert!(w.is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::default().validate().is_ok());
        let bad = SamplerConfig {
            rho: 1.5,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let bad = SamplerConfig {
            p: 3,
            alpha: vec![1.0, 1.0],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SamplerConfig {
            alpha: vec![1.0, 0.0],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalise_sums_to_one_and_keeps_order(values in proptest::collection::vec(1e-6f64..1e6, 2..64)) {
                let w = normalise(&values).unwrap();
                let s: f64 = w.as_slice().iter().sum();
                prop_assert!((s - 1.0).abs() <= SIMPLEX_TOL);
                let argmax_in = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
                let max_out = w.as_slice().iter().cloned().fold(f64::MIN, f64::max);
                prop_assert_eq!(w[argmax_in], max_out);
            }
        }
    }
}
