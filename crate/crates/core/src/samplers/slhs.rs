//! Structured Latin hypercube sampling.
//!
//! For `p = 2` the grid cells are paired complementarily (cell `k` with cell
//! `d−1−k`) before sampling, so each normalised weight stays inside the cell
//! its raw value came from. For `p ≥ 3` the sampler draws from multisets of
//! cells whose midpoints sum to within `δ` of one.

use rand::seq::{index, SliceRandom};
use serde::{Deserialize, Serialize};

use crate::domain::{grid, normalise, pair_intervals, SamplerConfig, Subinterval, WeightVector};
use crate::error::{Error, Result};

use super::{rng_from_seed, Strategy, WeightBatch};

/// One structured pair: the source cells, the raw draws and the normalised weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlhsPair {
    pub cells: (Subinterval, Subinterval),
    pub raw: (f64, f64),
    pub weight: WeightVector,
}

/// Structured pairs for `p = 2`, drawing raw values through `draw`.
///
/// Draws are requested in pairing order: for every pair the lower cell and
/// then its complement, followed by the middle cell twice when `d` is odd.
/// Each returned value must lie strictly inside the cell it was drawn for.
pub fn slhs_p2_from_draws<F>(d: usize, mut draw: F) -> Result<Vec<SlhsPair>>
where
    F: FnMut(&Subinterval) -> f64,
{
    let pairing = pair_intervals(d)?;
    let cells: Vec<(Subinterval, Subinterval)> = pairing
        .pairs
        .iter()
        .copied()
        .chain(pairing.odd_center.map(|c| (c, c)))
        .collect();

    let mut take = |cell: &Subinterval| -> Result<f64> {
        let x = draw(cell);
        if !(x > cell.lo() && x < cell.hi()) {
            return Err(Error::Domain(format!(
                "draw {x} lies outside ({}, {})",
                cell.lo(),
                cell.hi()
            )));
        }
        Ok(x)
    };

    cells
        .into_iter()
        .map(|(a_cell, b_cell)| {
            let a = take(&a_cell)?;
            let b = take(&b_cell)?;
            Ok(SlhsPair {
                cells: (a_cell, b_cell),
                raw: (a, b),
                weight: normalise(&[a, b])?,
            })
        })
        .collect()
}

pub fn slhs_p2_pairs(d: usize, seed: u64) -> Result<Vec<SlhsPair>> {
    let mut rng = rng_from_seed(seed);
    slhs_p2_from_draws(d, |cell| cell.sample(&mut rng))
}

/// Structured bi-objective weights: `⌊d/2⌋` vectors, plus one when `d` is odd.
pub fn sample_slhs_p2(d: usize, seed: u64) -> Result<WeightBatch> {
    if d < 2 {
        return Err(Error::dim(format!("SLHS needs d >= 2, got {d}")));
    }
    let vectors = slhs_p2_pairs(d, seed)?
        .into_iter()
        .map(|p| p.weight)
        .collect();
    Ok(WeightBatch {
        vectors,
        strategy: Strategy::Slhs,
        config: SamplerConfig {
            p: 2,
            d,
            seed,
            ..Default::default()
        },
    })
}

/// Upper limit on how many admissible multisets are materialised before sampling.
const ENUMERATION_CAP: usize = 20_000_000;

/// Whether cell indices with index sum `sum` have midpoints summing into `[1−δ, 1+δ]`.
///
/// Cell `k` has midpoint `(2k+1)/(2d)`, so the midpoint sum is `(2·sum + p)/(2d)`.
fn admissible(sum: usize, p: usize, d: usize, delta: f64) -> bool {
    let twice_dev = (2 * sum + p) as f64 - 2.0 * d as f64;
    twice_dev.abs() <= 2.0 * d as f64 * delta * (1.0 + 1e-12) + 1e-12
}

/// All nondecreasing cell-index `p`-tuples satisfying the midpoint tolerance,
/// in lexicographic order.
pub fn admissible_multisets(p: usize, d: usize, delta: f64) -> Result<Vec<Vec<usize>>> {
    if p < 2 || d < 1 {
        return Err(Error::dim(format!(
            "need p >= 2 and d >= 1, got p={p}, d={d}"
        )));
    }
    if !(delta >= 0.0) {
        return Err(Error::config(format!("delta must be >= 0, got {delta}")));
    }
    let max_sum = p * (d - 1);
    let sums: Vec<usize> = (0..=max_sum)
        .filter(|&s| admissible(s, p, d, delta))
        .collect();
    let (Some(&lo), Some(&hi)) = (sums.first(), sums.last()) else {
        return Ok(Vec::new());
    };

    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(p);
    walk(p, d, lo, hi, delta, 0, 0, &mut stack, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    p: usize,
    d: usize,
    lo: usize,
    hi: usize,
    delta: f64,
    start: usize,
    sum: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let left = p - stack.len();
    if left == 0 {
        if admissible(sum, p, d, delta) {
            if out.len() >= ENUMERATION_CAP {
                return Err(Error::BudgetExceeded {
                    needed: out.len() as u128 + 1,
                    cap: ENUMERATION_CAP as u64,
                });
            }
            out.push(stack.clone());
        }
        return Ok(());
    }
    for k in start..d {
        // remaining slots take values in [k, d-1]
        if sum + left * k > hi {
            break;
        }
        if sum + k + (left - 1) * (d - 1) < lo {
            continue;
        }
        stack.push(k);
        walk(p, d, lo, hi, delta, k, sum + k, stack, out)?;
        stack.pop();
    }
    Ok(())
}

/// One structured `p`-tuple: the (permuted) cells, raw draws and the weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlhsTuple {
    pub cells: Vec<Subinterval>,
    pub raw: Vec<f64>,
    pub weight: WeightVector,
}

impl SlhsTuple {
    /// Sum of the raw draws before normalisation.
    pub fn raw_sum(&self) -> f64 {
        self.raw.iter().sum()
    }
}

pub fn slhs_general_tuples(
    p: usize,
    d: usize,
    delta: f64,
    budget: u64,
    seed: u64,
) -> Result<Vec<SlhsTuple>> {
    if p < 3 {
        return Err(Error::dim(format!("general SLHS is for p >= 3, got {p}")));
    }
    if d < 2 {
        return Err(Error::dim(format!("SLHS needs d >= 2, got {d}")));
    }
    if budget < 1 {
        return Err(Error::config("budget must be >= 1"));
    }
    let candidates = admissible_multisets(p, d, delta)?;
    if candidates.is_empty() {
        return Err(Error::EmptySelection { p, d, delta });
    }

    let mut rng = rng_from_seed(seed);
    let selected: Vec<&Vec<usize>> = if candidates.len() as u64 > budget {
        let mut idx = index::sample(&mut rng, candidates.len(), budget as usize).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| &candidates[i]).collect()
    } else {
        candidates.iter().collect()
    };

    let cells = grid(d)?;
    selected
        .into_iter()
        .map(|multiset| {
            let mut order = multiset.clone();
            order.shuffle(&mut rng);
            let picked: Vec<Subinterval> = order.iter().map(|&k| cells[k]).collect();
            let raw: Vec<f64> = picked.iter().map(|c| c.sample(&mut rng)).collect();
            let weight = normalise(&raw)?;
            Ok(SlhsTuple {
                cells: picked,
                raw,
                weight,
            })
        })
        .collect()
}

/// Structured weights for `p ≥ 3` (at most `budget` vectors).
pub fn sample_slhs_general(
    p: usize,
    d: usize,
    delta: f64,
    budget: u64,
    seed: u64,
) -> Result<WeightBatch> {
    let vectors = slhs_general_tuples(p, d, delta, budget, seed)?
        .into_iter()
        .map(|t| t.weight)
        .collect();
    Ok(WeightBatch {
        vectors,
        strategy: Strategy::Slhs,
        config: SamplerConfig {
            p,
            d,
            delta,
            budget,
            seed,
            ..Default::default()
        },
    })
}
