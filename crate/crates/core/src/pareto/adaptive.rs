//! Structured adaptive weight refinement.
//!
//! The search starts from the uniform-increment lattice and repeatedly
//! refines the weight-space cells whose corner images are farther apart than
//! `tau` (Euclidean distance). It stops when no cell qualifies, when the
//! distinct/solved ratio drops below `rho` after a refinement round, or when
//! `max_depth` rounds have run.
//!
//! For two objectives a cell is an interval of λ₁ and is split into `d` equal
//! subintervals. For `p ≥ 3` the initial lattice is triangulated into simplex
//! cells (Kuhn triangulation in cumulative coordinates); a qualifying cell
//! gets its weight centroid solved and is split into `p` cells around it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::archive::{Archive, InsertReport};
use crate::domain::{ObjectivePoint, Subinterval, WeightVector, DEFAULT_BUDGET, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};
use crate::samplers::enumerate_uniform_capped;
use crate::scalarise::{solve_weights, ProblemInstance, ScalarSolution, SolveStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveParams {
    /// Initial depth, and the split factor for bi-objective refinement.
    pub d: usize,
    pub tau: f64,
    pub rho: f64,
    pub max_depth: usize,
    /// Worker threads per round of solves.
    pub jobs: usize,
    /// Cap on the total number of scalarised solves.
    pub budget: u64,
}

impl AdaptiveParams {
    pub fn new(d: usize, tau: f64, rho: f64, max_depth: usize) -> Self {
        AdaptiveParams {
            d,
            tau,
            rho,
            max_depth,
            jobs: 1,
            budget: DEFAULT_BUDGET,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::config("d must be >= 1"));
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
        if self.max_depth < 1 {
            return Err(Error::config("max_depth must be >= 1"));
        }
        Ok(())
    }
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        Self::new(2, 0.0, 0.0, DEFAULT_MAX_DEPTH)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    NoGaps,
    Rho,
    MaxDepth,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::NoGaps => "no-gaps",
            Termination::Rho => "rho",
            Termination::MaxDepth => "max-depth",
        })
    }
}

/// A weight-space cell considered for refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell {
    Interval(Subinterval),
    Simplex(Vec<WeightVector>),
}

/// A cell that was refined, with the farthest pair of corner images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub round: usize,
    pub cell: Cell,
    pub images: (ObjectivePoint, ObjectivePoint),
    pub gap: f64,
}

/// One scalarised solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub round: usize,
    pub weight: WeightVector,
    pub image: ObjectivePoint,
    pub status: SolveStatus,
    pub report: InsertReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveOutcome {
    pub archive: Archive,
    pub termination: Termination,
    /// Refinement rounds executed (the initial lattice is round 0).
    pub rounds: usize,
    pub audit: Vec<AuditRecord>,
    pub subdivisions: Vec<GapRecord>,
}

struct Search<'a> {
    instance: &'a ProblemInstance,
    params: &'a AdaptiveParams,
    solutions: Vec<ScalarSolution>,
    cache: HashMap<Vec<u64>, usize>,
    archive: Archive,
    audit: Vec<AuditRecord>,
    subdivisions: Vec<GapRecord>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a ProblemInstance, params: &'a AdaptiveParams) -> Self {
        Search {
            instance,
            params,
            solutions: Vec::new(),
            cache: HashMap::new(),
            archive: Archive::new(),
            audit: Vec::new(),
            subdivisions: Vec::new(),
        }
    }

    fn key(w: &WeightVector) -> Vec<u64> {
        w.as_slice().iter().map(|x| x.to_bits()).collect()
    }

    /// Solve the not-yet-seen weights, insert in order, return solution indices.
    fn solve_round(&mut self, round: usize, weights: Vec<WeightVector>) -> Result<Vec<usize>> {
        let mut fresh = Vec::new();
        let mut pending: HashMap<Vec<u64>, usize> = HashMap::new();
        for w in &weights {
            let k = Self::key(w);
            if !self.cache.contains_key(&k) && !pending.contains_key(&k) {
                pending.insert(k, self.solutions.len() + fresh.len());
                fresh.push(w.clone());
            }
        }
        let total = self.solutions.len() as u64 + fresh.len() as u64;
        if total > self.params.budget {
            return Err(Error::BudgetExceeded {
                needed: total as u128,
                cap: self.params.budget,
            });
        }
        let solved =
            solve_weights(self.instance, &fresh, self.params.jobs).map_err(|e| match e {
                Error::Batch { index, source } => Error::Solve {
                    weight: fresh[index].as_slice().to_vec(),
                    source,
                },
                other => other,
            })?;
        for sol in solved {
            let report = self.archive.insert(&sol);
            self.audit.push(AuditRecord {
                round,
                weight: sol.weight.clone(),
                image: sol.y.clone(),
                status: sol.status,
                report,
            });
            self.cache
                .insert(Self::key(&sol.weight), self.solutions.len());
            self.solutions.push(sol);
        }
        Ok(weights.iter().map(|w| self.cache[&Self::key(w)]).collect())
    }

    /// Largest pairwise image distance among `corners`, with the attaining pair.
    /// `None` when any corner has no optimal image.
    fn widest_gap(&self, corners: &[usize]) -> Option<(f64, usize, usize)> {
        if corners.iter().any(|&i| !self.solutions[i].is_optimal()) {
            return None;
        }
        let mut best = (0.0, corners[0], corners[0]);
        for (a, &i) in corners.iter().enumerate() {
            for &j in &corners[a + 1..] {
                let g = self.solutions[i].y.distance(&self.solutions[j].y);
                if g > best.0 {
                    best = (g, i, j);
                }
            }
        }
        Some(best)
    }

    fn qualifies(&self, corners: &[usize]) -> Option<(f64, usize, usize)> {
        self.widest_gap(corners)
            .filter(|(g, _, _)| *g > self.params.tau)
    }

    fn below_rho(&self) -> bool {
        self.archive
            .redundancy_ratio()
            .map(|r| r < self.params.rho)
            .unwrap_or(false)
    }

    fn finish(self, termination: Termination, rounds: usize) -> AdaptiveOutcome {
        AdaptiveOutcome {
            archive: self.archive,
            termination,
            rounds,
            audit: self.audit,
            subdivisions: self.subdivisions,
        }
    }
}

/// Adaptive refinement for two objectives.
pub fn adaptive_search_p2(
    instance: &ProblemInstance,
    params: &AdaptiveParams,
) -> Result<AdaptiveOutcome> {
    params.validate()?;
    if instance.p() != 2 {
        return Err(Error::dim(format!(
            "bi-objective search needs p = 2, got {}",
            instance.p()
        )));
    }
    let d = params.d;
    let split = d.max(2);
    let mut search = Search::new(instance, params);

    let lattice: Vec<f64> = (0..=d).map(|k| k as f64 / d as f64).collect();
    let weights = lattice
        .iter()
        .map(|&l| WeightVector::pair(l))
        .collect::<Result<Vec<_>>>()?;
    let ids = search.solve_round(0, weights)?;
    // (lo, hi, lo solution, hi solution)
    let mut frontier: Vec<(f64, f64, usize, usize)> = (0..d)
        .map(|k| (lattice[k], lattice[k + 1], ids[k], ids[k + 1]))
        .collect();

    for round in 1..=params.max_depth {
        let mut new_weights = Vec::new();
        let mut refined = Vec::new();
        for &(lo, hi, a, b) in &frontier {
            let Some((gap, _, _)) = search.qualifies(&[a, b]) else {
                continue;
            };
            search.subdivisions.push(GapRecord {
                round,
                cell: Cell::Interval(Subinterval::new(lo, hi)?),
                images: (search.solutions[a].y.clone(), search.solutions[b].y.clone()),
                gap,
            });
            let interior: Vec<f64> = (1..split)
                .map(|k| lo + (hi - lo) * (k as f64 / split as f64))
                .collect();
            for &l in &interior {
                new_weights.push(WeightVector::pair(l)?);
            }
            refined.push((lo, hi, a, b, interior));
        }
        if refined.is_empty() {
            return Ok(search.finish(Termination::NoGaps, round - 1));
        }

        let ids = search.solve_round(round, new_weights)?;
        let mut ids = ids.into_iter();
        frontier.clear();
        for (lo, hi, a, b, interior) in refined {
            let mut prev = (lo, a);
            for l in interior {
                let id = ids.next().expect("one id per interior weight");
                frontier.push((prev.0, l, prev.1, id));
                prev = (l, id);
            }
            frontier.push((prev.0, hi, prev.1, b));
        }

        if search.below_rho() {
            return Ok(search.finish(Termination::Rho, round));
        }
    }

    let open = frontier
        .iter()
        .any(|&(_, _, a, b)| search.qualifies(&[a, b]).is_some());
    let reason = if open {
        Termination::MaxDepth
    } else {
        Termination::NoGaps
    };
    Ok(search.finish(reason, params.max_depth))
}

/// Permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// Kuhn triangulation of the depth-`d` simplex lattice.
///
/// Lattice weights `(k₁, …, k_p)/d` are mapped to cumulative coordinates
/// `zᵢ = k₁ + … + kᵢ`, `0 ≤ z₁ ≤ … ≤ z_{p−1} ≤ d`. Each unit cube of that grid
/// is cut into Kuhn simplices; those lying in the ordered region are exactly
/// `d^{p−1}` cells. Each cell is returned as `p` integer compositions of `d`.
pub fn lattice_cells(p: usize, d: usize) -> Vec<Vec<Vec<usize>>> {
    let k = p - 1;
    let perms = permutations(k);
    let mut cells = Vec::new();
    let mut base = vec![0usize; k];
    let ordered =
        |z: &[usize]| z.windows(2).all(|w| w[0] <= w[1]) && z.last().is_none_or(|&l| l <= d);
    loop {
        for perm in &perms {
            let mut z = base.clone();
            let mut verts = vec![z.clone()];
            for &axis in perm {
                z[axis] += 1;
                verts.push(z.clone());
            }
            if verts.iter().all(|v| ordered(v)) {
                cells.push(
                    verts
                        .iter()
                        .map(|z| {
                            let mut comp = Vec::with_capacity(p);
                            let mut prev = 0;
                            for &zi in z {
                                comp.push(zi - prev);
                                prev = zi;
                            }
                            comp.push(d - prev);
                            comp
                        })
                        .collect(),
                );
            }
        }
        // next base in {0..d-1}^k
        let mut i = k;
        loop {
            if i == 0 {
                return cells;
            }
            i -= 1;
            base[i] += 1;
            if base[i] < d {
                break;
            }
            base[i] = 0;
        }
    }
}

fn centroid(corners: &[&WeightVector]) -> Result<WeightVector> {
    let p = corners[0].dim();
    let mut c = vec![0.0; p];
    for w in corners {
        for (a, b) in c.iter_mut().zip(w.as_slice()) {
            *a += b;
        }
    }
    let total: f64 = c.iter().sum();
    WeightVector::new(c.into_iter().map(|x| x / total).collect())
}

/// Adaptive refinement for three or more objectives.
pub fn adaptive_search_general(
    instance: &ProblemInstance,
    params: &AdaptiveParams,
) -> Result<AdaptiveOutcome> {
    params.validate()?;
    let p = instance.p();
    if p < 3 {
        return Err(Error::dim(format!(
            "simplex-cell search needs p >= 3, got {p}"
        )));
    }
    let d = params.d;
    let mut search = Search::new(instance, params);

    let lattice = enumerate_uniform_capped(p, d, params.budget)?;
    let ids = search.solve_round(0, lattice.vectors.clone())?;
    let index_of: HashMap<Vec<usize>, usize> = lattice
        .iter()
        .zip(&ids)
        .map(|(w, &id)| {
            let comp = w
                .as_slice()
                .iter()
                .map(|x| (x * d as f64).round() as usize)
                .collect();
            (comp, id)
        })
        .collect();
    let mut frontier: Vec<Vec<usize>> = lattice_cells(p, d)
        .into_iter()
        .map(|cell| cell.iter().map(|comp| index_of[comp]).collect())
        .collect();

    for round in 1..=params.max_depth {
        let mut centroids = Vec::new();
        let mut refined = Vec::new();
        for cell in &frontier {
            let Some((gap, i, j)) = search.qualifies(cell) else {
                continue;
            };
            let corners: Vec<&WeightVector> =
                cell.iter().map(|&v| &search.solutions[v].weight).collect();
            centroids.push(centroid(&corners)?);
            search.subdivisions.push(GapRecord {
                round,
                cell: Cell::Simplex(corners.into_iter().cloned().collect()),
                images: (search.solutions[i].y.clone(), search.solutions[j].y.clone()),
                gap,
            });
            refined.push(cell.clone());
        }
        if refined.is_empty() {
            return Ok(search.finish(Termination::NoGaps, round - 1));
        }

        let ids = search.solve_round(round, centroids)?;
        frontier.clear();
        for (cell, c) in refined.into_iter().zip(ids) {
            for slot in 0..cell.len() {
                let mut sub = cell.clone();
                sub[slot] = c;
                frontier.push(sub);
            }
        }

        if search.below_rho() {
            return Ok(search.finish(Termination::Rho, round));
        }
    }

    let open = frontier.iter().any(|cell| search.qualifies(cell).is_some());
    let reason = if open {
        Termination::MaxDepth
    } else {
        Termination::NoGaps
    };
    Ok(search.finish(reason, params.max_depth))
}

/// Dispatch on the number of objectives.
pub fn adaptive_search(
    instance: &ProblemInstance,
    params: &AdaptiveParams,
) -> Result<AdaptiveOutcome> {
    if instance.p() == 2 {
        adaptive_search_p2(instance, params)
    } else {
        adaptive_search_general(instance, params)
    }
}
