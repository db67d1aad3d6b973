//! Weighted sum scalarisation: collapse `p` linear objectives into
//! `Σ λᵢ cᵢᵀx` and minimise it over the instance's feasible set.

mod instance;
mod lp;

pub use instance::{Backend, Bound, LpConstraints, ProblemInstance, Sense};
pub use lp::{solve_linear, LpOutcome, SolveStatus};

use serde::{Deserialize, Serialize};

use crate::domain::{ObjectivePoint, WeightVector};
use crate::error::{Error, Result};
use crate::samplers::WeightBatch;

/// Minimiser of one scalarised problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarSolution {
    pub x: Vec<f64>,
    pub y: ObjectivePoint,
    pub weight: WeightVector,
    pub status: SolveStatus,
}

impl ScalarSolution {
    /// A zero weight component only guarantees weak efficiency.
    pub fn weakly_efficient_only(&self) -> bool {
        !self.weight.is_interior()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Aggregated cost vector `Σᵢ λᵢ cᵢ`.
pub fn wsm_objective(weight: &WeightVector, instance: &ProblemInstance) -> Result<Vec<f64>> {
    if weight.dim() != instance.p() {
        return Err(Error::dim(format!(
            "weight has {} components, instance has {} objectives",
            weight.dim(),
            instance.p()
        )));
    }
    let mut agg = vec![0.0; instance.n()];
    for (lambda, row) in weight.as_slice().iter().zip(instance.objectives()) {
        for (a, c) in agg.iter_mut().zip(row) {
            *a += lambda * c;
        }
    }
    Ok(agg)
}

/// Scan a discrete feasible set; ties go to the lowest point index.
pub fn solve_discrete(instance: &ProblemInstance, weight: &WeightVector) -> Result<ScalarSolution> {
    let Backend::Discrete(points) = instance.backend() else {
        return Err(Error::config("solve_discrete needs a discrete instance"));
    };
    let cost = wsm_objective(weight, instance)?;
    let value = |x: &[f64]| -> f64 { cost.iter().zip(x).map(|(c, v)| c * v).sum() };
    let mut best = 0;
    let mut best_val = value(&points[0]);
    for (i, pt) in points.iter().enumerate().skip(1) {
        let v = value(pt);
        if v < best_val {
            best = i;
            best_val = v;
        }
    }
    let x = points[best].clone();
    Ok(ScalarSolution {
        y: ObjectivePoint(instance.image(&x)),
        x,
        weight: weight.clone(),
        status: SolveStatus::Optimal,
    })
}

pub fn solve_lp(instance: &ProblemInstance, weight: &WeightVector) -> Result<ScalarSolution> {
    let Backend::Lp(constraints) = instance.backend() else {
        return Err(Error::config("solve_lp needs an LP instance"));
    };
    let cost = wsm_objective(weight, instance)?;
    let out = solve_linear(&cost, constraints)?;
    let y = if out.status == SolveStatus::Optimal {
        ObjectivePoint(instance.image(&out.x))
    } else {
        ObjectivePoint(Vec::new())
    };
    Ok(ScalarSolution {
        x: out.x,
        y,
        weight: weight.clone(),
        status: out.status,
    })
}

/// Dispatch on the instance's backend.
pub fn solve(instance: &ProblemInstance, weight: &WeightVector) -> Result<ScalarSolution> {
    match instance.backend() {
        Backend::Discrete(_) => solve_discrete(instance, weight),
        Backend::Lp(_) => solve_lp(instance, weight),
    }
}

/// Solve every weight in `weights`, returning results in input order.
///
/// Up to `parallelism` worker threads split the batch into contiguous chunks;
/// the output does not depend on the thread count. The first failure (by
/// index) is reported as [`Error::Batch`].
pub fn solve_weights(
    instance: &ProblemInstance,
    weights: &[WeightVector],
    parallelism: usize,
) -> Result<Vec<ScalarSolution>> {
    let workers = parallelism.max(1).min(weights.len().max(1));
    let results: Vec<Result<ScalarSolution>> = if workers == 1 {
        weights.iter().map(|w| solve(instance, w)).collect()
    } else {
        let chunk = weights.len().div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = weights
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || part.iter().map(|w| solve(instance, w)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("solver thread panicked"))
                .collect()
        })
    };
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Batch {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

pub fn solve_batch(
    instance: &ProblemInstance,
    batch: &WeightBatch,
    parallelism: usize,
) -> Result<Vec<ScalarSolution>> {
    solve_weights(instance, &batch.vectors, parallelism)
}
