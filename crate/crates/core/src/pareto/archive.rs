use serde::{Deserialize, Serialize};

use super::dominance::{dominates_unchecked, same_point};
use crate::domain::{ObjectivePoint, WeightVector};
use crate::error::{Error, Result};
use crate::scalarise::ScalarSolution;

/// Outcome of offering one solution to the archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InsertReport {
    New,
    /// Same image as an existing entry; its weight was merged into that entry.
    Duplicate,
    Dominated,
    /// Added, evicting this many entries it dominates.
    Evicted(usize),
    /// The solve did not produce an optimal image (unbounded or infeasible).
    NotOptimal,
}

impl std::fmt::Display for InsertReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InsertReport::New => f.write_str("new"),
            InsertReport::Duplicate => f.write_str("duplicate"),
            InsertReport::Dominated => f.write_str("dominated"),
            InsertReport::Evicted(k) => write!(f, "evicted-{k}"),
            InsertReport::NotOptimal => f.write_str("not-optimal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub point: ObjectivePoint,
    /// Every weight whose solve returned this image.
    pub weights: Vec<WeightVector>,
    pub x: Vec<f64>,
}

/// Running approximation of the nondominated set plus solve accounting.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    solved_count: usize,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn points(&self) -> Vec<ObjectivePoint> {
        self.entries.iter().map(|e| e.point.clone()).collect()
    }

    /// Total scalarised problems solved.
    pub fn solved_count(&self) -> usize {
        self.solved_count
    }

    /// Distinct nondominated images currently held.
    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    pub fn insert(&mut self, solution: &ScalarSolution) -> InsertReport {
        self.solved_count += 1;
        if !solution.is_optimal() {
            return InsertReport::NotOptimal;
        }
        let y = solution.y.as_slice();
        if let Some(first) = self.entries.first() {
            assert_eq!(
                first.point.dim(),
                y.len(),
                "archive and image dimensions differ"
            );
        }

        if let Some(entry) = self
            .entries
            .iter_mut()
            .find(|e| same_point(e.point.as_slice(), y))
        {
            entry.weights.push(solution.weight.clone());
            return InsertReport::Duplicate;
        }
        if self
            .entries
            .iter()
            .any(|e| dominates_unchecked(e.point.as_slice(), y))
        {
            return InsertReport::Dominated;
        }
        let before = self.entries.len();
        self.entries
            .retain(|e| !dominates_unchecked(y, e.point.as_slice()));
        let evicted = before - self.entries.len();
        self.entries.push(ArchiveEntry {
            point: solution.y.clone(),
            weights: vec![solution.weight.clone()],
            x: solution.x.clone(),
        });
        if evicted > 0 {
            InsertReport::Evicted(evicted)
        } else {
            InsertReport::New
        }
    }

    /// `distinct / solved`.
    pub fn redundancy_ratio(&self) -> Result<f64> {
        if self.solved_count == 0 {
            return Err(Error::EmptyArchive);
        }
        Ok(self.distinct_count() as f64 / self.solved_count as f64)
    }
}

pub fn archive_insert(archive: &mut Archive, solution: &ScalarSolution) -> InsertReport {
    archive.insert(solution)
}

pub fn redundancy_ratio(archive: &Archive) -> Result<f64> {
    archive.redundancy_ratio()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::filter_nondominated;
    use crate::scalarise::SolveStatus;
    use proptest::prelude::*;

    fn sol(y: &[f64]) -> ScalarSolution {
        ScalarSolution {
            x: y.to_vec(),
            y: ObjectivePoint(y.to_vec()),
            weight: WeightVector::new(vec![0.5, 0.5]).unwrap(),
            status: SolveStatus::Optimal,
        }
    }

    #[test]
    fn eviction() {
        let mut a = Archive::new();
        assert_eq!(a.insert(&sol(&[2.0, 2.0])), InsertReport::New);
        assert_eq!(a.insert(&sol(&[1.0, 1.0])), InsertReport::Evicted(1));
        assert_eq!(a.distinct_count(), 1);
        assert_eq!(a.solved_count(), 2);
    }

    #[test]
    fn dominated_is_rejected() {
        let mut a = Archive::new();
        a.insert(&sol(&[1.0, 1.0]));
        assert_eq!(a.insert(&sol(&[2.0, 2.0])), InsertReport::Dominated);
        assert_eq!(a.distinct_count(), 1);
        assert_eq!(a.solved_count(), 2);
    }

    #[test]
    fn duplicates_merge_weights() {
        let mut a = Archive::new();
        a.insert(&sol(&[1.0, 3.0]));
        let mut s = sol(&[1.0 + 1e-12, 3.0]);
        s.weight = WeightVector::new(vec![0.9, 0.1]).unwrap();
        assert_eq!(a.insert(&s), InsertReport::Duplicate);
        assert_eq!(a.distinct_count(), 1);
        assert_eq!(a.entries()[0].weights.len(), 2);
        assert_eq!(a.redundancy_ratio().unwrap(), 0.5);
    }

    #[test]
    fn not_optimal_counts_as_solved() {
        let mut a = Archive::new();
        let mut s = sol(&[]);
        s.status = SolveStatus::Unbounded;
        assert_eq!(a.insert(&s), InsertReport::NotOptimal);
        assert_eq!(a.solved_count(), 1);
        assert_eq!(a.redundancy_ratio().unwrap(), 0.0);
    }

    #[test]
    fn ratios() {
        assert_eq!(Archive::new().redundancy_ratio(), Err(Error::EmptyArchive));
        let mut a = Archive::new();
        for y in [[1.0, 5.0], [2.0, 4.0], [3.0, 3.0], [4.0, 2.0], [5.0, 1.0]] {
            a.insert(&sol(&y));
        }
        assert_eq!(a.redundancy_ratio().unwrap(), 1.0);
        let mut a = Archive::new();
        for _ in 0..4 {
            a.insert(&sol(&[1.0, 1.0]));
        }
        assert_eq!(a.redundancy_ratio().unwrap(), 0.25);
    }

    fn sorted(mut v: Vec<ObjectivePoint>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        v.into_iter().map(|p| p.0).collect()
    }

    proptest! {
        #[test]
        fn final_set_equals_batch_filter(points in proptest::collection::vec(
            proptest::collection::vec((0i32..6).prop_map(f64::from), 3), 1..40)) {
            let mut a = Archive::new();
            for p in &points {
                a.insert(&sol(p));
                let r = a.redundancy_ratio().unwrap();
                prop_assert!((0.0..=1.0).contains(&r));
            }
            let images: Vec<ObjectivePoint> = points.iter().map(|p| ObjectivePoint(p.clone())).collect();
            prop_assert_eq!(sorted(a.points()), sorted(filter_nondominated(&images).unwrap()));
            prop_assert_eq!(a.solved_count(), points.len());
            let pts = a.points();
            for p in &pts {
                for q in &pts {
                    prop_assert!(!dominates_unchecked(p.as_slice(), q.as_slice()));
                }
            }
        }
    }
}
