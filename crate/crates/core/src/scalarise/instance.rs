use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row relation of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

/// Variable bounds; `None` means unbounded on that side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound(pub Option<f64>, pub Option<f64>);

impl Bound {
    pub const NONNEGATIVE: Bound = Bound(Some(0.0), None);
    pub const FREE: Bound = Bound(None, None);

    pub fn lower(&self) -> Option<f64> {
        self.0
    }

    pub fn upper(&self) -> Option<f64> {
        self.1
    }
}

/// Polyhedral feasible set `{x : A x (sense) b, lower ≤ x ≤ upper}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpConstraints {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub sense: Vec<Sense>,
    /// One entry per variable; omitted means every variable is nonnegative.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<Bound>,
}

impl LpConstraints {
    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn bound(&self, j: usize) -> Bound {
        self.bounds.get(j).copied().unwrap_or(Bound::NONNEGATIVE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    /// Explicit finite feasible set.
    Discrete(Vec<Vec<f64>>),
    Lp(LpConstraints),
}

/// A multi-objective linear problem `min (c₁ᵀx, …, c_pᵀx)` over a feasible set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct ProblemInstance {
    p: usize,
    n: usize,
    objectives: Vec<Vec<f64>>,
    backend: Backend,
}

impl ProblemInstance {
    pub fn new(objectives: Vec<Vec<f64>>, backend: Backend) -> Result<Self> {
        let p = objectives.len();
        let n = objectives.first().map_or(0, Vec::len);
        if p < 2 {
            return Err(Error::dim(format!("need at least 2 objectives, got {p}")));
        }
        if n < 1 {
            return Err(Error::dim("need at least 1 decision variable"));
        }
        if objectives.iter().any(|row| row.len() != n) {
            return Err(Error::dim("objective rows have inconsistent lengths"));
        }
        if objectives.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Domain(
                "objective coefficients must be finite".into(),
            ));
        }
        match &backend {
            Backend::Discrete(points) => {
                if points.is_empty() {
                    return Err(Error::dim("discrete feasible set is empty"));
                }
                if let Some((i, pt)) = points.iter().enumerate().find(|(_, pt)| pt.len() != n) {
                    return Err(Error::dim(format!(
                        "point {i} has dimension {}, expected {n}",
                        pt.len()
                    )));
                }
            }
            Backend::Lp(lp) => {
                let m = lp.rows();
                if m < 1 {
                    return Err(Error::dim("LP needs at least one constraint row"));
                }
                if lp.b.len() != m || lp.sense.len() != m {
                    return Err(Error::dim(format!(
                        "LP has {m} rows but {} rhs entries and {} senses",
                        lp.b.len(),
                        lp.sense.len()
                    )));
                }
                if let Some(i) = lp.a.iter().position(|row| row.len() != n) {
                    return Err(Error::dim(format!(
                        "constraint row {i} does not have {n} columns"
                    )));
                }
                if !lp.bounds.is_empty() && lp.bounds.len() != n {
                    return Err(Error::dim(format!(
                        "{} bounds given for {n} variables",
                        lp.bounds.len()
                    )));
                }
                for (j, bd) in lp.bounds.iter().enumerate() {
                    if let (Some(lo), Some(hi)) = (bd.0, bd.1) {
                        if lo > hi {
                            return Err(Error::Domain(format!(
                                "variable {j} has lower bound {lo} > upper {hi}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(ProblemInstance {
            p,
            n,
            objectives,
            backend,
        })
    }

    pub fn discrete(objectives: Vec<Vec<f64>>, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(objectives, Backend::Discrete(points))
    }

    pub fn lp(objectives: Vec<Vec<f64>>, constraints: LpConstraints) -> Result<Self> {
        Self::new(objectives, Backend::Lp(constraints))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn objectives(&self) -> &[Vec<f64>] {
        &self.objectives
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// `c(x) = (c₁ᵀx, …, c_pᵀx)`.
    pub fn image(&self, x: &[f64]) -> Vec<f64> {
        self.objectives
            .iter()
            .map(|c| c.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("malformed instance: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialises")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// On-disk layout of an instance document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    p: usize,
    n: usize,
    objectives: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lp: Option<LpConstraints>,
}

impl TryFrom<InstanceFile> for ProblemInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let backend = match (f.points, f.lp) {
            (Some(points), None) => Backend::Discrete(points),
            (None, Some(lp)) => Backend::Lp(lp),
            _ => {
                return Err(Error::config(
                    "instance needs exactly one of `points` or `lp`",
                ))
            }
        };
        let inst = ProblemInstance::new(f.objectives, backend)?;
        if inst.p != f.p || inst.n != f.n {
            return Err(Error::dim(format!(
                "declared p={}, n={} but objectives are {}x{}",
                f.p, f.n, inst.p, inst.n
            )));
        }
        Ok(inst)
    }
}

impl From<ProblemInstance> for InstanceFile {
    fn from(inst: ProblemInstance) -> Self {
        let (points, lp) = match inst.backend {
            Backend::Discrete(pts) => (Some(pts), None),
            Backend::Lp(lp) => (None, Some(lp)),
        };
        InstanceFile {
            p: inst.p,
            n: inst.n,
            objectives: inst.objectives,
            points,
            lp,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_discrete_document() {
        let doc = r#"{"p": 2, "n": 2, "objectives": [[1, 0], [0, 1]], "points": [[1, 2], [2, 1]]}"#;
        let inst = ProblemInstance::from_json(doc).unwrap();
        assert_eq!(inst.p(), 2);
        assert_eq!(inst.image(&[3.0, 4.0]), vec![3.0, 4.0]);
        assert!(matches!(inst.backend(), Backend::Discrete(p) if p.len() == 2));
    }

    #[test]
    fn parses_lp_document() {
        let doc = r#"{
            "p": 2, "n": 2,
            "objectives": [[-1, 0], [0, -1]],
            "lp": {"A": [[1, 1]], "b": [1], "sense": ["<="], "bounds": [[0, null], [0, 5]]}
        }"#;
        let inst = ProblemInstance::from_json(doc).unwrap();
        let Backend::Lp(lp) = inst.backend() else {
            panic!()
        };
        assert_eq!(lp.sense, vec![Sense::Le]);
        assert_eq!(lp.bound(1), Bound(Some(0.0), Some(5.0)));
        let back = ProblemInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn default_bounds_are_nonnegative() {
        let lp = LpConstraints {
            a: vec![vec![1.0]],
            b: vec![1.0],
            sense: vec![Sense::Ge],
            bounds: vec![],
        };
        assert_eq!(lp.bound(0), Bound::NONNEGATIVE);
    }

    #[test]
    fn rejects_malformed() {
        let bad = [
            r#"{"p": 2, "n": 2, "objectives": [[1, 0], [0, 1]]}"#,
            r#"{"p": 3, "n": 2, "objectives": [[1, 0], [0, 1]], "points": [[0, 0]]}"#,
            r#"{"p": 2, "n": 2, "objectives": [[1, 0], [0, 1]], "points": []}"#,
            r#"{"p": 2, "n": 2, "objectives": [[1, 0], [0, 1]], "points": [[0, 0, 1]]}"#,
            r#"{"p": 1, "n": 2, "objectives": [[1, 0]], "points": [[0, 0]]}"#,
            r#"{"p": 2, "n": 1, "objectives": [[1], [1]], "lp": {"A": [], "b": [], "sense": []}}"#,
            r#"{"p": 2, "n": 1, "objectives": [[1], [1]], "lp": {"A": [[1]], "b": [1], "sense": ["<"]}}"#,
            r#"{"p": 2, "n": 1, "objectives": [[1], [1]], "lp": {"A": [[1]], "b": [1], "sense": ["<="], "bounds": [[2, 1]]}}"#,
            r#"not json"#,
        ];
        for doc in bad {
            assert!(ProblemInstance::from_json(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn serialised_values_round_trip_exactly() {
        let pts = vec![
            vec![0.1 + 0.2, 1.0 / 3.0],
            vec![std::f64::consts::PI, -1e-300],
        ];
        let inst = ProblemInstance::discrete(vec![vec![1.0, 0.0], vec![0.0, 1.0]], pts).unwrap();
        assert_eq!(ProblemInstance::from_json(&inst.to_json()).unwrap(), inst);
    }
}
