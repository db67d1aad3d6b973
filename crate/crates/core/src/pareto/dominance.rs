use crate::domain::ObjectivePoint;
use crate::error::{Error, Result};

/// Tolerance for "strictly better" and for treating two images as equal.
pub const DOMINANCE_TOL: f64 = 1e-9;

fn check_dims(a: &ObjectivePoint, b: &ObjectivePoint) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dim(format!(
            "cannot compare points of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `a ≤ b` componentwise with at least one strict `<` (minimisation).
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> Result<bool> {
    check_dims(a, b)?;
    Ok(dominates_unchecked(a.as_slice(), b.as_slice()))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if *x > y + DOMINANCE_TOL {
            return false;
        }
        if *x < y - DOMINANCE_TOL {
            strict = true;
        }
    }
    strict
}

/// `a < b` in every component.
pub fn strictly_dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> Result<bool> {
    check_dims(a, b)?;
    Ok(strictly_dominates_unchecked(a.as_slice(), b.as_slice()))
}

pub(crate) fn strictly_dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x < y - DOMINANCE_TOL)
}

/// Componentwise equality within [`DOMINANCE_TOL`].
pub fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DOMINANCE_TOL)
}

/// Nondominated subset, first occurrence kept among duplicates, input order preserved.
pub fn filter_nondominated(points: &[ObjectivePoint]) -> Result<Vec<ObjectivePoint>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    if let Some(bad) = points.iter().find(|p| p.dim() != first.dim()) {
        return Err(Error::dim(format!(
            "mixed dimensions {} and {} in point set",
            first.dim(),
            bad.dim()
        )));
    }
    let keep = |i: usize| {
        let pi = points[i].as_slice();
        let duplicate_earlier = points[..i].iter().any(|q| same_point(q.as_slice(), pi));
        !duplicate_earlier && !points.iter().any(|q| dominates_unchecked(q.as_slice(), pi))
    };
    Ok((0..points.len())
        .filter(|&i| keep(i))
        .map(|i| points[i].clone())
        .collect())
}

/// True when no point in `others` is strictly better than `p` in every objective.
pub fn is_weakly_nondominated(p: &ObjectivePoint, others: &[ObjectivePoint]) -> bool {
    !others
        .iter()
        .any(|q| strictly_dominates_unchecked(q.as_slice(), p.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(v: &[f64]) -> ObjectivePoint {
        ObjectivePoint(v.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&pt(&[1.0, 2.0]), &pt(&[2.0, 2.0])).unwrap());
        assert!(!dominates(&pt(&[1.0, 2.0]), &pt(&[1.0, 2.0])).unwrap());
        assert!(!dominates(&pt(&[1.0, 3.0]), &pt(&[2.0, 2.0])).unwrap());
        assert!(dominates(&pt(&[1.0]), &pt(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn strict_dominance_examples() {
        assert!(strictly_dominates(&pt(&[1.0, 1.0]), &pt(&[2.0, 2.0])).unwrap());
        assert!(!strictly_dominates(&pt(&[1.0, 2.0]), &pt(&[1.0, 3.0])).unwrap());
        assert!(!strictly_dominates(&pt(&[2.0, 1.0]), &pt(&[1.0, 2.0])).unwrap());
        assert!(strictly_dominates(&pt(&[1.0, 1.0]), &pt(&[2.0])).is_err());
    }

    #[test]
    fn tolerance_absorbs_noise() {
        assert!(!dominates(&pt(&[1.0, 2.0 - 1e-12]), &pt(&[1.0, 2.0])).unwrap());
        assert!(same_point(&[1.0, 2.0], &[1.0 + 1e-11, 2.0]));
    }

    #[test]
    fn filter_examples() {
        let pts = vec![pt(&[1.0, 2.0]), pt(&[2.0, 1.0]), pt(&[2.0, 2.0])];
        assert_eq!(
            filter_nondominated(&pts).unwrap(),
            vec![pt(&[1.0, 2.0]), pt(&[2.0, 1.0])]
        );
        assert!(filter_nondominated(&[]).unwrap().is_empty());
        let dup = vec![pt(&[1.0, 1.0]), pt(&[1.0, 1.0]), pt(&[0.0, 3.0])];
        assert_eq!(
            filter_nondominated(&dup).unwrap(),
            vec![pt(&[1.0, 1.0]), pt(&[0.0, 3.0])]
        );
        assert!(filter_nondominated(&[pt(&[1.0]), pt(&[1.0, 2.0])]).is_err());
    }

    #[test]
    fn filter_matches_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let pts: Vec<ObjectivePoint> = (0..100)
                .map(|_| ObjectivePoint((0..3).map(|_| rng.random_range(0.0..1.0)).collect()))
                .collect();
            let oracle: Vec<ObjectivePoint> = pts
                .iter()
                .filter(|p| {
                    !pts.iter().any(|q| {
                        let le = q.0.iter().zip(&p.0).all(|(a, b)| a <= b);
                        let lt = q.0.iter().zip(&p.0).any(|(a, b)| a < b);
                        le && lt
                    })
                })
                .cloned()
                .collect();
            assert_eq!(filter_nondominated(&pts).unwrap(), oracle);
        }
    }

    #[test]
    fn weak_nondominance() {
        let others = vec![pt(&[1.0, 1.0]), pt(&[0.0, 5.0])];
        assert!(is_weakly_nondominated(&pt(&[1.0, 3.0]), &others));
        assert!(!is_weakly_nondominated(&pt(&[2.0, 3.0]), &others));
    }

    fn small_point() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec((0i32..4).prop_map(f64::from), 3)
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_partial_order(a in small_point(), b in small_point(), c in small_point()) {
            prop_assert!(!dominates_unchecked(&a, &a));
            prop_assert!(!(dominates_unchecked(&a, &b) && dominates_unchecked(&b, &a)));
            if dominates_unchecked(&a, &b) && dominates_unchecked(&b, &c) {
                prop_assert!(dominates_unchecked(&a, &c));
            }
            if strictly_dominates_unchecked(&a, &b) {
                prop_assert!(dominates_unchecked(&a, &b));
            }
        }
    }
}
