use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsm::pareto::{filter_nondominated, is_weakly_nondominated, Archive};
use wsm::samplers::{enumerate_uniform, sample_random};
use wsm::scalarise::{
    solve, solve_batch, solve_linear, LpConstraints, ProblemInstance, Sense, SolveStatus,
};
use wsm::{ObjectivePoint, SamplerConfig, WeightVector};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// min c·x, A x >= b, x >= 0 against its dual max b·y, Aᵀ y <= c, y >= 0.
#[test]
fn lp_strong_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    for _ in 0..300 {
        let n = rng.random_range(1..=5usize);
        let m = rng.random_range(1..=5usize);
        let a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..4.0)).collect();

        let primal = solve_linear(
            &c,
            &LpConstraints {
                a: a.clone(),
                b: b.clone(),
                sense: vec![Sense::Ge; m],
                bounds: vec![],
            },
        )
        .unwrap();
        let at: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
        let neg_b: Vec<f64> = b.iter().map(|v| -v).collect();
        let dual = solve_linear(
            &neg_b,
            &LpConstraints {
                a: at,
                b: c.clone(),
                sense: vec![Sense::Le; n],
                bounds: vec![],
            },
        )
        .unwrap();

        match (primal.status, dual.status) {
            (SolveStatus::Optimal, SolveStatus::Optimal) => {
                let p = primal.objective;
                let d = -dual.objective;
                assert!(
                    (p - d).abs() <= 1e-7 * p.abs().max(1.0),
                    "primal {p} dual {d}"
                );
                for (row, rhs) in a.iter().zip(&b) {
                    assert!(dot(row, &primal.x) >= rhs - 1e-7);
                }
                assert!(primal.x.iter().all(|&v| v >= -1e-9));
                checked += 1;
            }
            (SolveStatus::Unbounded, s) => assert_eq!(s, SolveStatus::Infeasible),
            (SolveStatus::Infeasible, s) => assert_ne!(s, SolveStatus::Optimal),
            (SolveStatus::Optimal, s) => panic!("primal optimal but dual {s}"),
        }
    }
    assert!(checked > 50, "only {checked} optimal pairs");
}

#[test]
fn lp_optimum_beats_feasible_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.random_range(2..=4usize);
        let m = rng.random_range(1..=4usize);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(0.0..2.0)).collect())
            .collect();
        let b: Vec<f64> = a.iter().map(|row| dot(row, &x0) + 0.5).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..0.0)).collect();
        let lp = LpConstraints {
            a: a.clone(),
            b: b.clone(),
            sense: vec![Sense::Le; m],
            bounds: vec![],
        };
        let out = solve_linear(&c, &lp).unwrap();
        if out.status == SolveStatus::Unbounded {
            continue;
        }
        assert_eq!(out.status, SolveStatus::Optimal);
        for _ in 0..50 {
            let scale = rng.random_range(0.0..1.0);
            let x: Vec<f64> = x0.iter().map(|v| v * scale).collect();
            assert!(out.objective <= dot(&c, &x) + 1e-9);
        }
    }
}

fn discrete_instance(seed: u64, p: usize, count: usize) -> (ProblemInstance, Vec<ObjectivePoint>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 3;
    let objectives: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let points: Vec<Vec<f64>> = (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(-3..=3) as f64).collect())
        .collect();
    let images = points
        .iter()
        .map(|x| ObjectivePoint(objectives.iter().map(|c| dot(c, x)).collect()))
        .collect();
    (
        ProblemInstance::discrete(objectives, points).unwrap(),
        images,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_weights_give_nondominated_images(seed in any::<u64>(), p in 2usize..=4, count in 1usize..80) {
        let (instance, images) = discrete_instance(seed, p, count);
        let front = filter_nondominated(&images).unwrap();
        let config = SamplerConfig { p, seed, ..SamplerConfig::default() };
        let batch = sample_random(p, 20, &config).unwrap();
        for w in batch.iter().filter(|w| w.is_interior()) {
            let sol = solve(&instance, w).unwrap();
            prop_assert!(front.iter().any(|f| f.distance(&sol.y) <= 1e-9));
        }
    }

    #[test]
    fn lattice_weights_give_weakly_nondominated_images(seed in any::<u64>(), p in 2usize..=3, count in 1usize..80) {
        let (instance, images) = discrete_instance(seed, p, count);
        for w in enumerate_uniform(p, 3).unwrap().iter() {
            let sol = solve(&instance, w).unwrap();
            prop_assert!(is_weakly_nondominated(&sol.y, &images));
        }
    }
}

#[test]
fn batch_archive_ratio() {
    let (instance, _) = discrete_instance(3, 2, 40);
    let batch = enumerate_uniform(2, 50).unwrap();
    let serial = solve_batch(&instance, &batch, 1).unwrap();
    let parallel = solve_batch(&instance, &batch, 6).unwrap();
    assert_eq!(serial, parallel);
    let mut archive = Archive::new();
    for s in &serial {
        archive.insert(s);
    }
    let r = archive.redundancy_ratio().unwrap();
    assert!(r > 0.0 && r <= 1.0);
    assert_eq!(archive.solved_count(), 51);
    let w = WeightVector::pair(0.5).unwrap();
    assert_eq!(solve(&instance, &w).unwrap(), serial[25]);
}
