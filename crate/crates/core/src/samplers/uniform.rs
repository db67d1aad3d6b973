use crate::domain::{SamplerConfig, WeightVector, DEFAULT_BUDGET};
use crate::error::{Error, Result};

use super::{Strategy, WeightBatch};

/// Number of lattice weights with components in `{0, 1/d, …, 1}`:
/// `C(d+p−1, p−1)`.
pub fn count_uniform(p: usize, d: usize) -> Result<u64> {
    if p < 2 {
        return Err(Error::dim(format!("p must be >= 2, got {p}")));
    }
    if d < 1 {
        return Err(Error::dim("d must be >= 1"));
    }
    binomial((d + p - 1) as u64, (p - 1) as u64)
        .ok_or_else(|| Error::Overflow(format!("C({}, {})", d + p - 1, p - 1)))
}

/// `C(n, k)` or `None` when it does not fit in a `u64`.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n-k+i) / i is exact at every step
        acc = acc.checked_mul((n - k + i) as u128)? / i as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `log₁₀ C(d+p−1, p−1)`, usable beyond the `u64` range.
pub fn log10_count_uniform(p: usize, d: usize) -> f64 {
    let n = (d + p - 1) as f64;
    let k = (p - 1).min(d);
    (1..=k)
        .map(|i| ((n - k as f64 + i as f64) / i as f64).log10())
        .sum()
}

pub fn enumerate_uniform(p: usize, d: usize) -> Result<WeightBatch> {
    enumerate_uniform_capped(p, d, DEFAULT_BUDGET)
}

/// All lattice weights in lexicographic order of `(λ₁, …, λ_{p−1})`.
pub fn enumerate_uniform_capped(p: usize, d: usize, budget: u64) -> Result<WeightBatch> {
    let count = match count_uniform(p, d) {
        Ok(c) => c,
        Err(Error::Overflow(_)) => {
            return Err(Error::BudgetExceeded {
                needed: u128::MAX,
                cap: budget,
            })
        }
        Err(e) => return Err(e),
    };
    if count > budget {
        return Err(Error::BudgetExceeded {
            needed: count as u128,
            cap: budget,
        });
    }

    let df = d as f64;
    let mut vectors = Vec::with_capacity(count as usize);
    let mut ks = vec![0usize; p - 1];
    let mut used = 0usize;
    loop {
        let mut w: Vec<f64> = ks.iter().map(|&k| k as f64 / df).collect();
        w.push((d - used) as f64 / df);
        vectors.push(WeightVector::new(w)?);

        // odometer step over nondecreasing-budget tuples
        let mut i = p - 1;
        loop {
            if i == 0 {
                debug_assert_eq!(vectors.len() as u64, count);
                return Ok(WeightBatch {
                    vectors,
                    strategy: Strategy::UniformIncrement,
                    config: SamplerConfig {
                        p,
                        d,
                        budget,
                        ..Default::default()
                    },
                });
            }
            i -= 1;
            if used < d {
                ks[i] += 1;
                used += 1;
                break;
            }
            used -= ks[i];
            ks[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Nested loops over (λ₁..λ_{p−1}) ∈ {0..d}^{p−1}, discarding negative λ_p.
    fn brute_force(p: usize, d: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let total = (d + 1).pow((p - 1) as u32);
        for code in 0..total {
            let mut c = code;
            let mut ks = vec![0; p - 1];
            for k in ks.iter_mut().rev() {
                *k = c % (d + 1);
                c /= d + 1;
            }
            let s: usize = ks.iter().sum();
            if s <= d {
                ks.push(d - s);
                out.push(ks);
            }
        }
        out
    }

    fn as_ints(batch: &WeightBatch, d: usize) -> Vec<Vec<usize>> {
        batch
            .iter()
            .map(|w| {
                w.as_slice()
                    .iter()
                    .map(|x| (x * d as f64).round() as usize)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn three_objectives_depth_two() {
        let b = enumerate_uniform(3, 2).unwrap();
        let got: Vec<Vec<f64>> = b.iter().map(|w| w.as_slice().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.5, 0.5],
                vec![0.0, 1.0, 0.0],
                vec![0.5, 0.0, 0.5],
                vec![0.5, 0.5, 0.0],
                vec![1.0, 0.0, 0.0],
            ]
        );
        assert_eq!(b.strategy, Strategy::UniformIncrement);
    }

    #[test]
    fn bi_objective_cases() {
        let b = enumerate_uniform(2, 1).unwrap();
        assert_eq!(b.vectors[0].as_slice(), &[0.0, 1.0]);
        assert_eq!(b.vectors[1].as_slice(), &[1.0, 0.0]);

        let b = enumerate_uniform(2, 4).unwrap();
        let l1: Vec<f64> = b.iter().map(|w| w[0]).collect();
        assert_eq!(l1, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        for w in b.iter() {
            assert_eq!(w[0] + w[1], 1.0);
        }
    }

    #[test]
    fn matches_nested_loop_oracle() {
        for p in 2..=5 {
            for d in 1..=8 {
                let b = enumerate_uniform(p, d).unwrap();
                let oracle = brute_force(p, d);
                assert_eq!(as_ints(&b, d), oracle, "p={p} d={d}");
                assert_eq!(count_uniform(p, d).unwrap(), oracle.len() as u64);
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(count_uniform(3, 2).unwrap(), 6);
        for d in 1..100 {
            assert_eq!(count_uniform(2, d).unwrap(), d as u64 + 1);
        }
        assert_eq!(count_uniform(4, 10).unwrap(), 286);
        assert_eq!(count_uniform(5, 20).unwrap(), 10626);
        assert_eq!(brute_force(4, 10).len(), 286);
    }

    #[test]
    fn overflow_is_reported() {
        // C(66, 33) ≈ 7.2e18 fits, C(70, 35) ≈ 1.1e20 does not
        assert_eq!(count_uniform(34, 33).unwrap(), 7_219_428_434_016_265_740);
        assert!(matches!(count_uniform(36, 35), Err(Error::Overflow(_))));
        assert!(count_uniform(1, 3).is_err());
        assert!(count_uniform(2, 0).is_err());
    }

    #[test]
    fn log_count_agrees_with_exact() {
        for p in 2..8 {
            for d in 1..30 {
                let exact = count_uniform(p, d).unwrap() as f64;
                assert!((log10_count_uniform(p, d) - exact.log10()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn budget_cap() {
        assert!(matches!(
            enumerate_uniform_capped(5, 20, 1000),
            Err(Error::BudgetExceeded {
                needed: 10626,
                cap: 1000
            })
        ));
        assert!(matches!(
            enumerate_uniform(40, 40),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
