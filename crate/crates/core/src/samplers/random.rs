use rand::Rng;
use rand_distr::StandardNormal;

use crate::domain::{SamplerConfig, WeightVector};
use crate::error::{Error, Result};

use super::{rng_from_seed, Strategy, WeightBatch};

/// Natural log of a Gamma(shape, 1) variate, by the Marsaglia–Tsang squeeze.
///
/// Shapes below one use the boost `G(a) = G(a+1)·U^{1/a}`; working in log space
/// keeps tiny shapes (0.01 and below) from underflowing to zero.
pub fn gamma_ln<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        let u: f64 = rng.sample(rand::distr::Open01);
        return gamma_ln(rng, shape + 1.0) + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (x, v) = loop {
            let x: f64 = rng.sample(StandardNormal);
            let v = 1.0 + c * x;
            if v > 0.0 {
                break (x, v * v * v);
            }
        };
        let u: f64 = rng.sample(rand::distr::Open01);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d.ln() + v.ln();
        }
    }
}

fn dirichlet_draw<R: Rng + ?Sized>(rng: &mut R, alpha: &[f64]) -> Result<WeightVector> {
    let logs: Vec<f64> = alpha.iter().map(|&a| gamma_ln(rng, a)).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = scaled.iter().sum();
    WeightVector::new(scaled.iter().map(|x| x / total).collect())
}

fn check_alpha(alpha: &[f64]) -> Result<()> {
    if alpha.len() < 2 {
        return Err(Error::dim(format!(
            "Dirichlet needs at least 2 parameters, got {}",
            alpha.len()
        )));
    }
    if let Some(a) = alpha.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(Error::config(format!(
            "Dirichlet parameters must be positive, got {a}"
        )));
    }
    Ok(())
}

/// `n` points distributed Dirichlet(α) on the unit simplex.
pub fn sample_dirichlet(alpha: &[f64], n: usize, seed: u64) -> Result<WeightBatch> {
    check_alpha(alpha)?;
    if n < 1 {
        return Err(Error::config("n must be >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    let vectors = (0..n)
        .map(|_| dirichlet_draw(&mut rng, alpha))
        .collect::<Result<_>>()?;
    Ok(WeightBatch {
        vectors,
        strategy: Strategy::Random,
        config: SamplerConfig {
            p: alpha.len(),
            alpha: alpha.to_vec(),
            seed,
            ..Default::default()
        },
    })
}

/// Random weights.
///
/// For `p = 2` only λ₁ is drawn: uniform on `[0, 1)` when `config.alpha` is
/// empty, otherwise Beta(α₁, α₂). For `p ≥ 3` this is Dirichlet sampling with
/// `config.alpha`, defaulting to all ones (uniform on the simplex).
pub fn sample_random(p: usize, n: usize, config: &SamplerConfig) -> Result<WeightBatch> {
    if p < 2 {
        return Err(Error::dim(format!("p must be >= 2, got {p}")));
    }
    if n < 1 {
        return Err(Error::config("n must be >= 1"));
    }
    if !config.alpha.is_empty() {
        if config.alpha.len() != p {
            return Err(Error::config(format!(
                "alpha has {} entries but p = {p}",
                config.alpha.len()
            )));
        }
        check_alpha(&config.alpha)?;
    }
    if p >= 3 {
        let alpha = if config.alpha.is_empty() {
            vec![1.0; p]
        } else {
            config.alpha.clone()
        };
        return sample_dirichlet(&alpha, n, config.seed);
    }

    let mut rng = rng_from_seed(config.seed);
    let vectors = (0..n)
        .map(|_| {
            if config.alpha.is_empty() {
                let l1: f64 = rng.random();
                WeightVector::pair(l1)
            } else {
                dirichlet_draw(&mut rng, &config.alpha)
            }
        })
        .collect::<Result<_>>()?;
    Ok(WeightBatch {
        vectors,
        strategy: Strategy::Random,
        config: SamplerConfig {
            p,
            alpha: config.alpha.clone(),
            seed: config.seed,
            ..Default::default()
        },
    })
}
