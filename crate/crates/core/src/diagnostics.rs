//! Distribution diagnostics for sampled weights: normal Q-Q data, sample
//! moments and the growth of the uniform-increment lattice size.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::samplers::{count_uniform, log10_count_uniform, rng_from_seed, WeightBatch};

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

// Acklam's rational approximation, relative error ~1.15e-9 before refinement.
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.38357751867269e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

fn acklam_lower(q: f64) -> f64 {
    if q < P_LOW {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    } else {
        let r = q - 0.5;
        let s = r * r;
        (((((A[0] * s + A[1]) * s + A[2]) * s + A[3]) * s + A[4]) * s + A[5]) * r
            / (((((B[0] * s + B[1]) * s + B[2]) * s + B[3]) * s + B[4]) * s + 1.0)
    }
}

/// `Φ⁻¹(q)` for `q ∈ (0, 1)`.
///
/// Rational approximation followed by one Halley step against the
/// erfc-based CDF. The lower half is computed directly and the upper half by
/// reflection, so `Φ⁻¹(1−q) = −Φ⁻¹(q)` whenever `1−q` is exact.
pub fn inverse_normal_cdf(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!(
            "quantile level {q} is outside (0, 1)"
        )));
    }
    if q == 0.5 {
        return Ok(0.0);
    }
    if q > 0.5 {
        return Ok(-inverse_normal_cdf(1.0 - q)?);
    }
    let x = acklam_lower(q);
    let e = normal_cdf(x) - q;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    Ok(x - u / (1.0 + 0.5 * x * u))
}

/// Pearson correlation of two equal-length series.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Normal Q-Q pairs: theoretical quantiles at Hazen plotting positions
/// `(i + 0.5)/n` against the sorted, standardised sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QQData {
    pub theoretical: Vec<f64>,
    pub observed: Vec<f64>,
    pub n: usize,
}

impl QQData {
    pub fn correlation(&self) -> f64 {
        pearson(&self.theoretical, &self.observed)
    }

    /// Mean of `observed − theoretical` over the lowest and highest `fraction`
    /// of points. Lighter-than-normal tails give a positive lower value and a
    /// negative upper value.
    pub fn tail_deviation(&self, fraction: f64) -> (f64, f64) {
        let k = ((self.n as f64 * fraction).floor() as usize).max(1);
        let dev = |i: usize| self.observed[i] - self.theoretical[i];
        let lower = (0..k).map(dev).sum::<f64>() / k as f64;
        let upper = (self.n - k..self.n).map(dev).sum::<f64>() / k as f64;
        (lower, upper)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theoretical,observed\n");
        for (t, o) in self.theoretical.iter().zip(&self.observed) {
            out.push_str(&format!("{},{}\n", fmt_sig17(*t), fmt_sig17(*o)));
        }
        out
    }
}

fn mean_and_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn qq_data(samples: &[f64]) -> Result<QQData> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::DegenerateSample(format!(
            "Q-Q data needs at least 3 samples, got {n}"
        )));
    }
    let (mean, sd) = mean_and_sd(samples);
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample("samples have zero variance".into()));
    }
    let mut observed: Vec<f64> = samples.iter().map(|x| (x - mean) / sd).collect();
    observed.sort_by(f64::total_cmp);
    let theoretical = (0..n)
        .map(|i| inverse_normal_cdf((i as f64 + 0.5) / n as f64))
        .collect::<Result<_>>()?;
    Ok(QQData {
        theoretical,
        observed,
        n,
    })
}

/// One component per bi-objective weight, λ₁ or λ₂ by a fair coin.
pub fn plot_values(batch: &WeightBatch, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    rng.set_stream(1);
    batch
        .iter()
        .map(|w| if rng.random::<bool>() { w[0] } else { w[1] })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Adjusted Fisher–Pearson skewness `G₁`.
    pub skewness: f64,
    /// Bias-corrected excess kurtosis `G₂`.
    pub excess_kurtosis: f64,
}

pub fn summary_stats(samples: &[f64]) -> Result<SummaryStats> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::DegenerateSample(format!(
            "moments need at least 4 samples, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if !(m2 > 0.0) {
        return Err(Error::DegenerateSample("samples have zero variance".into()));
    }
    let g1 = m3 / m2.powf(1.5);
    let g2 = m4 / (m2 * m2) - 3.0;
    Ok(SummaryStats {
        n,
        mean,
        variance: m2 * nf / (nf - 1.0),
        skewness: g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0),
        excess_kurtosis: ((nf + 1.0) * g2 + 6.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub p: usize,
    pub d: usize,
    /// `None` when the count does not fit in a `u64`.
    pub count: Option<u64>,
    pub log10_count: f64,
}

/// Lattice sizes `C(d+p−1, p−1)` over a grid of `p` and `d`.
pub fn growth_table(p_values: &[usize], d_values: &[usize]) -> Result<Vec<GrowthRow>> {
    if p_values.is_empty() || d_values.is_empty() {
        return Err(Error::dim("growth table needs nonempty p and d ranges"));
    }
    let mut rows = Vec::with_capacity(p_values.len() * d_values.len());
    for &p in p_values {
        for &d in d_values {
            let count = match count_uniform(p, d) {
                Ok(c) => Some(c),
                Err(Error::Overflow(_)) => None,
                Err(e) => return Err(e),
            };
            let log10_count = match count {
                Some(c) => (c as f64).log10(),
                None => log10_count_uniform(p, d),
            };
            rows.push(GrowthRow {
                p,
                d,
                count,
                log10_count,
            });
        }
    }
    Ok(rows)
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("p,d,count,log10count\n");
    for r in rows {
        let count = r
            .count
            .map_or_else(|| "overflow".to_string(), |c| c.to_string());
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.p,
            r.d,
            count,
            fmt_sig17(r.log10_count)
        ));
    }
    out
}

/// Seventeen significant digits in scientific notation: exact round-trip.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}
