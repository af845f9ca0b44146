use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Draws together with the stream that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub stream_id: u64,
    pub draws: Vec<f64>,
}

impl SampleBatch {
    pub fn stats(&self) -> Result<SampleStats> {
        SampleStats::from_values(&self.draws)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance; zero when `n = 1`.
    pub variance: f64,
    pub std_error: f64,
}

impl SampleStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::from_iter(values.iter().copied())
    }

    /// Welford accumulation over the iterator.
    pub fn from_iter(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut n = 0usize;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for x in values {
            n += 1;
            let delta = x - mean;
            mean += delta / n as f64;
            m2 += delta * (x - mean);
        }
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if !(mean.is_finite() && m2.is_finite()) {
            return Err(Error::NonFinite("sample statistics"));
        }
        let variance = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
        Ok(Self {
            n,
            mean,
            variance,
            std_error: (variance / n as f64).sqrt(),
        })
    }

    /// `|mean - want| ≤ k · std_error`.
    pub fn agrees_with(&self, want: f64, k: f64) -> bool {
        (self.mean - want).abs() <= k * self.std_error
    }
}

/// Statistics of `x^s` over the draws.
pub fn empirical_mellin(draws: &[f64], s: f64) -> Result<SampleStats> {
    if s == 0.0 {
        return SampleStats::from_iter(draws.iter().map(|_| 1.0));
    }
    SampleStats::from_iter(draws.iter().map(|x| x.powf(s)))
}

/// Statistics of `e^{-λx}` over the draws.
pub fn empirical_laplace(draws: &[f64], lambda: f64) -> Result<SampleStats> {
    SampleStats::from_iter(draws.iter().map(|x| (-lambda * x).exp()))
}

/// Statistics of `log x`, the stable comparison when `x` is heavy-tailed.
pub fn empirical_log_mean(draws: &[f64]) -> Result<SampleStats> {
    SampleStats::from_iter(draws.iter().map(|x| x.ln()))
}

fn sorted(draws: &[f64]) -> Result<Vec<f64>> {
    if draws.is_empty() {
        return Err(Error::EmptySample);
    }
    if draws.iter().any(|x| x.is_nan()) {
        return Err(Error::NonFinite("KS statistic"));
    }
    let mut v = draws.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample Kolmogorov-Smirnov statistic `sup |F_n - F|`.
pub fn ks_one_sample(draws: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let v = sorted(draws)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Asymptotic critical value at level `alpha` for sample sizes `n` and
/// `m` (pass `m = None` for the one-sample test).
pub fn ks_critical_value(alpha: f64, n: usize, m: Option<usize>) -> f64 {
    let c = (-(0.5 * alpha).ln() / 2.0).sqrt();
    let n_eff = match m {
        Some(m) => (n * m) as f64 / (n + m) as f64,
        None => n as f64,
    };
    c / n_eff.sqrt()
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_p_value(x: f64) -> f64 {
    // the series converges slowly below 0.3, where P(K > x) > 0.99999
    if x < 0.3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
