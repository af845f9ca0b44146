//! Seeded variate generation and empirical transform estimation.
//!
//! Every sampler takes any [`rand::Rng`]; [`RngStream`] is the reproducible
//! generator used throughout the crate and the CLI.

mod haar;
mod q;
mod stats;

pub use haar::{abs_det_i_minus, sample_haar_abs_det, sample_haar_unitary, HAAR_MAX_DIM};
pub use q::{q_cdf, q_density, q_total_mass, sample_q, sample_zeta2_index, ZETA2_TABLE_SIZE};
pub use stats::{
    empirical_laplace, empirical_log_mean, empirical_mellin, kolmogorov_p_value, ks_critical_value,
    ks_one_sample, ks_two_sample, SampleBatch, SampleStats,
};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Identity of a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub seed: u64,
    pub stream_id: u64,
}

/// ChaCha8 generator keyed by `(seed, stream_id)`.
///
/// Distinct stream ids give independent, non-overlapping sequences for the
/// same seed.
#[derive(Debug, Clone)]
pub struct RngStream {
    id: StreamId,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            id: StreamId { seed, stream_id },
            inner,
        }
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    pub fn seed(&self) -> u64 {
        self.id.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.id.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Uniform on `(0, 1]`, safe to take the logarithm of.
pub(crate) fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

fn check_shape(name: &'static str, a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::parameter(name, a, "finite and > 0"));
    }
    Ok(())
}

/// Marsaglia-Tsang squeeze/rejection step for shape `a ≥ 1`.
fn gamma_ge_one<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    let d = a - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = open_uniform(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Logarithm of a gamma(`a`) draw.
///
/// For `a < 1` the boost `γ_a = γ_{a+1} U^{1/a}` is applied in log-space, so
/// tiny shapes do not underflow.
pub fn log_gamma_sample<R: Rng + ?Sized>(a: f64, rng: &mut R) -> Result<f64> {
    check_shape("a", a)?;
    if a >= 1.0 {
        Ok(gamma_ge_one(a, rng).ln())
    } else {
        let g = gamma_ge_one(a + 1.0, rng);
        Ok(g.ln() + open_uniform(rng).ln() / a)
    }
}

/// Draw from the density `t^{a-1} e^{-t} / Γ(a)`.
pub fn gamma_sample<R: Rng + ?Sized>(a: f64, rng: &mut R) -> Result<f64> {
    check_shape("a", a)?;
    if a >= 1.0 {
        Ok(gamma_ge_one(a, rng))
    } else {
        Ok(log_gamma_sample(a, rng)?.exp())
    }
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// Logarithm of a Beta(`a`, `b`) draw, built as `γ_a / (γ_a + γ_b)`.
pub fn log_beta_sample<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    check_shape("a", a)?;
    check_shape("b", b)?;
    let x = log_gamma_sample(a, rng)?;
    let y = log_gamma_sample(b, rng)?;
    Ok(x - log_add_exp(x, y))
}

pub fn beta_sample<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    Ok(log_beta_sample(a, b, rng)?.exp())
}

/// `log` of one draw of `2^N Π_{j≤N} √β_{j/2,j/2} Π_{2≤j≤N} √β_{(j+1)/2,(j-1)/2}`.
pub fn log_sample_abs_z_beta<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Result<f64> {
    if n == 0 {
        return Err(Error::parameter("N", n, "N ≥ 1"));
    }
    let mut acc = n as f64 * std::f64::consts::LN_2;
    for j in 1..=n {
        let h = 0.5 * j as f64;
        acc += 0.5 * log_beta_sample(h, h, rng)?;
        if j >= 2 {
            acc += 0.5 * log_beta_sample(h + 0.5, h - 0.5, rng)?;
        }
    }
    Ok(acc)
}

pub fn sample_abs_z_beta<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Result<f64> {
    Ok(log_sample_abs_z_beta(n, rng)?.exp())
}

/// Collect `count` draws from `draw` into a batch stamped with the stream id.
pub fn collect_batch<F>(rng: &mut RngStream, count: usize, mut draw: F) -> Result<SampleBatch>
where
    F: FnMut(&mut RngStream) -> Result<f64>,
{
    let id = rng.id();
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        draws.push(draw(rng)?);
    }
    Ok(SampleBatch {
        seed: id.seed,
        stream_id: id.stream_id,
        draws,
    })
}
