//! The law with density `(3/π²)((u/2)/sinh(u/2))²` on `(0, ∞)`.
//!
//! Expanding `1/(2 sinh(u/2))² = Σ_n n e^{-nu}` gives the mixture
//! `Q = γ_3 / n` with `P(n) = 6/(π² n²)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;

use super::{gamma_sample, open_uniform};
use crate::num_core::{inv_four_sinh_sq, integrate_interval, QuadratureSpec};
use crate::Result;

/// Size of the inverse-CDF table for the index `n`; beyond it a Pareto tail
/// is used. The tail mass is `≈ 6/(π² · 10⁶) < 10⁻⁶`.
pub const ZETA2_TABLE_SIZE: usize = 1_000_000;

const SIX_OVER_PI2: f64 = 6.0 / (PI * PI);

/// `tail[n-1] = P(index > n)` for `n = 1..=ZETA2_TABLE_SIZE`.
fn index_tail() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m = ZETA2_TABLE_SIZE;
        let mf = m as f64;
        // Σ_{k>m} k^{-2} by Euler-Maclaurin, then accumulated downwards
        let mut t = 1.0 / mf - 0.5 / (mf * mf) + 1.0 / (6.0 * mf * mf * mf);
        let mut tail = vec![0.0; m];
        for n in (1..=m).rev() {
            tail[n - 1] = SIX_OVER_PI2 * t;
            let nf = n as f64;
            t += 1.0 / (nf * nf);
        }
        tail
    })
}

/// Draw `n ≥ 1` with `P(n) = 6/(π² n²)`.
pub fn sample_zeta2_index<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    let tail = index_tail();
    // survival value; the index is the first n with P(index > n) < v
    let v = open_uniform(rng);
    let last = tail[ZETA2_TABLE_SIZE - 1];
    if v <= last {
        // P(index > k | index > M) ≈ M/k
        let w = open_uniform(rng);
        return (ZETA2_TABLE_SIZE as f64 / w).floor() as u64 + 1;
    }
    // tail is decreasing
    let idx = tail.partition_point(|&t| t >= v);
    idx as u64 + 1
}

/// One draw of `Q`.
pub fn sample_q<R: Rng + ?Sized>(rng: &mut R) -> Result<f64> {
    let g = gamma_sample(3.0, rng)?;
    Ok(g / sample_zeta2_index(rng) as f64)
}

pub fn q_density(u: f64) -> f64 {
    if u == 0.0 {
        return 0.5 * SIX_OVER_PI2;
    }
    if !(u > 0.0) {
        return 0.0;
    }
    0.5 * SIX_OVER_PI2 * u * u * inv_four_sinh_sq(u)
}

const CDF_STEP: f64 = 0.02;
const CDF_END: f64 = 80.0;

/// Cumulative integrals of the density at the grid nodes `k · CDF_STEP`.
fn cdf_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let cells = (CDF_END / CDF_STEP).round() as usize;
        let spec = QuadratureSpec {
            target_abs_err: 1e-15,
            max_refinements: 8,
            cut_points: Vec::new(),
        };
        let mut acc = 0.0;
        let mut table = Vec::with_capacity(cells + 1);
        table.push(0.0);
        for k in 0..cells {
            let a = k as f64 * CDF_STEP;
            let piece = integrate_interval(q_density, a, a + CDF_STEP, &spec)
                .map(|r| r.value)
                .unwrap_or(f64::NAN);
            acc += piece;
            table.push(acc);
        }
        table
    })
}

/// Distribution function of `Q` from a quadrature table with cubic Hermite
/// interpolation (the density supplies the slopes).
pub fn q_cdf(u: f64) -> f64 {
    if !(u > 0.0) {
        return 0.0;
    }
    if u >= CDF_END {
        return 1.0;
    }
    let table = cdf_table();
    let x = u / CDF_STEP;
    let k = (x.floor() as usize).min(table.len() - 2);
    let t = x - k as f64;
    let a = k as f64 * CDF_STEP;
    let (f0, f1) = (table[k], table[k + 1]);
    let (d0, d1) = (q_density(a) * CDF_STEP, q_density(a + CDF_STEP) * CDF_STEP);
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * f0
        + (t3 - 2.0 * t2 + t) * d0
        + (-2.0 * t3 + 3.0 * t2) * f1
        + (t3 - t2) * d1
}

/// Total mass of the density by quadrature over `(0, ∞)`.
pub fn q_total_mass(spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let r = crate::num_core::integrate_semi_infinite(q_density, spec)?;
    Ok((r.value, r.err_estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{empirical_mellin, ks_critical_value, ks_one_sample, RngStream};

    #[test]
    fn density_normalised() {
        let (mass, err) = q_total_mass(&QuadratureSpec::default()).unwrap();
        assert!((mass - 1.0).abs() < 1e-12, "{mass} ± {err}");
        assert!((cdf_table().last().unwrap() - 1.0).abs() < 1e-12);
        assert!((q_density(1e-8) - 3.0 / (PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn cdf_interpolation() {
        for &u in &[0.013, 0.5, 1.0, 3.3, 7.77, 20.0] {
            let spec = QuadratureSpec::with_target(1e-14);
            let direct = integrate_interval(q_density, 0.0, u, &spec).unwrap().value;
            assert!((q_cdf(u) - direct).abs() < 1e-10, "u={u}");
        }
        assert_eq!(q_cdf(-1.0), 0.0);
        assert_eq!(q_cdf(1e3), 1.0);
    }

    #[test]
    fn index_law() {
        let tail = index_tail();
        assert!((tail[0] - (1.0 - SIX_OVER_PI2)).abs() < 1e-14);
        assert!((tail[1] - (1.0 - 1.25 * SIX_OVER_PI2)).abs() < 1e-14);
        let mut rng = RngStream::new(3, 0);
        let n = 200_000;
        let ones = (0..n).filter(|_| sample_zeta2_index(&mut rng) == 1).count();
        let p = SIX_OVER_PI2;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((ones as f64 / n as f64 - p).abs() < 4.0 * se);
    }

    #[test]
    fn sampler_moments_and_ks() {
        let mut rng = RngStream::new(4, 0);
        let draws: Vec<f64> = (0..100_000).map(|_| sample_q(&mut rng).unwrap()).collect();
        assert_eq!(empirical_mellin(&draws, 0.0).unwrap().mean, 1.0);
        // 18 ζ(3) / π²
        let mean1 = 18.0 * 1.2020569031595942854 / (PI * PI);
        assert!(empirical_mellin(&draws, 1.0).unwrap().agrees_with(mean1, 3.0));
        let d = ks_one_sample(&draws, q_cdf).unwrap();
        assert!(d < ks_critical_value(0.01, draws.len(), None));
    }
}
