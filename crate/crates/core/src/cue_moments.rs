//! Moments of `|Z_N| = |det(I - U)|` for Haar-distributed `U ∈ U(N)`.
//!
//! Everything is a sum of log-gamma differences; raw Γ values are never
//! formed, so `N` in the tens of thousands is unproblematic.

use serde::{Deserialize, Serialize};

use crate::barnes::{constant_a, log_barnes_g, log_rm_factor};
use crate::num_core::{digamma, euler_gamma, log_gamma, ComplexScalar};
use crate::{Error, IdentityReport, Result};

/// Tolerance used by the exact identity residuals.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentScaling {
    None,
    /// divide by `N^{λ²}`
    NToLambdaSq,
    /// divide by `N^{λ²/2}`
    NToHalfLambdaSq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentQuery {
    pub n_dim: u64,
    pub exponent: ComplexScalar,
    pub scaling: MomentScaling,
}

impl MomentQuery {
    /// `log E|Z_N|^{2λ}` with the requested normalisation subtracted.
    pub fn log_value(&self) -> Result<ComplexScalar> {
        let raw = log_moment_abs2lambda(self.n_dim, self.exponent)?;
        let ln_n = (self.n_dim as f64).ln();
        let l2 = self.exponent * self.exponent;
        Ok(match self.scaling {
            MomentScaling::None => raw,
            MomentScaling::NToLambdaSq => raw - l2 * ln_n,
            MomentScaling::NToHalfLambdaSq => raw - l2 * (0.5 * ln_n),
        })
    }
}

fn c(re: f64) -> ComplexScalar {
    ComplexScalar::new(re, 0.0)
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::parameter("N", n, "N ≥ 1"));
    }
    Ok(())
}

/// `log Γ(x+a) - log Γ(x)` for real `x ≥ 1`.
///
/// For large `x` the Stirling expansions of both terms are differenced
/// analytically so the result keeps its relative accuracy.
pub fn log_gamma_ratio(x: f64, a: ComplexScalar) -> Result<ComplexScalar> {
    if x >= 20.0 && a.norm() <= 0.5 * x {
        const COEF: [f64; 6] = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360360.0,
        ];
        let xa = c(x) + a;
        let ratio = a / x;
        let log1p_ratio = crate::num_core::stable::log1p_complex(ratio);
        let mut v = log1p_ratio * (x - 0.5) + a * xa.ln() - a;
        // Σ c_k [(x+a)^{1-2k} - x^{1-2k}]
        let inv_xa = xa.inv();
        let inv_x = 1.0 / x;
        let mut p_xa = inv_xa;
        let mut p_x = inv_x;
        for (k, coef) in COEF.iter().enumerate() {
            if k == 0 {
                v += -a * (inv_x * inv_xa) * *coef;
            } else {
                v += (p_xa - c(p_x)) * *coef;
            }
            p_xa *= inv_xa * inv_xa;
            p_x *= inv_x * inv_x;
        }
        return Ok(v);
    }
    Ok(log_gamma(c(x) + a)? - log_gamma(c(x))?)
}

/// `log E_N |Z|^{2λ} = Σ_{j=1}^N [log Γ(j) + log Γ(j+2λ) - 2 log Γ(j+λ)]`.
pub fn log_moment_abs2lambda(n: u64, lambda: ComplexScalar) -> Result<ComplexScalar> {
    check_n(n)?;
    if !(lambda.re > -1.0) || !lambda.im.is_finite() {
        return Err(Error::domain("log_moment_abs2lambda", lambda, "Re λ > -1"));
    }
    let two = lambda * 2.0;
    let mut sum = c(0.0);
    for j in (1..=n).rev() {
        let jf = j as f64;
        sum += log_gamma_ratio(jf, two)? - log_gamma_ratio(jf, lambda)? * 2.0;
    }
    Ok(sum)
}

/// `log E|Z_N|^t`, i.e. [`log_moment_abs2lambda`] at `λ = t/2`.
pub fn log_moment_abs_t(n: u64, t: ComplexScalar) -> Result<ComplexScalar> {
    if !(t.re > -1.0) || !t.im.is_finite() {
        return Err(Error::domain("log_moment_abs_t", t, "Re t > -1"));
    }
    log_moment_abs2lambda(n, t * 0.5)
}

/// `E|Z_N|^{2λ} / (N^{λ²} M(λ))`, which tends to 1.
pub fn scaled_moment_ratio(n: u64, lambda: f64) -> Result<f64> {
    Ok(log_scaled_moment_ratio(n, lambda)?.exp())
}

pub fn log_scaled_moment_ratio(n: u64, lambda: f64) -> Result<f64> {
    let lm = log_moment_abs2lambda(n, c(lambda))?.re;
    let m = log_rm_factor(c(lambda))?.re;
    Ok(lm - lambda * lambda * (n as f64).ln() - m)
}

/// Mellin-transform residual of `Π γ_j = |Z_N| Π √(γ_j γ'_j)` in law.
///
/// The left side is computed from direct log-gamma differences; the moment
/// on the right goes through [`log_moment_abs_t`].
pub fn ks_gamma_identity_residual(n: u64, t: f64) -> Result<IdentityReport> {
    check_n(n)?;
    if !(t > -1.0) {
        return Err(Error::domain("ks_gamma_identity_residual", t, "t > -1"));
    }
    let mut lhs = 0.0;
    let mut half = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let lg_j = log_gamma(c(jf))?.re;
        lhs += log_gamma(c(jf + t))?.re - lg_j;
        half += log_gamma(c(jf + 0.5 * t))?.re - lg_j;
    }
    let rhs = log_moment_abs_t(n, c(t))?.re + 2.0 * half;
    Ok(IdentityReport::new(lhs, rhs, IDENTITY_TOLERANCE))
}

/// `log B(a+s, b) - log B(a, b)`, the log Mellin transform of `β_{a,b}` at `s`.
fn log_beta_mellin(a: f64, b: f64, s: f64) -> Result<f64> {
    let lg = |x: f64| -> Result<f64> { Ok(log_gamma(c(x))?.re) };
    Ok(lg(a + s)? - lg(a)? - lg(a + b + s)? + lg(a + b)?)
}

/// Mellin-transform residual of the beta-product representation
/// `|Z_N| = 2^N Π_{j≤N} √β_{j/2,j/2} Π_{2≤j≤N} √β_{(j+1)/2,(j-1)/2}` in law.
pub fn beta_identity_residual(n: u64, t: f64) -> Result<IdentityReport> {
    check_n(n)?;
    if !(t > -1.0) {
        return Err(Error::domain("beta_identity_residual", t, "t > -1"));
    }
    let s = 0.5 * t;
    let mut rhs = n as f64 * t * std::f64::consts::LN_2;
    for j in 1..=n {
        let jf = j as f64;
        rhs += log_beta_mellin(0.5 * jf, 0.5 * jf, s)?;
        if j >= 2 {
            rhs += log_beta_mellin(0.5 * (jf + 1.0), 0.5 * (jf - 1.0), s)?;
        }
    }
    let lhs = log_moment_abs_t(n, c(t))?.re;
    Ok(IdentityReport::new(lhs, rhs, IDENTITY_TOLERANCE))
}

/// `Σ_{j=1}^N ψ(j) = N ψ(N+1) - N`.
pub fn sum_digamma(n: u64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(nf * digamma(c(nf + 1.0))?.re - nf)
}

/// Term-by-term `Σ_{j=1}^N ψ(j)` using `ψ(j) = H_{j-1} - γ`.
pub fn sum_digamma_direct(n: u64) -> Result<f64> {
    check_n(n)?;
    // Σ_j H_{j-1} = Σ_{k<N} (N-k)/k
    let nf = n as f64;
    let harmonic_part: f64 = (1..n).rev().map(|k| (nf - k as f64) / k as f64).sum();
    Ok(harmonic_part - nf * euler_gamma())
}

/// `log` of `N^{-λ²/2} E[(Π γ_j)^λ] exp(-λ Σ ψ(j))`.
pub fn log_gamma_product_mellin(n: u64, lambda: f64) -> Result<f64> {
    check_n(n)?;
    if !(lambda > -1.0) {
        return Err(Error::domain("gamma_product_mellin", lambda, "λ > -1"));
    }
    let mut sum = 0.0;
    for j in (1..=n).rev() {
        sum += log_gamma_ratio(j as f64, c(lambda))?.re;
    }
    Ok(sum - lambda * sum_digamma(n)? - 0.5 * lambda * lambda * (n as f64).ln())
}

pub fn gamma_product_mellin(n: u64, lambda: f64) -> Result<f64> {
    Ok(log_gamma_product_mellin(n, lambda)?.exp())
}

/// `log (A^λ G(1+λ))^{-1}`, the large-`N` limit of [`log_gamma_product_mellin`].
pub fn log_gamma_product_limit(lambda: f64) -> Result<f64> {
    Ok(-(lambda * constant_a().ln() + log_barnes_g(c(lambda))?.log_value.re))
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut k = i * i;
            while k <= limit {
                composite[k] = true;
                k += i;
            }
        }
    }
    primes
}

/// Truncated Euler product
/// `Π_{p ≤ p_max} (1-1/p)^{λ²} Σ_m (Γ(λ+m)/(m! Γ(λ)))² p^{-m}`.
pub fn arithmetic_factor(lambda: f64, p_max: u64) -> Result<f64> {
    Ok(log_arithmetic_factor(lambda, p_max)?.exp())
}

pub fn log_arithmetic_factor(lambda: f64, p_max: u64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::parameter("lambda", lambda, "λ > 0"));
    }
    if p_max < 2 {
        return Err(Error::parameter("p_max", p_max, "p_max ≥ 2"));
    }
    let l2 = lambda * lambda;
    let mut total = 0.0;
    for p in primes_up_to(p_max).into_iter().rev() {
        let inv_p = 1.0 / p as f64;
        // Σ_{m≥1} c_m² p^{-m} with c_m = (λ)_m / m!
        let mut coef = 1.0;
        let mut pow = 1.0;
        let mut excess = 0.0;
        let mut m = 0u32;
        loop {
            coef *= (lambda + m as f64) / (m + 1) as f64;
            pow *= inv_p;
            m += 1;
            let term = coef * coef * pow;
            excess += term;
            if term <= 1e-17 * excess || m > 10_000 {
                break;
            }
        }
        total += l2 * (-inv_p).ln_1p() + excess.ln_1p();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_branches_agree() {
        for &x in &[20.0, 25.0, 100.0, 5000.0] {
            for &a in &[c(0.5), c(-0.7), c(3.7), ComplexScalar::new(0.4, 0.9)] {
                let fast = log_gamma_ratio(x, a).unwrap();
                let slow = log_gamma(c(x) + a).unwrap() - log_gamma(c(x)).unwrap();
                assert!((fast - slow).norm() < 1e-12 * (1.0 + slow.norm()), "x={x} a={a}");
            }
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(log_moment_abs2lambda(7, c(0.0)).unwrap(), c(0.0));
        assert!((log_moment_abs2lambda(1, c(1.0)).unwrap().re - 2f64.ln()).abs() < 1e-14);
        assert!((log_moment_abs_t(3, c(2.0)).unwrap().re - 4f64.ln()).abs() < 1e-14);
        let four_over_pi = (4.0 / std::f64::consts::PI).ln();
        assert!((log_moment_abs_t(1, c(1.0)).unwrap().re - four_over_pi).abs() < 1e-15);
        assert_eq!(log_moment_abs_t(5, c(0.0)).unwrap(), c(0.0));
    }

    #[test]
    fn second_moment_telescopes() {
        for n in 1..=1000u64 {
            let got = log_moment_abs2lambda(n, c(1.0)).unwrap().re;
            assert!((got - ((n + 1) as f64).ln()).abs() < 1e-12, "N={n}");
        }
    }

    #[test]
    fn moment_domain() {
        assert!(log_moment_abs2lambda(3, c(-1.0)).is_err());
        assert!(log_moment_abs2lambda(0, c(1.0)).is_err());
        assert!(log_moment_abs_t(3, c(-1.2)).is_err());
        assert!(matches!(log_moment_abs2lambda(3, c(-0.5)), Err(Error::Pole { .. })));
    }

    #[test]
    fn complex_exponent_conjugate_symmetry() {
        let l = ComplexScalar::new(0.3, 0.7);
        let a = log_moment_abs2lambda(12, l).unwrap();
        let b = log_moment_abs2lambda(12, l.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
        let q = MomentQuery {
            n_dim: 12,
            exponent: l,
            scaling: MomentScaling::NToLambdaSq,
        };
        assert!((q.log_value().unwrap() - (a - l * l * 12f64.ln())).norm() < 1e-14);
    }

    #[test]
    fn scaled_ratio_examples() {
        assert!((scaled_moment_ratio(50, 0.0).unwrap() - 1.0).abs() < 1e-15);
        for n in [1u64, 10, 100, 1000] {
            let want = (n + 1) as f64 / n as f64;
            assert!((scaled_moment_ratio(n, 1.0).unwrap() - want).abs() < 1e-9);
        }
        let r3 = (scaled_moment_ratio(1000, 0.5).unwrap() - 1.0).abs();
        let r4 = (scaled_moment_ratio(10_000, 0.5).unwrap() - 1.0).abs();
        assert!(r4 < r3);
    }

    #[test]
    fn identity_residual_examples() {
        assert!(ks_gamma_identity_residual(4, 0.0).unwrap().residual.abs() < 1e-15);
        assert!(ks_gamma_identity_residual(5, 1.3).unwrap().pass);
        assert!(ks_gamma_identity_residual(50, 3.0).unwrap().residual.abs() <= 1e-9);
        assert!(beta_identity_residual(4, 0.0).unwrap().residual.abs() < 1e-15);
        let r = beta_identity_residual(1, 2.0).unwrap();
        assert!((r.lhs_log - 2f64.ln()).abs() < 1e-14);
        assert!(r.residual.abs() <= 1e-12);
        assert!(beta_identity_residual(8, 1.7).unwrap().pass);
        assert!(beta_identity_residual(8, -0.6).unwrap().pass);
        assert!(ks_gamma_identity_residual(8, -1.0).is_err());
    }

    #[test]
    fn digamma_sums() {
        assert!((sum_digamma(1).unwrap() + euler_gamma()).abs() < 1e-15);
        assert!((sum_digamma(2).unwrap() - (1.0 - 2.0 * euler_gamma())).abs() < 1e-14);
        let direct: f64 = (1..=100)
            .map(|j| digamma(c(j as f64)).unwrap().re)
            .sum();
        assert!((sum_digamma(100).unwrap() - direct).abs() < 1e-12);
        assert!((sum_digamma_direct(100).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn gamma_product_examples() {
        assert!((gamma_product_mellin(30, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // λ = 1: Σ log Γ(j+1)/Γ(j) = log N!, and the limit is 1/A
        let want = (2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt();
        assert!((log_gamma_product_limit(1.0).unwrap().exp() - want).abs() < 1e-10);
        let l2 = log_gamma_product_mellin(2000, 0.5).unwrap();
        let l1 = log_gamma_product_mellin(1000, 0.5).unwrap();
        let lim = log_gamma_product_limit(0.5).unwrap();
        assert!((l2 - lim).abs() < (l1 - lim).abs());
    }

    #[test]
    fn arithmetic_factor_examples() {
        for p_max in [2u64, 100, 10_000] {
            assert!((arithmetic_factor(1.0, p_max).unwrap() - 1.0).abs() < 1e-12);
        }
        // λ → 0: each prime factor → 1
        assert!((arithmetic_factor(1e-9, 1000).unwrap() - 1.0).abs() < 1e-12);
        assert!(arithmetic_factor(0.0, 100).is_err());
        assert!(arithmetic_factor(1.0, 1).is_err());
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }
}
