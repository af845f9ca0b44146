//! `log G(1+z)` for the Barnes G-function by three independent routes.
//!
//! * **product**: the Weierstrass-type infinite product, truncated and closed
//!   with an analytic tail.
//! * **series**: the power series in `z` with `ζ(n-1)` coefficients, valid on
//!   the unit disc.
//! * **integral**: the Lévy–Khintchine type representation of `1/G(1+z)`
//!   with kernel `1/(u (2 sinh(u/2))^2)`, valid for `Re z > -1`.
//!
//! All values are logarithms. On `Re z > -1` they are the branch that is
//! continuous from `log G(1) = 0`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::num_core::stable::log1p_tail3;
use crate::num_core::{
    euler_gamma, exp_taylor_tail, integrate_semi_infinite, inv_four_sinh_sq, log_gamma,
    zeta_minus_one, ComplexScalar, QuadratureSpec,
};
use crate::{Error, Result};

/// Default truncation of the product route.
pub const DEFAULT_PRODUCT_TERMS: u64 = 20_000;

/// Radius below which the dispatcher prefers the series route.
const SERIES_RADIUS: f64 = 0.75;
/// Real parts above this are shifted down by the recursion before the
/// integral route is used.
const INTEGRAL_MAX_RE: f64 = 4.0;
const SERIES_MAX_TERMS: u32 = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Product,
    Series,
    Integral,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Product => "product",
            Route::Series => "series",
            Route::Integral => "integral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarnesEvalReport {
    pub log_value: ComplexScalar,
    pub route: Route,
    pub terms_or_nodes_used: usize,
    pub err_estimate: f64,
}

fn c(re: f64) -> ComplexScalar {
    ComplexScalar::new(re, 0.0)
}

/// `(z/2) log 2π - ((1+γ) z^2 + z)/2`, the non-product prefactor.
fn product_prefactor(z: ComplexScalar) -> ComplexScalar {
    z * (0.5 * (2.0 * PI).ln()) - ((1.0 + euler_gamma()) * z * z + z) * 0.5
}

/// `Σ_{n>m} n^{-p}` by Euler–Maclaurin, for `p ≥ 2` and moderately large `m`.
fn power_tail(p: f64, m: f64) -> f64 {
    m.powf(1.0 - p) / (p - 1.0) - 0.5 * m.powf(-p) + p * m.powf(-p - 1.0) / 12.0
        - p * (p + 1.0) * (p + 2.0) * m.powf(-p - 3.0) / 720.0
}

/// Product route, truncated after `n_terms` factors.
///
/// Each factor contributes `n·[log(1+z/n) - z/n + z²/(2n²)]`. The discarded
/// factors are summed analytically through `Σ_{k=3}^{6} (-1)^{k-1} z^k/k ·
/// Σ_{n>M} n^{1-k}`; `err_estimate` bounds the first omitted order.
pub fn log_barnes_g_product(z: ComplexScalar, n_terms: u64) -> Result<BarnesEvalReport> {
    if !(z.re > -1.0) || !z.im.is_finite() {
        return Err(Error::domain("log_barnes_g_product", z, "Re z > -1"));
    }
    if n_terms == 0 || (n_terms as f64) <= 4.0 * z.norm() {
        return Err(Error::parameter(
            "n_terms",
            n_terms,
            "positive and larger than 4|z| for the tail expansion",
        ));
    }
    let mut sum = ComplexScalar::new(0.0, 0.0);
    for n in (1..=n_terms).rev() {
        let nf = n as f64;
        sum += log1p_tail3(z / nf) * nf;
    }
    let m = n_terms as f64;
    let mut tail = ComplexScalar::new(0.0, 0.0);
    let mut zk = z * z;
    for k in 3..=6u32 {
        zk *= z;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        tail += zk * (sign / k as f64 * power_tail((k - 1) as f64, m));
    }
    let r = z.norm();
    let err_estimate = r.powi(7) / 7.0 * power_tail(6.0, m) / (1.0 - r / m) + 1e-16 * m * r;
    let log_value = product_prefactor(z) + sum + tail;
    Ok(BarnesEvalReport {
        log_value: crate::num_core::check_finite("log_barnes_g_product", log_value)?,
        route: Route::Product,
        terms_or_nodes_used: n_terms as usize,
        err_estimate,
    })
}

/// `Σ_{n≥3} (-1)^{n-1} (ζ(n-1) - 1) z^n / n` and its truncation bound.
///
/// The subtracted unit parts sum in closed form to `log(1+z) - z + z²/2`.
fn zeta_excess_series(z: ComplexScalar) -> Result<(ComplexScalar, u32, f64)> {
    let r = z.norm();
    let mut sum = ComplexScalar::new(0.0, 0.0);
    let mut pow = z * z;
    let mut n = 2u32;
    loop {
        n += 1;
        pow *= z;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sum += pow * (sign * zeta_minus_one((n - 1) as f64)? / n as f64);
        // ζ(s) - 1 ≤ 3·2^{-s} for s ≥ 2
        let half = 0.5 * r;
        let bound = 6.0 * half.powi(n as i32 + 1) / ((n + 1) as f64 * (1.0 - half));
        if bound < 1e-17 * sum.norm().max(1e-3) || n >= SERIES_MAX_TERMS {
            return Ok((sum, n - 2, bound));
        }
    }
}

/// The series `L(z) = Σ_{n≥3} (-1)^{n-1} ζ(n-1) z^n / n` for `|z| < 1`.
pub fn l_series(z: ComplexScalar) -> Result<ComplexScalar> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain("l_series", z, "|z| < 1"));
    }
    let (excess, _, _) = zeta_excess_series(z)?;
    Ok(log1p_tail3(z) + excess)
}

/// Power-series route, `|z| < 1`.
pub fn log_barnes_g_series(z: ComplexScalar) -> Result<BarnesEvalReport> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain("log_barnes_g_series", z, "|z| < 1"));
    }
    let (excess, terms, bound) = zeta_excess_series(z)?;
    let l = log1p_tail3(z) + excess;
    let log_value = z * (0.5 * ((2.0 * PI).ln() - 1.0)) - z * z * (0.5 * (1.0 + euler_gamma())) + l;
    // log1p loses accuracy as |z| → 1 along the negative axis
    let near_branch = 1e-16 / (c(1.0) + z).norm();
    Ok(BarnesEvalReport {
        log_value,
        route: Route::Series,
        terms_or_nodes_used: terms.max(1) as usize,
        err_estimate: bound + near_branch,
    })
}

/// Integrand `(e^{-zu} - 1 + zu - z²u²/2) / (u (2 sinh(u/2))²)`.
fn lk_integrand(z: ComplexScalar, u: f64) -> ComplexScalar {
    if u <= 1.0 {
        exp_taylor_tail(-z * u, 3) * (inv_four_sinh_sq(u) / u)
    } else {
        // e^{-u}/(1-e^{-u})^2 folded into the exponentials to avoid overflow
        let d = -(-u).exp_m1();
        let denom = u * d * d;
        let poly = c(1.0) - z * u + z * z * (0.5 * u * u);
        ((-(z + 1.0) * u).exp() - poly * (-u).exp()) / denom
    }
}

/// The integral `D(z) = ∫₀^∞ (e^{-zu} - 1 + zu - z²u²/2) du / (u (2 sinh(u/2))²)`
/// and its quadrature error estimate.
pub fn lk_integral(z: ComplexScalar, spec: &QuadratureSpec) -> Result<(ComplexScalar, f64, usize)> {
    if !(z.re > -1.0) || !z.im.is_finite() {
        return Err(Error::domain("lk_integral", z, "Re z > -1"));
    }
    let r = integrate_semi_infinite(|u| lk_integrand(z, u), spec)?;
    Ok((r.value, r.err_estimate, r.evaluations))
}

/// Integral route, `Re z > -1`.
pub fn log_barnes_g_integral(z: ComplexScalar) -> Result<BarnesEvalReport> {
    log_barnes_g_integral_with(z, &QuadratureSpec::with_target(1e-12))
}

pub fn log_barnes_g_integral_with(z: ComplexScalar, spec: &QuadratureSpec) -> Result<BarnesEvalReport> {
    if !(z.re > -1.0) || !z.im.is_finite() {
        return Err(Error::domain("log_barnes_g_integral", z, "Re z > -1"));
    }
    // Decay is e^{-(1+Re z)u}; add a cut at the decay scale near Re z = -1.
    let decay = 1.0 + z.re;
    let spec = if decay < 0.5 {
        spec.clone().with_cut_points([1.0 / decay])
    } else {
        spec.clone()
    };
    let (d, err, nodes) = lk_integral(z, &spec)?;
    let exponent = -z * (0.5 * ((2.0 * PI).ln() - 1.0)) + z * z * (0.5 * (1.0 + euler_gamma())) + d;
    Ok(BarnesEvalReport {
        log_value: -exponent,
        route: Route::Integral,
        terms_or_nodes_used: nodes.max(1),
        err_estimate: err,
    })
}

/// Dispatcher over the three routes.
///
/// Uses the series for `|z| < 0.75` and the integral for `-1 < Re z ≤ 4`;
/// other arguments are moved into that strip with `G(z+1) = Γ(z) G(z)`.
/// Outside `Re z > -1` the result is a logarithm of `G(1+z)` whose imaginary
/// part may differ from the analytic continuation by a multiple of `2π`.
pub fn log_barnes_g(z: ComplexScalar) -> Result<BarnesEvalReport> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("log_barnes_g", z, "finite argument"));
    }
    if z.im == 0.0 && z.re <= -1.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole {
            function: "log_barnes_g",
            at: z.to_string(),
        });
    }
    if z.norm() < SERIES_RADIUS {
        return log_barnes_g_series(z);
    }
    if z.re > -1.0 && z.re <= INTEGRAL_MAX_RE {
        return log_barnes_g_integral(z);
    }
    // log G(1+z) = log G(1+w) + Σ log Γ over the shift
    let mut w = z;
    let mut correction = ComplexScalar::new(0.0, 0.0);
    while w.re > INTEGRAL_MAX_RE {
        // G(1+w) = Γ(w) G(w)
        correction += log_gamma(w)?;
        w -= 1.0;
    }
    while w.re <= -1.0 {
        // G(1+w) = G(2+w) / Γ(1+w)
        correction -= log_gamma(w + 1.0)?;
        w += 1.0;
    }
    let mut inner = if w.norm() < SERIES_RADIUS {
        log_barnes_g_series(w)?
    } else {
        log_barnes_g_integral(w)?
    };
    inner.log_value += correction;
    inner.err_estimate += 1e-14 * correction.norm();
    Ok(inner)
}

/// `A = √(e / 2π)`.
pub fn constant_a() -> f64 {
    (E / (2.0 * PI)).sqrt()
}

/// Random-matrix factor `M(λ) = G(1+λ)² / G(1+2λ)`.
pub fn rm_factor(lambda: ComplexScalar) -> Result<ComplexScalar> {
    Ok(log_rm_factor(lambda)?.exp())
}

/// `log M(λ)`.
pub fn log_rm_factor(lambda: ComplexScalar) -> Result<ComplexScalar> {
    if !(lambda.re > -0.5) {
        return Err(Error::domain("rm_factor", lambda, "Re λ > -1/2"));
    }
    let g1 = log_barnes_g(lambda)?.log_value;
    let g2 = log_barnes_g(lambda * 2.0)?.log_value;
    Ok(g1 * 2.0 - g2)
}
