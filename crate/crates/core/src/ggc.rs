//! Generalized gamma convolutions described by their Thorin measure.
//!
//! A GGC variable `Y` has Lévy measure `(dx/x) ∫ μ(dξ) e^{-xξ}`; with
//! `μ = a·δ_1` it is a gamma(`a`) variable. This module evaluates the
//! Laplace transforms of `Y` and of the centred block sums
//! `S_N = Σ_{n≤N} (Y_n - E Y_n)`, the limit functional `H(λ)`, and the
//! auxiliary integrals that appear when that limit is derived.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::barnes::{constant_a, log_barnes_g};
use crate::num_core::stable::{exp_taylor_tail_real, x_minus_log1p};
use crate::num_core::{
    digamma, euler_gamma, harmonic, inv_four_sinh_sq, integrate_semi_infinite, log_gamma,
    zeta, ComplexScalar, QuadratureSpec,
};
use crate::samplers::gamma_sample;
use crate::{Error, IdentityReport, Result};

/// Quadrature target for the analytic operations of this module.
pub const GGC_QUAD_TARGET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub mass: f64,
    pub location: f64,
}

/// `μ = Σ w_i δ_{ξ_i}` plus an optional density `ρ` sampled on a grid and
/// integrated by the trapezoid rule.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ThorinMeasure {
    atoms: Vec<Atom>,
    density_grid: Option<Vec<(f64, f64)>>,
}

impl ThorinMeasure {
    pub fn new(atoms: Vec<Atom>, density_grid: Option<Vec<(f64, f64)>>) -> Result<Self> {
        for a in &atoms {
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::parameter("atom mass", a.mass, "finite and > 0"));
            }
            if !(a.location > 0.0 && a.location.is_finite()) {
                return Err(Error::parameter("atom location", a.location, "finite and > 0"));
            }
        }
        if let Some(grid) = &density_grid {
            if grid.len() < 2 {
                return Err(Error::parameter("density grid", grid.len(), "at least two nodes"));
            }
            for w in grid.windows(2) {
                if !(w[1].0 > w[0].0) {
                    return Err(Error::parameter("density grid", w[1].0, "strictly increasing nodes"));
                }
            }
            for &(xi, rho) in grid {
                if !(xi > 0.0 && xi.is_finite()) {
                    return Err(Error::parameter("density node", xi, "finite and > 0"));
                }
                if !(rho >= 0.0 && rho.is_finite()) {
                    return Err(Error::parameter("density value", rho, "finite and ≥ 0"));
                }
            }
        }
        Ok(Self {
            atoms,
            density_grid,
        })
    }

    pub fn atomic(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(mass, location)| Atom { mass, location })
            .collect();
        Self::new(atoms, None)
    }

    /// `a · δ_ξ`.
    pub fn point(mass: f64, location: f64) -> Result<Self> {
        Self::atomic([(mass, location)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density_grid(&self) -> Option<&[(f64, f64)]> {
        self.density_grid.as_deref()
    }

    pub fn is_atomic(&self) -> bool {
        self.density_grid.is_none()
    }

    /// Atoms plus the trapezoid weights of the density grid. Integrals
    /// against `μ` are sums over this list.
    pub fn discretized(&self) -> Vec<Atom> {
        let mut out = self.atoms.clone();
        if let Some(grid) = &self.density_grid {
            let last = grid.len() - 1;
            for (k, &(xi, rho)) in grid.iter().enumerate() {
                let left = if k > 0 { grid[k - 1].0 } else { xi };
                let right = if k < last { grid[k + 1].0 } else { xi };
                let mass = 0.5 * (right - left) * rho;
                if mass > 0.0 {
                    out.push(Atom { mass, location: xi });
                }
            }
        }
        out
    }

    /// The measure with density replaced by its trapezoid atoms.
    pub fn to_atomic(&self) -> Self {
        Self {
            atoms: self.discretized(),
            density_grid: None,
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::parameter("scale", c, "finite and > 0"));
        }
        Ok(Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    mass: a.mass * c,
                    location: a.location,
                })
                .collect(),
            density_grid: self
                .density_grid
                .as_ref()
                .map(|g| g.iter().map(|&(x, r)| (x, r * c)).collect()),
        })
    }

    fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.discretized().iter().map(|a| a.mass * g(a.location)).sum()
    }

    fn cut_points(&self) -> Vec<f64> {
        let mut cuts: Vec<f64> = self.discretized().iter().map(|a| 1.0 / a.location).collect();
        cuts.push(1.0);
        cuts
    }
}

/// `(μ_{-1}, μ_{-2}) = (∫ μ(dξ)/ξ, ∫ μ(dξ)/ξ²)`, i.e. `E[Y]` and `Var(Y)`.
pub fn thorin_moments(mu: &ThorinMeasure) -> (f64, f64) {
    (mu.integrate(|x| 1.0 / x), mu.integrate(|x| 1.0 / (x * x)))
}

/// `Σ_μ(y) = ∫ μ(dξ) / (2 sinh(ξy/2))²`.
pub fn sigma_mu(mu: &ThorinMeasure, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("sigma_mu", y, "y > 0"));
    }
    Ok(mu.integrate(|xi| inv_four_sinh_sq(xi * y)))
}

/// Constant multiplying `λ²σ²/2` in the exponent of `H(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HConstantMode {
    /// `1 + γ`
    OnePlusGamma,
    /// `γ`
    Gamma,
}

impl HConstantMode {
    pub const ALL: [HConstantMode; 2] = [HConstantMode::OnePlusGamma, HConstantMode::Gamma];

    pub fn constant(self) -> f64 {
        match self {
            HConstantMode::OnePlusGamma => 1.0 + euler_gamma(),
            HConstantMode::Gamma => euler_gamma(),
        }
    }
}

impl std::fmt::Display for HConstantMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HConstantMode::OnePlusGamma => "one_plus_gamma",
            HConstantMode::Gamma => "gamma",
        })
    }
}

impl std::str::FromStr for HConstantMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one_plus_gamma" => Ok(HConstantMode::OnePlusGamma),
            "gamma" => Ok(HConstantMode::Gamma),
            _ => Err(Error::parameter("mode", s, "one_plus_gamma or gamma")),
        }
    }
}

fn check_lambda(function: &'static str, lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(function, lambda, "λ > 0"));
    }
    Ok(())
}

/// `∫₀^∞ (dy/y) Σ_μ(y) (e^{-λy} - 1 + λy - λ²y²/2)` and its error estimate.
pub fn h_integral(mu: &ThorinMeasure, lambda: f64) -> Result<(f64, f64)> {
    check_lambda("h_integral", lambda)?;
    let atoms = mu.discretized();
    let spec = QuadratureSpec::with_target(GGC_QUAD_TARGET).with_cut_points(mu.cut_points());
    let r = integrate_semi_infinite(
        |y| {
            let s: f64 = atoms.iter().map(|a| a.mass * inv_four_sinh_sq(a.location * y)).sum();
            s * exp_taylor_tail_real(-lambda * y, 3) / y
        },
        &spec,
    )?;
    Ok((r.value, r.err_estimate))
}

/// `log H(λ)`.
pub fn log_h_lambda(mu: &ThorinMeasure, lambda: f64, mode: HConstantMode) -> Result<f64> {
    let (_, sigma2) = thorin_moments(mu);
    let (integral, _) = h_integral(mu, lambda)?;
    Ok(0.5 * lambda * lambda * sigma2 * mode.constant() + integral)
}

pub fn h_lambda(mu: &ThorinMeasure, lambda: f64, mode: HConstantMode) -> Result<f64> {
    Ok(log_h_lambda(mu, lambda, mode)?.exp())
}

/// `E[e^{-λY}] = exp(-∫ μ(dξ) log(1 + λ/ξ))`.
pub fn laplace_y(mu: &ThorinMeasure, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain("laplace_y", lambda, "λ ≥ 0"));
    }
    Ok((-mu.integrate(|xi| (lambda / xi).ln_1p())).exp())
}

/// `E[e^{-λY}]` straight from the Lévy measure,
/// `exp(-∫₀^∞ (dx/x) ∫μ(dξ) e^{-ξx} (1 - e^{-λx}))`, by quadrature.
pub fn laplace_y_quadrature(mu: &ThorinMeasure, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain("laplace_y_quadrature", lambda, "λ ≥ 0"));
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let atoms = mu.discretized();
    let spec = QuadratureSpec::with_target(GGC_QUAD_TARGET).with_cut_points(mu.cut_points());
    let r = integrate_semi_infinite(
        |x| {
            let k: f64 = atoms.iter().map(|a| a.mass * (-a.location * x).exp()).sum();
            -k * (-lambda * x).exp_m1() / x
        },
        &spec,
    )?;
    Ok((-r.value).exp())
}

/// Parameters of `N^{-λ²σ²/2} E[e^{-λ S_N}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnQuery {
    pub measure: ThorinMeasure,
    pub n_max: u64,
    pub lambda: f64,
}

/// `log (N^{-λ²σ²/2} Π_{n≤N} φ̃(λ/n)^n)` with `φ̃(s) = e^{sμ_{-1}} E[e^{-sY}]`.
pub fn log_scaled_laplace_sn(q: &SnQuery) -> Result<f64> {
    check_lambda("scaled_laplace_sn", q.lambda)?;
    if q.n_max == 0 {
        return Err(Error::parameter("N", q.n_max, "N ≥ 1"));
    }
    let atoms = q.measure.discretized();
    let (_, sigma2) = thorin_moments(&q.measure);
    let mut sum = 0.0;
    for n in (1..=q.n_max).rev() {
        let nf = n as f64;
        let s = q.lambda / nf;
        let log_phi: f64 = atoms.iter().map(|a| a.mass * x_minus_log1p(s / a.location)).sum();
        sum += nf * log_phi;
    }
    Ok(sum - 0.5 * q.lambda * q.lambda * sigma2 * (q.n_max as f64).ln())
}

pub fn scaled_laplace_sn(q: &SnQuery) -> Result<f64> {
    Ok(log_scaled_laplace_sn(q)?.exp())
}

/// `log (N^{-λ²/2} e^{λN} Π_{n≤N} (1 + λ/n)^{-n})`.
pub fn log_exp_laplace_product(n_max: u64, lambda: f64) -> Result<f64> {
    check_lambda("exp_laplace_product", lambda)?;
    if n_max == 0 {
        return Err(Error::parameter("N", n_max, "N ≥ 1"));
    }
    let mut sum = 0.0;
    for n in (1..=n_max).rev() {
        let nf = n as f64;
        sum += lambda - nf * (lambda / nf).ln_1p();
    }
    Ok(sum - 0.5 * lambda * lambda * (n_max as f64).ln())
}

pub fn exp_laplace_product(n_max: u64, lambda: f64) -> Result<f64> {
    Ok(log_exp_laplace_product(n_max, lambda)?.exp())
}

/// `-log (A^λ e^{λ²/2} G(1+λ))`, the limit of [`log_exp_laplace_product`].
pub fn log_exp_laplace_limit(lambda: f64) -> Result<f64> {
    let lg = log_barnes_g(ComplexScalar::new(lambda, 0.0))?.log_value.re;
    Ok(-(lambda * constant_a().ln() + 0.5 * lambda * lambda + lg))
}

/// `R_N(ξ, λ) = ∫₀^∞ (dy/y)(1 - λy - e^{-λy}) N e^{-ξyN} / (e^{ξy} - 1)`.
///
/// Evaluated after the substitution `v = Ny`, which keeps the integrand on
/// a fixed scale as `N` grows.
pub fn rn_probe(xi: f64, lambda: f64, n: u64) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::domain("rn_probe", xi, "ξ > 0"));
    }
    check_lambda("rn_probe", lambda)?;
    if n == 0 {
        return Err(Error::parameter("N", n, "N ≥ 1"));
    }
    let nf = n as f64;
    let spec = QuadratureSpec::with_target(GGC_QUAD_TARGET).with_cut_points([1.0 / xi, 10.0 / xi]);
    let r = integrate_semi_infinite(
        |v| {
            let head = -exp_taylor_tail_real(-lambda * v / nf, 2);
            head * (nf / (xi * v / nf).exp_m1()) * (-xi * v).exp() / v
        },
        &spec,
    )?;
    Ok(r.value)
}

/// `Σ_{s>N} s^{-2}`.
fn zeta2_tail(n: u64) -> Result<f64> {
    if n < 20 {
        let head: f64 = (1..=n).rev().map(|s| 1.0 / (s * s) as f64).sum();
        return Ok(zeta(2.0)? - head);
    }
    let x = n as f64;
    let x2 = x * x;
    // Euler-Maclaurin for the Hurwitz tail
    Ok(1.0 / x - 0.5 / x2 + 1.0 / (6.0 * x2 * x) - 1.0 / (30.0 * x2 * x2 * x)
        + 1.0 / (42.0 * x2 * x2 * x2 * x))
}

/// `∫₀^∞ u e^{-u} (1 - e^{-Nu}) / (1 - e^{-u})² du` by quadrature.
pub fn double_sum_integral(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::parameter("N", n, "N ≥ 1"));
    }
    let nf = n as f64;
    let spec = QuadratureSpec::with_target(1e-13).with_cut_points([1.0 / nf, 10.0 / nf]);
    let r = integrate_semi_infinite(
        |u| {
            let d = (-u).exp_m1();
            u * (-u).exp() * -(-nf * u).exp_m1() / (d * d)
        },
        &spec,
    )?;
    Ok(r.value)
}

/// Closed form `N Σ_{s>N} s^{-2} + H_N` of [`double_sum_integral`].
pub fn double_sum_closed_form(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::parameter("N", n, "N ≥ 1"));
    }
    Ok(n as f64 * zeta2_tail(n)? + harmonic(n))
}

/// `double_sum_integral(N) - (log N + 1 + γ)`.
pub fn double_sum_remainder(n: u64) -> Result<f64> {
    Ok(double_sum_integral(n)? - ((n as f64).ln() + 1.0 + euler_gamma()))
}

/// Residual of `log Γ(a+λ) - log Γ(a) = λψ(a) + ∫₀^∞ e^{-au}(e^{-λu} - 1 + λu) du / (u(1 - e^{-u}))`.
pub fn loggamma_levy_residual(a: f64, lambda: f64) -> Result<IdentityReport> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("loggamma_levy_residual", a, "a > 0"));
    }
    if !(lambda > -a && lambda.is_finite()) {
        return Err(Error::domain("loggamma_levy_residual", lambda, "λ > -a"));
    }
    let c = |x: f64| ComplexScalar::new(x, 0.0);
    let lhs = log_gamma(c(a + lambda))?.re - log_gamma(c(a))?.re;
    let decay = a + lambda.min(0.0);
    let spec = QuadratureSpec::with_target(1e-12).with_cut_points([1.0 / decay]);
    let r = integrate_semi_infinite(
        |u| {
            let head = if (lambda * u).abs() < 2.0 {
                (-a * u).exp() * exp_taylor_tail_real(-lambda * u, 2)
            } else {
                // combined exponents so e^{-au} cannot underflow against e^{-λu}
                (-(a + lambda) * u).exp() - (-a * u).exp() * (1.0 - lambda * u)
            };
            head / (u * -(-u).exp_m1())
        },
        &spec,
    )?;
    let rhs = lambda * digamma(c(a))?.re + r.value;
    Ok(IdentityReport::new(lhs, rhs, 1e-8))
}

/// One draw of `Y = Σ_i γ_{w_i} / ξ_i`.
pub fn sample_y<R: Rng + ?Sized>(mu: &ThorinMeasure, rng: &mut R) -> Result<f64> {
    if !mu.is_atomic() {
        return Err(Error::UnsupportedMeasure);
    }
    let mut y = 0.0;
    for a in mu.atoms() {
        y += gamma_sample(a.mass, rng)? / a.location;
    }
    Ok(y)
}

/// One draw of `S_N`, using that the mean of `n` iid copies of `Y` has
/// Thorin measure `n·μ` rescaled by `1/n`.
pub fn sample_sn<R: Rng + ?Sized>(q: &SnQuery, rng: &mut R) -> Result<f64> {
    if !q.measure.is_atomic() {
        return Err(Error::UnsupportedMeasure);
    }
    let (mean, _) = thorin_moments(&q.measure);
    let mut s = 0.0;
    for n in 1..=q.n_max {
        let nf = n as f64;
        let mut y = 0.0;
        for a in q.measure.atoms() {
            y += gamma_sample(nf * a.mass, rng)? / (nf * a.location);
        }
        s += y - mean;
    }
    Ok(s)
}

/// Non-negative step function on `[b_0, b_k]`: value `values[i]` on
/// `[breakpoints[i], breakpoints[i+1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

/// Thorin measure of `∫ f(u) dγ_u`: the image of Lebesgue measure under
/// `ξ = 1/f(u)`. Each step of length `ℓ` and value `v > 0` contributes an
/// atom of mass `ℓ` at `1/v`.
pub fn ggc_from_function(f: &StepFunction) -> Result<ThorinMeasure> {
    if f.breakpoints.len() != f.values.len() + 1 {
        return Err(Error::parameter(
            "step function",
            f.values.len(),
            "one more breakpoint than values",
        ));
    }
    let mut atoms = Vec::new();
    for (w, &v) in f.breakpoints.windows(2).zip(&f.values) {
        if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::parameter("breakpoint", w[1], "finite and strictly increasing"));
        }
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::parameter("step value", v, "finite and ≥ 0"));
        }
        if v > 0.0 {
            atoms.push(Atom {
                mass: w[1] - w[0],
                location: 1.0 / v,
            });
        }
    }
    ThorinMeasure::new(atoms, None)
}

/// Comparison of both `H` constants against the exact finite-`N` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeEvidence {
    pub lambda: f64,
    pub log_sn_hi: f64,
    pub log_sn_lo: f64,
    /// `|log S(N_hi) - log S(N_lo)|`
    pub extrapolation_error: f64,
    pub log_h_one_plus_gamma: f64,
    pub log_h_gamma: f64,
    pub one_plus_gamma_matches: bool,
    pub gamma_matches: bool,
}

impl ModeEvidence {
    /// The unique matching mode, if exactly one matches.
    pub fn winner(&self) -> Option<HConstantMode> {
        match (self.one_plus_gamma_matches, self.gamma_matches) {
            (true, false) => Some(HConstantMode::OnePlusGamma),
            (false, true) => Some(HConstantMode::Gamma),
            _ => None,
        }
    }
}

/// A mode matches when `|log S(N_hi) - log H| ≤ 10 |log S(N_hi) - log S(N_lo)|`.
pub fn mode_evidence(mu: &ThorinMeasure, lambda: f64, n_lo: u64, n_hi: u64) -> Result<ModeEvidence> {
    let sn = |n| {
        log_scaled_laplace_sn(&SnQuery {
            measure: mu.clone(),
            n_max: n,
            lambda,
        })
    };
    let hi = sn(n_hi)?;
    let lo = sn(n_lo)?;
    let err = (hi - lo).abs();
    let h_one = log_h_lambda(mu, lambda, HConstantMode::OnePlusGamma)?;
    let h_gamma = log_h_lambda(mu, lambda, HConstantMode::Gamma)?;
    Ok(ModeEvidence {
        lambda,
        log_sn_hi: hi,
        log_sn_lo: lo,
        extrapolation_error: err,
        log_h_one_plus_gamma: h_one,
        log_h_gamma: h_gamma,
        one_plus_gamma_matches: (hi - h_one).abs() <= 10.0 * err,
        gamma_matches: (hi - h_gamma).abs() <= 10.0 * err,
    })
}

/// Trend of `R_N(ξ, λ)` over increasing `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnEvidence {
    pub xi: f64,
    pub lambda: f64,
    pub n: Vec<u64>,
    pub values: Vec<f64>,
    /// every successive gap at most half the previous one
    pub gaps_shrink: bool,
    /// Richardson extrapolation assuming an `O(1/N)` remainder
    pub limit_estimate: f64,
    /// `-λ²/(2ξ²)`
    pub mode_consistent_limit: f64,
}

impl RnEvidence {
    /// The `H` constant implied by the recorded limit: `0` gives the
    /// `1 + γ`, `-λ²/(2ξ²)` gives `γ`.
    pub fn implied_mode(&self) -> Option<HConstantMode> {
        let d_zero = self.limit_estimate.abs();
        let d_corr = (self.limit_estimate - self.mode_consistent_limit).abs();
        if d_corr < 0.1 * d_zero {
            Some(HConstantMode::Gamma)
        } else if d_zero < 0.1 * d_corr {
            Some(HConstantMode::OnePlusGamma)
        } else {
            None
        }
    }
}

/// `ns` must be increasing, with at least two entries.
pub fn rn_evidence(xi: f64, lambda: f64, ns: &[u64]) -> Result<RnEvidence> {
    if ns.len() < 2 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::parameter("N grid", ns.len(), "at least two increasing values"));
    }
    let values = ns
        .iter()
        .map(|&n| rn_probe(xi, lambda, n))
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let gaps_shrink = gaps.windows(2).all(|g| g[1] <= 0.5 * g[0]);
    let k = ns.len() - 1;
    let ratio = ns[k] as f64 / ns[k - 1] as f64;
    let limit_estimate = values[k] + (values[k] - values[k - 1]) / (ratio - 1.0);
    Ok(RnEvidence {
        xi,
        lambda,
        n: ns.to_vec(),
        values,
        gaps_shrink,
        limit_estimate,
        mode_consistent_limit: -lambda * lambda / (2.0 * xi * xi),
    })
}
