//! Double-exponential quadrature on `(0, ∞)`.
//!
//! The half-line is split at the requested cut points (by default `u = 1`).
//! Finite pieces use the tanh-sinh map `x = c + d·tanh(π/2·sinh t)`, the last
//! piece `[a, ∞)` uses the exp-sinh map `x = a + exp(π/2·sinh t)`. Each piece
//! is refined by halving the step until two successive trapezoid sums agree
//! to that piece's share of the target. Integrands are never evaluated at an
//! endpoint, so removable singularities at `0` only need to be finite nearby.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::ComplexScalar;
use crate::{Error, Result};

/// Values the engine can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for ComplexScalar {
    fn zero() -> Self {
        ComplexScalar::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub target_abs_err: f64,
    pub max_refinements: u32,
    /// Interior split points; non-positive or non-finite entries are ignored.
    pub cut_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            target_abs_err: 1e-12,
            max_refinements: 12,
            cut_points: vec![1.0],
        }
    }
}

impl QuadratureSpec {
    pub fn with_target(target_abs_err: f64) -> Self {
        Self {
            target_abs_err,
            ..Self::default()
        }
    }

    pub fn with_cut_points(mut self, extra: impl IntoIterator<Item = f64>) -> Self {
        self.cut_points.extend(extra);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_abs_err > 0.0) {
            return Err(Error::parameter(
                "target_abs_err",
                self.target_abs_err,
                "strictly positive",
            ));
        }
        if self.max_refinements < 1 {
            return Err(Error::parameter("max_refinements", 0, "at least 1"));
        }
        Ok(())
    }

    fn sorted_cuts(&self) -> Vec<f64> {
        let mut cuts: Vec<f64> = self
            .cut_points
            .iter()
            .copied()
            .filter(|c| c.is_finite() && *c > 0.0)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub err_estimate: f64,
    pub evaluations: usize,
    /// Deepest refinement level reached by any piece.
    pub levels: u32,
}

const TANH_SINH_TMAX: f64 = 4.0;
const EXP_SINH_TMIN: f64 = -4.5;
const EXP_SINH_TMAX: f64 = 3.5;
/// Refinements always taken before testing convergence.
const MIN_LEVELS: u32 = 3;

struct Piece<T> {
    value: T,
    err: f64,
    evaluations: usize,
    levels: u32,
}

/// Runs the halving loop for a node family on `[t_lo, t_hi]`.
///
/// `node(t)` returns `Some(weight · f(x(t)))`, or `None` for nodes whose
/// abscissa collapses onto an endpoint.
fn refine<T, N>(mut node: N, t_lo: f64, t_hi: f64, target: f64, max_levels: u32) -> Result<Piece<T>>
where
    T: QuadValue,
    N: FnMut(f64) -> Result<Option<T>>,
{
    let mut h = 1.0;
    let mut sum = T::zero();
    let mut evaluations = 0;
    let mut t = (t_lo / h).ceil() * h;
    while t <= t_hi {
        if let Some(v) = node(t)? {
            sum = sum + v;
            evaluations += 1;
        }
        t += h;
    }
    let mut estimate = sum * h;
    let mut last_err = f64::INFINITY;
    for level in 1..=max_levels {
        h *= 0.5;
        let mut t = (t_lo / (2.0 * h)).floor() * 2.0 * h + h;
        while t <= t_hi {
            if t >= t_lo {
                if let Some(v) = node(t)? {
                    sum = sum + v;
                    evaluations += 1;
                }
            }
            t += 2.0 * h;
        }
        let next = sum * h;
        last_err = (next - estimate).magnitude();
        estimate = next;
        if level >= MIN_LEVELS && last_err <= target {
            return Ok(Piece {
                value: estimate,
                err: last_err,
                evaluations,
                levels: level,
            });
        }
    }
    Err(Error::NonConvergence {
        target,
        achieved: last_err,
        levels: max_levels,
    })
}

fn tanh_sinh_piece<T, F>(f: &F, a: f64, b: f64, target: f64, max_levels: u32) -> Result<Piece<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    // The node set is symmetric, so each t > 0 evaluates the pair ±t.
    let node = |t: f64| -> Result<Option<T>> {
        if t == 0.0 {
            let v = f(c) * (d * FRAC_PI_2);
            return finite(v).map(Some);
        }
        let t = t.abs();
        let s = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * s).exp();
        // 1 - tanh(s) and sech^2(s) without cancellation
        let gap = d * 2.0 * e / (1.0 + e);
        let w = d * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let mut acc = T::zero();
        let mut used = false;
        let left = a + gap;
        if left > a {
            acc = acc + f(left) * w;
            used = true;
        }
        let right = b - gap;
        if right < b {
            acc = acc + f(right) * w;
            used = true;
        }
        if used {
            finite(acc).map(Some)
        } else {
            Ok(None)
        }
    };
    // only t ≥ 0 is visited; the pair evaluation covers t < 0
    refine(node, 0.0, TANH_SINH_TMAX, target, max_levels)
}

fn exp_sinh_piece<T, F>(f: &F, a: f64, target: f64, max_levels: u32) -> Result<Piece<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let node = |t: f64| -> Result<Option<T>> {
        let s = FRAC_PI_2 * t.sinh();
        let offset = s.exp();
        let x = a + offset;
        if !(x > a) || !x.is_finite() {
            return Ok(None);
        }
        let w = FRAC_PI_2 * t.cosh() * offset;
        finite(f(x) * w).map(Some)
    };
    refine(node, EXP_SINH_TMIN, EXP_SINH_TMAX, target, max_levels)
}

fn finite<T: QuadValue>(v: T) -> Result<T> {
    if v.magnitude().is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("quadrature integrand"))
    }
}

/// Integrate `f` over `(0, ∞)`.
///
/// `f` must be finite on the open half-line and decay at least
/// exponentially at infinity.
pub fn integrate_semi_infinite<T, F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    let cuts = spec.sorted_cuts();
    let pieces = cuts.len() + 1;
    let share = spec.target_abs_err / pieces as f64;
    let mut total = T::zero();
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut levels = 0;
    let mut lo = 0.0;
    for &hi in &cuts {
        let p = tanh_sinh_piece(&f, lo, hi, share, spec.max_refinements)?;
        total = total + p.value;
        err += p.err;
        evaluations += p.evaluations;
        levels = levels.max(p.levels);
        lo = hi;
    }
    let p = exp_sinh_piece(&f, lo, share, spec.max_refinements)?;
    total = total + p.value;
    err += p.err;
    evaluations += p.evaluations;
    levels = levels.max(p.levels);
    Ok(QuadratureResult {
        value: total,
        err_estimate: err,
        evaluations,
        levels,
    })
}

/// Integrate `f` over the finite interval `[a, b]`, split at any cut points
/// of `spec` lying strictly inside.
pub fn integrate_interval<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::parameter("interval", format!("[{a}, {b}]"), "finite with a < b"));
    }
    let mut bounds = vec![a];
    bounds.extend(spec.sorted_cuts().into_iter().filter(|c| *c > a && *c < b));
    bounds.push(b);
    let share = spec.target_abs_err / (bounds.len() - 1) as f64;
    let mut total = T::zero();
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut levels = 0;
    for w in bounds.windows(2) {
        let p = tanh_sinh_piece(&f, w[0], w[1], share, spec.max_refinements)?;
        total = total + p.value;
        err += p.err;
        evaluations += p.evaluations;
        levels = levels.max(p.levels);
    }
    Ok(QuadratureResult {
        value: total,
        err_estimate: err,
        evaluations,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential_moments_are_factorials() {
        let spec = QuadratureSpec::default();
        let mut fact = 1.0;
        for k in 0..=6 {
            if k > 0 {
                fact *= k as f64;
            }
            let r = integrate_semi_infinite(|u: f64| u.powi(k) * (-u).exp(), &spec).unwrap();
            assert!((r.value - fact).abs() < 1e-10, "k={k}: {}", r.value);
            assert!(r.err_estimate >= 0.0);
        }
    }

    #[test]
    fn bose_integral_matches_series_oracle() {
        // ∫ u/(e^u - 1) du = Σ_k ∫ u e^{-ku} du = Σ 1/k^2, summed with an integral tail.
        let m = 100_000u32;
        let head: f64 = (1..m).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
        let oracle = head + 1.0 / m as f64 + 0.5 / (m as f64 * m as f64);
        let r = integrate_semi_infinite(|u: f64| u / u.exp_m1(), &QuadratureSpec::default()).unwrap();
        assert!((r.value - oracle).abs() < 1e-11);
        assert!((r.value - PI * PI / 6.0).abs() < 1e-11);
    }

    #[test]
    fn complex_integrands() {
        // ∫ e^{-(1+i)u} du = 1/(1+i)
        let z = ComplexScalar::new(1.0, 1.0);
        let r = integrate_semi_infinite(|u: f64| (-z * u).exp(), &QuadratureSpec::default()).unwrap();
        assert!((r.value - z.inv()).norm() < 1e-12);
    }

    #[test]
    fn cut_points_resolve_narrow_features() {
        // ∫ N e^{-N u} du = 1 with the mass concentrated at u ~ 1/N.
        let n = 1e4;
        let spec = QuadratureSpec::default().with_cut_points([1.0 / n, 10.0 / n]);
        let r = integrate_semi_infinite(|u: f64| n * (-n * u).exp(), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finite_interval() {
        let r = integrate_interval(|x: f64| x.sin(), 0.0, PI, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        // endpoint singularity
        let r = integrate_interval(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(integrate_interval(|x: f64| x, 1.0, 1.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let spec = QuadratureSpec {
            target_abs_err: 1e-15,
            max_refinements: 1,
            cut_points: vec![1.0],
        };
        let r = integrate_semi_infinite(|u: f64| (10.0 * u).sin() * (-u).exp(), &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn invalid_specs() {
        let bad = QuadratureSpec {
            target_abs_err: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate_semi_infinite(|u: f64| (-u).exp(), &bad).is_err());
        let bad = QuadratureSpec {
            max_refinements: 0,
            ..QuadratureSpec::default()
        };
        assert!(integrate_semi_infinite(|u: f64| (-u).exp(), &bad).is_err());
    }

    #[test]
    fn deterministic() {
        let spec = QuadratureSpec::default();
        let f = |u: f64| u * u / u.exp_m1();
        let a = integrate_semi_infinite(f, &spec).unwrap();
        let b = integrate_semi_infinite(f, &spec).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
