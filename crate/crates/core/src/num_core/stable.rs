//! Cancellation-free kernels for the integrands and sums used throughout.

use super::ComplexScalar;

/// `e^w - Σ_{j<k} w^j/j!`, accurate for small `|w|`.
pub fn exp_taylor_tail(w: ComplexScalar, k: u32) -> ComplexScalar {
    if w.norm() < 2.0 {
        // leading term w^k/k!
        let mut term = ComplexScalar::new(1.0, 0.0);
        for j in 1..=k {
            term = term * w / j as f64;
        }
        let mut sum = term;
        let mut j = k;
        loop {
            j += 1;
            term = term * w / j as f64;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() || j > k + 60 {
                break;
            }
        }
        sum
    } else {
        let mut poly = ComplexScalar::new(0.0, 0.0);
        let mut term = ComplexScalar::new(1.0, 0.0);
        for j in 0..k {
            if j > 0 {
                term = term * w / j as f64;
            }
            poly += term;
        }
        w.exp() - poly
    }
}

/// Real version of [`exp_taylor_tail`].
pub(crate) fn exp_taylor_tail_real(x: f64, k: u32) -> f64 {
    if x.abs() < 2.0 {
        let mut term = 1.0;
        for j in 1..=k {
            term *= x / j as f64;
        }
        let mut sum = term;
        let mut j = k;
        loop {
            j += 1;
            term *= x / j as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() || j > k + 60 {
                break;
            }
        }
        sum
    } else {
        let mut poly = 0.0;
        let mut term = 1.0;
        for j in 0..k {
            if j > 0 {
                term *= x / j as f64;
            }
            poly += term;
        }
        x.exp() - poly
    }
}

/// `1 / (2 sinh(x/2))^2 = e^{-x} / (1 - e^{-x})^2` for `x > 0`.
pub fn inv_four_sinh_sq(x: f64) -> f64 {
    if x < 1e-4 {
        let x2 = x * x;
        (1.0 - x2 / 12.0 + x2 * x2 / 240.0) / x2
    } else if x < 1.0 {
        let s = 2.0 * (0.5 * x).sinh();
        1.0 / (s * s)
    } else {
        let e = (-x).exp();
        let d = -(-x).exp_m1();
        e / (d * d)
    }
}

/// `log(1 + w)` with full relative accuracy near `w = 0`.
pub(crate) fn log1p_complex(w: ComplexScalar) -> ComplexScalar {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    ComplexScalar::new(re, im)
}

/// `log(1 + w) - w + w^2/2`.
pub(crate) fn log1p_tail3(w: ComplexScalar) -> ComplexScalar {
    if w.norm() < 0.25 {
        // Σ_{k≥3} (-1)^{k-1} w^k / k
        let mut pow = w * w * w;
        let mut sum = pow / 3.0;
        let mut k = 3;
        loop {
            k += 1;
            pow = -pow * w;
            let term = pow / k as f64;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() || k > 80 {
                break;
            }
        }
        sum
    } else {
        log1p_complex(w) - w + w * w * 0.5
    }
}

/// `x - log(1 + x)` for real `x > -1`.
pub(crate) fn x_minus_log1p(x: f64) -> f64 {
    if x.abs() < 0.1 {
        // Σ_{k≥2} (-1)^k x^k / k
        let mut pow = x * x;
        let mut sum = pow / 2.0;
        let mut k = 2;
        loop {
            k += 1;
            pow *= -x;
            let term = pow / k as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() || k > 60 {
                break;
            }
        }
        sum
    } else {
        x - x.ln_1p()
    }
}
