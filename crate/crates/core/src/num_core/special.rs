//! Log-gamma, digamma and the real Riemann zeta function.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::stable::log1p_complex;
use super::{check_finite, ComplexScalar};
use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Even-index Bernoulli numbers B_2 .. B_22.
const BERNOULLI_EVEN: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// Shift target for the asymptotic expansions.
const ASYMPTOTIC_MIN: f64 = 10.0;

/// Highest integer argument kept in the zeta table.
const ZETA_TABLE_MAX: usize = 64;

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// `H_n = Σ_{k=1}^n 1/k`, summed smallest term first.
pub fn harmonic(n: u64) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

fn is_nonpositive_integer(z: ComplexScalar) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=ZETA_TABLE_MAX)
            .map(|k| if k < 2 { f64::NAN } else { 1.0 + zeta_minus_one_em(k as f64) })
            .collect()
    })
}

/// `ζ(s) - 1` by Euler–Maclaurin summation with the head `Σ_{n=2}^{M-1}`.
fn zeta_minus_one_em(s: f64) -> f64 {
    const M: f64 = 12.0;
    let mut head = 0.0;
    for n in (2..M as u32).rev() {
        head += (n as f64).powf(-s);
    }
    let m_s = M.powf(-s);
    let mut tail = M * m_s / (s - 1.0) + 0.5 * m_s;
    // B_{2k}/(2k)! · s(s+1)…(s+2k-2) · M^{-s-2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut m_pow = m_s / M;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k + 1;
        if k > 1 {
            let j = (2 * k) as f64;
            rising *= (s + j - 3.0) * (s + j - 2.0);
            fact *= (j - 1.0) * j;
            m_pow /= M * M;
        }
        tail += b / fact * rising * m_pow;
    }
    head + tail
}

/// `ζ(s) - 1` for real `s > 1`, accurate in relative terms for large `s`.
pub fn zeta_minus_one(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::domain("zeta", s, "real s > 1"));
    }
    if s >= 40.0 {
        let mut sum = 0.0;
        for n in (2..=6u32).rev() {
            sum += (n as f64).powf(-s);
        }
        return Ok(sum);
    }
    Ok(zeta_minus_one_em(s))
}

/// Riemann zeta on the real half-line `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if s.fract() == 0.0 && (2.0..=ZETA_TABLE_MAX as f64).contains(&s) {
        return Ok(zeta_table()[s as usize]);
    }
    Ok(1.0 + zeta_minus_one(s)?)
}

/// Series of `log Γ(1+x)` about `x = 0`, valid for `|x| ≤ 1/2`.
fn log_gamma_near_one(x: ComplexScalar) -> ComplexScalar {
    let table = zeta_table();
    let mut sum = -EULER_GAMMA * x;
    let mut pow = -x;
    for (k, zk) in table.iter().enumerate().skip(2) {
        pow = -pow * x;
        let term = pow * (*zk / k as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

fn stirling_log_gamma(w: ComplexScalar) -> ComplexScalar {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = ComplexScalar::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(10) {
        let k2 = 2.0 * (k + 1) as f64;
        corr += pow * (b / (k2 * (k2 - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr
}

/// Log of Γ on the analytic branch that is real on the positive axis and
/// continuous in the right half-plane `Re z ≥ 1/2` (the scipy/mpmath
/// `loggamma` convention). For `Re z < 1/2` the value comes from the
/// reflection formula with principal logarithms, so it is *a* logarithm of
/// Γ(z) that may differ from that branch by a multiple of `2πi`.
pub fn log_gamma(z: ComplexScalar) -> Result<ComplexScalar> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("log_gamma", z, "finite argument"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "log_gamma",
            at: z.to_string(),
        });
    }
    if z.re < 0.5 {
        let one = ComplexScalar::new(1.0, 0.0);
        let s = (z * PI).sin();
        let v = ComplexScalar::new(PI.ln(), 0.0) - s.ln() - log_gamma(one - z)?;
        return check_finite("log_gamma", v);
    }
    let one = ComplexScalar::new(1.0, 0.0);
    let x1 = z - one;
    if x1.norm() <= 0.5 {
        return Ok(log_gamma_near_one(x1));
    }
    let x2 = x1 - one;
    if x2.norm() <= 0.5 {
        return Ok(log_gamma_near_one(x2) + log1p_complex(x2));
    }
    // Shift up to the asymptotic region; the real part of the correction is
    // the log of a product of moduli, the imaginary part a sum of arguments.
    let mut w = z;
    let mut modulus = 1.0;
    let mut arg = 0.0;
    while w.norm() < ASYMPTOTIC_MIN || w.re < 1.0 {
        modulus *= w.norm();
        arg += w.arg();
        w += one;
    }
    let v = stirling_log_gamma(w) - ComplexScalar::new(modulus.ln(), arg);
    check_finite("log_gamma", v)
}

/// Real log-gamma for `x > 0`.
pub fn log_gamma_real(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("log_gamma_real", x, "x > 0"));
    }
    Ok(log_gamma(ComplexScalar::new(x, 0.0))?.re)
}

/// Digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: ComplexScalar) -> Result<ComplexScalar> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("digamma", z, "finite argument"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "digamma",
            at: z.to_string(),
        });
    }
    let one = ComplexScalar::new(1.0, 0.0);
    if z.re < 0.5 {
        let t = (z * PI).tan();
        let v = digamma(one - z)? - PI / t;
        return check_finite("digamma", v);
    }
    let mut w = z;
    let mut shift = ComplexScalar::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_MIN || w.re < 1.0 {
        shift += w.inv();
        w += one;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = ComplexScalar::new(0.0, 0.0);
    let mut pow = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(10) {
        let k2 = 2.0 * (k + 1) as f64;
        series += pow * (b / k2);
        pow *= inv2;
    }
    let v = w.ln() - inv * 0.5 - series - shift;
    check_finite("digamma", v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    /// High-precision references (40-digit arithmetic), frozen.
    const LOG_GAMMA_REAL: [(f64, f64); 14] = [
        (0.5, 0.57236494292470008707),
        (0.75, 0.20328095143129537148),
        (1.5, -0.12078223763524522235),
        (2.5, 0.28468287047291915963),
        (3.3, 0.98709857789473440406),
        (7.25, 7.0521854507385394449),
        (10.1, 13.027526738633237155),
        (33.3, 82.603723581654943008),
        (99.5, 356.83538282361307447),
        (150.0, 600.00947055532742811),
        (200.0, 857.93366982585743682),
        (1.001, -0.00057639359828330615152),
        (1.999, -0.00042246180069210728418),
        (0.9, 0.066376239734742954426),
    ];

    #[test]
    fn log_gamma_real_references() {
        for &(x, want) in &LOG_GAMMA_REAL {
            let got = log_gamma_real(x).unwrap();
            assert!(((got - want) / want).abs() <= 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_trivial_values() {
        assert_eq!(log_gamma_real(1.0).unwrap(), 0.0);
        assert!((log_gamma_real(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!(log_gamma_real(2.0).unwrap().abs() < 1e-16);
    }

    #[test]
    fn log_gamma_complex_references() {
        let refs = [
            (c(0.5, 1.0), c(-0.65279064420437291527, -0.95500772434256910956)),
            (c(1.0, -2.0), c(-1.8760787864309293412, -0.12964631630978831138)),
            (c(3.0, 4.0), c(-1.7566267846037841105, 4.7426644380346579282)),
            (c(0.2, 0.3), c(0.87875946100138173549, -1.0630528824564221713)),
            (c(10.0, -7.0), c(10.418194968645705788, -16.311795218824036624)),
        ];
        for (z, want) in refs {
            let got = log_gamma(z).unwrap();
            assert!((got - want).norm() < 1e-13 * want.norm().max(1.0), "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_reflection_region_exponentiates_correctly() {
        // Compared through exp since the branch may differ by 2πi there.
        let refs = [
            (c(-0.5, 0.0), c(1.2655121234846453965, -PI)),
            (c(-2.5, 0.0), c(-0.056243716497674050673, -3.0 * PI)),
            (c(-1.3, 0.4), c(0.44259910911765276445, -5.4868318238040902567)),
        ];
        for (z, want) in refs {
            let got = log_gamma(z).unwrap();
            assert!((got.re - want.re).abs() < 1e-13);
            assert!((got.exp() - want.exp()).norm() < 1e-12 * want.exp().norm());
        }
    }

    #[test]
    fn log_gamma_poles() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(x, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(log_gamma(c(-1.0, 1e-3)).is_ok());
        assert!(log_gamma_real(-0.5).is_err());
        assert!(log_gamma(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn digamma_references() {
        let refs = [
            (0.5, -1.9635100260214234794),
            (1.0, -0.57721566490153286061),
            (1.4616321449683622, -9.2412655217294275168e-17),
            (3.7, 1.1671535393615114409),
            (12.5, 2.4851956512749120482),
            (50.0, 3.901989673427892197),
            (200.0, 5.2958152832199116155),
        ];
        for (x, want) in refs {
            let got = digamma(c(x, 0.0)).unwrap().re;
            assert!((got - want).abs() <= 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn digamma_recurrence_and_poles() {
        let z = c(3.0, 0.0);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
        assert!((d.re - 1.0 / 3.0).abs() < 1e-14);
        let z = c(-0.3, 0.8);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
        assert!((d - z.inv()).norm() < 1e-12);
        assert!(digamma(c(-2.0, 0.0)).is_err());
    }

    #[test]
    fn digamma_one_is_minus_euler_from_series_definition() {
        // γ = lim (H_n - ln n), with the asymptotic corrections through n^{-6}.
        let n = 1000u64;
        let nf = n as f64;
        let gamma_est = harmonic(n) - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf.powi(2))
            - 1.0 / (120.0 * nf.powi(4))
            + 1.0 / (252.0 * nf.powi(6));
        assert!((gamma_est - euler_gamma()).abs() < 1e-14);
        assert!((digamma(c(1.0, 0.0)).unwrap().re + gamma_est).abs() < 1e-14);
        assert!((digamma(c(2.0, 0.0)).unwrap().re - (1.0 - gamma_est)).abs() < 1e-14);
    }

    #[test]
    fn zeta_references() {
        let refs = [
            (1.5, 2.6123753486854883433),
            (2.0, 1.6449340668482264365),
            (2.5, 1.3414872572509171798),
            (3.0, 1.2020569031595942854),
            (4.0, 1.0823232337111381915),
            (7.0, 1.0083492773819228268),
            (20.0, 1.0000009539620338728),
        ];
        for (s, want) in refs {
            assert!((zeta(s).unwrap() - want).abs() <= 1e-15, "s={s}");
        }
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_direct_series_oracle() {
        // Σ_{n<M} n^{-s} plus the integral tail bracket [M^{1-s}/(s-1), (M-1)^{1-s}/(s-1)].
        for s in [2.0, 3.5, 4.0] {
            let m = 200_000u32;
            let head: f64 = (1..m).rev().map(|n| (n as f64).powf(-s)).sum();
            let lo = head + (m as f64).powf(1.0 - s) / (s - 1.0);
            let hi = head + ((m - 1) as f64).powf(1.0 - s) / (s - 1.0);
            let z = zeta(s).unwrap();
            assert!(z >= lo - 1e-13 && z <= hi + 1e-13, "s={s}");
        }
    }

    #[test]
    fn zeta_domain_and_monotone_limit() {
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
        let mut prev = zeta(2.0).unwrap();
        for s in [3.0, 5.0, 10.0, 30.0, 45.0] {
            let z = zeta(s).unwrap();
            assert!(z < prev && z > 1.0);
            prev = z;
        }
        assert!((zeta_minus_one(45.0).unwrap() - 2f64.powi(-45) * (1.0 + 1.5f64.powi(-45))).abs() < 1e-26);
        assert_eq!(zeta(200.0).unwrap(), 1.0);
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(1), 1.0);
        assert_eq!(harmonic(2), 1.5);
        let mut prev = f64::INFINITY;
        for n in [10u64, 100, 1000, 10_000] {
            let gap = harmonic(n) - (n as f64).ln() - euler_gamma();
            assert!(gap > 0.0 && gap < prev);
            prev = gap;
        }
    }
}
