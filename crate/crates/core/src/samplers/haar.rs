//! Haar-distributed unitary matrices and `|det(I - U)|`.
//!
//! A complex Ginibre matrix is factored by Householder QR; multiplying `Q`
//! by the phases of `diag(R)` makes the factorization unique, and the result
//! is exactly Haar distributed. Matrices are dense row-major `N × N`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::num_core::ComplexScalar;
use crate::{Error, Result};

pub const HAAR_MAX_DIM: usize = 64;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > HAAR_MAX_DIM {
        return Err(Error::Dimension {
            dim: n,
            max: HAAR_MAX_DIM,
        });
    }
    Ok(())
}

fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<ComplexScalar> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            ComplexScalar::new(re * scale, im * scale)
        })
        .collect()
}

/// Householder QR of `a` in place. Returns `Q`; `a` is left holding `R`.
fn householder_qr(a: &mut [ComplexScalar], n: usize) -> Vec<ComplexScalar> {
    let zero = ComplexScalar::new(0.0, 0.0);
    let mut q = vec![zero; n * n];
    for i in 0..n {
        q[i * n + i] = ComplexScalar::new(1.0, 0.0);
    }
    let mut v = vec![zero; n];
    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[k * n + k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            ComplexScalar::new(1.0, 0.0)
        };
        // v = x + phase·‖x‖ e_1 avoids cancellation
        for i in k..n {
            v[i] = a[i * n + k];
        }
        v[k] += phase * norm;
        let vnorm2: f64 = (k..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // A ← (I - τ v v*) A on rows k.., columns k..
        for j in k..n {
            let mut dot = zero;
            for i in k..n {
                dot += v[i].conj() * a[i * n + j];
            }
            dot *= tau;
            for i in k..n {
                a[i * n + j] -= v[i] * dot;
            }
        }
        // Q ← Q (I - τ v v*)
        for r in 0..n {
            let mut dot = zero;
            for i in k..n {
                dot += q[r * n + i] * v[i];
            }
            dot *= tau;
            for i in k..n {
                q[r * n + i] -= dot * v[i].conj();
            }
        }
    }
    q
}

/// One Haar-distributed `N × N` unitary matrix, row-major.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<ComplexScalar>> {
    check_dim(n)?;
    let mut a = ginibre(n, rng);
    let mut q = householder_qr(&mut a, n);
    for j in 0..n {
        let r = a[j * n + j];
        let phase = if r.norm() > 0.0 {
            r / r.norm()
        } else {
            ComplexScalar::new(1.0, 0.0)
        };
        for i in 0..n {
            q[i * n + j] *= phase;
        }
    }
    Ok(q)
}

/// `|det(I - U)|` by LU factorization with partial pivoting.
pub fn abs_det_i_minus(u: &[ComplexScalar], n: usize) -> Result<f64> {
    check_dim(n)?;
    if u.len() != n * n {
        return Err(Error::parameter("matrix", u.len(), "length must be N²"));
    }
    let mut m: Vec<ComplexScalar> = u.iter().map(|x| -x).collect();
    for i in 0..n {
        m[i * n + i] += 1.0;
    }
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm()))
            .unwrap_or(k);
        if pivot != k {
            for j in 0..n {
                m.swap(k * n + j, pivot * n + j);
            }
        }
        let p = m[k * n + k];
        det *= p.norm();
        if p.norm() == 0.0 {
            return Ok(0.0);
        }
        for i in k + 1..n {
            let f = m[i * n + k] / p;
            for j in k + 1..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
        }
    }
    if !det.is_finite() {
        return Err(Error::NonFinite("abs_det_i_minus"));
    }
    Ok(det)
}

/// `|det(I - U)|` for one Haar draw `U ∈ U(N)`, `N ≤ 64`.
pub fn sample_haar_abs_det<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<f64> {
    let u = sample_haar_unitary(n, rng)?;
    abs_det_i_minus(&u, n)
}
