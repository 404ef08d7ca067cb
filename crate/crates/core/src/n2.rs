//! Closed forms for U(2): integer and real `k` moments of `|Λ'(x)|^{2k}`,
//! the mean of `log|Λ'(r)|`, and the mean radial zero-counting function.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::algebra::{binomial_int, rat, rat_int};
use crate::error::{Error, Result};
use crate::special::{hyp3f2_exact, hyp3f2_numeric, CompensatedSum};

/// `sum_m binom(k,m)^2 (4q)^m binom(2k-2m, k-m) / (k-m+1)`.
pub fn u2_moment_sum(k: u64, q: &BigRational) -> BigRational {
    let four_q = q * rat_int(4);
    (0..=k)
        .map(|m| {
            let b = binomial_int(k as i64, m);
            let c = binomial_int(2 * (k - m) as i64, k - m);
            BigRational::from_integer(&b * &b * c) * num_traits::pow(four_q.clone(), m as usize)
                / rat_int((k - m + 1) as i64)
        })
        .sum()
}

/// The same sum written as a terminating ₃F₂.
pub fn u2_moment_3f2(k: u64, q: &BigRational) -> Result<BigRational> {
    let ki = k as i64;
    let catalan = BigRational::new(binomial_int(2 * ki, k), BigInt::from(k + 1));
    let f = hyp3f2_exact(&[rat_int(-1 - ki), rat_int(-ki), rat_int(-ki)], &[rat_int(1), rat(1, 2) - rat_int(ki)], q)?;
    Ok(catalan * f)
}

/// ₃F₂ at real `z`, continued past `z = 1` along the lower half-plane
/// when needed.
pub fn hyp3f2_real_or_continued(a: [f64; 3], b: [f64; 2], z: f64) -> Result<Complex64> {
    if (0.0..=1.0).contains(&z) {
        return Ok(Complex64::new(hyp3f2_numeric(a, b, z)?, 0.0));
    }
    if let Some(m) = a.iter().filter(|x| **x <= 0.0 && x.fract() == 0.0).map(|x| -x as u64).min() {
        return terminating_sum(a, b, z, m).map(|v| Complex64::new(v, 0.0));
    }
    if z < 0.0 {
        return Err(Error::InvalidArgument(format!("negative argument {z}")));
    }
    hyp3f2_continued(a, b, z)
}

/// A polynomial ₃F₂ summed directly, any real `z`.
fn terminating_sum(a: [f64; 3], b: [f64; 2], z: f64, degree: u64) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    for n in 0..degree {
        let nf = n as f64;
        for (index, &bj) in b.iter().enumerate() {
            if bj + nf == 0.0 {
                return Err(Error::PochhammerPole { index });
            }
        }
        term *= (a[0] + nf) * (a[1] + nf) * (a[2] + nf) / ((b[0] + nf) * (b[1] + nf) * (nf + 1.0)) * z;
        acc.add(term);
    }
    Ok(acc.value())
}

/// Value at `z > 1` approached from below the cut `[1, ∞)`.
///
/// The ₃F₂ differential equation
/// `z²(1−z)F''' + z[(3+β1+β2) − (3+s1)z]F'' + [(1+β1)(1+β2) − (1+s1+s2)z]F' − s3 F = 0`
/// (`βi = bi − 1`, `s1, s2, s3` elementary symmetric in the `a`s) is
/// integrated with RK4 from `z = 1/2` around the singular point 1.
pub fn hyp3f2_continued(a: [f64; 3], b: [f64; 2], z: f64) -> Result<Complex64> {
    let (b1, b2) = (b[0] - 1.0, b[1] - 1.0);
    let s1 = a[0] + a[1] + a[2];
    let s2 = a[0] * a[1] + a[0] * a[2] + a[1] * a[2];
    let s3 = a[0] * a[1] * a[2];
    let rhs = |z: Complex64, y: [Complex64; 3]| -> [Complex64; 3] {
        let one = Complex64::new(1.0, 0.0);
        let lead = z * z * (one - z);
        let c2 = z * ((3.0 + b1 + b2) - (3.0 + s1) * z);
        let c1 = Complex64::new((1.0 + b1) * (1.0 + b2), 0.0) - (1.0 + s1 + s2) * z;
        let third = -(c2 * y[2] + c1 * y[1] - s3 * y[0]) / lead;
        [y[1], y[2], third]
    };

    // starting values from the series at z0 = 1/2
    let z0 = 0.5;
    let (mut f, mut df, mut ddf) = (0.0, 0.0, 0.0);
    let mut term = 1.0;
    for n in 0..400 {
        let nf = n as f64;
        f += term;
        if n >= 1 {
            df += nf * term / z0;
        }
        if n >= 2 {
            ddf += nf * (nf - 1.0) * term / (z0 * z0);
        }
        term *= (a[0] + nf) * (a[1] + nf) * (a[2] + nf) / ((b[0] + nf) * (b[1] + nf) * (nf + 1.0)) * z0;
        if term == 0.0 {
            break;
        }
    }
    let mut y = [Complex64::new(f, 0.0), Complex64::new(df, 0.0), Complex64::new(ddf, 0.0)];
    let waypoints =
        [Complex64::new(z0, 0.0), Complex64::new(z0, -0.5), Complex64::new(z, -0.5), Complex64::new(z, 0.0)];
    for w in waypoints.windows(2) {
        let (from, to) = (w[0], w[1]);
        let steps = (((to - from).norm() / 2e-3).ceil() as usize).max(1);
        let h = (to - from) / steps as f64;
        for s in 0..steps {
            let zc = from + h * s as f64;
            let add = |y: &[Complex64; 3], k: &[Complex64; 3], c: f64| {
                [y[0] + k[0] * h * c, y[1] + k[1] * h * c, y[2] + k[2] * h * c]
            };
            let k1 = rhs(zc, y);
            let k2 = rhs(zc + h * 0.5, add(&y, &k1, 0.5));
            let k3 = rhs(zc + h * 0.5, add(&y, &k2, 0.5));
            let k4 = rhs(zc + h, add(&y, &k3, 1.0));
            for i in 0..3 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    if !y[0].is_finite() {
        return Err(Error::InvalidArgument(format!("continuation to z = {z} diverged")));
    }
    Ok(y[0])
}

/// `binom(2k, k) / (k+1)` for real `k`.
fn catalan_real(k: f64) -> f64 {
    libm::tgamma(2.0 * k + 1.0) / (libm::tgamma(k + 1.0).powi(2) * (k + 1.0))
}

/// The integer-k formula evaluated at real `k`, continued to `q > 1`.
pub fn u2_integer_formula_real_k(k: f64, q: f64) -> Result<Complex64> {
    let f = hyp3f2_real_or_continued([-1.0 - k, -k, -k], [1.0, 0.5 - k], q)?;
    Ok(f * catalan_real(k))
}

/// The real-k formula `4^k x^{2k} ₃F₂(1/2, −k, −k; 1, 2; x^{−2})` for any
/// `x > 0`; complex below the unit circle, where the series is continued.
pub fn u2_real_k_formula(k: f64, x_abs: f64) -> Result<Complex64> {
    if x_abs <= 0.0 {
        return Err(Error::InvalidArgument("|x| must be positive".into()));
    }
    let f = hyp3f2_real_or_continued([0.5, -k, -k], [1.0, 2.0], x_abs.powi(-2))?;
    Ok(f * 4f64.powf(k) * x_abs.powf(2.0 * k))
}

/// Moment of `|Λ'(x)|^{2k}` for real `k` and `|x| >= 1`.
pub fn u2_moment_real_k(k: f64, x_abs: f64) -> Result<f64> {
    if x_abs < 1.0 {
        return Err(Error::InvalidArgument(format!("|x| = {x_abs} below 1 has no real-k formula")));
    }
    if x_abs == 1.0 && k <= -1.0 {
        let excess = 2.5 + 2.0 * k;
        if excess <= 0.0 {
            return Err(Error::ConvergenceConditionViolated { excess: format!("{excess}") });
        }
        return Err(Error::InvalidArgument(format!("at |x| = 1 the moment needs k > -1, got {k}")));
    }
    let f = hyp3f2_numeric([0.5, -k, -k], [1.0, 2.0], x_abs.powi(-2))?;
    Ok(4f64.powf(k) * x_abs.powf(2.0 * k) * f)
}

/// Mean of `log|Λ'(r)|` over U(2).
pub fn u2_log_moment(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [0, 1)")));
    }
    let f = hyp3f2_numeric([0.5, 0.5, 0.5], [1.5, 1.5], r * r)?;
    Ok((2.0 * r * f + r * (1.0 - r * r).sqrt() + r.asin()) / PI - 0.5)
}

/// Expected number of zeros of `Λ'` in `|z| <= u` for U(2).
pub fn u2_mean_zero_count(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("u = {u} outside [0, 1]")));
    }
    // acos(1 - 2u²) = 2 asin(u), better conditioned near 0
    Ok((2.0 * u * (1.0 - u * u).sqrt() + 2.0 * u.asin()) / PI)
}
