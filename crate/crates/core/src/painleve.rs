//! Series solution of the nonlinear ODE satisfied by `t d/dt log det L(t)`,
//! where `L(t)` is the k×k Laguerre matrix, and the moments it yields.
//!
//! With `f = sum_{j>=1} c_j t^j` the ODE reads
//! `t²f''² + 4tf'³ − (4k² − 4Nt + t² + 4f)f'² − (2kN(2k+t) + (4N − 2t)f)f' − (kN − f)² = 0`.
//! The `t^0` coefficient is `−k²(2c_1 + N)²`, a double root, so `c_1 = −N/2`
//! and the `t^1` coefficient vanishes identically. From then on the `t^j`
//! coefficient fixes `c_j`: quadratically for `j = 2` (roots `0` and the true
//! value), linearly for `j >= 3` with pivot proportional to `4k² − (j−1)²`.
//! At the resonance `j = 2k + 1` the pivot vanishes and `c_j` is free.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{rat_int, sign_pow, TaylorSeries};
use crate::error::{Error, Result};
use crate::moments::{charpoly_moment, f_ratio, laguerre_extraction, Method};

#[derive(Clone, Debug, PartialEq)]
pub struct PainleveSeries {
    pub n: u64,
    pub k: u64,
    /// `c_1, ..., c_M`.
    pub coefficients: Vec<BigRational>,
}

impl PainleveSeries {
    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// `c_j` for `1 <= j <= M`.
    pub fn c(&self, j: usize) -> &BigRational {
        &self.coefficients[j - 1]
    }

    /// Coefficients of `t^0 .. t^upto` of the ODE residual.
    pub fn ode_residual(&self, upto: usize) -> Vec<BigRational> {
        let mut f = vec![BigRational::zero()];
        f.extend(self.coefficients.iter().cloned());
        (0..=upto).map(|j| residual_coefficient(&f, self.n, self.k, j)).collect()
    }
}

fn mul_trunc(a: &[BigRational], b: &[BigRational], deg: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); deg + 1];
    for (i, x) in a.iter().enumerate().take(deg + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(acc: &mut [BigRational], x: &[BigRational], s: &BigRational) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b * s;
    }
}

/// Coefficient of `t^j` in the ODE residual for `f = sum f[i] t^i`.
fn residual_coefficient(f: &[BigRational], n: u64, k: u64, j: usize) -> BigRational {
    let deg = j;
    let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
    let f0: Vec<BigRational> = (0..=deg).map(|i| get(f, i)).collect();
    let f1: Vec<BigRational> = (0..=deg).map(|i| get(f, i + 1) * rat_int(i as i64 + 1)).collect();
    let f2: Vec<BigRational> = (0..=deg).map(|i| get(f, i + 2) * rat_int(((i + 2) * (i + 1)) as i64)).collect();
    let shift = |v: &[BigRational], by: usize| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); deg + 1];
        if by <= deg {
            out[by..].clone_from_slice(&v[..=deg - by]);
        }
        out
    };
    let (nr, kr) = (rat_int(n as i64), rat_int(k as i64));
    let one = BigRational::one();

    let f1sq = mul_trunc(&f1, &f1, deg);
    let mut r = vec![BigRational::zero(); deg + 1];
    // t^2 f''^2
    add_into(&mut r, &shift(&mul_trunc(&f2, &f2, deg), 2), &one);
    // 4 t f'^3
    add_into(&mut r, &shift(&mul_trunc(&f1sq, &f1, deg), 1), &rat_int(4));
    // -(4k^2 - 4N t + t^2 + 4f) f'^2
    let mut g = f0.iter().map(|c| c * rat_int(4)).collect::<Vec<_>>();
    g[0] += rat_int(4) * &kr * &kr;
    if deg >= 1 {
        g[1] -= rat_int(4) * &nr;
    }
    if deg >= 2 {
        g[2] += &one;
    }
    add_into(&mut r, &mul_trunc(&g, &f1sq, deg), &-one.clone());
    // -(2kN(2k + t) + (4N - 2t) f) f'
    let mut h: Vec<BigRational> = f0.iter().map(|c| c * rat_int(4) * &nr).collect();
    for (i, c) in shift(&f0, 1).iter().enumerate() {
        h[i] -= c * rat_int(2);
    }
    h[0] += rat_int(4) * &kr * &kr * &nr;
    if deg >= 1 {
        h[1] += rat_int(2) * &kr * &nr;
    }
    add_into(&mut r, &mul_trunc(&h, &f1, deg), &-one.clone());
    // -(kN - f)^2
    let mut u: Vec<BigRational> = f0.iter().map(|c| -c).collect();
    u[0] += &kr * &nr;
    add_into(&mut r, &mul_trunc(&u, &u, deg), &-one);
    r.swap_remove(deg)
}

/// Solves for `c_1 .. c_M` at fixed integers `(N, k)`.
///
/// At the resonance `j = 2k + 1` the consistency condition is checked and
/// `c_j = 0` is taken. Every other vanishing pivot, a nonlinear order
/// `j >= 3`, or a failed consistency condition is `DegeneratePivot`.
pub fn painleve_coefficients(n: u64, k: u64, m: usize) -> Result<PainleveSeries> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("painleve needs N >= 1 and k >= 1".into()));
    }
    if m < 2 * k as usize {
        return Err(Error::InvalidArgument(format!("truncation {m} is below 2k = {}", 2 * k)));
    }
    let degenerate = |j: usize| Error::DegeneratePivot { j, n, k };
    let mut f = vec![BigRational::zero(), rat_int(-(n as i64)) / rat_int(2)];
    if !residual_coefficient(&f, n, k, 0).is_zero() || !residual_coefficient(&f, n, k, 1).is_zero() {
        return Err(degenerate(1));
    }
    for j in 2..=m {
        f.push(BigRational::zero());
        let at = |f: &mut Vec<BigRational>, v: BigRational| {
            f[j] = v;
            residual_coefficient(f, n, k, j)
        };
        let r0 = at(&mut f, BigRational::zero());
        let rp = at(&mut f, BigRational::one());
        let rm = at(&mut f, -BigRational::one());
        let quad = (&rp + &rm) / rat_int(2) - &r0;
        let lin = (&rp - &rm) / rat_int(2);
        let value = if j == 2 {
            // roots 0 and -lin/quad; the zero root collapses the determinant
            // to a pure exponential and is not the Laguerre branch
            if !r0.is_zero() || quad.is_zero() {
                return Err(degenerate(j));
            }
            -lin / quad
        } else if !quad.is_zero() {
            return Err(degenerate(j));
        } else if !lin.is_zero() {
            -r0 / lin
        } else if j as u64 == 2 * k + 1 && r0.is_zero() {
            BigRational::zero()
        } else {
            return Err(degenerate(j));
        };
        f[j] = value;
    }
    Ok(PainleveSeries { n, k, coefficients: f[1..].to_vec() })
}

/// Moment rebuilt from `c_1 .. c_{2k}`: the determinant series is
/// `E|Λ(1)|^{2k} · exp(sum c_j t^j / j)`.
pub fn painleve_moment(n: u64, k: u64) -> Result<BigRational> {
    if k == 0 {
        return Ok(BigRational::one());
    }
    let order = 2 * k as usize;
    let series = painleve_coefficients(n, k, order)?;
    let zero = BigRational::zero();
    let log_det = TaylorSeries::univariate(
        order,
        std::iter::once(zero.clone())
            .chain(series.coefficients.iter().enumerate().map(|(i, c)| c / rat_int(i as i64 + 1)))
            .collect(),
        &zero,
    );
    let det = log_det.exp()?.scale(&charpoly_moment(n, k));
    Ok(laguerre_extraction(&det, &rat_int(n as i64), k, false)? * rat_int(sign_pow(k)))
}

/// `f(N,k)` with the ODE recursion as evaluation engine.
pub fn painleve_f_poly(k: u64) -> Result<crate::algebra::RatPolynomial> {
    f_ratio(k, Method::Painleve)
}
