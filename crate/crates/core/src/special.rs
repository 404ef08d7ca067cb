//! Laguerre polynomials, hypergeometric ₃F₂ sums and the Bessel series
//! entering the leading-coefficient determinant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{binomial_int, factorial, generalized_binomial, rat_int, RatPolynomial, TaylorSeries};
use crate::error::{Error, Result};

/// Generalized Laguerre polynomial `L_n^{(alpha)}(t)`, zero for `n < 0`.
pub fn laguerre(n: i64, alpha: i64) -> RatPolynomial {
    if n < 0 {
        return RatPolynomial::zero();
    }
    RatPolynomial::new(
        (0..=n)
            .map(|i| {
                let c = BigRational::new(binomial_int(n + alpha, (n - i) as u64), factorial(i as u64));
                if i % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// `L_n^{(alpha)}(t)` as a t-series truncated at `order`.
pub fn laguerre_series(n: i64, alpha: i64, order: usize) -> TaylorSeries<BigRational> {
    TaylorSeries::univariate(order, laguerre(n, alpha).into_coeffs(), &BigRational::zero())
}

/// `L_{N+offset}^{(alpha)}(t)` with `N` symbolic, truncated at `degree_cap`.
///
/// Writing the binomial with fixed lower index `alpha + i` turns each
/// coefficient into a polynomial in `N`, valid whenever `N + offset >= 0`.
pub fn laguerre_symbolic(offset: i64, alpha: i64, degree_cap: usize) -> Result<TaylorSeries<RatPolynomial>> {
    if alpha < 0 {
        return Err(Error::InvalidArgument(format!("symbolic Laguerre entries need alpha >= 0, got {alpha}")));
    }
    let top = RatPolynomial::linear(offset + alpha);
    let coeffs = (0..=degree_cap)
        .map(|i| {
            let b = generalized_binomial(&top, alpha as usize + i);
            let s = BigRational::new(BigInt::from(if i % 2 == 1 { -1 } else { 1 }), factorial(i as u64));
            b.scale(&s)
        })
        .collect();
    Ok(TaylorSeries::univariate(degree_cap, coeffs, &RatPolynomial::zero()))
}

fn nonpositive_integer(r: &BigRational) -> Option<u64> {
    if r.is_integer() && !r.is_positive() {
        r.to_integer().abs().to_u64()
    } else {
        None
    }
}

/// Terminating ₃F₂ evaluated exactly.
///
/// The series stops at the smallest `n0` with some `a_i = -n0`; a lower
/// parameter equal to `-m` with `m < n0` would divide by zero first.
pub fn hyp3f2_exact(a: &[BigRational; 3], b: &[BigRational; 2], z: &BigRational) -> Result<BigRational> {
    let n0 = a.iter().filter_map(nonpositive_integer).min().ok_or(Error::NonTerminating)?;
    for (index, bj) in b.iter().enumerate() {
        if let Some(m) = nonpositive_integer(bj) {
            if m < n0 {
                return Err(Error::PochhammerPole { index });
            }
        }
    }
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for n in 0..n0 {
        let nr = rat_int(n as i64);
        let num = a.iter().fold(z.clone(), |acc, ai| acc * (ai + &nr));
        let den = b.iter().fold(rat_int(n as i64 + 1), |acc, bj| acc * (bj + &nr));
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

/// Neumaier compensated accumulator.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const NUMERIC_TERM_CAP: usize = 1_000_000;

/// ₃F₂ in double precision for `0 <= z <= 1` by forward summation.
pub fn hyp3f2_numeric(a: [f64; 3], b: [f64; 2], z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!("z = {z} outside [0, 1]")));
    }
    let is_nonpos_int = |x: f64| x <= 0.0 && x.fract() == 0.0;
    let terminates = a.iter().any(|&x| is_nonpos_int(x));
    if z == 1.0 && !terminates {
        let excess = b[0] + b[1] - a[0] - a[1] - a[2];
        if excess <= 0.0 {
            return Err(Error::ConvergenceConditionViolated { excess: format!("{excess}") });
        }
    }
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    for n in 0..NUMERIC_TERM_CAP {
        let nf = n as f64;
        for (index, &bj) in b.iter().enumerate() {
            if bj + nf == 0.0 {
                return Err(Error::PochhammerPole { index });
            }
        }
        let ratio = (a[0] + nf) * (a[1] + nf) * (a[2] + nf) / ((b[0] + nf) * (b[1] + nf) * (nf + 1.0)) * z;
        term *= ratio;
        if term == 0.0 {
            return Ok(acc.value());
        }
        acc.add(term);
        if ratio.abs() < 1.0 && term.abs() < 1e-16 * acc.value().abs() {
            return Ok(acc.value());
        }
    }
    Err(Error::SlowConvergence { terms: NUMERIC_TERM_CAP })
}

/// `g_nu(x) = sum_m x^m / (m! (m+nu)!)`, i.e. `I_nu(2 sqrt x)` with the
/// `x^{nu/2}` prefactor removed, truncated at `order_cap`.
pub fn bessel_g_series(nu: u64, order_cap: usize) -> TaylorSeries<BigRational> {
    let coeffs =
        (0..=order_cap as u64).map(|m| BigRational::new(BigInt::one(), factorial(m) * factorial(m + nu))).collect();
    TaylorSeries::univariate(order_cap, coeffs, &BigRational::zero())
}
