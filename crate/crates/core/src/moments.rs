//! Exact moments of `|Λ'|^{2k}` over U(N), by several independent routes.
//!
//! All integer-`N` engines return a `BigRational`. Polynomials in `N` are
//! recovered by evaluating at consecutive integers and interpolating.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{
    binomial_int, exp_linear, factorial, lagrange_interpolate, multinomial, rat_int, sign_pow, to_f64, QAlgebra,
    RatPolynomial, TaylorSeries,
};
use crate::determinant::{determinant, RingMatrix};
use crate::error::{Error, Result};
use crate::painleve::painleve_moment;
use crate::roots::{aberth, relative_residual};
use crate::special::{bessel_g_series, laguerre_series, laguerre_symbolic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Sumofdets,
    LaguerreK,
    LaguerreN,
    Painleve,
    GeneralX,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Sumofdets, Method::LaguerreK, Method::LaguerreN, Method::Painleve, Method::GeneralX];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sumofdets => "sumofdets",
            Method::LaguerreK => "laguerre-k",
            Method::LaguerreN => "laguerre-n",
            Method::Painleve => "painleve",
            Method::GeneralX => "general-x",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// One moment query: `E|Λ'(x)|^{2k}` over U(N) with `q = |x|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRequest {
    pub n: u64,
    pub k: u64,
    pub q: BigRational,
    pub method: Method,
}

impl MomentRequest {
    pub fn new(n: u64, k: u64) -> Self {
        MomentRequest { n, k, q: BigRational::one(), method: Method::LaguerreK }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        if self.q.is_negative() {
            return Err(Error::InvalidArgument("q = |x|^2 must be non-negative".into()));
        }
        match (self.method, self.q.is_one()) {
            (Method::GeneralX, true) => Err(Error::QEqualsOne),
            (Method::GeneralX, false) | (_, true) => Ok(()),
            (m, false) => Err(Error::InvalidArgument(format!("method {m} works at |x| = 1 only; use general-x"))),
        }
    }

    pub fn evaluate(&self) -> Result<BigRational> {
        self.validate()?;
        let (n, k) = (self.n, self.k);
        match self.method {
            Method::Sumofdets => Ok(deriv_moment_sumofdets(n, k)),
            Method::LaguerreK => deriv_moment_laguerre_k(n, k),
            Method::LaguerreN => deriv_moment_laguerre_n(n, k),
            Method::Painleve => painleve_moment(n, k),
            Method::GeneralX => deriv_moment_general_x(n, k, &self.q),
        }
    }
}

/// `E|Λ(1)|^{2k}` over U(N) as a ratio of factorials.
pub fn charpoly_moment(n: u64, k: u64) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 1..=n {
        num *= factorial(j - 1) * factorial(2 * k + j - 1);
        let f = factorial(k + j - 1);
        den *= &f * &f;
    }
    BigRational::new(num, den)
}

/// The same moment as a degree-`k^2` polynomial in `N`.
pub fn charpoly_moment_poly(k: u64) -> RatPolynomial {
    let mut acc = RatPolynomial::one();
    for j in 0..k {
        for i in 0..k {
            acc = &acc * &RatPolynomial::linear((i + j + 1) as i64);
        }
        acc = acc.scale(&BigRational::new(factorial(j), factorial(j + k)));
    }
    acc
}

/// Weak compositions of `total` into `parts` parts in colexicographic order.
///
/// Each step moves one unit out of the first nonempty slot that is not last,
/// so no recursion or stack of partial tuples is needed.
pub struct WeakCompositions {
    current: Option<Vec<usize>>,
}

pub fn weak_compositions(total: usize, parts: usize) -> WeakCompositions {
    let current = match parts {
        0 if total == 0 => Some(Vec::new()),
        0 => None,
        _ => {
            let mut v = vec![0; parts];
            v[0] = total;
            Some(v)
        }
    };
    WeakCompositions { current }
}

impl Iterator for WeakCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        if let Some(i) = (0..k.saturating_sub(1)).find(|&i| out[i] > 0) {
            let mut next = out.clone();
            let v = next[i];
            next[i] = 0;
            next[0] = v - 1;
            next[i + 1] += 1;
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Composition-sum formula. Progress (m, compositions done) is reported
/// through `progress` when given.
pub fn deriv_moment_sumofdets_with_progress(
    n: u64,
    k: u64,
    progress: Option<&(dyn Fn(u64, usize) + Sync)>,
) -> BigRational {
    let ku = k as usize;
    let n_i = n as i64;
    let mut total = BigInt::zero();
    for m in 0..=k {
        let comps: Vec<Vec<usize>> = weak_compositions(ku + m as usize, ku).collect();
        let inner: BigInt = comps
            .par_iter()
            .map(|t| {
                let mat = RingMatrix::from_fn(ku, &BigInt::zero(), |i, j| {
                    binomial_int(n_i + k as i64 + i as i64 + j as i64, 2 * k + t[j] as u64 - 1)
                });
                multinomial(t) * determinant(&mat).expect("integer determinant")
            })
            .sum();
        if let Some(report) = progress {
            report(m, comps.len());
        }
        let coeff = binomial_int(k as i64, m) * BigInt::from(n).pow((k - m) as u32) * sign_pow(m);
        total += coeff * inner;
    }
    BigRational::from_integer(total * sign_pow(k * k.saturating_sub(1) / 2))
}

pub fn deriv_moment_sumofdets(n: u64, k: u64) -> BigRational {
    deriv_moment_sumofdets_with_progress(n, k, None)
}

/// `sum_h binom(k,h) (±1)^h N^{k-h} (k+h)! [t^{k+h}] det`, the step shared by
/// both Laguerre forms and the Painlevé reconstruction.
pub(crate) fn laguerre_extraction<C: QAlgebra>(det: &TaylorSeries<C>, n: &C, k: u64, alternate: bool) -> Result<C> {
    let mut acc = n.zero_like();
    let mut n_pow = n.one_like();
    let mut powers = Vec::with_capacity(k as usize + 1);
    for _ in 0..=k {
        powers.push(n_pow.clone());
        n_pow = n_pow.mul_ref(n);
    }
    for h in 0..=k {
        let c = det.coefficient(&[(k + h) as usize])?;
        let mut w = BigRational::from_integer(binomial_int(k as i64, h) * factorial(k + h));
        if alternate && h % 2 == 1 {
            w = -w;
        }
        acc = acc.add_ref(&c.mul_ref(&powers[(k - h) as usize]).scale(&w));
    }
    Ok(acc)
}

/// k×k Laguerre determinant route, integer `N`.
pub fn deriv_moment_laguerre_k(n: u64, k: u64) -> Result<BigRational> {
    let order = 2 * k as usize;
    let alpha = 2 * k as i64 - 1;
    let proto = TaylorSeries::one(&[order], &BigRational::zero());
    let mat =
        RingMatrix::from_fn(k as usize, &proto, |i, j| laguerre_series(n as i64 + i as i64 - j as i64, alpha, order));
    let det = determinant(&mat)?;
    let v = laguerre_extraction(&det, &rat_int(n as i64), k, false)?;
    Ok(v * rat_int(sign_pow(k)))
}

/// k×k Laguerre determinant with `N` symbolic; equals the moment polynomial
/// because it agrees with it at every `N >= k - 1`.
pub fn deriv_moment_laguerre_k_symbolic(k: u64) -> Result<RatPolynomial> {
    let order = 2 * k as usize;
    let alpha = 2 * k as i64 - 1;
    let proto = TaylorSeries::one(&[order], &RatPolynomial::zero());
    let mut entries = Vec::with_capacity((k * k) as usize);
    for i in 0..k as i64 {
        for j in 0..k as i64 {
            entries.push(laguerre_symbolic(i - j, alpha, order)?);
        }
    }
    let mut it = entries.into_iter();
    let mat = RingMatrix::from_fn(k as usize, &proto, |_, _| it.next().unwrap());
    let det = determinant(&mat)?;
    let v = laguerre_extraction(&det, &RatPolynomial::var(), k, false)?;
    Ok(v.scale(&rat_int(sign_pow(k))))
}

/// N×N dual Laguerre determinant route.
pub fn deriv_moment_laguerre_n(n: u64, k: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let order = 2 * k as usize;
    let alpha = -2 * k as i64 - 1;
    let proto = TaylorSeries::one(&[order], &BigRational::zero());
    let mat =
        RingMatrix::from_fn(n as usize, &proto, |j, l| laguerre_series(j as i64 - l as i64 + k as i64, alpha, order));
    let det = determinant(&mat)?;
    let v = laguerre_extraction(&det, &rat_int(n as i64), k, true)?;
    Ok(v * rat_int(sign_pow(k * n)))
}

/// Coefficient `[t1^m t2^l]` of the entry `F_{a,k}` for `q != 1`, from the
/// residues at 1 and at `q`.
fn general_x_entry_coefficient(a: i64, k: i64, m: i64, l: i64, q: &BigRational) -> BigRational {
    if m + l + 2 * k > a {
        return BigRational::zero();
    }
    let one = BigRational::one();
    let qm1 = q - &one;
    let one_mq = &one - q;
    let pow = |b: &BigRational, e: i64| -> BigRational {
        if e >= 0 {
            num_traits::pow(b.clone(), e as usize)
        } else {
            num_traits::pow(b.recip(), (-e) as usize)
        }
    };
    let binom = |top: i64, r: i64| -> BigRational {
        if r < 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(binomial_int(top, r as u64))
        }
    };
    let mut first = BigRational::zero();
    let ratio = q / &qm1;
    for s in 0..l + k {
        first += binom(a - 1, l + k - 1 - s) * binom(-m - k, s) * pow(&ratio, s);
    }
    first *= pow(q, a - l - k) * pow(&qm1, -(m + k));
    let mut second = BigRational::zero();
    let inv = one_mq.recip();
    for s in 0..m + k {
        second += binom(a - 1, m + k - 1 - s) * binom(-l - k, s) * pow(&inv, s);
    }
    second *= pow(&one_mq, -(l + k));
    (first + second) / BigRational::from_integer(factorial(m as u64) * factorial(l as u64))
}

/// Bivariate determinant route for `|x| != 1`, `q = |x|^2`.
pub fn deriv_moment_general_x(n: u64, k: u64, q: &BigRational) -> Result<BigRational> {
    if q.is_one() {
        return Err(Error::QEqualsOne);
    }
    if q.is_negative() {
        return Err(Error::InvalidArgument("q = |x|^2 must be non-negative".into()));
    }
    let ku = k as usize;
    let orders = [ku, ku];
    let zero = BigRational::zero();
    let proto = TaylorSeries::one(&orders, &zero);
    let mat = RingMatrix::from_fn(ku, &proto, |i, j| {
        let a = (n + k) as i64 + i as i64 + j as i64 + 1;
        TaylorSeries::from_fn(&orders, &zero, |e| general_x_entry_coefficient(a, k as i64, e[0] as i64, e[1] as i64, q))
    });
    let det = determinant(&mat)?;
    let minus_n = rat_int(-(n as i64));
    let exp_n = TaylorSeries::from_fn(&orders, &zero, |e| {
        if e[1] == 0 {
            num_traits::pow(minus_n.clone(), e[0]) / BigRational::from_integer(factorial(e[0] as u64))
        } else {
            BigRational::zero()
        }
    });
    let c = det.multiply(&exp_n)?.coefficient(&[ku, ku])?;
    let f = BigRational::from_integer(factorial(k));
    Ok(c * &f * &f * rat_int(sign_pow(k * (k + 1) / 2)))
}

/// Integer evaluation points used for interpolation in `N`.
fn interpolation_nodes(k: u64) -> std::ops::RangeInclusive<u64> {
    k.max(1)..=k.max(1) + k * k + 2 * k
}

/// Moment as a polynomial in `N` of degree `k^2 + 2k`, by interpolation.
pub fn deriv_moment_poly(k: u64, method: Method) -> Result<RatPolynomial> {
    if method == Method::GeneralX {
        return Err(Error::InvalidArgument("general-x has no polynomial form in N".into()));
    }
    if k == 0 {
        return Ok(RatPolynomial::one());
    }
    let points: Vec<(i64, BigRational)> = interpolation_nodes(k)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| MomentRequest { n, k, q: BigRational::one(), method }.evaluate().map(|v| (n as i64, v)))
        .collect::<Result<_>>()?;
    lagrange_interpolate(&points)
}

/// `f(N,k)`: derivative moment over the plain characteristic-polynomial moment.
pub fn f_ratio(k: u64, method: Method) -> Result<RatPolynomial> {
    deriv_moment_poly(k, method)?.exact_divide(&charpoly_moment_poly(k))
}

/// Leading coefficient of the moment polynomial, from the Bessel determinant.
pub fn b_k_leading(k: u64) -> Result<BigRational> {
    let order = 2 * k as usize;
    let zero = BigRational::zero();
    let proto = TaylorSeries::one(&[order], &zero);
    let mat = RingMatrix::from_fn(k as usize, &proto, |i, j| bessel_g_series((i + j + 1) as u64, order));
    let det = determinant(&mat)?.multiply(&exp_linear(&rat_int(-1), order))?;
    let mut acc = BigRational::zero();
    for h in 0..=k {
        let c = det.coefficient(&[(k + h) as usize])?;
        acc += c * BigRational::from_integer(binomial_int(k as i64, h) * factorial(k + h));
    }
    Ok(acc * rat_int(sign_pow(k * (k + 1) / 2)))
}

/// Number of distinct real roots of `p` by a Sturm sequence.
pub fn sturm_real_root_count(p: &RatPolynomial) -> Result<usize> {
    if p.degree() <= 0 {
        return Ok(0);
    }
    let normalize = |q: RatPolynomial| {
        let lc = q.leading_coefficient().abs();
        if lc.is_zero() {
            q
        } else {
            q.scale(&lc.recip())
        }
    };
    let mut seq = vec![normalize(p.clone()), normalize(p.derivative())];
    loop {
        let len = seq.len();
        let (_, r) = seq[len - 2].div_rem(&seq[len - 1])?;
        if r.is_zero() {
            break;
        }
        seq.push(normalize(-&r));
    }
    let changes = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count();
    let at_pos: Vec<bool> = seq.iter().map(|q| q.leading_coefficient().is_positive()).collect();
    let at_neg: Vec<bool> =
        seq.iter().map(|q| q.leading_coefficient().is_positive() == (q.degree() % 2 == 0)).collect();
    Ok(changes(at_neg) - changes(at_pos))
}

/// Numeric roots of `f(N,k)` with residuals below `precision`.
///
/// The factor `N` is split off exactly. The number of real roots of the rest
/// comes from an exact Sturm count, and that many roots with the smallest
/// imaginary parts are put on the real axis.
pub fn roots_of_f(k: u64, precision: f64) -> Result<Vec<Complex64>> {
    roots_of_poly(&f_ratio(k, Method::Painleve)?, precision)
}

pub fn roots_of_poly(f: &RatPolynomial, precision: f64) -> Result<Vec<Complex64>> {
    let mut roots = Vec::new();
    let mut rest = f.clone();
    while rest.degree() > 0 && rest.coeff(0).is_zero() {
        roots.push(Complex64::new(0.0, 0.0));
        rest = RatPolynomial::new(rest.coeffs()[1..].to_vec());
    }
    if rest.degree() <= 0 {
        return Ok(roots);
    }
    let real_count = sturm_real_root_count(&rest)?;
    // integer coefficients, scaled so the largest is about 1
    let scaled = rest.scale(&BigRational::from_integer(rest.denominator_lcm()));
    let fl: Vec<f64> = scaled.to_f64_coeffs();
    let big = fl.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let coeffs: Vec<Complex64> = fl.iter().map(|c| Complex64::new(c / big, 0.0)).collect();
    let mut found = aberth(&coeffs, 1e-15, 500).ok_or(Error::NonConvergence { iterations: 500 })?;
    found.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    for z in found.iter_mut().take(real_count) {
        z.im = 0.0;
    }
    for z in &found {
        if relative_residual(&coeffs, *z) > precision {
            return Err(Error::NonConvergence { iterations: 500 });
        }
    }
    // pair each complex root with its conjugate
    let mut complex: Vec<Complex64> = found[real_count..].to_vec();
    let mut paired = Vec::with_capacity(complex.len());
    while let Some(z) = complex.pop() {
        let (idx, dist) = complex
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - z.conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::NonConvergence { iterations: 500 })?;
        if dist > 1e-6 * (1.0 + z.norm()) {
            return Err(Error::NonConvergence { iterations: 500 });
        }
        complex.swap_remove(idx);
        let upper = Complex64::new(z.re, z.im.abs());
        paired.push(upper);
        paired.push(upper.conj());
    }
    roots.extend(found[..real_count].iter().copied());
    roots.extend(paired);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Float value of an exact moment, for comparisons with Monte Carlo.
pub fn as_f64(r: &BigRational) -> f64 {
    to_f64(r)
}
