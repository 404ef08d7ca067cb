use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::RatPolynomial;
use crate::error::{Error, Result};

/// Unique polynomial of degree below `points.len()` through the given points,
/// via Newton divided differences.
pub fn lagrange_interpolate(points: &[(i64, BigRational)]) -> Result<RatPolynomial> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("interpolation needs at least one point".into()));
    }
    let mut seen = HashSet::new();
    for (x, _) in points {
        if !seen.insert(*x) {
            return Err(Error::DuplicateAbscissa(*x));
        }
    }
    let xs: Vec<BigRational> = points.iter().map(|(x, _)| BigRational::from_integer((*x).into())).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    let n = dd.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            dd[i] = if num.is_zero() { num } else { num / (&xs[i] - &xs[i - level]) };
        }
    }
    // Horner on the Newton form: p = dd0 + (N - x0)(dd1 + (N - x1)(dd2 + ...))
    let mut acc = RatPolynomial::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let factor = RatPolynomial::new(vec![-xs[i].clone(), BigRational::from_integer(1.into())]);
        acc = &(&acc * &factor) + &RatPolynomial::constant(dd[i].clone());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn line_and_parabola() {
        let p = lagrange_interpolate(&[(0, rat_int(1)), (1, rat_int(2))]).unwrap();
        assert_eq!(p, RatPolynomial::from_ints(&[1, 1]));
        let p = lagrange_interpolate(&[(0, rat_int(0)), (1, rat_int(1)), (2, rat_int(4))]).unwrap();
        assert_eq!(p, RatPolynomial::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn recovers_k1_moment_cubic() {
        // N(1+2N)(N+1)/6 sampled at N = 0..7
        let f = |n: i64| rat(n * (1 + 2 * n) * (n + 1), 6);
        let pts: Vec<_> = (0..8).map(|n| (n, f(n))).collect();
        let p = lagrange_interpolate(&pts).unwrap();
        assert_eq!(p, RatPolynomial::new(vec![rat(0, 1), rat(1, 6), rat(1, 2), rat(1, 3)]));
    }

    #[test]
    fn duplicate_abscissa() {
        let err = lagrange_interpolate(&[(3, rat_int(1)), (3, rat_int(2))]).unwrap_err();
        assert_eq!(err, Error::DuplicateAbscissa(3));
        assert!(lagrange_interpolate(&[]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(coeffs in prop::collection::vec((-20i64..20, 1i64..7), 1..9), start in -10i64..10) {
            let p = RatPolynomial::new(coeffs.into_iter().map(|(n, d)| rat(n, d)).collect());
            let npts = (p.degree().max(0) + 1) as i64;
            let pts: Vec<_> = (start..start + npts).map(|x| (x, p.eval_int(x))).collect();
            prop_assert_eq!(lagrange_interpolate(&pts).unwrap(), p);
        }
    }
}
