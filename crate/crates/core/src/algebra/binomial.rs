use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::QAlgebra;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `top (top-1) ... (top-r+1) / r!` for any top in a Q-algebra, so tops may
/// be negative integers, rationals, or polynomials in `N`.
pub fn generalized_binomial<T: QAlgebra>(top: &T, r: usize) -> T {
    let mut acc = top.one_like();
    for i in 0..r {
        let shifted = top.sub_ref(&top.constant_like(&BigRational::from_integer(i.into())));
        acc = acc.mul_ref(&shifted);
    }
    acc.scale(&BigRational::from_integer(factorial(r as u64)).recip())
}

/// Generalized binomial for an integer top. Always an integer: after step
/// `i` the accumulator equals `binom(top, i+1)`.
pub fn binomial_int(top: i64, r: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(top - i as i64) / BigInt::from(i + 1);
    }
    acc
}

pub fn multinomial(parts: &[usize]) -> BigInt {
    let total: usize = parts.iter().sum();
    let mut acc = factorial(total as u64);
    for &p in parts {
        acc /= factorial(p as u64);
    }
    acc
}
