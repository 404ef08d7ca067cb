//! Exact arithmetic substrate: rationals, dense polynomials in `N`,
//! truncated power series in one or two variables, and interpolation.
//!
//! Everything here is immutable after construction. The [`Ring`] trait is the
//! minimal interface the determinant engine needs; [`QAlgebra`] adds scaling
//! by rationals, which series exponentials and binomials require.

mod binomial;
mod interpolate;
mod poly;
mod rational;
mod series;

pub use binomial::{binomial_int, factorial, generalized_binomial, multinomial};
pub use interpolate::lagrange_interpolate;
pub use poly::RatPolynomial;
pub use rational::{format_decimal, format_rational, parse_rational, rat, rat_int, to_f64};
pub use series::{exp_linear, series_coefficient, series_exp, series_multiply, TaylorSeries};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_traits::{One, Zero};
use std::fmt::Debug;

/// Commutative ring with unity, as far as determinants are concerned.
///
/// `zero_like`/`one_like` take a prototype so that context-carrying
/// elements (truncated series) can produce neutral elements of the same shape.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_element(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Shape descriptor; entries of one matrix must agree on it. Only
    /// truncated series carry a nontrivial shape (their truncation orders).
    fn shape(&self) -> Vec<usize> {
        Vec::new()
    }
}

/// A ring that is also a vector space over the rationals.
pub trait QAlgebra: Ring {
    fn scale(&self, r: &BigRational) -> Self;

    fn constant_like(&self, r: &BigRational) -> Self {
        self.one_like().scale(r)
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_element(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl QAlgebra for BigRational {
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_element(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// `(-1)^e` as a sign usable in exact arithmetic.
pub fn sign_pow(e: u64) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
