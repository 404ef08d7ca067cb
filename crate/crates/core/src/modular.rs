//! The derivative-moment polynomial modulo `p = 4k - 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{factorial, format_rational, RatPolynomial};
use crate::error::{Error, Result};
use crate::moments::{charpoly_moment_poly, deriv_moment_poly, Method};

/// Polynomial over `Z_p`, residues in `[0, p)`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModPolynomial {
    pub modulus: u64,
    pub coeffs: Vec<u64>,
}

impl ModPolynomial {
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % modulus).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPolynomial { modulus, coeffs }
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }
}

impl fmt::Display for ModPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "N".into(),
                (1, c) => format!("{c} N"),
                (i, 1) => format!("N^{i}"),
                (i, c) => format!("{c} N^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 (mod {})", self.modulus)
        } else {
            write!(f, "{} (mod {})", terms.join(" + "), self.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn residue(r: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = r.numer().mod_floor(&pb).to_u64()?;
    let den = den.to_u64()?;
    // Fermat inverse, p prime
    let inv = BigInt::from(den).modpow(&BigInt::from(p - 2), &pb).to_u64()?;
    Some(num * inv % p)
}

fn reduce(poly: &RatPolynomial, p: u64) -> Result<ModPolynomial> {
    let coeffs = poly
        .coeffs()
        .iter()
        .map(|c| residue(c, p).ok_or_else(|| Error::ResidualPDenominator { p, coefficient: format_rational(c) }))
        .collect::<Result<_>>()?;
    Ok(ModPolynomial::new(p, coeffs))
}

/// Multiplies by `p` once, then reduces every coefficient mod `p`.
pub fn clear_and_reduce(poly: &RatPolynomial, p: u64) -> Result<ModPolynomial> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    reduce(&poly.scale(&BigRational::from_integer(p.into())), p)
}

/// Exponent of `p` in the lcm of the coefficient denominators.
pub fn denominator_valuation(poly: &RatPolynomial, p: u64) -> u32 {
    let mut l = poly.denominator_lcm();
    let pb = BigInt::from(p);
    let mut v = 0;
    while !l.is_zero() && l.is_multiple_of(&pb) {
        l /= &pb;
        v += 1;
    }
    v
}

fn modulus_for(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let p = 4 * k - 1;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `(-2) N(N-1)...(N-2k+1) / ((k-1)!)^2` times the characteristic-polynomial
/// moment, in `Z_p[N]`.
pub fn theorem_rhs(k: u64) -> Result<ModPolynomial> {
    let p = modulus_for(k)?;
    let mut poly = charpoly_moment_poly(k).scale(&BigRational::from_integer((-2).into()));
    for j in 0..2 * k {
        poly = &poly * &RatPolynomial::linear(-(j as i64));
    }
    let f = factorial(k - 1);
    reduce(&poly.scale(&BigRational::new(1.into(), &f * &f)), p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModReport {
    pub k: u64,
    pub modulus: u64,
    pub holds: bool,
    /// Power of `p` in the lcm of the moment polynomial's denominators.
    pub denominator_p_power: u32,
    pub lhs: ModPolynomial,
    pub rhs: ModPolynomial,
}

pub fn verify_mod_theorem(k: u64) -> Result<ModReport> {
    verify_mod_theorem_with(k, Method::Painleve)
}

/// Compares both sides coefficient by coefficient in `Z_p[N]`.
pub fn verify_mod_theorem_with(k: u64, method: Method) -> Result<ModReport> {
    let p = modulus_for(k)?;
    let moment = deriv_moment_poly(k, method)?;
    let power = denominator_valuation(&moment, p);
    let lhs = clear_and_reduce(&moment, p)?;
    let rhs = theorem_rhs(k)?;
    Ok(ModReport { k, modulus: p, holds: lhs == rhs, denominator_p_power: power, lhs, rhs })
}
