use std::fmt;

use num_rational::BigRational;

use super::binomial::factorial;
use super::{QAlgebra, Ring};
use crate::error::{Error, Result};

/// Truncated power series in one or two variables with coefficients in a
/// Q-algebra (rationals, or polynomials in `N` when `N` is symbolic).
///
/// Coefficients are stored densely for every exponent tuple `e` with
/// `e[v] <= orders[v]`; nothing beyond the truncation is ever represented.
#[derive(Clone, PartialEq)]
pub struct TaylorSeries<C> {
    orders: Vec<usize>,
    coeffs: Vec<C>,
}

impl<C: QAlgebra> TaylorSeries<C> {
    pub fn zero(orders: &[usize], proto: &C) -> Self {
        assert!(matches!(orders.len(), 1 | 2), "series support one or two variables");
        let len = orders.iter().map(|o| o + 1).product();
        TaylorSeries { orders: orders.to_vec(), coeffs: vec![proto.zero_like(); len] }
    }

    pub fn one(orders: &[usize], proto: &C) -> Self {
        let mut s = Self::zero(orders, proto);
        s.coeffs[0] = proto.one_like();
        s
    }

    /// Series whose coefficient at exponent tuple `e` is `f(e)`.
    pub fn from_fn(orders: &[usize], proto: &C, mut f: impl FnMut(&[usize]) -> C) -> Self {
        let mut s = Self::zero(orders, proto);
        for idx in 0..s.coeffs.len() {
            let e = s.exponents(idx);
            s.coeffs[idx] = f(&e);
        }
        s
    }

    /// Univariate series from ascending coefficients; entries past `order`
    /// are dropped, missing ones are zero.
    pub fn univariate(order: usize, coeffs: Vec<C>, proto: &C) -> Self {
        let mut s = Self::zero(&[order], proto);
        for (i, c) in coeffs.into_iter().take(order + 1).enumerate() {
            s.coeffs[i] = c;
        }
        s
    }

    /// The series consisting of the single variable `var`.
    pub fn variable(var: usize, orders: &[usize], proto: &C) -> Self {
        let mut s = Self::zero(orders, proto);
        if orders[var] >= 1 {
            let mut e = vec![0; orders.len()];
            e[var] = 1;
            let idx = s.index(&e);
            s.coeffs[idx] = proto.one_like();
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().zip(&self.orders).fold(0, |acc, (&x, &o)| acc * (o + 1) + x)
    }

    fn exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.orders.len()];
        for v in (0..self.orders.len()).rev() {
            let base = self.orders[v] + 1;
            e[v] = idx % base;
            idx /= base;
        }
        e
    }

    fn within(&self, e: &[usize]) -> bool {
        e.len() == self.orders.len() && e.iter().zip(&self.orders).all(|(x, o)| x <= o)
    }

    /// Exact stored coefficient; asking past the truncation is an error.
    pub fn coefficient(&self, e: &[usize]) -> Result<C> {
        if !self.within(e) {
            return Err(Error::TruncationExceeded { requested: e.to_vec(), orders: self.orders.clone() });
        }
        Ok(self.coeffs[self.index(e)].clone())
    }

    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    /// Same series cut down to (componentwise) smaller orders.
    pub fn truncate(&self, orders: &[usize]) -> Self {
        let proto = &self.coeffs[0];
        let orders: Vec<usize> = orders.iter().zip(&self.orders).map(|(a, b)| *a.min(b)).collect();
        Self::from_fn(&orders, proto, |e| self.coeffs[self.index(e)].clone())
    }

    pub fn map_coeffs<D: QAlgebra>(&self, f: impl Fn(&C) -> D) -> TaylorSeries<D> {
        TaylorSeries { orders: self.orders.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn common_orders(&self, rhs: &Self) -> Result<Vec<usize>> {
        if self.orders.len() != rhs.orders.len() {
            return Err(Error::VariableMismatch { left: self.orders.len(), right: rhs.orders.len() });
        }
        Ok(self.orders.iter().zip(&rhs.orders).map(|(a, b)| *a.min(b)).collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Result<Self> {
        let orders = self.common_orders(rhs)?;
        Ok(Self::from_fn(&orders, &self.coeffs[0], |e| f(&self.coeffs[self.index(e)], &rhs.coeffs[rhs.index(e)])))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.add_ref(b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.sub_ref(b))
    }

    /// Product truncated at the componentwise minimum of the two orders.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        let orders = self.common_orders(rhs)?;
        let mut out = Self::zero(&orders, &self.coeffs[0]);
        let lhs_terms: Vec<(Vec<usize>, &C)> = (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero_element())
            .map(|i| (self.exponents(i), &self.coeffs[i]))
            .collect();
        let rhs_terms: Vec<(Vec<usize>, &C)> = (0..rhs.coeffs.len())
            .filter(|&i| !rhs.coeffs[i].is_zero_element())
            .map(|i| (rhs.exponents(i), &rhs.coeffs[i]))
            .collect();
        let mut e = vec![0; orders.len()];
        for (ea, a) in &lhs_terms {
            'inner: for (eb, b) in &rhs_terms {
                for v in 0..orders.len() {
                    e[v] = ea[v] + eb[v];
                    if e[v] > orders[v] {
                        continue 'inner;
                    }
                }
                let idx = out.index(&e);
                out.coeffs[idx] = out.coeffs[idx].add_ref(&a.mul_ref(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        TaylorSeries { orders: self.orders.clone(), coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn scale_by(&self, c: &C) -> Self {
        TaylorSeries { orders: self.orders.clone(), coeffs: self.coeffs.iter().map(|x| x.mul_ref(c)).collect() }
    }

    /// `exp(self)`; the constant term must vanish so the sum is finite.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero_element() {
            return Err(Error::NonzeroConstantTerm);
        }
        let proto = &self.coeffs[0];
        let max_power: usize = self.orders.iter().sum();
        let mut result = Self::one(&self.orders, proto);
        let mut power = Self::one(&self.orders, proto);
        for n in 1..=max_power {
            power = power.multiply(self)?;
            let inv = BigRational::from_integer(factorial(n as u64)).recip();
            result = result.try_add(&power.scale(&inv))?;
        }
        Ok(result)
    }
}

impl<C: fmt::Debug> fmt::Debug for TaylorSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TaylorSeries").field("orders", &self.orders).field("coeffs", &self.coeffs).finish()
    }
}

impl<C: QAlgebra> Ring for TaylorSeries<C> {
    fn shape(&self) -> Vec<usize> {
        self.orders.clone()
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.orders, &self.coeffs[0])
    }
    fn one_like(&self) -> Self {
        Self::one(&self.orders, &self.coeffs[0])
    }
    fn is_zero_element(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_element())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("series with different variable counts")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("series with different variable counts")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.multiply(rhs).expect("series with different variable counts")
    }
    fn neg_ref(&self) -> Self {
        TaylorSeries { orders: self.orders.clone(), coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect() }
    }
}

impl<C: QAlgebra> QAlgebra for TaylorSeries<C> {
    fn scale(&self, r: &BigRational) -> Self {
        TaylorSeries::scale(self, r)
    }
}

pub fn series_multiply<C: QAlgebra>(a: &TaylorSeries<C>, b: &TaylorSeries<C>) -> Result<TaylorSeries<C>> {
    a.multiply(b)
}

pub fn series_exp<C: QAlgebra>(a: &TaylorSeries<C>) -> Result<TaylorSeries<C>> {
    a.exp()
}

pub fn series_coefficient<C: QAlgebra>(a: &TaylorSeries<C>, exponents: &[usize]) -> Result<C> {
    a.coefficient(exponents)
}

/// `exp(c t)` in one variable, truncated at `order`.
pub fn exp_linear<C: QAlgebra>(c: &C, order: usize) -> TaylorSeries<C> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut power = c.one_like();
    for n in 0..=order {
        coeffs.push(power.scale(&BigRational::from_integer(factorial(n as u64)).recip()));
        power = power.mul_ref(c);
    }
    TaylorSeries::univariate(order, coeffs, c)
}
