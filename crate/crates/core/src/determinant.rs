//! Exact determinants over the rings used by the moment engines.
//!
//! Rational and integer matrices go through fraction-free (Bareiss)
//! elimination. Polynomial and series matrices use cofactor expansion
//! memoized over column subsets, which needs no division at all and costs
//! `O(n 2^n)` ring multiplications.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{QAlgebra, RatPolynomial, Ring, TaylorSeries};
use crate::error::{Error, Result};

/// Largest size accepted by the subset expansion.
const MAX_EXPANSION_SIZE: usize = 24;

/// Square matrix with entries from a single ring.
///
/// A prototype element is kept so that a 0×0 matrix still knows its unit.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix<T> {
    size: usize,
    entries: Vec<T>,
    unit: T,
}

impl<T: Ring> RingMatrix<T> {
    pub fn from_fn(size: usize, proto: &T, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        RingMatrix { size, entries, unit: proto.one_like() }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, proto: &T) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::DimensionMismatch { expected: size, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(RingMatrix { size, entries, unit: proto.one_like() })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<T>], proto: &T) -> Result<Self> {
        let size = columns.len();
        if let Some(bad) = columns.iter().find(|c| c.len() != size) {
            return Err(Error::DimensionMismatch { expected: size, found: bad.len() });
        }
        Ok(Self::from_fn(size, proto, |i, j| columns[j][i].clone()))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.size + j]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.size {
                self.entries.swap(a * self.size + j, b * self.size + j);
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, &self.unit, |i, j| self.get(j, i).clone())
    }

    fn check_homogeneous(&self) -> Result<()> {
        let Some(first) = self.entries.first() else { return Ok(()) };
        let shape = first.shape();
        for e in &self.entries[1..] {
            let s = e.shape();
            if s != shape {
                return Err(Error::MixedEntryKinds(format!("entry shapes {shape:?} and {s:?} in one matrix")));
            }
        }
        Ok(())
    }

    /// Cofactor expansion along rows, memoized over the set of used columns.
    /// Zero entries are skipped, so sparse banded matrices stay cheap.
    fn subset_expansion(&self) -> Result<T> {
        self.check_homogeneous()?;
        let n = self.size;
        if n == 0 {
            return Ok(self.unit.clone());
        }
        if n > MAX_EXPANSION_SIZE {
            return Err(Error::SizeTooLarge { n, max: MAX_EXPANSION_SIZE });
        }
        let mut layer: Vec<(u32, T)> = vec![(0, self.unit.clone())];
        for row in 0..n {
            let mut next: std::collections::BTreeMap<u32, T> = std::collections::BTreeMap::new();
            for (mask, acc) in &layer {
                for col in 0..n {
                    if mask & (1 << col) != 0 {
                        continue;
                    }
                    let a = self.get(row, col);
                    if a.is_zero_element() {
                        continue;
                    }
                    let inversions = (mask >> (col + 1)).count_ones();
                    let term = acc.mul_ref(a);
                    let term = if inversions % 2 == 1 { term.neg_ref() } else { term };
                    let key = mask | (1 << col);
                    match next.get_mut(&key) {
                        Some(v) => *v = v.add_ref(&term),
                        None => {
                            next.insert(key, term);
                        }
                    }
                }
            }
            layer = next.into_iter().filter(|(_, v)| !v.is_zero_element()).collect();
            if layer.is_empty() {
                return Ok(self.unit.zero_like());
            }
        }
        Ok(layer.pop().map(|(_, v)| v).unwrap_or_else(|| self.unit.zero_like()))
    }
}

/// Rings with a determinant algorithm suited to them.
pub trait DeterminantRing: Ring {
    fn det(m: &RingMatrix<Self>) -> Result<Self>;
}

impl DeterminantRing for BigInt {
    fn det(m: &RingMatrix<Self>) -> Result<Self> {
        Ok(bareiss(m.size, m.entries.clone()))
    }
}

impl DeterminantRing for BigRational {
    /// Rows are scaled to integers, eliminated fraction-free, then the
    /// scaling is divided back out.
    fn det(m: &RingMatrix<Self>) -> Result<Self> {
        let n = m.size;
        let mut ints = Vec::with_capacity(n * n);
        let mut scale = BigInt::one();
        for i in 0..n {
            let row = &m.entries[i * n..(i + 1) * n];
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            ints.extend(row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()));
            scale *= l;
        }
        Ok(BigRational::new(bareiss(n, ints), scale))
    }
}

impl DeterminantRing for RatPolynomial {
    fn det(m: &RingMatrix<Self>) -> Result<Self> {
        m.subset_expansion()
    }
}

impl<C: QAlgebra> DeterminantRing for TaylorSeries<C> {
    fn det(m: &RingMatrix<Self>) -> Result<Self> {
        m.subset_expansion()
    }
}

/// Exact determinant; the empty matrix has determinant 1.
pub fn determinant<T: DeterminantRing>(m: &RingMatrix<T>) -> Result<T> {
    T::det(m)
}

/// Fraction-free elimination over the integers; every division is exact.
fn bareiss(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    let d = a[n * n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Both sides of the column identity
/// `det(A, a2-a1, ..., ak-a(k-1)) = sum_i det(a1, ..., A in slot i, ..., ak)`.
pub fn column_identity_check<T: DeterminantRing>(big_a: &[T], a: &[Vec<T>]) -> Result<(T, T)> {
    let k = a.len();
    if k == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if big_a.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: big_a.len() });
    }
    if let Some(bad) = a.iter().find(|c| c.len() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: bad.len() });
    }
    let proto = &big_a[0];
    let mut left_cols = vec![big_a.to_vec()];
    for w in a.windows(2) {
        left_cols.push(w[1].iter().zip(&w[0]).map(|(x, y)| x.sub_ref(y)).collect());
    }
    let left = determinant(&RingMatrix::from_columns(&left_cols, proto)?)?;
    let mut right = proto.zero_like();
    for i in 0..k {
        let mut cols = a.to_vec();
        cols[i] = big_a.to_vec();
        right = right.add_ref(&determinant(&RingMatrix::from_columns(&cols, proto)?)?);
    }
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use proptest::prelude::*;

    fn q_matrix(rows: &[&[i64]]) -> RingMatrix<BigRational> {
        RingMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect(), &rat_int(0))
            .unwrap()
    }

    /// Leibniz formula over all permutations, the brute-force oracle.
    fn leibniz(m: &RingMatrix<BigRational>) -> BigRational {
        fn go(
            m: &RingMatrix<BigRational>,
            row: usize,
            used: &mut Vec<bool>,
            sign: bool,
            acc: BigRational,
            out: &mut BigRational,
        ) {
            let n = m.size();
            if row == n {
                *out += if sign { -acc } else { acc };
                return;
            }
            for c in 0..n {
                if used[c] {
                    continue;
                }
                let inv = (c + 1..n).filter(|&j| used[j]).count();
                used[c] = true;
                go(m, row + 1, used, sign ^ (inv % 2 == 1), &acc * m.get(row, c), out);
                used[c] = false;
            }
        }
        let mut out = BigRational::zero();
        go(m, 0, &mut vec![false; m.size()], false, BigRational::one(), &mut out);
        out
    }

    #[test]
    fn small_examples() {
        assert_eq!(determinant(&q_matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), rat_int(1));
        assert_eq!(determinant(&q_matrix(&[&[1, 2], &[3, 4]])).unwrap(), rat_int(-2));
        let vandermonde = q_matrix(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]);
        assert_eq!(determinant(&vandermonde).unwrap(), rat_int(2));
        let empty = RingMatrix::from_fn(0, &rat_int(0), |_, _| unreachable!());
        assert_eq!(determinant(&empty).unwrap(), rat_int(1));
    }

    #[test]
    fn needs_pivoting() {
        let m = q_matrix(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(&m).unwrap(), leibniz(&m));
        let singular = q_matrix(&[&[0, 1], &[0, 5]]);
        assert_eq!(determinant(&singular).unwrap(), rat_int(0));
    }

    #[test]
    fn polynomial_entries() {
        // det [[N, 1], [1, N]] = N^2 - 1
        let n = RatPolynomial::var();
        let one = RatPolynomial::one();
        let m =
            RingMatrix::from_rows(vec![vec![n.clone(), one.clone()], vec![one, n]], &RatPolynomial::zero()).unwrap();
        assert_eq!(determinant(&m).unwrap(), RatPolynomial::from_ints(&[-1, 0, 1]));
        let empty = RingMatrix::from_fn(0, &RatPolynomial::zero(), |_, _| unreachable!());
        assert_eq!(determinant(&empty).unwrap(), RatPolynomial::one());
    }

    #[test]
    fn series_entries_and_mixed_shapes() {
        let z = rat_int(0);
        let t = TaylorSeries::variable(0, &[2], &z);
        let one = TaylorSeries::one(&[2], &z);
        // det [[1, t], [t, 1]] = 1 - t^2
        let m = RingMatrix::from_rows(vec![vec![one.clone(), t.clone()], vec![t.clone(), one.clone()]], &one).unwrap();
        let d = determinant(&m).unwrap();
        assert_eq!(d.coefficient(&[2]).unwrap(), rat_int(-1));
        assert_eq!(d.coefficient(&[1]).unwrap(), rat_int(0));

        let short = TaylorSeries::one(&[1], &z);
        let mixed = RingMatrix::from_rows(vec![vec![one.clone(), t], vec![short, one.clone()]], &one).unwrap();
        assert!(matches!(determinant(&mixed), Err(Error::MixedEntryKinds(_))));
    }

    #[test]
    fn column_identity_examples() {
        let a = vec![rat_int(7)];
        let (l, r) = column_identity_check(&a, &[vec![rat_int(3)]]).unwrap();
        assert_eq!((l.clone(), r), (rat_int(7), rat_int(7)));

        let big_a = vec![rat_int(1), rat_int(0)];
        let cols = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(2), rat_int(3)]];
        let (l, r) = column_identity_check(&big_a, &cols).unwrap();
        assert_eq!(l, rat_int(2));
        assert_eq!(r, rat_int(2));

        assert!(matches!(
            column_identity_check(&big_a, &[vec![rat_int(1)], vec![rat_int(2), rat_int(3)]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn rational() -> impl Strategy<Value = BigRational> {
        (-9i64..10, 1i64..6).prop_map(|(n, d)| rat(n, d))
    }

    fn square(max: usize) -> impl Strategy<Value = RingMatrix<BigRational>> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(rational(), n * n).prop_map(move |v| {
                let mut it = v.into_iter();
                RingMatrix::from_fn(n, &rat_int(0), |_, _| it.next().unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(m in square(5)) {
            prop_assert_eq!(determinant(&m).unwrap(), leibniz(&m));
            let poly = RingMatrix::from_fn(m.size(), &RatPolynomial::zero(), |i, j| RatPolynomial::constant(m.get(i, j).clone()));
            prop_assert_eq!(determinant(&poly).unwrap(), RatPolynomial::constant(leibniz(&m)));
        }

        #[test]
        fn row_swap_negates(m in square(6), a in 0usize..6, b in 0usize..6) {
            let n = m.size();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b);
            let mut s = m.clone();
            s.swap_rows(a, b);
            prop_assert_eq!(determinant(&s).unwrap(), -determinant(&m).unwrap());
            prop_assert_eq!(determinant(&m.transpose()).unwrap(), determinant(&m).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn column_identity_holds(k in 1usize..=6, seed in prop::collection::vec(rational(), 42)) {
            let mut it = seed.into_iter().cycle();
            let big_a: Vec<_> = (0..k).map(|_| it.next().unwrap()).collect();
            let cols: Vec<Vec<_>> = (0..k).map(|_| (0..k).map(|_| it.next().unwrap()).collect()).collect();
            let (l, r) = column_identity_check(&big_a, &cols).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
