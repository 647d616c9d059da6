//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Elimination is fraction-free: each row is first scaled to integers and
//! then reduced with Bareiss' update rule, so intermediate entries stay
//! bounded by minors of the input. Pivots are always the first nonzero entry
//! in the current column, which makes every result deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(values: &[i64]) -> RationalVector {
    values.iter().map(|&v| rat(v)).collect()
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn fmt_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

/// Parses `"-3"`, `"1/2"`, `"−2/7"` (unicode minus accepted).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let cleaned = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("malformed fraction {s:?}"));
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (cleaned.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_vector(self.row(i)))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length. `cols`
    /// disambiguates the zero-row case.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
            }
            entries.extend(row);
        }
        Ok(Self { rows: n, cols, entries })
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| rat_vec(r)).collect();
        Self::from_rows(data, cols).expect("ragged integer matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RationalVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<RationalVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, j);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, entries })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: self.rows, cols: cols.len(), entries }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i));
        }
        Self { rows: rows.len(), cols: self.cols, entries }
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut work = IntegerRows::from_rationals(self);
        let pivots = work.bareiss_echelon();
        let mut rows: Vec<RationalVector> = Vec::with_capacity(self.rows);
        for (i, &p) in pivots.iter().enumerate() {
            let lead = Rational::from_integer(work.data[i][p].clone());
            rows.push(work.data[i].iter().map(|x| Rational::from_integer(x.clone()) / &lead).collect());
        }
        for i in (0..pivots.len()).rev() {
            let p = pivots[i];
            for k in 0..i {
                let factor = rows[k][p].clone();
                if factor.is_zero() {
                    continue;
                }
                let (upper, lower) = rows.split_at_mut(i);
                for (x, y) in upper[k].iter_mut().zip(lower[0].iter()).skip(p) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        rows.resize(self.rows, vec![Rational::zero(); self.cols]);
        let r = RationalMatrix::from_rows(rows, self.cols).expect("rref keeps the shape");
        (r, pivots)
    }

    pub fn rank(&self) -> usize {
        IntegerRows::from_rationals(self).bareiss_echelon().len()
    }

    /// Rows form a basis of `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> RationalMatrix {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// One solution of `M x = b` plus a kernel basis, or `None` when the
    /// system is inconsistent.
    pub fn solve_affine(&self, b: &[Rational]) -> Result<Option<(RationalVector, RationalMatrix)>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut entries = Vec::with_capacity(self.rows * (self.cols + 1));
        for (i, bi) in b.iter().enumerate() {
            entries.extend_from_slice(self.row(i));
            entries.push(bi.clone());
        }
        let augmented = RationalMatrix { rows: self.rows, cols: self.cols + 1, entries };
        let (r, pivots) = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut particular = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            particular[p] = r.get(i, self.cols).clone();
        }
        let coefficient_part = r.select_columns(&(0..self.cols).collect::<Vec<_>>());
        Ok(Some((particular, kernel_from_rref(&coefficient_part, &pivots))))
    }

    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let mut work = IntegerRows::from_rationals(self);
        let pivots = work.bareiss_echelon();
        if pivots.len() < self.rows {
            return Ok(Rational::zero());
        }
        let last = work.data[self.rows - 1][self.cols - 1].clone();
        let det = if work.swaps % 2 == 1 { -last } else { last };
        Ok(Rational::new(det, work.scale))
    }

    /// Indices of the first maximal set of linearly independent rows,
    /// chosen greedily from the top.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().1
    }

    pub fn row_space_contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.row_vectors();
        rows.push(v.to_vec());
        let stacked = RationalMatrix::from_rows(rows, self.cols).expect("vector length matches");
        stacked.rank() == self.rank()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

fn kernel_from_rref(r: &RationalMatrix, pivots: &[usize]) -> RationalMatrix {
    let cols = r.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, f).clone();
        }
        basis.push(v);
    }
    RationalMatrix::from_rows(basis, cols).expect("kernel rows have matrix width")
}

/// Integer working copy of a rational matrix used by Bareiss elimination.
struct IntegerRows {
    data: Vec<Vec<BigInt>>,
    /// Product of the row scalings applied when clearing denominators.
    scale: BigInt,
    swaps: usize,
}

impl IntegerRows {
    fn from_rationals(m: &RationalMatrix) -> Self {
        let mut scale = BigInt::one();
        let mut data = Vec::with_capacity(m.rows);
        for i in 0..m.rows {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            data.push(row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect());
            scale *= lcm;
        }
        Self { data, scale, swaps: 0 }
    }

    /// In-place fraction-free forward elimination; returns pivot columns.
    fn bareiss_echelon(&mut self) -> Vec<usize> {
        let rows = self.data.len();
        let cols = self.data.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                self.data.swap(p, r);
                self.swaps += 1;
            }
            let (top, bottom) = self.data.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pivot = &pivot_row[c];
            for row in bottom.iter_mut() {
                let lead = row[c].clone();
                for j in (c + 1)..cols {
                    let v = pivot * &row[j] - &lead * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = pivot.clone();
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Dense row-major integer matrix (exponent matrices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} integer matrix", entries.len())));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("exponent row {} has {} entries, expected {cols}", i + 1, row.len())));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { rows: rows.len(), cols, entries })
    }

    /// Panics on ragged input; intended for literals.
    pub fn from_slices(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned, cols).expect("ragged integer matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&x| rat(x)).collect() }
    }

    /// `Aᵀ v`, i.e. the vector `(α_j · v)_j`.
    pub fn transpose_mul(&self, v: &[Rational]) -> RationalVector {
        (0..self.cols)
            .map(|j| {
                let mut acc = Rational::zero();
                for (i, vi) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if a != 0 && !vi.is_zero() {
                        acc += vi * BigInt::from(a);
                    }
                }
                acc
            })
            .collect()
    }

    /// First pair of equal columns (0-based), if any.
    pub fn repeated_columns(&self) -> Option<(usize, usize)> {
        let columns: Vec<Vec<i64>> = (0..self.cols).map(|j| self.column(j)).collect();
        for j in 0..self.cols {
            for k in (j + 1)..self.cols {
                if columns[j] == columns[k] {
                    return Some((j, k));
                }
            }
        }
        None
    }
}

/// Least common multiple of the denominators of `v`.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
        prop::collection::vec((-4i64..=4, 1i64..=3), rows * cols).prop_map(move |v| {
            let entries = v.into_iter().map(|(n, d)| frac(n, d)).collect();
            RationalMatrix::new(rows, cols, entries).unwrap()
        })
    }

    fn cofactor_det(m: &RationalMatrix) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&k| k != j).collect();
            let minor = m.select_rows(&(1..n).collect::<Vec<_>>()).select_columns(&rest);
            let term = m.get(0, j) * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    /// Largest k with a nonzero k×k minor.
    fn minor_rank(m: &RationalMatrix) -> usize {
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in combinations(m.rows(), k) {
                for cs in combinations(m.cols(), k) {
                    if !cofactor_det(&m.select_rows(&rs).select_columns(&cs)).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rref_diagonal_and_rank_one() {
        let (r, p) = RationalMatrix::from_i64(&[&[2, 0], &[0, 3]]).rref();
        assert_eq!(r, RationalMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
        let (r, p) = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]).rref();
        assert_eq!(r, RationalMatrix::from_i64(&[&[1, 1], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::zeros(3, 4).rank(), 0);
        let stoich = RationalMatrix::from_i64(&[
            &[-1, 0, 0, 1, 0, 0],
            &[1, -1, 0, 0, 1, 0],
            &[0, 1, -1, -1, 0, 0],
            &[0, 0, 1, 0, -1, 0],
            &[0, 0, 0, -1, -1, 1],
            &[0, 0, 0, 1, 1, -1],
        ]);
        assert_eq!(stoich.rank(), 4);
        assert_eq!(minor_rank(&stoich), 4);
    }

    #[test]
    fn kernel_examples() {
        let k = RationalMatrix::from_i64(&[&[1, -1]]).kernel_basis();
        assert_eq!(k, RationalMatrix::from_i64(&[&[1, 1]]));

        let n = RationalMatrix::from_i64(&[&[-3, 1, -1, -2, 2], &[-1, 1, -1, -1, 1]]);
        let k = n.kernel_basis();
        assert_eq!(k.rows(), 3);
        let expected = RationalMatrix::from_i64(&[&[0, 0, 0, 1, 1], &[-1, 1, 0, 2, 0], &[0, 1, 1, 0, 0]]);
        // equal row spans: each spans the other
        for row in expected.row_vectors() {
            assert!(k.row_space_contains(&row));
        }
        for row in k.row_vectors() {
            assert!(expected.row_space_contains(&row));
        }
    }

    #[test]
    fn solve_affine_cases() {
        let b = vec![frac(1, 2), rat(-3)];
        let (x, k) = RationalMatrix::identity(2).solve_affine(&b).unwrap().unwrap();
        assert_eq!(x, b);
        assert_eq!(k.rows(), 0);

        let m = RationalMatrix::from_i64(&[&[1], &[1]]);
        assert!(m.solve_affine(&[rat(0), rat(1)]).unwrap().is_none());
    }

    #[test]
    fn det_examples() {
        assert_eq!(RationalMatrix::identity(3).det().unwrap(), rat(1));
        assert_eq!(RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]).det().unwrap(), rat(-2));
        assert!(matches!(RationalMatrix::zeros(2, 3).det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn parse_fractions() {
        assert_eq!(parse_rational("−3").unwrap(), rat(-3));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), frac(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn independent_rows_are_greedy() {
        let m = RationalMatrix::from_i64(&[&[1, 0], &[2, 0], &[0, 1], &[1, 1]]);
        assert_eq!(m.independent_rows(), vec![0, 2]);
    }

    proptest! {
        #[test]
        fn rref_matches_minor_rank(m in small_matrix(4, 6)) {
            let (r, pivots) = m.rref();
            prop_assert_eq!(pivots.len(), minor_rank(&m));
            // R = E·M: every row of R lies in the row space of M and vice versa
            for row in r.row_vectors() {
                prop_assert!(m.row_space_contains(&row));
            }
            for row in m.row_vectors() {
                prop_assert!(r.row_space_contains(&row));
            }
            let (rr, pp) = r.rref();
            prop_assert_eq!(rr, r);
            prop_assert_eq!(pp, pivots);
        }

        #[test]
        fn rank_is_transpose_invariant(m in small_matrix(3, 5)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_rank_nullity(m in small_matrix(3, 7)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.rows(), 7 - m.rank());
            prop_assert_eq!(k.rank(), k.rows());
            for row in k.row_vectors() {
                prop_assert!(m.mul_vec(&row).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn solve_affine_by_substitution(m in small_matrix(3, 4), x in prop::collection::vec(-5i64..=5, 4)) {
            let b = m.mul_vec(&rat_vec(&x)).unwrap();
            let (p, k) = m.solve_affine(&b).unwrap().expect("constructed consistent");
            prop_assert_eq!(m.mul_vec(&p).unwrap(), b);
            prop_assert_eq!(k.rows(), 4 - m.rank());
        }

        #[test]
        fn det_matches_cofactor_expansion(m in small_matrix(5, 5)) {
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn det_is_multiplicative(a in small_matrix(3, 3), b in small_matrix(3, 3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }
    }
}
