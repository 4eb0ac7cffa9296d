//! Exact rational scalars and dense matrices.
//!
//! Elimination is fraction-free: each row is scaled to integers and reduced
//! with Bareiss' update, so intermediate entries stay minors of the input.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Column vector of rationals.
pub type RationalVector = Vec<Rational>;

/// Errors raised by matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("pfaffian of odd dimension {0}")]
    OddDimension(usize),
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`; panics when `d` is zero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text for a rational: `a` or `a/b`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Dense matrix of rationals stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    expected: format!("{c} columns"),
                    found: format!("{} columns", row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Integer matrix literal; rows must have equal length.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(rows).expect("ragged integer matrix literal")
    }

    pub fn diagonal_matrix(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn trace(&self) -> Rational {
        self.diagonal().into_iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// Product, or a dimension error.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = a * b;
                        out[(i, j)] += v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Lie bracket `[self, other] = self·other − other·self`.
    pub fn bracket(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Exact rank.
    pub fn rank_at(&self) -> usize {
        let mut a = integer_rows(self);
        bareiss_echelon(&mut a).pivots.len()
    }

    /// Basis of the right null space `{v : M v = 0}`; each vector is scaled
    /// to primitive integer entries.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        let mut a = integer_rows(self);
        let ech = bareiss_echelon(&mut a);
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                back_substitute(&a, &ech.pivots, &mut x, None);
                primitive(x)
            })
            .collect()
    }

    /// One exact solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<RationalVector>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("right-hand side of length {}", self.rows),
                found: format!("length {}", b.len()),
            });
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let mut a = integer_rows(&aug);
        let ech = bareiss_echelon(&mut a);
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        back_substitute(&a, &ech.pivots, &mut x, Some(self.cols));
        Ok(Some(x))
    }

    /// Exact determinant.
    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Row scaling to integers multiplies the determinant by each scale.
        let mut scale = Rational::one();
        let mut a = Vec::with_capacity(n);
        for i in 0..n {
            let (row, s) = integer_row(self.row(i));
            scale *= Rational::from_integer(s);
            a.push(row);
        }
        let ech = bareiss_echelon(&mut a);
        if ech.pivots.len() < n {
            return Ok(Rational::zero());
        }
        let mut det = Rational::from_integer(a[n - 1][n - 1].clone()) / scale;
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        Ok(det)
    }

    /// Coefficients `c_0 = 1, c_1, …, c_n` of `det(T·I − M) = Σ c_j T^{n−j}`.
    ///
    /// The matrix is cleared of denominators and the division-free Berkowitz
    /// recursion runs over the integers, which avoids the coefficient growth
    /// of rational elimination.
    pub fn charpoly(&self) -> Result<Vec<Rational>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let den = self.data.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let a: Vec<BigInt> = self.data.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let at = |i: usize, j: usize| &a[i * n + j];
        // v holds the characteristic polynomial of the leading r×r block,
        // highest power first.
        let mut v = vec![BigInt::one()];
        for r in 0..n {
            let mut t = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-at(r, r));
            let mut col: Vec<BigInt> = (0..r).map(|i| at(i, r).clone()).collect();
            for _ in 0..r {
                let s: BigInt = (0..r).filter(|&j| !col[j].is_zero()).map(|j| at(r, j) * &col[j]).sum();
                t.push(-s);
                col = (0..r)
                    .map(|i| (0..r).filter(|&j| !col[j].is_zero()).map(|j| at(i, j) * &col[j]).sum())
                    .collect();
            }
            let next = (0..r + 2)
                .map(|i| (0..=i.min(r)).filter(|&j| !t[i - j].is_zero()).map(|j| &t[i - j] * &v[j]).sum())
                .collect();
            v = next;
        }
        let mut scale = BigInt::one();
        Ok(v
            .into_iter()
            .map(|c| {
                let q = Rational::new(c, scale.clone());
                scale *= &den;
                q
            })
            .collect())
    }

    /// Pfaffian of an antisymmetric matrix by skew elimination; the sign
    /// convention gives `pf([[0,1],[-1,0]]) = 1`.
    pub fn pfaffian(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..n {
                if self[(i, j)] != -self[(j, i)].clone() {
                    return Err(LinalgError::NotAntisymmetric);
                }
            }
        }
        if n % 2 == 1 {
            return Err(LinalgError::OddDimension(n));
        }
        let mut a = self.clone();
        let mut pf = Rational::one();
        let mut k = 0;
        while k < n {
            let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if j != k + 1 {
                a.swap_rows(j, k + 1);
                a.swap_cols(j, k + 1);
                pf = -pf;
            }
            let piv = a[(k, k + 1)].clone();
            pf *= &piv;
            // Schur-complement update on the trailing block:
            // B' = B + (v uᵀ − u vᵀ)/a with u = row k, v = row k+1.
            for i in k + 2..n {
                for jj in k + 2..n {
                    let ui = &a[(k, i)];
                    let vi = &a[(k + 1, i)];
                    let uj = &a[(k, jj)];
                    let vj = &a[(k + 1, jj)];
                    if (ui.is_zero() || vj.is_zero()) && (vi.is_zero() || uj.is_zero()) {
                        continue;
                    }
                    let d = (vi * uj - ui * vj) / &piv;
                    a[(i, jj)] += d;
                }
            }
            k += 2;
        }
        Ok(pf)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    /// Panics on a dimension mismatch; see [`RationalMatrix::checked_mul`].
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

struct Echelon {
    pivots: Vec<usize>,
    swaps: usize,
}

/// Scales a rational row to integers; returns the row and the scale used.
fn integer_row(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let out = row.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    (out, l)
}

fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|i| integer_row(m.row(i)).0).collect()
}

/// In-place fraction-free row echelon form (Bareiss).
fn bareiss_echelon(a: &mut [Vec<BigInt>]) -> Echelon {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        let piv = prow[c].clone();
        for row in bottom.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let mut v = &piv * &row[j];
                if !f.is_zero() && !prow[j].is_zero() {
                    v -= &f * &prow[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Echelon { pivots, swaps }
}

/// Solves for the pivot variables of an echelon system given the free ones.
/// `rhs` names the augmented column, if any.
fn back_substitute(a: &[Vec<BigInt>], pivots: &[usize], x: &mut [Rational], rhs: Option<usize>) {
    for (i, &p) in pivots.iter().enumerate().rev() {
        let row = &a[i];
        let mut s = match rhs {
            Some(c) => Rational::from_integer(row[c].clone()),
            None => Rational::zero(),
        };
        for j in p + 1..x.len() {
            if !row[j].is_zero() && !x[j].is_zero() {
                s -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[p] = s / Rational::from_integer(row[p].clone());
    }
}

/// Rescales a nonzero vector to coprime integers with positive leading entry.
fn primitive(x: Vec<Rational>) -> Vec<Rational> {
    let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return x;
    }
    let sign = match ints.iter().find(|v| !v.is_zero()) {
        Some(v) if v.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|v| Rational::from_integer(v / &g * &sign)).collect()
}

/// Exact univariate interpolation: coefficients (lowest degree first) of the
/// polynomial of degree `< nodes.len()` through the given points.
pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> Vec<Rational> {
    assert_eq!(nodes.len(), values.len(), "interpolation needs one value per node");
    let n = nodes.len();
    // Newton divided differences, then expansion into the monomial basis.
    let mut dd: Vec<Rational> = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - level]);
        }
    }
    let mut coeffs = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // coeffs ← coeffs·(T − nodes[i]) + dd[i]
        let mut next = vec![Rational::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * &nodes[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Mersenne prime `2^61 − 1` used for modular solving; every modular result
/// is lifted back to the rationals and checked exactly by the caller.
pub const MODULUS: u64 = (1 << 61) - 1;

fn fold_mod(x: u64) -> u64 {
    let s = (x & MODULUS) + (x >> 61);
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

/// `a·b mod p` for reduced inputs.
pub fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    fold_mod(((x as u64) & MODULUS) + (x >> 61) as u64)
}

fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, MODULUS - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

/// Image of an integer modulo [`MODULUS`].
pub fn int_mod(n: i64) -> u64 {
    n.rem_euclid(MODULUS as i64) as u64
}

/// Image of a rational modulo [`MODULUS`], unless its denominator vanishes.
pub fn reduce_mod(q: &Rational) -> Option<u64> {
    let p = BigInt::from(MODULUS);
    let n = q.numer().mod_floor(&p).to_u64()?;
    let d = q.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mul_mod(n, inv_mod(d)))
}

/// Solves the possibly overdetermined system `a·x = b` modulo [`MODULUS`].
/// Returns `None` unless `a` has full column rank and the system is
/// consistent.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(r, &v)| {
            let mut row = r.clone();
            row.push(v);
            row
        })
        .collect();
    for c in 0..cols {
        let p = (c..rows.len()).find(|&r| rows[r][c] != 0)?;
        rows.swap(c, p);
        let inv = inv_mod(rows[c][c]);
        for v in rows[c][c..].iter_mut() {
            *v = mul_mod(*v, inv);
        }
        let (head, tail) = rows.split_at_mut(c + 1);
        let pivot = &head[c];
        let eliminate = |row: &mut Vec<u64>| {
            let f = row[c];
            if f != 0 {
                for (v, &pv) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *v = sub_mod(*v, mul_mod(f, pv));
                }
            }
        };
        tail.par_iter_mut().for_each(eliminate);
    }
    if rows[cols..].iter().any(|r| r[cols] != 0) {
        return None;
    }
    // Back substitution on the unit upper-triangular part.
    let mut x = vec![0u64; cols];
    for c in (0..cols).rev() {
        let mut v = rows[c][cols];
        for k in c + 1..cols {
            v = sub_mod(v, mul_mod(rows[c][k], x[k]));
        }
        x[c] = v;
    }
    Some(x)
}

/// The rational `n/d` with `|n|, d < sqrt(p/2)` congruent to `a`, if any.
pub fn reconstruct_rational(a: u64) -> Option<Rational> {
    let bound = ((MODULUS / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (MODULUS as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    Some(Rational::new(BigInt::from(r1), BigInt::from(t1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(rows)
    }

    #[test]
    fn modular_round_trip() {
        for q in [ratio(-64, 1), ratio(3, 7), ratio(-1, 4), rat(0), ratio(123_456, 789)] {
            assert_eq!(reconstruct_rational(reduce_mod(&q).unwrap()), Some(q));
        }
        assert_eq!(mul_mod(MODULUS - 1, MODULUS - 1), 1);
    }

    #[test]
    fn modular_solve_matches_exact() {
        let a = m(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1], &[1, 1, 1]]);
        let x = [ratio(1, 2), ratio(-3, 5), rat(7)];
        let b = a.mul_vec(&x).unwrap();
        let am: Vec<Vec<u64>> = (0..4).map(|r| a.row(r).iter().map(|q| reduce_mod(q).unwrap()).collect()).collect();
        let bm: Vec<u64> = b.iter().map(|q| reduce_mod(q).unwrap()).collect();
        let sol: Vec<Rational> = solve_mod(&am, &bm).unwrap().into_iter().map(|v| reconstruct_rational(v).unwrap()).collect();
        assert_eq!(sol, x);
        let mut inconsistent = bm.clone();
        inconsistent[3] = sub_mod(inconsistent[3], 1);
        assert_eq!(solve_mod(&am, &inconsistent), None);
        let singular = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(solve_mod(&singular, &[1, 2]), None);
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(RationalMatrix::zeros(3, 3).kernel_basis().len(), 3);
        assert!(RationalMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let k = a.kernel_basis();
        assert_eq!(k.len() + a.rank_at(), 4);
        for v in k {
            assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_examples() {
        let id = RationalMatrix::identity(3);
        let b = vec![rat(1), rat(-2), ratio(1, 3)];
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(m(&[&[1, 1], &[2, 2]]).solve(&[rat(1), rat(3)]).unwrap(), None);
        assert_eq!(m(&[&[2]]).solve(&[rat(3)]).unwrap(), Some(vec![ratio(3, 2)]));
        assert!(matches!(id.solve(&[rat(1)]), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::identity(5).rank_at(), 5);
        let u = [1i64, -2, 3, 5];
        let v = [2i64, 7, -1, 4];
        let outer = RationalMatrix::from_fn(4, 4, |i, j| rat(u[i] * v[j]));
        assert_eq!(outer.rank_at(), 1);
    }

    #[test]
    fn determinant_and_charpoly() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        assert_eq!(a.determinant().unwrap(), rat(2 * (3 * -2 - 20) + -2));
        // det(T − A) evaluated at T = 0 equals det(−A).
        let cp = a.charpoly().unwrap();
        assert_eq!(cp[0], rat(1));
        assert_eq!(cp[1], -a.trace());
        assert_eq!(cp[3], (-&a).determinant().unwrap());
    }

    #[test]
    fn pfaffian_small() {
        let a = m(&[&[0, 1], &[-1, 0]]);
        assert_eq!(a.pfaffian().unwrap(), rat(1));
        // af − be + cd
        let (pa, pb, pc, pd, pe, pf) = (2, 3, 5, 7, 11, 13);
        let b = m(&[
            &[0, pa, pb, pc],
            &[-pa, 0, pd, pe],
            &[-pb, -pd, 0, pf],
            &[-pc, -pe, -pf, 0],
        ]);
        assert_eq!(b.pfaffian().unwrap(), rat(pa * pf - pb * pe + pc * pd));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let coeffs = [rat(3), rat(0), ratio(-1, 2), rat(7)];
        let nodes: Vec<Rational> = (0..4).map(rat).collect();
        let values: Vec<Rational> = nodes
            .iter()
            .map(|t| coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c))
            .collect();
        assert_eq!(interpolate(&nodes, &values), coeffs.to_vec());
    }
}
