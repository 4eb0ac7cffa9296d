//! Sparse multivariate polynomials over the rationals with a dual grading.
//!
//! Every variable carries an integer ad-h weight `n`; the standard degree of
//! a monomial is its total degree and its Slodowy degree is `Σ j_i (n_i + 2)`.
//! Terms are kept in a graded-lex ordered map so printing is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{fmt_rational, interpolate, rat, Rational};

/// Errors raised by polynomial operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable tables")]
    VarTableMismatch,
    #[error("zero polynomial has no initial component")]
    ZeroPolynomial,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("pfaffian of odd dimension {0}")]
    OddDimension(usize),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exact division failed")]
    InexactDivision,
}

/// Variable names with their ad-h weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
    weights: Vec<i64>,
}

impl VarTable {
    /// Panics if names repeat or lengths differ.
    pub fn new(names: Vec<String>, weights: Vec<i64>) -> Arc<Self> {
        assert_eq!(names.len(), weights.len(), "one weight per variable");
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len(), "variable names must be distinct");
        Arc::new(Self { names, weights })
    }

    /// Variables `prefix1, …, prefixN`, all of weight zero.
    pub fn numbered(prefix: &str, n: usize) -> Arc<Self> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")).collect(), vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Slodowy weight `n_i + 2` of variable `i`.
    pub fn slodowy_weight(&self, i: usize) -> i64 {
        self.weights[i] + 2
    }
}

/// Which degree function to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Standard,
    Slodowy,
}

/// Exponent vector ordered graded-lex: total degree first, then
/// lexicographically with `x1 > x2 > …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self { degree: exps.iter().sum(), exps }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `Σ j_i (n_i + 2)` for the given table.
    pub fn slodowy_degree(&self, vars: &VarTable) -> i64 {
        self.exps.iter().enumerate().map(|(i, &e)| e as i64 * vars.slodowy_weight(i)).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Self { degree: self.degree + other.degree, exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Self) -> Self {
        Self { degree: self.degree - other.degree, exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect() }
    }

    fn eval(&self, point: &[Rational]) -> Rational {
        let mut v = Rational::one();
        for (x, &e) in point.iter().zip(&self.exps) {
            if e > 0 {
                v *= num_traits::pow(x.clone(), e as usize);
            }
        }
        v
    }
}

/// Sparse polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The `i`-th variable (0-based).
    pub fn var(vars: &Arc<VarTable>, i: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::from_terms(vars, [(Monomial::new(exps), Rational::one())])
    }

    /// Sums the given terms, dropping zeros.
    pub fn from_terms(vars: &Arc<VarTable>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), vars.len(), "exponent vector length must match the variable table");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_table(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.same_table(other) {
            return Err(PolyError::VarTableMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.same_table(other) {
            return Err(PolyError::VarTableMismatch);
        }
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Highest standard degree, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree)
    }

    fn grade(&self, m: &Monomial, g: Grading) -> i64 {
        match g {
            Grading::Standard => m.degree as i64,
            Grading::Slodowy => m.slodowy_degree(&self.vars),
        }
    }

    /// Degree of every term when homogeneous in `g`, else `None`.
    pub fn homogeneous_degree(&self, g: Grading) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| self.grade(m, g));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Sum of the terms of minimal degree in the chosen grading.
    pub fn initial_component(&self, g: Grading) -> Result<Self, PolyError> {
        let min = self.terms.keys().map(|m| self.grade(m, g)).min().ok_or(PolyError::ZeroPolynomial)?;
        Ok(self.homogeneous_part(g, min))
    }

    /// Terms of degree exactly `d` in the chosen grading.
    pub fn homogeneous_part(&self, g: Grading, d: i64) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| self.grade(m, g) == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "evaluation point has wrong length");
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| acc + c * m.eval(point))
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * rat(e as i64));
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`; the result lives over the
    /// images' table.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<Self, PolyError> {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Err(PolyError::VarTableMismatch),
        };
        if images.iter().any(|p| !(Arc::ptr_eq(&p.vars, &target) || *p.vars == *target)) {
            return Err(PolyError::VarTableMismatch);
        }
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        let mut out = Self::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(&target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e)).clone();
                term = &term * &p;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another table, mapping variable `i`
    /// to variable `map[i]` of the target.
    pub fn rename(&self, target: &Arc<VarTable>, map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, failing when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self, PolyError> {
        if !self.same_table(d) {
            return Err(PolyError::VarTableMismatch);
        }
        let (lm, lc) = d.terms.iter().next_back().ok_or(PolyError::InexactDivision)?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.vars);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Err(PolyError::InexactDivision);
            }
            let t = Self::from_terms(&self.vars, [(m.div(lm), c / lc)]);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Ok(q)
    }

    /// Canonical text: descending graded-lex terms, every coefficient
    /// printed as an explicit rational, e.g. `1*x1^2*x3 - 3/2*x2 + 1`.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&fmt_rational(&c.abs()));
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => {
                        s.push('*');
                        s.push_str(&self.vars.names[i]);
                    }
                    _ => {
                        s.push('*');
                        s.push_str(&self.vars.names[i]);
                        s.push('^');
                        s.push_str(&e.to_string());
                    }
                }
            }
        }
        s
    }

    /// Parses an expression with `+ - * ^`, parentheses, integer or `a/b`
    /// literals and identifiers from `vars`.
    pub fn parse(input: &str, vars: &Arc<VarTable>) -> Result<Self, PolyError> {
        let mut p = Parser { s: input.as_bytes(), pos: 0, vars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched tables; see [`MultiPoly::checked_add`].
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial sum over mismatched variable tables")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(&-rhs).expect("polynomial difference over mismatched variable tables")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched tables; see [`MultiPoly::checked_mul`].
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial product over mismatched variable tables")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Arc<VarTable>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?.to_u32().ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse as an integer"))
    }

    fn base(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        let d = self.integer()?;
                        if d.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        return Ok(MultiPoly::constant(self.vars, Rational::new(n, d)));
                    }
                    self.pos = save;
                }
                Ok(MultiPoly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii identifier");
                let i = self.vars.index_of(name).ok_or_else(|| PolyError::UnknownSymbol(name.to_string()))?;
                Ok(MultiPoly::var(self.vars, i))
            }
            _ => Err(self.err("expected a number, symbol or `(`")),
        }
    }
}

/// Square matrix of polynomials over one table.
pub type PolyMatrix = Vec<Vec<MultiPoly>>;

/// Determinant algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetStrategy {
    /// Bareiss elimination with exact polynomial division.
    FractionFree,
    /// Laplace expansion with memoized minors.
    Cofactor,
    /// Evaluate one variable at integer points, take fraction-free
    /// determinants of the specializations and interpolate.
    Interpolate { var: usize },
}

fn check_square(m: &PolyMatrix) -> Result<usize, PolyError> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(PolyError::NotSquare { rows: n, cols: row.len() });
        }
    }
    Ok(n)
}

fn table_of(m: &PolyMatrix) -> Option<Arc<VarTable>> {
    m.first().and_then(|r| r.first()).map(|p| p.vars.clone())
}

/// Exact determinant of a square polynomial matrix.
pub fn determinant(m: &PolyMatrix, strategy: DetStrategy) -> Result<MultiPoly, PolyError> {
    let n = check_square(m)?;
    let Some(vars) = table_of(m) else {
        return Err(PolyError::NotSquare { rows: 0, cols: 0 });
    };
    if m.iter().flatten().any(|p| !p.same_table(&m[0][0])) {
        return Err(PolyError::VarTableMismatch);
    }
    match strategy {
        DetStrategy::FractionFree => det_bareiss(m, n, &vars),
        DetStrategy::Cofactor => Ok(det_cofactor(m, n, &vars)),
        DetStrategy::Interpolate { var } => det_interpolate(m, n, &vars, var),
    }
}

fn det_bareiss(m: &PolyMatrix, n: usize, vars: &Arc<VarTable>) -> Result<MultiPoly, PolyError> {
    let mut a = m.clone();
    let mut prev = MultiPoly::one(vars);
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(MultiPoly::zero(vars));
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = MultiPoly::zero(vars);
        }
        prev = a[k][k].clone();
    }
    let det = if n == 0 { MultiPoly::one(vars) } else { a[n - 1][n - 1].clone() };
    Ok(if sign { -&det } else { det })
}

fn det_cofactor(m: &PolyMatrix, n: usize, vars: &Arc<VarTable>) -> MultiPoly {
    // minors[mask] = determinant of rows 0..popcount(mask) on columns `mask`.
    let mut minors: BTreeMap<u64, MultiPoly> = BTreeMap::new();
    minors.insert(0, MultiPoly::one(vars));
    for row in 0..n {
        let mut next = BTreeMap::new();
        for (mask, minor) in &minors {
            if minor.is_zero() {
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 || m[row][col].is_zero() {
                    continue;
                }
                // Sign from the number of chosen columns to the right.
                let right = (mask >> (col + 1)).count_ones();
                let term = &m[row][col] * minor;
                let term = if right % 2 == 1 { -&term } else { term };
                let slot = next.entry(mask | (1 << col)).or_insert_with(|| MultiPoly::zero(vars));
                *slot = &*slot + &term;
            }
        }
        minors = next;
    }
    minors.remove(&((1u64 << n) - 1)).unwrap_or_else(|| MultiPoly::zero(vars))
}

fn det_interpolate(m: &PolyMatrix, n: usize, vars: &Arc<VarTable>, var: usize) -> Result<MultiPoly, PolyError> {
    // Degree bound in `var`: sum over rows of the row's maximal degree.
    let bound: u32 = m
        .iter()
        .map(|row| row.iter().flat_map(|p| p.terms.keys().map(|mm| mm.exps[var])).max().unwrap_or(0))
        .sum();
    let nodes: Vec<Rational> = (0..=bound as i64).map(rat).collect();
    let mut values = Vec::with_capacity(nodes.len());
    for t in &nodes {
        let specialized: PolyMatrix = m.iter().map(|row| row.iter().map(|p| specialize(p, var, t)).collect()).collect();
        values.push(det_bareiss(&specialized, n, vars)?);
    }
    // Interpolate coefficient-wise: gather, per monomial (with `var`
    // exponent zero), the values across nodes.
    let mut support: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
    for (k, v) in values.iter().enumerate() {
        for (mono, c) in &v.terms {
            support.entry(mono.clone()).or_insert_with(|| vec![Rational::zero(); nodes.len()])[k] = c.clone();
        }
    }
    let mut out = MultiPoly::zero(vars);
    for (mono, vals) in support {
        for (e, c) in interpolate(&nodes, &vals).into_iter().enumerate() {
            let mut exps = mono.exps.clone();
            exps[var] += e as u32;
            out.add_term(Monomial::new(exps), c);
        }
    }
    Ok(out)
}

fn specialize(p: &MultiPoly, var: usize, t: &Rational) -> MultiPoly {
    let mut out = MultiPoly::zero(&p.vars);
    for (m, c) in &p.terms {
        let e = m.exps[var];
        let mut exps = m.exps.clone();
        exps[var] = 0;
        out.add_term(Monomial::new(exps), c * num_traits::pow(t.clone(), e as usize));
    }
    out
}

/// Pfaffian by first-row expansion with memoization on the remaining index
/// set; `pf([[0,a],[-a,0]]) = a`.
pub fn pfaffian(m: &PolyMatrix) -> Result<MultiPoly, PolyError> {
    let n = check_square(m)?;
    let Some(vars) = table_of(m) else {
        return Err(PolyError::NotSquare { rows: 0, cols: 0 });
    };
    for i in 0..n {
        for j in 0..n {
            if m[i][j] != -&m[j][i] {
                return Err(PolyError::NotAntisymmetric);
            }
        }
    }
    if n % 2 == 1 {
        return Err(PolyError::OddDimension(n));
    }
    assert!(n <= 62, "pfaffian limited to dimension 62");
    let mut memo: BTreeMap<u64, MultiPoly> = BTreeMap::new();
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    Ok(pf_rec(m, full, &vars, &mut memo))
}

fn pf_rec(m: &PolyMatrix, mask: u64, vars: &Arc<VarTable>, memo: &mut BTreeMap<u64, MultiPoly>) -> MultiPoly {
    if mask == 0 {
        return MultiPoly::one(vars);
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << first);
    let mut out = MultiPoly::zero(vars);
    let mut pos = 0;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if !m[first][j].is_zero() {
            let sub = pf_rec(m, rest & !(1 << j), vars, memo);
            let term = &m[first][j] * &sub;
            out = if pos % 2 == 0 { &out + &term } else { &out - &term };
        }
        pos += 1;
    }
    memo.insert(mask, out.clone());
    out
}

/// Coefficients `c_0 = 1, …, c_n` of `det(T·I − M) = Σ c_j T^{n−j}` by the
/// division-free Berkowitz algorithm.
pub fn charpoly(m: &PolyMatrix) -> Result<Vec<MultiPoly>, PolyError> {
    let n = check_square(m)?;
    let Some(vars) = table_of(m) else {
        return Ok(Vec::new());
    };
    let one = MultiPoly::one(&vars);
    // v holds the coefficients (highest power first) for the leading block.
    let mut v = vec![one.clone(), -&m[0][0]];
    for r in 1..n {
        // Leading block M = m[0..r][0..r], column C = m[0..r][r], row R = m[r][0..r].
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(one.clone());
        toeplitz.push(-&m[r][r]);
        let mut mc: Vec<MultiPoly> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(MultiPoly::zero(&vars), |acc, i| {
                if m[r][i].is_zero() || mc[i].is_zero() {
                    acc
                } else {
                    &acc + &(&m[r][i] * &mc[i])
                }
            });
            toeplitz.push(-&rc);
            let next: Vec<MultiPoly> = (0..r)
                .map(|i| {
                    (0..r).fold(MultiPoly::zero(&vars), |acc, k| {
                        if m[i][k].is_zero() || mc[k].is_zero() {
                            acc
                        } else {
                            &acc + &(&m[i][k] * &mc[k])
                        }
                    })
                })
                .collect();
            mc = next;
        }
        let mut nv = vec![MultiPoly::zero(&vars); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < toeplitz.len() && !vj.is_zero() && !toeplitz[i - j].is_zero() {
                    *slot = &*slot + &(&toeplitz[i - j] * vj);
                }
            }
        }
        v = nv;
    }
    Ok(v)
}
