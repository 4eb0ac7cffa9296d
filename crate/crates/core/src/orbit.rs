//! Matrix realizations of `so(N)` and `sp(N)`, nilpotent representatives,
//! sl2-triples and graded centralizers.
//!
//! The form is anti-diagonal: `J_{i,N+1−i} = 1` for orthogonal algebras and
//! `±1` (positive on the first half) for symplectic ones. Nilpotent
//! representatives are built so that `e` is strictly upper triangular and the
//! neutral element `h` is diagonal with weakly decreasing entries.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, ratio, Rational, RationalMatrix};
use crate::partition::{AlgebraKind, AlgebraType, Partition, PartitionError};

/// Errors raised while constructing orbits and triples.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("invalid partition: {0}")]
    InvalidPartition(#[from] PartitionError),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix does not lie in the Lie algebra of the form")]
    NotInAlgebra,
    #[error("no sl2-triple completion found")]
    NoSolution,
    #[error("type {0} has no orthogonal or symplectic realization")]
    UnsupportedType(AlgebraType),
}

/// Symmetry type of the form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Orthogonal,
    Symplectic,
}

/// The natural module `k^N` with an anti-diagonal form `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormRealization {
    n: usize,
    kind: FormKind,
    j: RationalMatrix,
}

impl FormRealization {
    pub fn new(n: usize, kind: FormKind) -> Self {
        assert!(kind == FormKind::Orthogonal || n.is_multiple_of(2), "symplectic forms need even dimension");
        let j = RationalMatrix::from_fn(n, n, |a, b| {
            if a + b + 1 != n {
                Rational::zero()
            } else if kind == FormKind::Symplectic && a >= n / 2 {
                rat(-1)
            } else {
                rat(1)
            }
        });
        Self { n, kind, j }
    }

    /// The form attached to an orthogonal or symplectic algebra type.
    pub fn for_algebra(alg: AlgebraType) -> Result<Self, OrbitError> {
        match alg.kind {
            AlgebraKind::B | AlgebraKind::D => Ok(Self::new(alg.dim_v(), FormKind::Orthogonal)),
            AlgebraKind::C => Ok(Self::new(alg.dim_v(), FormKind::Symplectic)),
            AlgebraKind::A => Err(OrbitError::UnsupportedType(alg)),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.j
    }

    /// `J_{a,a*}` with `a* = N−1−a` (0-based).
    pub fn epsilon(&self, a: usize) -> i64 {
        if self.kind == FormKind::Symplectic && a >= self.n / 2 {
            -1
        } else {
            1
        }
    }

    /// `xᵀJ + Jx = 0`.
    pub fn contains(&self, x: &RationalMatrix) -> bool {
        x.rows() == self.n && x.cols() == self.n && (&(&x.transpose() * &self.j) + &(&self.j * x)).is_zero()
    }

    /// Coordinate positions `(a, b)` of the Lie algebra: one per basis element
    /// `E_ab − ε_a ε_b E_{b*a*}`, with `a + b < N−1`, plus `E_{a,a*}` in the
    /// symplectic case.
    pub fn basis_positions(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a + b + 1 < n || (self.kind == FormKind::Symplectic && a + b + 1 == n) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Basis element attached to a coordinate position.
    pub fn basis_element(&self, (a, b): (usize, usize)) -> RationalMatrix {
        let n = self.n;
        let mut x = RationalMatrix::zeros(n, n);
        x[(a, b)] = rat(1);
        if a + b + 1 != n {
            let sigma = -self.epsilon(a) * self.epsilon(b);
            x[(n - 1 - b, n - 1 - a)] = rat(sigma);
        }
        x
    }

    /// Dimension of the Lie algebra.
    pub fn algebra_dim(&self) -> usize {
        match self.kind {
            FormKind::Orthogonal => self.n * (self.n - 1) / 2,
            FormKind::Symplectic => self.n * (self.n + 1) / 2,
        }
    }
}

/// An sl2-triple `(e, h, f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: RationalMatrix,
    pub h: RationalMatrix,
    pub f: RationalMatrix,
}

impl Sl2Triple {
    /// Checks the bracket relations and membership in the form's algebra.
    pub fn is_valid(&self, form: &FormRealization) -> bool {
        self.h.bracket(&self.e) == self.e.scale(&rat(2))
            && self.h.bracket(&self.f) == self.f.scale(&rat(-2))
            && self.e.bracket(&self.f) == self.h
            && [&self.e, &self.h, &self.f].iter().all(|m| form.contains(m))
    }

    /// Eigenvalues of `h` on the natural module when `h` is diagonal.
    pub fn h_weights(&self) -> Option<Vec<i64>> {
        if !self.h.is_diagonal() {
            return None;
        }
        self.h.diagonal().iter().map(|d| d.is_integer().then(|| d.to_integer().to_i64()).flatten()).collect()
    }
}

/// Basis of a subspace of the Lie algebra made of `ad h` eigenvectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubspace {
    pub basis: Vec<RationalMatrix>,
    pub weights: Vec<i64>,
}

impl GradedSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A block of the representative, recorded for later use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    /// Size of each Jordan block, in partition order.
    pub size: usize,
    /// Global positions (0-based, after the change of basis) of the block's
    /// chain `v_1, …, v_d` where `e v_p = v_{p+1}`; for the middle vectors of
    /// paired odd orthogonal blocks the chain vector is a combination, so
    /// `None` marks positions that are not single basis vectors.
    pub chain: Vec<Option<usize>>,
}

/// One vector of the block basis: coordinates in the block basis.
type BlockVec = Vec<Rational>;

/// Builds a nilpotent `e` of Jordan type `λ` in the form's algebra, strictly
/// upper triangular, with diagonal neutral element.
pub fn build_nilpotent(lambda: &Partition, form: &FormRealization) -> Result<RationalMatrix, OrbitError> {
    Ok(build_with_layout(lambda, form)?.0)
}

/// [`build_nilpotent`] plus the diagonal of `h` and the block layout.
pub fn build_with_layout(lambda: &Partition, form: &FormRealization) -> Result<(RationalMatrix, Vec<i64>, Vec<BlockLayout>), OrbitError> {
    let alg = match form.kind {
        FormKind::Orthogonal => AlgebraType::orthogonal(form.n)?,
        FormKind::Symplectic => AlgebraType::symplectic(form.n)?,
    };
    Partition::validate(lambda.parts(), alg)?;
    let n = form.n;
    let orth = form.kind == FormKind::Orthogonal;
    // Block basis: blocks laid out consecutively in partition order.
    let parts = lambda.parts();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for &d in parts {
        offsets.push(acc);
        acc += d;
    }
    let mut e = RationalMatrix::zeros(n, n);
    let mut weight = vec![0i64; n];
    for (i, &d) in parts.iter().enumerate() {
        for p in 0..d {
            weight[offsets[i] + p] = 2 * p as i64 + 1 - d as i64;
            if p + 1 < d {
                e[(offsets[i] + p + 1, offsets[i] + p)] = rat(1);
            }
        }
    }
    // Gram matrix of the block form.
    let mut gram = RationalMatrix::zeros(n, n);
    let mut units: Vec<Unit> = Vec::new();
    let mut i = 0;
    let mut middle_sign = 1i64;
    while i < parts.len() {
        let d = parts[i];
        let self_dual = if orth { d % 2 == 1 } else { d.is_multiple_of(2) };
        if self_dual {
            let s = if orth {
                // Middle vector gets norm `middle_sign`.
                let c = middle_sign;
                middle_sign = -middle_sign;
                c * if ((d - 1) / 2).is_multiple_of(2) { 1 } else { -1 }
            } else {
                1
            };
            for p in 0..d {
                let q = d - 1 - p;
                let sign = if p % 2 == 0 { s } else { -s };
                gram[(offsets[i] + p, offsets[i] + q)] = rat(sign);
            }
            units.push(Unit::SelfDual { block: i });
            i += 1;
        } else {
            debug_assert_eq!(parts[i + 1], d, "paired blocks must have equal size");
            let (a0, b0) = (offsets[i], offsets[i + 1]);
            for p in 0..d {
                let q = d - 1 - p;
                let sign = if p % 2 == 0 { 1 } else { -1 };
                gram[(a0 + p, b0 + q)] = rat(sign);
                gram[(b0 + q, a0 + p)] = rat(if orth { sign } else { -sign });
            }
            units.push(Unit::Pair { a: i, b: i + 1 });
            i += 2;
        }
    }
    // Hyperbolic pairs (x, y) with B(x, y) = 1 and wt(x) ≥ 0.
    let unit_vec = |k: usize| -> BlockVec {
        let mut v = vec![Rational::zero(); n];
        v[k] = rat(1);
        v
    };
    let mut pairs: Vec<(i64, BlockVec, BlockVec, Vec<usize>)> = Vec::new();
    let mut middles: Vec<usize> = Vec::new();
    for u in &units {
        match *u {
            Unit::SelfDual { block } => {
                let d = parts[block];
                let o = offsets[block];
                for p in 0..d {
                    let q = d - 1 - p;
                    if p > q {
                        let bxy = gram_entry(&gram, o + p, o + q).expect("self-dual chains pair up");
                        pairs.push((weight[o + p], unit_vec(o + p), scaled(&unit_vec(o + q), bxy), vec![o + p, o + q]));
                    } else if p == q {
                        middles.push(o + p);
                    }
                }
            }
            Unit::Pair { a, b } => {
                let d = parts[a];
                let (oa, ob) = (offsets[a], offsets[b]);
                for p in 0..d {
                    let q = d - 1 - p;
                    let (xa, xb) = (oa + p, ob + q);
                    let (x, y) = if weight[xa] >= weight[xb] { (xa, xb) } else { (xb, xa) };
                    let bxy = gram_entry(&gram, x, y).expect("paired chains are dual");
                    pairs.push((weight[x], unit_vec(x), scaled(&unit_vec(y), bxy), vec![x, y]));
                }
            }
        }
    }
    // Middle vectors of odd orthogonal blocks have norms +1, −1, +1, …; pair
    // them up and keep the first one as the centre when N is odd.
    let mut centre = None;
    let mut mids = middles.clone();
    if mids.len() % 2 == 1 {
        centre = Some(mids.remove(0));
    }
    for c in mids.chunks(2) {
        let (m1, m2) = (c[0], c[1]);
        let n1 = gram[(m1, m1)].clone();
        let n2 = gram[(m2, m2)].clone();
        debug_assert!(n1 == -n2.clone() && n1.abs().is_one(), "middle norms must be opposite units");
        // With B(m1,m1) = c and B(m2,m2) = −c: x = (m1+m2)/2, y = c(m1−m2).
        let mut x = vec![Rational::zero(); n];
        x[m1] = ratio(1, 2);
        x[m2] = ratio(1, 2);
        let mut y = vec![Rational::zero(); n];
        y[m1] = n1.clone();
        y[m2] = -n1;
        pairs.push((0, x, y, vec![m1, m2]));
    }
    if let Some(c) = centre {
        debug_assert!(gram[(c, c)].is_one(), "centre must have norm one");
    }
    pairs.sort_by_key(|p| std::cmp::Reverse(p.0));
    // Change of basis P: x_k → column k, y_k → column N−1−k, centre in the middle.
    let mut p = RationalMatrix::zeros(n, n);
    let mut h_diag = vec![0i64; n];
    let mut position = vec![None; n];
    for (k, (w, x, y, src)) in pairs.iter().enumerate() {
        for r in 0..n {
            p[(r, k)] = x[r].clone();
            p[(r, n - 1 - k)] = y[r].clone();
        }
        h_diag[k] = *w;
        h_diag[n - 1 - k] = -*w;
        if x.iter().filter(|c| !c.is_zero()).count() == 1 && y.iter().filter(|c| !c.is_zero()).count() == 1 {
            position[src[0]] = Some(k);
            position[src[1]] = Some(n - 1 - k);
        }
    }
    if let Some(c) = centre {
        p[(c, n / 2)] = rat(1);
        position[c] = Some(n / 2);
    }
    debug_assert_eq!(&(&p.transpose() * &gram) * &p, form.j, "change of basis must carry the block form to J");
    // P⁻¹ = J⁻¹ Pᵀ B and J⁻¹ = Jᵀ for a signed permutation.
    let p_inv = &(&form.j.transpose() * &p.transpose()) * &gram;
    debug_assert_eq!(&p_inv * &p, RationalMatrix::identity(n));
    let e_new = &(&p_inv * &e) * &p;
    let layout = parts
        .iter()
        .enumerate()
        .map(|(i, &d)| BlockLayout { size: d, chain: (0..d).map(|q| position[offsets[i] + q]).collect() })
        .collect();
    Ok((e_new, h_diag, layout))
}

#[derive(Debug, Clone, Copy)]
enum Unit {
    SelfDual { block: usize },
    Pair { a: usize, b: usize },
}

fn gram_entry(g: &RationalMatrix, a: usize, b: usize) -> Option<Rational> {
    let v = g[(a, b)].clone();
    (!v.is_zero()).then_some(v)
}

/// `v / c` for `c = ±1`, i.e. `v·c`.
fn scaled(v: &[Rational], c: impl Into<Rational>) -> BlockVec {
    let c: Rational = c.into();
    let inv = c.recip();
    v.iter().map(|x| x * &inv).collect()
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn jordan_type(x: &RationalMatrix) -> Result<Vec<usize>, OrbitError> {
    let n = x.rows();
    let mut ranks = vec![n];
    let mut pw = RationalMatrix::identity(n);
    loop {
        pw = &pw * x;
        let r = pw.rank_at();
        if r == *ranks.last().expect("nonempty") {
            if r != 0 {
                return Err(OrbitError::NotNilpotent);
            }
            break;
        }
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    // Number of parts ≥ j is rank(x^{j−1}) − rank(x^j).
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for j in (1..=at_least.len()).rev() {
        let more = if j < at_least.len() { at_least[j] } else { 0 };
        for _ in 0..(at_least[j - 1] - more) {
            parts.push(j);
        }
    }
    Ok(parts)
}

/// Completes a nilpotent `e` of the form's algebra to an sl2-triple.
///
/// A diagonal `h` is tried first: the conditions `d_a − d_b = 2` on the
/// support of `e`, membership in the algebra and orthogonality to the
/// diagonal part of `g^e` under the trace form pin it down uniquely when it
/// exists. Otherwise `h` is taken in `[e, g]` with `[h, e] = 2e`. In both
/// cases `f` solves `[e, f] = h`, `[h, f] = −2f` exactly.
pub fn complete_sl2(e: &RationalMatrix, form: &FormRealization) -> Result<Sl2Triple, OrbitError> {
    let n = form.n;
    if !form.contains(e) {
        return Err(OrbitError::NotInAlgebra);
    }
    if !e.pow(n as u32).is_zero() {
        return Err(OrbitError::NotNilpotent);
    }
    let h = diagonal_h(e, form).map_or_else(|| general_h(e, form), Ok)?;
    let f = solve_f(e, &h, form).ok_or(OrbitError::NoSolution)?;
    let t = Sl2Triple { e: e.clone(), h, f };
    if !t.is_valid(form) {
        return Err(OrbitError::NoSolution);
    }
    Ok(t)
}

fn diagonal_h(e: &RationalMatrix, form: &FormRealization) -> Option<RationalMatrix> {
    let n = form.n;
    // Homogeneous constraints: d_a − d_b = 0 on the support, d_a + d_{a*} = 0.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if !e[(a, b)].is_zero() {
                let mut r = vec![Rational::zero(); n];
                r[a] += rat(1);
                r[b] -= rat(1);
                rows.push(r);
                rhs.push(rat(2));
            }
        }
        let mut r = vec![Rational::zero(); n];
        r[a] += rat(1);
        r[n - 1 - a] += rat(1);
        rows.push(r);
        rhs.push(Rational::zero());
    }
    let hom = RationalMatrix::from_rows(rows.clone()).ok()?;
    for z in hom.kernel_basis() {
        rows.push(z);
        rhs.push(Rational::zero());
    }
    let sys = RationalMatrix::from_rows(rows).ok()?;
    let d = sys.solve(&rhs).ok()??;
    let h = RationalMatrix::diagonal_matrix(&d);
    (h.bracket(e) == e.scale(&rat(2))).then_some(h)
}

fn general_h(e: &RationalMatrix, form: &FormRealization) -> Result<RationalMatrix, OrbitError> {
    // h = [e, z] with [h, e] = 2e is linear in z.
    let basis: Vec<RationalMatrix> = form.basis_positions().into_iter().map(|p| form.basis_element(p)).collect();
    let images: Vec<RationalMatrix> = basis.iter().map(|z| e.bracket(z)).collect();
    let cols: Vec<RationalMatrix> = images.iter().map(|h| h.bracket(e)).collect();
    let target = e.scale(&rat(2));
    let z = solve_combination(&cols, &target).ok_or(OrbitError::NoSolution)?;
    let mut h = RationalMatrix::zeros(form.n, form.n);
    for (c, img) in z.iter().zip(&images) {
        if !c.is_zero() {
            h = &h + &img.scale(c);
        }
    }
    Ok(h)
}

fn solve_f(e: &RationalMatrix, h: &RationalMatrix, form: &FormRealization) -> Option<RationalMatrix> {
    let positions = form.basis_positions();
    let candidates: Vec<RationalMatrix> = if h.is_diagonal() {
        let d = h.diagonal();
        positions
            .iter()
            .filter(|&&(a, b)| &d[a] - &d[b] == rat(-2))
            .map(|&p| form.basis_element(p))
            .collect()
    } else {
        positions.iter().map(|&p| form.basis_element(p)).collect()
    };
    // Stack [e, x] = h and [h, x] = −2x.
    let n = form.n;
    let cols: Vec<Vec<Rational>> = candidates
        .iter()
        .map(|x| {
            let mut v = e.bracket(x).entries().to_vec();
            v.extend((&h.bracket(x) + &x.scale(&rat(2))).entries().iter().cloned());
            v
        })
        .collect();
    let mut target = h.entries().to_vec();
    target.extend(std::iter::repeat_n(Rational::zero(), n * n));
    let m = RationalMatrix::from_fn(target.len(), cols.len(), |r, c| cols[c][r].clone());
    let coeffs = m.solve(&target).ok()??;
    let mut f = RationalMatrix::zeros(n, n);
    for (c, x) in coeffs.iter().zip(&candidates) {
        if !c.is_zero() {
            f = &f + &x.scale(c);
        }
    }
    Some(f)
}

/// Solves `Σ cᵢ Mᵢ = target` for the coefficients.
fn solve_combination(mats: &[RationalMatrix], target: &RationalMatrix) -> Option<Vec<Rational>> {
    let rows = target.rows() * target.cols();
    let m = RationalMatrix::from_fn(rows, mats.len(), |r, c| mats[c].entries()[r].clone());
    m.solve(target.entries()).ok()?
}

/// Basis of `{y ∈ g : [x, y] = 0}` made of `ad h` eigenvectors.
///
/// `x` must be an `ad h` eigenvector so that the centralizer is graded.
pub fn centralizer(x: &RationalMatrix, h: &RationalMatrix, form: &FormRealization) -> GradedSubspace {
    let positions = form.basis_positions();
    let spaces: Vec<(i64, Vec<RationalMatrix>)> = if h.is_diagonal() {
        let d: Vec<i64> = h.diagonal().iter().map(|v| v.to_integer().to_i64().expect("integral h weights")).collect();
        let mut by_weight: std::collections::BTreeMap<i64, Vec<RationalMatrix>> = Default::default();
        for &(a, b) in &positions {
            by_weight.entry(d[a] - d[b]).or_default().push(form.basis_element((a, b)));
        }
        by_weight.into_iter().rev().collect()
    } else {
        eigenspaces(h, form)
    };
    let mut basis = Vec::new();
    let mut weights = Vec::new();
    for (w, space) in spaces {
        let cols: Vec<RationalMatrix> = space.iter().map(|y| x.bracket(y)).collect();
        let rows = form.n * form.n;
        let m = RationalMatrix::from_fn(rows, cols.len(), |r, c| cols[c].entries()[r].clone());
        for v in m.kernel_basis() {
            let mut y = RationalMatrix::zeros(form.n, form.n);
            for (c, s) in v.iter().zip(&space) {
                if !c.is_zero() {
                    y = &y + &s.scale(c);
                }
            }
            basis.push(y);
            weights.push(w);
        }
    }
    GradedSubspace { basis, weights }
}

/// Integer eigenspaces of `ad h` on the algebra for a non-diagonal `h`.
fn eigenspaces(h: &RationalMatrix, form: &FormRealization) -> Vec<(i64, Vec<RationalMatrix>)> {
    let positions = form.basis_positions();
    let basis: Vec<RationalMatrix> = positions.iter().map(|&p| form.basis_element(p)).collect();
    // Matrix of ad h in the coordinates (entries at the basis positions).
    let dim = basis.len();
    let coord = |m: &RationalMatrix| -> Vec<Rational> { positions.iter().map(|&(a, b)| m[(a, b)].clone()).collect() };
    let images: Vec<Vec<Rational>> = basis.iter().map(|b| coord(&h.bracket(b))).collect();
    let bound = 4 * form.n as i64;
    let mut out = Vec::new();
    for w in (-bound..=bound).rev() {
        let m = RationalMatrix::from_fn(dim, dim, |r, c| {
            let mut v = images[c][r].clone();
            if r == c {
                v -= rat(w);
            }
            v
        });
        let ker = m.kernel_basis();
        if ker.is_empty() {
            continue;
        }
        let space = ker
            .into_iter()
            .map(|v| {
                let mut y = RationalMatrix::zeros(form.n, form.n);
                for (c, b) in v.iter().zip(&basis) {
                    if !c.is_zero() {
                        y = &y + &b.scale(c);
                    }
                }
                y
            })
            .collect();
        out.push((w, space));
    }
    out
}

/// `dim g^x` as the nullity of `ad x` on the whole algebra, with no use of
/// gradings or closed forms.
pub fn kernel_dim_centralizer(x: &RationalMatrix, form: &FormRealization) -> usize {
    let cols: Vec<RationalMatrix> = form.basis_positions().into_iter().map(|p| x.bracket(&form.basis_element(p))).collect();
    let m = RationalMatrix::from_fn(form.n * form.n, cols.len(), |r, c| cols[c].entries()[r].clone());
    cols.len() - m.rank_at()
}

/// Closed-form centralizer dimension; see [`crate::partition::dim_centralizer`].
pub fn dim_centralizer(lambda: &Partition, alg: AlgebraType) -> usize {
    crate::partition::dim_centralizer(lambda, alg)
}

/// Everything the slice engine needs about one orbit.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub alg: AlgebraType,
    pub partition: Partition,
    pub form: FormRealization,
    pub triple: Sl2Triple,
    pub ge: GradedSubspace,
    pub gf: GradedSubspace,
    pub layout: Vec<BlockLayout>,
}

impl OrbitData {
    /// Builds `e`, completes it to a triple and computes both centralizers.
    pub fn new(lambda: &Partition, alg: AlgebraType) -> Result<Self, OrbitError> {
        let form = FormRealization::for_algebra(alg)?;
        let lambda = Partition::validate(lambda.parts(), alg)?;
        let (e, h_diag, layout) = build_with_layout(&lambda, &form)?;
        let triple = complete_sl2(&e, &form)?;
        debug_assert_eq!(triple.h_weights().as_deref(), Some(h_diag.as_slice()));
        let ge = centralizer(&triple.e, &triple.h, &form);
        let gf = centralizer(&triple.f, &triple.h, &form);
        Ok(Self { alg, partition: lambda, form, triple, ge, gf, layout })
    }
}
