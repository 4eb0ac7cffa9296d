//! Partition combinatorics for orthogonal nilpotent orbits and the goodness
//! classifier.
//!
//! A partition `λ = (λ₁ ≥ … ≥ λ_k)` of `N` labels a nilpotent orbit of
//! `so(N)` when every even value occurs with even multiplicity, and of
//! `sp(N)` when every odd value does. The integers `n_λ`, `S(λ)` and `d_λ`
//! computed here determine the defect `dim g^e + ℓ − 2Σδᵢ`, which vanishes
//! exactly when the initial components of the standard generators are
//! algebraically independent.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while validating or analysing partitions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("partition is empty")]
    Empty,
    #[error("partition has a zero part")]
    ZeroPart,
    #[error("parts are not weakly decreasing")]
    NotDecreasing,
    #[error("parts sum to {found}, expected {expected}")]
    WrongTotal { expected: usize, found: usize },
    #[error("value {0} occurs with odd multiplicity")]
    BadMultiplicity(usize),
    #[error("operation requires an orthogonal algebra (type B or D), got {0}")]
    UnsupportedType(AlgebraType),
    #[error("rank {rank} is not valid for type {kind:?}")]
    BadRank { kind: AlgebraKind, rank: usize },
    #[error("defect formulas disagree: {via_s} from S(λ), {via_d} from d_λ")]
    FormulaMismatch { via_s: i64, via_d: i64 },
}

/// Cartan type of a classical simple Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraKind {
    A,
    B,
    C,
    D,
}

/// A classical algebra of given type and rank, with its natural module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraType {
    pub kind: AlgebraKind,
    pub rank: usize,
}

impl AlgebraType {
    pub fn new(kind: AlgebraKind, rank: usize) -> Result<Self, PartitionError> {
        let min = match kind {
            AlgebraKind::D => 2,
            _ => 1,
        };
        if rank < min {
            return Err(PartitionError::BadRank { kind, rank });
        }
        Ok(Self { kind, rank })
    }

    /// `so(N)`: type B for odd `N`, type D for even `N ≥ 4`.
    pub fn orthogonal(dim_v: usize) -> Result<Self, PartitionError> {
        if dim_v % 2 == 1 {
            Self::new(AlgebraKind::B, dim_v / 2)
        } else {
            Self::new(AlgebraKind::D, dim_v / 2)
        }
    }

    /// `sp(N)` for even `N`.
    pub fn symplectic(dim_v: usize) -> Result<Self, PartitionError> {
        if dim_v % 2 == 1 {
            return Err(PartitionError::BadRank { kind: AlgebraKind::C, rank: dim_v });
        }
        Self::new(AlgebraKind::C, dim_v / 2)
    }

    /// Dimension of the natural module.
    pub fn dim_v(&self) -> usize {
        match self.kind {
            AlgebraKind::A => self.rank + 1,
            AlgebraKind::B => 2 * self.rank + 1,
            AlgebraKind::C | AlgebraKind::D => 2 * self.rank,
        }
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        let n = self.dim_v();
        match self.kind {
            AlgebraKind::A => n * n - 1,
            AlgebraKind::B | AlgebraKind::D => n * (n - 1) / 2,
            AlgebraKind::C => n * (n + 1) / 2,
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        matches!(self.kind, AlgebraKind::B | AlgebraKind::D)
    }
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates `parts` as the Jordan type of a nilpotent element of `alg`.
    pub fn validate(parts: &[usize], alg: AlgebraType) -> Result<Self, PartitionError> {
        let p = Self::from_parts(parts)?;
        if p.total() != alg.dim_v() {
            return Err(PartitionError::WrongTotal { expected: alg.dim_v(), found: p.total() });
        }
        let bad_parity = match alg.kind {
            AlgebraKind::A => None,
            AlgebraKind::B | AlgebraKind::D => Some(0),
            AlgebraKind::C => Some(1),
        };
        if let Some(parity) = bad_parity {
            for (value, mult) in p.runs() {
                if value % 2 == parity && mult % 2 == 1 {
                    return Err(PartitionError::BadMultiplicity(value));
                }
            }
        }
        Ok(p)
    }

    /// Checks shape only: nonempty, positive, weakly decreasing.
    pub fn from_parts(parts: &[usize]) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing);
        }
        Ok(Self { parts: parts.to_vec() })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts `k`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `N = Σ λᵢ`.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(value, multiplicity)` pairs in decreasing order of value.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        runs(&self.parts)
    }

    /// The dual partition `λᵀ`.
    pub fn transpose(&self) -> Vec<usize> {
        let max = self.parts[0];
        (1..=max).map(|j| self.parts.iter().filter(|&&p| p >= j).count()).collect()
    }

    /// `n_λ`, the number of even parts.
    pub fn n_lambda(&self) -> usize {
        n_lambda(&self.parts)
    }

    /// The involution `i ↦ i'` (1-based) fixing indices of odd parts and
    /// pairing consecutive equal even parts.
    pub fn involution(&self) -> Vec<usize> {
        involution(&self.parts)
    }

    /// `S(λ)`: sum of odd fixed indices minus sum of even fixed indices.
    pub fn s_lambda(&self) -> i64 {
        s_lambda(&self.parts)
    }

    /// Which of the five tail conditions the sequence verifies.
    pub fn condition(&self) -> Condition {
        condition(&self.parts)
    }

    /// The shortened sequence `λ*`.
    pub fn lambda_star(&self) -> Partition {
        Partition { parts: lambda_star(&self.parts).to_vec() }
    }

    /// The recursively defined integer `d_λ`.
    pub fn d_lambda(&self) -> i64 {
        d_lambda(&self.parts)
    }

    /// Very good: `n_λ = d_λ` for odd length, `d_λ = 0` for even length.
    ///
    /// Cross-checked against the concatenation characterization.
    pub fn is_very_good(&self) -> bool {
        let by_def = is_very_good(&self.parts);
        debug_assert_eq!(by_def, is_very_good_by_segments(&self.parts), "very good characterizations disagree on {self}");
        by_def
    }

    /// Largest `k'` with `λ₁, …, λ_{k'}` even and the tail very good.
    pub fn satisfies_star(&self) -> Option<usize> {
        satisfies_star(&self.parts)
    }

    /// `νᵢ = (λ₁ + ⋯ + λᵢ)/2` for `i ≤ k'`.
    pub fn nu_sequence(&self, k_prime: usize) -> Vec<usize> {
        let mut acc = 0;
        self.parts[..k_prime]
            .iter()
            .map(|p| {
                acc += p;
                acc / 2
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// The five mutually exclusive shapes of the tail of an orthogonal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// Last two parts odd.
    C1,
    /// Last two parts even.
    C2,
    /// `k > 3`, first and last parts odd, all others even.
    C3,
    /// `k > 4`, last part odd, and the previous odd part sits at index
    /// `k' ∈ {2, …, k−2}` with only even parts in between.
    C4 { k_prime: usize },
    /// `k = 1`, or last part odd and all others even.
    C5,
}

fn runs(parts: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &p in parts {
        match out.last_mut() {
            Some((v, m)) if *v == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn n_lambda(parts: &[usize]) -> usize {
    parts.iter().filter(|p| *p % 2 == 0).count()
}

fn involution(parts: &[usize]) -> Vec<usize> {
    let k = parts.len();
    let mut inv: Vec<usize> = (1..=k).collect();
    let mut i = 0;
    while i < k {
        if parts[i].is_multiple_of(2) && i + 1 < k && parts[i + 1] == parts[i] {
            inv[i] = i + 2;
            inv[i + 1] = i + 1;
            i += 2;
        } else {
            i += 1;
        }
    }
    inv
}

fn s_lambda(parts: &[usize]) -> i64 {
    involution(parts)
        .iter()
        .enumerate()
        .filter(|(i, &j)| i + 1 == j)
        .map(|(i, _)| {
            let idx = (i + 1) as i64;
            if idx % 2 == 1 {
                idx
            } else {
                -idx
            }
        })
        .sum()
}

fn odd(x: usize) -> bool {
    x % 2 == 1
}

/// Each predicate is evaluated on its own so that exclusivity can be tested.
fn condition_flags(p: &[usize]) -> [Option<Condition>; 5] {
    let k = p.len();
    let last = |i: usize| p[k - i];
    let c1 = (k >= 2 && odd(last(1)) && odd(last(2))).then_some(Condition::C1);
    let c2 = (k >= 2 && !odd(last(1)) && !odd(last(2))).then_some(Condition::C2);
    let c3 = (k > 3 && odd(p[0]) && odd(last(1)) && p[1..k - 1].iter().all(|&x| !odd(x))).then_some(Condition::C3);
    let c4 = if k > 4 && odd(last(1)) {
        // 1-based k' is the last odd index strictly before k.
        (0..k - 1)
            .rev()
            .find(|&i| odd(p[i]))
            .map(|i| i + 1)
            .filter(|&kp| (2..=k - 2).contains(&kp))
            .map(|k_prime| Condition::C4 { k_prime })
    } else {
        None
    };
    let c5 = (k == 1 || (odd(last(1)) && p[..k - 1].iter().all(|&x| !odd(x)))).then_some(Condition::C5);
    [c1, c2, c3, c4, c5]
}

fn condition(p: &[usize]) -> Condition {
    condition_flags(p)
        .into_iter()
        .flatten()
        .next()
        .unwrap_or_else(|| panic!("no tail condition applies to {p:?}; input is not an orthogonal partition"))
}

fn lambda_star(p: &[usize]) -> &[usize] {
    let k = p.len();
    if k == 2 {
        return p;
    }
    match condition(p) {
        Condition::C3 | Condition::C5 => p,
        Condition::C1 | Condition::C2 => &p[..k - 2],
        Condition::C4 { k_prime } => &p[..k_prime - 1],
    }
}

fn d_lambda(p: &[usize]) -> i64 {
    let k = p.len();
    if k == 2 {
        return n_lambda(p) as i64;
    }
    match condition(p) {
        Condition::C1 | Condition::C4 { .. } => d_lambda(lambda_star(p)),
        Condition::C2 => d_lambda(lambda_star(p)) + 2,
        Condition::C3 | Condition::C5 => 0,
    }
}

fn is_very_good(p: &[usize]) -> bool {
    if p.is_empty() {
        return true;
    }
    if odd(p.len()) {
        n_lambda(p) as i64 == d_lambda(p)
    } else {
        d_lambda(p) == 0
    }
}

/// Segment characterization: odd length means an odd head followed by pairs
/// of equal parity; even length means a concatenation of odd pairs and
/// blocks `(odd, even, …, even, odd)` with at least two even parts.
fn is_very_good_by_segments(p: &[usize]) -> bool {
    if p.is_empty() {
        return true;
    }
    if odd(p.len()) {
        return odd(p[0]) && p[1..].chunks(2).all(|c| odd(c[0]) == odd(c[1]));
    }
    let mut i = 0;
    while i < p.len() {
        if !odd(p[i]) || i + 1 >= p.len() {
            return false;
        }
        if odd(p[i + 1]) {
            i += 2;
            continue;
        }
        let Some(j) = (i + 1..p.len()).find(|&j| odd(p[j])) else {
            return false;
        };
        if j - i - 1 < 2 {
            return false;
        }
        i = j + 1;
    }
    true
}

fn satisfies_star(p: &[usize]) -> Option<usize> {
    let k = p.len();
    (2..=k).rev().find(|&kp| p[..kp].iter().all(|&x| !odd(x)) && is_very_good(&p[kp..]))
}

/// Both closed forms of the defect and the quantities they are built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub n_lambda: usize,
    pub s_lambda: i64,
    pub d_lambda: i64,
    pub k: usize,
    pub dim_centralizer: usize,
    pub sum_delta: i64,
    pub defect: i64,
}

/// Computes `dim g^e + ℓ − 2Σδᵢ` from `S(λ)` and from `d_λ`, checks that they
/// agree and back-solves `Σδᵢ`.
pub fn defect(lambda: &Partition, alg: AlgebraType) -> Result<DefectReport, PartitionError> {
    if !alg.is_orthogonal() {
        return Err(PartitionError::UnsupportedType(alg));
    }
    let p = lambda.parts();
    let k = p.len() as i64;
    let n = n_lambda(p) as i64;
    let s = s_lambda(p);
    let d = d_lambda(p);
    let via_s = if odd(p.len()) { (n - k - 1) / 2 + s } else { (n + k) / 2 + s };
    let via_d = if odd(p.len()) { n - d } else { d };
    if via_s != via_d {
        return Err(PartitionError::FormulaMismatch { via_s, via_d });
    }
    let dim = dim_centralizer(lambda, alg);
    let twice = dim as i64 + alg.rank as i64 - via_s;
    if twice % 2 != 0 || twice < 0 {
        return Err(PartitionError::FormulaMismatch { via_s, via_d: twice });
    }
    Ok(DefectReport {
        n_lambda: n as usize,
        s_lambda: s,
        d_lambda: d,
        k: p.len(),
        dim_centralizer: dim,
        sum_delta: twice / 2,
        defect: via_s,
    })
}

/// Dimension of the centralizer from the dual partition.
pub fn dim_centralizer(lambda: &Partition, alg: AlgebraType) -> usize {
    let sq: usize = lambda.transpose().iter().map(|c| c * c).sum();
    let odd_parts = lambda.parts().iter().filter(|&&p| odd(p)).count();
    match alg.kind {
        AlgebraKind::A => sq - 1,
        AlgebraKind::B | AlgebraKind::D => (sq - odd_parts) / 2,
        AlgebraKind::C => (sq + odd_parts) / 2,
    }
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictTag {
    GoodVeryGood,
    GoodDefectZero,
    GoodTca3i,
    GoodTca3ii,
    GoodTypeAC,
    PolynomialNotGood,
    NotPolynomial,
    Unknown,
}

impl VerdictTag {
    pub fn is_good(&self) -> bool {
        matches!(self, Self::GoodVeryGood | Self::GoodDefectZero | Self::GoodTca3i | Self::GoodTca3ii | Self::GoodTypeAC)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::GoodVeryGood => "GoodVeryGood",
            Self::GoodDefectZero => "GoodDefectZero",
            Self::GoodTca3i => "GoodTca3i",
            Self::GoodTca3ii => "GoodTca3ii",
            Self::GoodTypeAC => "GoodTypeAC",
            Self::PolynomialNotGood => "PolynomialNotGood",
            Self::NotPolynomial => "NotPolynomial",
            Self::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verdict with the mathematical reason behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub provenance: String,
}

/// Orbits of rank at most six whose invariants form a polynomial algebra but
/// which are not good, with the degrees of the generators.
pub const SMALL_RANK_NOT_GOOD: &[(AlgebraKind, usize, &[usize], &[u32])] = &[
    (AlgebraKind::B, 5, &[3, 3, 2, 2, 1], &[1, 1, 2, 2, 7]),
    (AlgebraKind::D, 5, &[3, 3, 2, 2], &[1, 1, 2, 2, 5]),
    (AlgebraKind::B, 6, &[5, 3, 2, 2, 1], &[1, 1, 1, 2, 2, 7]),
    (AlgebraKind::B, 6, &[4, 4, 2, 2, 1], &[1, 1, 2, 2, 3, 6]),
    (AlgebraKind::B, 6, &[3, 3, 2, 2, 1, 1, 1], &[1, 1, 2, 2, 6, 7]),
    (AlgebraKind::D, 6, &[5, 3, 2, 2], &[1, 1, 1, 2, 2, 5]),
    (AlgebraKind::D, 6, &[3, 3, 2, 2, 1, 1], &[1, 1, 2, 2, 3, 7]),
];

/// Largest rank covered by [`SMALL_RANK_NOT_GOOD`].
pub const SMALL_RANK_BOUND: usize = 6;

/// The known orbit whose centralizer invariants are not polynomial.
pub const NOT_POLYNOMIAL: (AlgebraKind, usize, &[usize]) = (AlgebraKind::D, 7, &[3, 3, 2, 2, 2, 2]);

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Decision ladder: type A/C, very good, zero defect, the two even-prefix
/// theorems, the known non-polynomial orbit, the small-rank exceptions,
/// and otherwise `Unknown`.
pub fn classify(lambda: &Partition, alg: AlgebraType) -> Verdict {
    let verdict = |tag, provenance: String| Verdict { tag, provenance };
    if !alg.is_orthogonal() {
        return verdict(
            VerdictTag::GoodTypeAC,
            "type A or C: the initial components of the standard generators are independent for every nilpotent element".into(),
        );
    }
    let p = lambda.parts();
    if lambda.is_very_good() {
        return verdict(
            VerdictTag::GoodVeryGood,
            "very good partition: n_λ = d_λ (odd length) or d_λ = 0 (even length), so the defect vanishes".into(),
        );
    }
    let report = defect(lambda, alg).expect("defect formulas agree on valid orthogonal partitions");
    if report.defect == 0 {
        return verdict(VerdictTag::GoodDefectZero, "defect dim g^e + ℓ − 2Σδ vanishes, so the initial components are independent".into());
    }
    if let Some(kp) = lambda.satisfies_star() {
        if p[..kp].iter().all(|&x| x == p[0]) {
            return verdict(
                VerdictTag::GoodTca3i,
                format!("even prefix of {kp} equal parts with very good tail: modified generators raise Σδ by {} and close the defect", kp / 2),
            );
        }
    }
    if p.len() == 4 && p.iter().all(|&x| !odd(x)) {
        return verdict(
            VerdictTag::GoodTca3ii,
            "four even parts: r₂ = q_ν₂ − ¼q_ν₁² and r₃ = q_ν₃ − q_ν₁q_ν₄ raise Σδ by 2 and close the defect".into(),
        );
    }
    if (alg.kind, alg.rank, p) == NOT_POLYNOMIAL {
        return verdict(
            VerdictTag::NotPolynomial,
            "explicit relations among the initial components force a non-polynomial invariant algebra".into(),
        );
    }
    if let Some((_, _, _, degs)) = SMALL_RANK_NOT_GOOD.iter().find(|(kind, rank, parts, _)| (*kind, *rank, *parts) == (alg.kind, alg.rank, p)) {
        return verdict(
            VerdictTag::PolynomialNotGood,
            format!("polynomial invariant algebra with generators of degrees {}, nonsingular centralizer, not good", join(degs)),
        );
    }
    verdict(VerdictTag::Unknown, String::new())
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Every nilpotent orbit (as a partition) of `alg`.
pub fn nilpotent_partitions(alg: AlgebraType) -> Vec<Partition> {
    partitions_of(alg.dim_v()).into_iter().filter_map(|p| Partition::validate(&p, alg).ok()).collect()
}

/// One row of the classification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub rank: usize,
    #[serde(rename = "type")]
    pub kind: AlgebraKind,
    pub partition: String,
    pub n_lambda: usize,
    pub s_lambda: i64,
    pub d_lambda: i64,
    pub defect: i64,
    pub verdict: VerdictTag,
    pub provenance: String,
}

/// Rows for every orbit of `B_n` (`1 ≤ n ≤ max_rank`) and `D_n`
/// (`2 ≤ n ≤ max_rank`), sorted by rank, type, then partition (descending).
pub fn classification_table(max_rank: usize) -> Vec<TableRow> {
    let algebras: Vec<AlgebraType> = (1..=max_rank)
        .flat_map(|n| [AlgebraType::new(AlgebraKind::B, n).ok(), AlgebraType::new(AlgebraKind::D, n).ok()])
        .flatten()
        .collect();
    let jobs: Vec<(AlgebraType, Partition)> =
        algebras.iter().flat_map(|&alg| nilpotent_partitions(alg).into_iter().map(move |p| (alg, p))).collect();
    let mut rows: Vec<(AlgebraType, Vec<usize>, TableRow)> = jobs
        .par_iter()
        .map(|(alg, p)| {
            let r = defect(p, *alg).expect("defect formulas agree on valid orthogonal partitions");
            let v = classify(p, *alg);
            (
                *alg,
                p.parts().to_vec(),
                TableRow {
                    rank: alg.rank,
                    kind: alg.kind,
                    partition: p.to_string(),
                    n_lambda: r.n_lambda,
                    s_lambda: r.s_lambda,
                    d_lambda: r.d_lambda,
                    defect: r.defect,
                    verdict: v.tag,
                    provenance: v.provenance,
                },
            )
        })
        .collect();
    rows.sort_by(|a, b| (a.0.rank, a.0.kind).cmp(&(b.0.rank, b.0.kind)).then_with(|| b.1.cmp(&a.1)));
    rows.into_iter().map(|(_, _, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so(n: usize) -> AlgebraType {
        AlgebraType::orthogonal(n).unwrap()
    }

    /// Orthogonal algebras with natural module of dimension at most `max`.
    fn orthogonal_upto(max: usize) -> Vec<AlgebraType> {
        (1..=max).filter_map(|n| AlgebraType::orthogonal(n).ok()).collect()
    }

    fn part(p: &[usize]) -> Partition {
        Partition::from_parts(p).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Partition::validate(&[3, 3, 2, 2], so(10)).is_ok());
        assert!(Partition::validate(&[7], so(7)).is_ok());
        assert_eq!(Partition::validate(&[2, 1, 1], so(4)), Err(PartitionError::BadMultiplicity(2)));
        assert_eq!(Partition::validate(&[1, 2, 1], so(4)), Err(PartitionError::NotDecreasing));
        assert_eq!(Partition::validate(&[3, 1], so(5)), Err(PartitionError::WrongTotal { expected: 5, found: 4 }));
        let sp4 = AlgebraType::symplectic(4).unwrap();
        assert!(Partition::validate(&[2, 1, 1], sp4).is_ok());
        assert_eq!(Partition::validate(&[3, 1], sp4), Err(PartitionError::BadMultiplicity(3)));
    }

    #[test]
    fn s_lambda_examples() {
        assert_eq!(part(&[3, 3, 2, 2]).s_lambda(), -1);
        assert_eq!(part(&[7]).s_lambda(), 1);
        assert_eq!(part(&[5, 3, 3, 2, 2]).s_lambda(), 2);
    }

    #[test]
    fn involution_fixes_exactly_odd_parts() {
        for alg in orthogonal_upto(16) {
            for p in nilpotent_partitions(alg) {
                let inv = p.involution();
                for (i, &j) in inv.iter().enumerate() {
                    assert_eq!(inv[j - 1], i + 1, "involution on {p}");
                    assert_eq!(j == i + 1, odd(p.parts()[i]), "fixed points of {p}");
                    assert!(j.abs_diff(i + 1) <= 1);
                }
            }
        }
    }

    #[test]
    fn condition_examples() {
        assert_eq!(part(&[4, 4, 3, 1]).condition(), Condition::C1);
        assert_eq!(part(&[6, 6, 5, 4, 4]).condition(), Condition::C2);
        assert_eq!(part(&[7, 6, 6, 4, 4, 4, 4, 3]).condition(), Condition::C3);
        assert_eq!(part(&[9]).condition(), Condition::C5);
        assert_eq!(part(&[6, 6, 4, 4, 3]).condition(), Condition::C5);
        assert_eq!(part(&[3, 3, 2, 2, 1]).condition(), Condition::C4 { k_prime: 2 });
    }

    #[test]
    fn conditions_are_exclusive_and_exhaustive() {
        for alg in orthogonal_upto(20) {
            for p in nilpotent_partitions(alg) {
                let hits = condition_flags(p.parts()).iter().flatten().count();
                assert_eq!(hits, 1, "{p} verifies {hits} conditions");
            }
        }
    }

    #[test]
    fn lambda_star_examples() {
        assert_eq!(part(&[3, 3, 2, 2]).lambda_star(), part(&[3, 3]));
        assert_eq!(part(&[6, 6, 4, 4, 3]).lambda_star(), part(&[6, 6, 4, 4, 3]));
        assert_eq!(part(&[3, 3, 2, 2, 1]).lambda_star(), part(&[3]));
    }

    #[test]
    fn d_lambda_examples() {
        assert_eq!(part(&[3, 3, 2, 2]).d_lambda(), 2);
        assert_eq!(part(&[6, 6, 4, 4, 3]).d_lambda(), 0);
        assert_eq!(part(&[3, 3, 2, 2, 2, 2]).d_lambda(), 4);
    }

    #[test]
    fn defect_examples() {
        let r = defect(&part(&[3, 3, 2, 2]), so(10)).unwrap();
        assert_eq!((r.defect, r.sum_delta, r.dim_centralizer), (2, 10, 17));
        let r = defect(&part(&[3, 3, 2, 2, 2, 2]), so(14)).unwrap();
        assert_eq!((r.defect, r.sum_delta, r.dim_centralizer), (4, 20, 37));
        let r = defect(&part(&[7]), so(7)).unwrap();
        assert_eq!((r.defect, r.sum_delta, r.dim_centralizer), (0, 3, 3));
    }

    #[test]
    fn defect_forms_agree_and_are_nonnegative() {
        for n in 1..=20 {
            let Ok(alg) = AlgebraType::orthogonal(n) else { continue };
            for p in nilpotent_partitions(alg) {
                let r = defect(&p, alg).unwrap();
                assert!(r.defect >= 0, "{p}");
                assert!(r.sum_delta >= alg.rank as i64, "{p}: every δᵢ ≥ 1");
            }
        }
    }

    #[test]
    fn very_good_examples() {
        assert!(part(&[5, 3, 3, 2, 2]).is_very_good());
        assert!(part(&[7, 5, 5, 4, 4, 3, 1, 1]).is_very_good());
        assert!(!part(&[3, 3, 2, 2]).is_very_good());
    }

    #[test]
    fn very_good_characterizations_agree() {
        for alg in orthogonal_upto(20) {
            for p in nilpotent_partitions(alg) {
                assert_eq!(is_very_good(p.parts()), is_very_good_by_segments(p.parts()), "{p}");
            }
        }
    }

    #[test]
    fn star_examples() {
        assert_eq!(part(&[6, 6, 4, 4, 3, 2, 2]).satisfies_star(), Some(4));
        assert_eq!(part(&[6, 6, 4, 4, 3, 3, 3, 2, 2, 1]).satisfies_star(), Some(4));
        assert_eq!(part(&[8, 8, 4, 4, 4, 4, 2, 2, 1, 1]).satisfies_star(), Some(8));
        assert_eq!(part(&[3, 3, 2, 2]).satisfies_star(), None);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(part(&[8, 8, 4, 4, 4, 4, 2, 2, 1, 1]).nu_sequence(8), vec![4, 8, 10, 12, 14, 16, 17, 18]);
        assert_eq!(part(&[6, 6, 4, 4, 3, 2, 2]).nu_sequence(4), vec![3, 6, 8, 10]);
        assert_eq!(part(&[2, 2, 1]).nu_sequence(2), vec![1, 2]);
    }

    #[test]
    fn star_defect_equals_k_prime() {
        for alg in orthogonal_upto(20) {
            for p in nilpotent_partitions(alg) {
                if let Some(kp) = p.satisfies_star() {
                    assert_eq!(defect(&p, alg).unwrap().defect, kp as i64, "{p}");
                    let nu = p.nu_sequence(kp);
                    assert!(nu.windows(2).all(|w| w[0] < w[1]));
                    assert!(nu[kp - 1] <= alg.rank, "{p}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&part(&[3, 3, 2, 2]), so(10)).tag, VerdictTag::PolynomialNotGood);
        assert_eq!(classify(&part(&[3, 3, 2, 2, 2, 2]), so(14)).tag, VerdictTag::NotPolynomial);
        assert_eq!(classify(&part(&[6, 6, 6, 6, 5, 3]), so(32)).tag, VerdictTag::GoodTca3i);
        assert_eq!(classify(&part(&[6, 6, 4, 4]), so(20)).tag, VerdictTag::GoodTca3ii);
        assert_eq!(classify(&part(&[5, 3, 3, 2, 2]), so(15)).tag, VerdictTag::GoodVeryGood);
        let sp = AlgebraType::symplectic(6).unwrap();
        assert_eq!(classify(&part(&[2, 2, 1, 1]), sp).tag, VerdictTag::GoodTypeAC);
    }

    #[test]
    fn provenance_nonempty_unless_unknown() {
        for row in classification_table(7) {
            assert_eq!(row.provenance.is_empty(), row.verdict == VerdictTag::Unknown, "{row:?}");
        }
    }

    #[test]
    fn dual_partition() {
        assert_eq!(part(&[3, 3, 2, 2]).transpose(), vec![4, 4, 2]);
        assert_eq!(dim_centralizer(&part(&[7]), so(7)), 3);
        assert_eq!(dim_centralizer(&part(&[1; 7]), so(7)), 21);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }
}
