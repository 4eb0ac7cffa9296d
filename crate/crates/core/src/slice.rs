//! Restriction of the invariant generators to the Slodowy slice `e + g^f`.
//!
//! Generators are `q_i = Q_{2i}`, the coefficient of `T^{N−2i}` in
//! `det(T − x)`, except that in type D the last one is the Pfaffian of `Jx`.
//! With the anti-diagonal form this gives `Q_{2ℓ} = (−1)^ℓ q_ℓ²`.
//!
//! The workhorse is exact evaluation: at a rational point `y` of `g^f` the
//! restriction `κ(q_i)(t·y)` is a polynomial in `t` whose lowest nonzero
//! coefficient is the value of the initial component `ᵉq_i` at `y`. Degrees,
//! Jacobian ranks and relations are read off such evaluations. Symbolic
//! initial components are recovered by exact interpolation over the
//! monomials of the right standard and Slodowy degree.

use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, interpolate, rat, ratio, Rational, RationalMatrix};
use crate::orbit::{OrbitData, OrbitError};
use crate::partition::{self, AlgebraKind, AlgebraType, Partition, PartitionError};
use crate::poly::{self, Grading, Monomial, MultiPoly, PolyError, PolyMatrix, VarTable};

/// Default seed for every randomized computation.
pub const DEFAULT_SEED: u64 = 0x5EED_2017;
/// Default number of random points used to read off generic orders and ranks.
pub const DEFAULT_TRIALS: usize = 3;
/// Default number of points for randomized relation checks.
pub const RELATION_POINTS: usize = 50;
/// Candidate monomials above which symbolic interpolation is refused.
pub const CANDIDATE_CAP: usize = 4000;

const POINT_RANGE: i64 = 1000;
const INTERPOLATION_RANGE: i64 = 40;

/// Errors raised by the slice engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("type {0} is not supported by the slice engine")]
    Unsupported(AlgebraType),
    #[error("trace pairing between g^e and g^f is degenerate")]
    DegeneratePairing,
    #[error("generator index {index} out of range 1..={rank}")]
    BadIndex { index: usize, rank: usize },
    #[error("restriction of generator {0} vanishes at every sampled point")]
    ZeroRestriction(usize),
    #[error("generator {index}: Slodowy degree {found:?}, expected {expected}")]
    HomogeneityViolation { index: usize, expected: i64, found: Option<i64> },
    #[error("criterion violated: defect {defect}, jacobian rank {rank}, rank of g {ell}")]
    CriterionViolation { defect: i64, rank: usize, ell: usize },
    #[error("computed defect {computed} differs from the closed form {formula}")]
    DefectMismatch { computed: i64, formula: i64 },
    #[error("interpolation of generator {index} in degree {degree} failed")]
    Interpolation { index: usize, degree: u32 },
    #[error("{count} candidate monomials exceed the symbolic cap")]
    TooLarge { count: usize },
    #[error("relation uses an odd power of the Pfaffian generator, which is defined only up to sign")]
    OddPfaffianPower,
    #[error("unknown symbol in relation: {0}")]
    UnknownSymbol(String),
    #[error("partition {0} does not satisfy condition (*)")]
    StarViolated(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

/// How relations and reports are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Initial components are interpolated exactly and expanded.
    Identical,
    /// Everything is read off exact evaluations at seeded random points.
    Randomized,
}

/// Options for [`slice_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub seed: u64,
    pub trials: usize,
    pub mode: EvalMode,
    /// Also interpolate the full restrictions `κ(q_i)` (identical mode only).
    pub include_kappa: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS, mode: EvalMode::Randomized, include_kappa: false }
    }
}

/// A nilpotent orbit together with coordinates on its Slodowy slice.
#[derive(Debug, Clone)]
pub struct SliceContext {
    orbit: OrbitData,
    coords: Arc<VarTable>,
    generator_vars: Arc<VarTable>,
    generic_point: PolyMatrix,
    degrees: Vec<u32>,
}

impl SliceContext {
    /// Builds `e`, its triple and both centralizers; one coordinate per basis
    /// vector `w_k` of `g^f`, carrying the `ad h` weight `−wt(w_k) ≥ 0` of the
    /// dual vector of `g^e`.
    pub fn new(lambda: &Partition, alg: AlgebraType) -> Result<Self, SliceError> {
        if alg.kind == AlgebraKind::A {
            return Err(SliceError::Unsupported(alg));
        }
        let orbit = OrbitData::new(lambda, alg)?;
        let r = orbit.gf.dim();
        let names = (1..=r).map(|k| format!("x{k}")).collect();
        let weights = orbit.gf.weights.iter().map(|w| -w).collect();
        let coords = VarTable::new(names, weights);
        // Nondegenerate trace pairing: the coordinates are dual to a g^e basis.
        let pairing = RationalMatrix::from_fn(r, r, |a, b| trace_product(&orbit.ge.basis[a], &orbit.gf.basis[b]));
        if pairing.rank_at() != r {
            return Err(SliceError::DegeneratePairing);
        }
        let n = orbit.form.dim();
        let e = &orbit.triple.e;
        let generic_point = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut p = MultiPoly::constant(&coords, e[(a, b)].clone());
                        for (k, w) in orbit.gf.basis.iter().enumerate() {
                            if !w[(a, b)].is_zero() {
                                p = &p + &MultiPoly::var(&coords, k).scale(&w[(a, b)]);
                            }
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        let ell = alg.rank;
        let degrees = (1..=ell)
            .map(|i| if alg.kind == AlgebraKind::D && i == ell { ell as u32 } else { 2 * i as u32 })
            .collect();
        let generator_vars = VarTable::numbered("q", ell);
        Ok(Self { orbit, coords, generator_vars, generic_point, degrees })
    }

    pub fn algebra(&self) -> AlgebraType {
        self.orbit.alg
    }

    pub fn partition(&self) -> &Partition {
        &self.orbit.partition
    }

    pub fn orbit(&self) -> &OrbitData {
        &self.orbit
    }

    /// Coordinates on `g^f`.
    pub fn coords(&self) -> &Arc<VarTable> {
        &self.coords
    }

    /// Symbols `q1, …, qℓ` used in relations and modified generators.
    pub fn generator_vars(&self) -> &Arc<VarTable> {
        &self.generator_vars
    }

    /// `e + Σ x_k w_k` with affine-linear entries.
    pub fn generic_point(&self) -> &PolyMatrix {
        &self.generic_point
    }

    /// Rank `ℓ` of the algebra.
    pub fn rank(&self) -> usize {
        self.orbit.alg.rank
    }

    /// Dimension of `g^e`, equal to the number of coordinates.
    pub fn dim_ge(&self) -> usize {
        self.coords.len()
    }

    /// Degrees `d_i` of the generators.
    pub fn generator_degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Whether generator `i` (1-based) is the Pfaffian.
    pub fn is_pfaffian(&self, i: usize) -> bool {
        self.orbit.alg.kind == AlgebraKind::D && i == self.rank()
    }

    /// The matrix `e + Σ y_k w_k`.
    pub fn point_matrix(&self, y: &[Rational]) -> RationalMatrix {
        let mut x = self.orbit.triple.e.clone();
        for (c, w) in y.iter().zip(&self.orbit.gf.basis) {
            if !c.is_zero() {
                x = &x + &w.scale(c);
            }
        }
        x
    }

    /// Values of `q_1, …, q_ℓ` at a matrix of the algebra.
    pub fn generator_values(&self, x: &RationalMatrix) -> Vec<Rational> {
        let c = x.charpoly().expect("square matrix");
        let ell = self.rank();
        (1..=ell)
            .map(|i| {
                if self.is_pfaffian(i) {
                    let jx = self.orbit.form.matrix() * x;
                    jx.pfaffian().expect("J·x is antisymmetric for x in so(2ℓ)")
                } else {
                    c[2 * i].clone()
                }
            })
            .collect()
    }

    /// Coefficients in `t` (lowest first, untrimmed to length `N+1`) of
    /// `κ(q_i)(t·y)` for every generator.
    pub fn generator_series(&self, y: &[Rational]) -> Vec<Vec<Rational>> {
        let n = self.orbit.form.dim();
        let nodes: Vec<Rational> = (0..=n as i64).map(rat).collect();
        let values: Vec<Vec<Rational>> = nodes
            .par_iter()
            .map(|t| {
                let ty: Vec<Rational> = y.iter().map(|v| v * t).collect();
                self.generator_values(&self.point_matrix(&ty))
            })
            .collect();
        (0..self.rank())
            .map(|i| {
                let column: Vec<Rational> = values.iter().map(|v| v[i].clone()).collect();
                let mut coeffs = interpolate(&nodes, &column);
                coeffs.resize(n + 1, Rational::zero());
                coeffs
            })
            .collect()
    }

    /// Series of each polynomial of `family` (over [`Self::generator_vars`])
    /// evaluated on the generator series.
    pub fn family_series(&self, family: &[MultiPoly], y: &[Rational]) -> Vec<Vec<Rational>> {
        let base = self.generator_series(y);
        family.iter().map(|p| eval_on_series(p, &base)).collect()
    }

    /// The generators themselves as a family.
    pub fn base_family(&self) -> Vec<MultiPoly> {
        (0..self.rank()).map(|i| MultiPoly::var(&self.generator_vars, i)).collect()
    }

    /// Random integer point of `g^f`, reproducible from `(seed, stream)`.
    pub fn random_point(&self, seed: u64, stream: u64) -> Vec<Rational> {
        random_vector(self.dim_ge(), seed, stream, POINT_RANGE)
    }

    /// Generic `t`-orders of a family: the minimum over `trials` points.
    /// These are the standard degrees of the initial components.
    pub fn initial_orders(&self, family: &[MultiPoly], trials: usize, seed: u64) -> Result<Vec<u32>, SliceError> {
        let mut best: Vec<Option<u32>> = vec![None; family.len()];
        for trial in 0..trials.max(1) {
            let y = self.random_point(seed, trial as u64);
            for (i, s) in self.family_series(family, &y).iter().enumerate() {
                if let Some(o) = order(s) {
                    best[i] = Some(best[i].map_or(o, |b| b.min(o)));
                }
            }
        }
        best.into_iter().enumerate().map(|(i, o)| o.ok_or(SliceError::ZeroRestriction(i + 1))).collect()
    }

    /// Values at `y` of the initial components, given their orders.
    pub fn initial_values(&self, family: &[MultiPoly], orders: &[u32], y: &[Rational]) -> Vec<Rational> {
        self.family_series(family, y).into_iter().zip(orders).map(|(s, &o)| s[o as usize].clone()).collect()
    }

    /// Values of `ᵉq_1, …, ᵉq_ℓ` at `y`.
    pub fn initial_generator_values(&self, orders: &[u32], y: &[Rational]) -> Vec<Rational> {
        let s = self.generator_series(y);
        s.into_iter().zip(orders).map(|(s, &o)| s[o as usize].clone()).collect()
    }

    /// Generic rank of the Jacobian of the initial components of a family.
    ///
    /// At each random point `y` the derivative along random directions `v_k`
    /// is read off `ε ↦ ᵉF(y + εv_k)`; the rank of this matrix is the rank of
    /// the Jacobian with overwhelming probability. The maximum over trials is
    /// returned.
    pub fn jacobian_rank_numeric(&self, family: &[MultiPoly], orders: &[u32], trials: usize, seed: u64) -> usize {
        let m = family.len();
        let max_order = orders.iter().copied().max().unwrap_or(0) as i64;
        let eps: Vec<Rational> = (0..=max_order).map(rat).collect();
        let mut best = 0;
        for trial in 0..trials.max(1) {
            let stream = 1_000 + 100 * trial as u64;
            let y = self.random_point(seed, stream);
            let columns: Vec<Vec<Rational>> = (0..m)
                .into_par_iter()
                .map(|k| {
                    let v = self.random_point(seed, stream + 1 + k as u64);
                    let samples: Vec<Vec<Rational>> = eps
                        .iter()
                        .map(|e| {
                            let p: Vec<Rational> = y.iter().zip(&v).map(|(a, b)| a + b * e).collect();
                            self.initial_values(family, orders, &p)
                        })
                        .collect();
                    (0..m)
                        .map(|i| {
                            let vals: Vec<Rational> = samples.iter().map(|s| s[i].clone()).collect();
                            interpolate(&eps, &vals).get(1).cloned().unwrap_or_else(Rational::zero)
                        })
                        .collect()
                })
                .collect();
            let jac = RationalMatrix::from_fn(m, m, |i, k| columns[k][i].clone());
            best = best.max(jac.rank_at());
            if best == m {
                break;
            }
        }
        best
    }

    /// Slodowy degree of `ᵉq_i` read off the scaling `y_k ↦ s^{n_k+2} y_k`
    /// at `s = 2` and `s = 3`; `None` if the two scalings disagree with every
    /// single degree or the value at `y` vanishes.
    pub fn slodowy_degree_at(&self, orders: &[u32], y: &[Rational]) -> Vec<Option<i64>> {
        let scaled = |s: i64| -> Vec<Rational> {
            y.iter()
                .enumerate()
                .map(|(k, v)| v * num_traits::pow(rat(s), self.coords.slodowy_weight(k) as usize))
                .collect()
        };
        let v1 = self.initial_generator_values(orders, y);
        let v2 = self.initial_generator_values(orders, &scaled(2));
        let v3 = self.initial_generator_values(orders, &scaled(3));
        (0..self.rank())
            .map(|i| {
                if v1[i].is_zero() {
                    return None;
                }
                let r2 = &v2[i] / &v1[i];
                let r3 = &v3[i] / &v1[i];
                let d = exact_log(&r2, 2)?;
                (num_traits::pow(rat(3), d as usize) == r3).then_some(d)
            })
            .collect()
    }

    /// Symbolic coefficient of `t^d` in `κ(q_i)(t·y)` for each request
    /// `(i, d)` (1-based `i`), interpolated over the monomials of standard
    /// degree `d` and Slodowy degree `2d_i`.
    pub fn symbolic_components(&self, requests: &[(usize, u32)], seed: u64) -> Result<Vec<MultiPoly>, SliceError> {
        let ell = self.rank();
        let candidates: Vec<Vec<Monomial>> = requests
            .iter()
            .map(|&(i, d)| {
                if i == 0 || i > ell {
                    return Err(SliceError::BadIndex { index: i, rank: ell });
                }
                let c = monomials_with_degrees(&self.coords, d, 2 * self.degrees[i - 1] as i64);
                if c.len() > CANDIDATE_CAP {
                    return Err(SliceError::TooLarge { count: c.len() });
                }
                Ok(c)
            })
            .collect::<Result<_, _>>()?;
        let needed = candidates.iter().map(Vec::len).max().unwrap_or(0) + 6;
        let points: Vec<Vec<Rational>> =
            (0..needed).map(|p| random_vector(self.dim_ge(), seed, 50_000 + p as u64, INTERPOLATION_RANGE)).collect();
        let series: Vec<Vec<Vec<Rational>>> = points.par_iter().map(|y| self.generator_series(y)).collect();
        let points_mod: Vec<Vec<u64>> =
            points.iter().map(|y| y.iter().map(|v| linalg::int_mod(v.to_integer().to_i64().expect("small sample"))).collect()).collect();
        requests
            .par_iter()
            .zip(&candidates)
            .map(|(&(i, d), cands)| {
                if cands.is_empty() {
                    // Nothing of this bidegree exists; the value must vanish.
                    return if series.iter().all(|s| s[i - 1][d as usize].is_zero()) {
                        Ok(MultiPoly::zero(&self.coords))
                    } else {
                        Err(SliceError::Interpolation { index: i, degree: d })
                    };
                }
                // Solve modulo a prime, lift, then check every sample exactly:
                // full column rank mod p implies full rank over Q, so an
                // exact fit is the unique rational solution.
                let fail = || SliceError::Interpolation { index: i, degree: d };
                let a: Vec<Vec<u64>> = points_mod.iter().map(|y| cands.iter().map(|m| eval_monomial_mod(m, y)).collect()).collect();
                let b: Vec<&Rational> = series.iter().map(|s| &s[i - 1][d as usize]).collect();
                let b_mod = b.iter().map(|v| linalg::reduce_mod(v)).collect::<Option<Vec<u64>>>().ok_or_else(fail)?;
                let sol = linalg::solve_mod(&a, &b_mod)
                    .ok_or_else(fail)?
                    .into_iter()
                    .map(linalg::reconstruct_rational)
                    .collect::<Option<Vec<Rational>>>()
                    .ok_or_else(fail)?;
                let poly = MultiPoly::from_terms(&self.coords, cands.iter().cloned().zip(sol));
                if points.par_iter().zip(&b).any(|(y, v)| &poly.eval(y) != *v) {
                    return Err(fail());
                }
                Ok(poly)
            })
            .collect()
    }

    /// Symbolic initial components `ᵉq_i` given their orders.
    pub fn initial_components(&self, orders: &[u32], seed: u64) -> Result<Vec<MultiPoly>, SliceError> {
        let requests: Vec<(usize, u32)> = orders.iter().enumerate().map(|(i, &o)| (i + 1, o)).collect();
        self.symbolic_components(&requests, seed)
    }

    /// Full restriction `κ(q_i)`, assembled from its homogeneous components.
    pub fn kappa(&self, i: usize, seed: u64) -> Result<MultiPoly, SliceError> {
        let ell = self.rank();
        if i == 0 || i > ell {
            return Err(SliceError::BadIndex { index: i, rank: ell });
        }
        let requests: Vec<(usize, u32)> = (1..=self.degrees[i - 1]).map(|d| (i, d)).collect();
        let parts = self.symbolic_components(&requests, seed)?;
        Ok(parts.iter().fold(MultiPoly::zero(&self.coords), |acc, p| &acc + p))
    }

    /// `κ(q_i)` by direct symbolic expansion of the characteristic polynomial
    /// (or Pfaffian) of the generic point; an independent oracle for small
    /// slices.
    pub fn kappa_expanded(&self, i: usize) -> Result<MultiPoly, SliceError> {
        let ell = self.rank();
        if i == 0 || i > ell {
            return Err(SliceError::BadIndex { index: i, rank: ell });
        }
        if self.is_pfaffian(i) {
            let j = self.orbit.form.matrix();
            let n = j.rows();
            let jx: PolyMatrix = (0..n)
                .map(|a| (0..n).map(|b| self.generic_point[n - 1 - a][b].scale(&j[(a, n - 1 - a)])).collect())
                .collect();
            Ok(poly::pfaffian(&jx)?)
        } else {
            Ok(poly::charpoly(&self.generic_point)?.swap_remove(2 * i))
        }
    }
}

/// One generator's line in a [`SliceReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    /// 1-based generator index.
    pub index: usize,
    /// Degree `d_i` of the generator.
    pub degree: u32,
    /// Whether the generator is the Pfaffian.
    pub pfaffian: bool,
    /// Standard degree `δ_i` of the initial component.
    pub delta: u32,
    /// Slodowy degree of the initial component; equals `2d_i`.
    pub slodowy_degree: i64,
    /// Canonical serialization of `ᵉq_i` (identical mode).
    pub initial: Option<String>,
    /// Canonical serialization of `κ(q_i)` (on request, identical mode).
    pub kappa: Option<String>,
}

/// Degrees, defect and independence of the initial components on one slice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceReport {
    pub algebra: String,
    pub partition: String,
    pub dim_ge: usize,
    pub rank: usize,
    pub mode: EvalMode,
    pub seed: u64,
    pub trials: usize,
    pub generators: Vec<GeneratorRecord>,
    pub deltas: Vec<u32>,
    pub sum_delta: u32,
    /// `dim g^e + ℓ − 2Σδ_i` from the computed degrees.
    pub defect: i64,
    /// The same quantity from the partition's closed form, when available.
    pub formula_defect: Option<i64>,
    pub jacobian_rank: usize,
    pub independent: bool,
}

/// Computes every generator's initial component, checks Slodowy
/// homogeneity, the defect and the independence criterion.
pub fn slice_report(ctx: &SliceContext, opts: &ReportOptions) -> Result<SliceReport, SliceError> {
    let ell = ctx.rank();
    let base = ctx.base_family();
    let orders = ctx.initial_orders(&base, opts.trials, opts.seed)?;
    // Slodowy degrees from two independent scalings at a fresh point.
    let mut slodowy: Vec<Option<i64>> = vec![None; ell];
    for attempt in 0..opts.trials.max(2) as u64 {
        let y = ctx.random_point(opts.seed, 500 + attempt);
        for (i, d) in ctx.slodowy_degree_at(&orders, &y).into_iter().enumerate() {
            if let Some(d) = d {
                if slodowy[i].is_some_and(|prev| prev != d) {
                    slodowy[i] = None;
                    break;
                }
                slodowy[i] = Some(d);
            }
        }
    }
    for i in 0..ell {
        let expected = 2 * ctx.degrees[i] as i64;
        if slodowy[i] != Some(expected) {
            return Err(SliceError::HomogeneityViolation { index: i + 1, expected, found: slodowy[i] });
        }
    }
    let (initial, kappa) = match opts.mode {
        EvalMode::Identical => {
            let polys = ctx.initial_components(&orders, opts.seed)?;
            for (i, p) in polys.iter().enumerate() {
                let expected = 2 * ctx.degrees[i] as i64;
                let found = p.homogeneous_degree(Grading::Slodowy);
                if found != Some(expected) || p.homogeneous_degree(Grading::Standard) != Some(orders[i] as i64) {
                    return Err(SliceError::HomogeneityViolation { index: i + 1, expected, found });
                }
            }
            let kappa = if opts.include_kappa {
                (1..=ell).map(|i| ctx.kappa(i, opts.seed).map(|k| Some(k.to_canonical_string()))).collect::<Result<Vec<_>, _>>()?
            } else {
                vec![None; ell]
            };
            (polys.iter().map(|p| Some(p.to_canonical_string())).collect(), kappa)
        }
        EvalMode::Randomized => (vec![None; ell], vec![None; ell]),
    };
    let sum_delta: u32 = orders.iter().sum();
    let defect = ctx.dim_ge() as i64 + ell as i64 - 2 * sum_delta as i64;
    let formula_defect = if ctx.algebra().is_orthogonal() {
        let f = partition::defect(ctx.partition(), ctx.algebra())?.defect;
        if f != defect {
            return Err(SliceError::DefectMismatch { computed: defect, formula: f });
        }
        Some(f)
    } else {
        None
    };
    if defect < 0 {
        return Err(SliceError::CriterionViolation { defect, rank: 0, ell });
    }
    let jacobian_rank = ctx.jacobian_rank_numeric(&base, &orders, opts.trials, opts.seed);
    let independent = jacobian_rank == ell;
    if independent != (defect == 0) {
        return Err(SliceError::CriterionViolation { defect, rank: jacobian_rank, ell });
    }
    let generators = (0..ell)
        .map(|i| GeneratorRecord {
            index: i + 1,
            degree: ctx.degrees[i],
            pfaffian: ctx.is_pfaffian(i + 1),
            delta: orders[i],
            slodowy_degree: 2 * ctx.degrees[i] as i64,
            initial: initial[i].clone(),
            kappa: kappa[i].clone(),
        })
        .collect();
    Ok(SliceReport {
        algebra: ctx.algebra().to_string(),
        partition: ctx.partition().to_string(),
        dim_ge: ctx.dim_ge(),
        rank: ell,
        mode: opts.mode,
        seed: opts.seed,
        trials: opts.trials,
        generators,
        deltas: orders,
        sum_delta,
        defect,
        formula_defect,
        jacobian_rank,
        independent,
    })
}

/// Like [`slice_report`], but an identical-mode request whose symbolic
/// expansion exceeds the candidate cap is answered in randomized mode.
pub fn slice_report_or_randomized(ctx: &SliceContext, opts: &ReportOptions) -> Result<SliceReport, SliceError> {
    match slice_report(ctx, opts) {
        Err(SliceError::TooLarge { .. }) if opts.mode == EvalMode::Identical && !opts.include_kappa => {
            slice_report(ctx, &ReportOptions { mode: EvalMode::Randomized, ..*opts })
        }
        r => r,
    }
}

/// Maximum over `trials` seeded points of the rank of the Jacobian of
/// `polys`, evaluated exactly.
pub fn jacobian_rank(polys: &[MultiPoly], trials: usize, seed: u64) -> usize {
    let Some(first) = polys.first() else {
        return 0;
    };
    let vars = first.vars().clone();
    let grads: Vec<Vec<MultiPoly>> = polys.iter().map(|p| (0..vars.len()).map(|k| p.derivative(k)).collect()).collect();
    let mut best = 0;
    for trial in 0..trials.max(1) {
        let y = random_vector(vars.len(), seed, trial as u64, POINT_RANGE);
        let jac = RationalMatrix::from_fn(polys.len(), vars.len(), |i, k| grads[i][k].eval(&y));
        best = best.max(jac.rank_at());
        if best == polys.len().min(vars.len()) {
            break;
        }
    }
    best
}

/// Tests a relation among `ᵉq_1, …, ᵉq_ℓ`, written over the symbols
/// `q1, …, qℓ` (for example `q4^2 - 4*q3*q5^2`).
///
/// In type D the symbol `qℓ` stands for a square root of `Q_{2ℓ}`, so it
/// may only occur to even powers; `qℓ^{2m}` is read as `Q_{2ℓ}^m`.
pub fn verify_relation(ctx: &SliceContext, expr: &str, mode: EvalMode, seed: u64) -> Result<bool, SliceError> {
    let rel = normalize_pfaffian(ctx, &parse_relation(ctx, expr)?)?;
    let orders = ctx.initial_orders(&ctx.base_family(), DEFAULT_TRIALS, seed)?;
    match mode {
        EvalMode::Identical => {
            let polys = ctx.initial_components(&orders, seed)?;
            Ok(rel.compose(&polys)?.is_zero())
        }
        EvalMode::Randomized => {
            let results: Vec<bool> = (0..RELATION_POINTS as u64)
                .into_par_iter()
                .map(|p| {
                    let y = ctx.random_point(seed, 10_000 + p);
                    rel.eval(&ctx.initial_generator_values(&orders, &y)).is_zero()
                })
                .collect();
            Ok(results.into_iter().all(|b| b))
        }
    }
}

/// Rewrites `qℓ^{2m}` as `((−1)^ℓ Pf²)^m`, the value of `Q_{2ℓ}^m` for the
/// anti-diagonal form.
fn normalize_pfaffian(ctx: &SliceContext, rel: &MultiPoly) -> Result<MultiPoly, SliceError> {
    let ell = ctx.rank();
    if !ctx.is_pfaffian(ell) {
        return Ok(rel.clone());
    }
    let mut terms = Vec::new();
    for (m, c) in rel.terms() {
        let e = m.exps()[ell - 1];
        if e % 2 == 1 {
            return Err(SliceError::OddPfaffianPower);
        }
        let flip = ell % 2 == 1 && (e / 2) % 2 == 1;
        terms.push((m.clone(), if flip { -c.clone() } else { c.clone() }));
    }
    Ok(MultiPoly::from_terms(ctx.generator_vars(), terms))
}

fn parse_relation(ctx: &SliceContext, expr: &str) -> Result<MultiPoly, SliceError> {
    MultiPoly::parse(expr, ctx.generator_vars()).map_err(|e| match e {
        PolyError::UnknownSymbol(s) => SliceError::UnknownSymbol(s),
        other => SliceError::Poly(other),
    })
}

/// Blocks `(μ_s, k_s)` of the even prefix of a condition-(*) partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixBlocks {
    pub k_prime: usize,
    /// `(μ_s, k_s)` with `μ_1 > μ_2 > ⋯` and `Σk_s = k'`.
    pub blocks: Vec<(usize, usize)>,
}

impl PrefixBlocks {
    pub fn of(lambda: &Partition) -> Result<Self, SliceError> {
        let k_prime = lambda.satisfies_star().ok_or_else(|| SliceError::StarViolated(lambda.to_string()))?;
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        for &p in &lambda.parts()[..k_prime] {
            match blocks.last_mut() {
                Some((mu, k)) if *mu == p => *k += 1,
                _ => blocks.push((p, 1)),
            }
        }
        Ok(Self { k_prime, blocks })
    }

    /// Number of `z` variables, one per pair of equal parts.
    pub fn pairs(&self) -> usize {
        self.k_prime / 2
    }

    /// 0-based pair indices `I_s` of block `s` (1-based).
    pub fn index_set(&self, s: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..s - 1].iter().map(|b| b.1 / 2).sum();
        start..start + self.blocks[s - 1].1 / 2
    }

    /// Maps a global index `j ≤ k'` to `(s, j − K_{s−1})`.
    pub fn locate(&self, j: usize) -> Option<(usize, usize)> {
        let mut before = 0;
        for (s, &(_, k)) in self.blocks.iter().enumerate() {
            if j <= before + k {
                return Some((s + 1, j - before));
            }
            before += k;
        }
        None
    }
}

/// Variables `z1, …, z_{k'/2}`; `z_i` is dual to the lowest-weight vector
/// `w_i` of the `i`-th pair, so it carries `ad h` weight `2(μ − 1)`.
pub fn z_vars(pb: &PrefixBlocks) -> Arc<VarTable> {
    let weights = pb
        .blocks
        .iter()
        .flat_map(|&(mu, k)| std::iter::repeat_n(2 * (mu as i64 - 1), k / 2))
        .collect();
    VarTable::new((1..=pb.pairs()).map(|i| format!("z{i}")).collect(), weights)
}

/// Elementary symmetric polynomial `σ_{I,j}` in the `z` variables indexed
/// by `I`; `σ_{I,0} = 1` and `σ_{I,j} = 0` for `j > |I|`.
pub fn elementary_symmetric(vars: &Arc<VarTable>, indices: std::ops::Range<usize>, j: usize) -> MultiPoly {
    let idx: Vec<usize> = indices.collect();
    if j > idx.len() {
        return MultiPoly::zero(vars);
    }
    let mut out = MultiPoly::zero(vars);
    for subset in subsets(idx.len(), j) {
        let mut exps = vec![0u32; vars.len()];
        for s in subset {
            exps[idx[s]] = 1;
        }
        out = &out + &MultiPoly::from_terms(vars, [(Monomial::new(exps), Rational::one())]);
    }
    out
}

/// Closed form of the restriction `p̄_{K_{s−1}+j}` to the line spanned by the
/// lowest-weight vectors of the paired blocks.
pub fn pca3_predicted(lambda: &Partition, s: usize, j: usize) -> Result<MultiPoly, SliceError> {
    let pb = PrefixBlocks::of(lambda)?;
    if s == 0 || s > pb.blocks.len() || j == 0 || j > pb.blocks[s - 1].1 {
        return Err(SliceError::HypothesisViolated(format!("block {s}, index {j} out of range")));
    }
    let z = z_vars(&pb);
    let mut prefix = MultiPoly::one(&z);
    for t in 1..s {
        let top = elementary_symmetric(&z, pb.index_set(t), pb.blocks[t - 1].1 / 2);
        prefix = &prefix * &top.pow(2);
    }
    let sigma = |r: usize| elementary_symmetric(&z, pb.index_set(s), r);
    let mut sum = MultiPoly::zero(&z);
    for r in 0..=j {
        sum = &sum + &(&sigma(j - r) * &sigma(r));
    }
    let sign = if j.is_multiple_of(2) { rat(1) } else { rat(-1) };
    Ok((&prefix * &sum).scale(&sign))
}

/// Lowest-weight elements `w_i ∈ g^f` of each paired prefix block, scaled so
/// that `e + w_i` has determinant one on the block's span.
fn pair_elements(orbit: &OrbitData, pb: &PrefixBlocks) -> Result<Vec<RationalMatrix>, SliceError> {
    let n = orbit.form.dim();
    let f = &orbit.triple.f;
    let mut out = Vec::new();
    for i in 0..pb.pairs() {
        let block = &orbit.layout[2 * i];
        let mu = block.size;
        let (Some(first), Some(last)) = (block.chain[0], block.chain[mu - 1]) else {
            return Err(SliceError::HypothesisViolated("paired block without a chain basis".into()));
        };
        let w = orbit.form.basis_element((first, last));
        debug_assert!(f.bracket(&w).is_zero(), "w_i must centralize f");
        // On the pair's span, det(T − e − c·w) = (T^μ − c)²; read off c.
        let cp = (&orbit.triple.e + &w).charpoly().expect("square");
        let c = -&cp[mu] / rat(2);
        if cp[2 * mu] != &c * &c || c.is_zero() || n < 2 * mu {
            return Err(SliceError::HypothesisViolated("unexpected pair characteristic polynomial".into()));
        }
        out.push(w.scale(&c.recip()));
    }
    Ok(out)
}

/// `e + Σ z_i w_i` as a polynomial matrix over the `z` variables.
fn line_point(orbit: &OrbitData, pb: &PrefixBlocks) -> Result<PolyMatrix, SliceError> {
    let ws = pair_elements(orbit, pb)?;
    let z = z_vars(pb);
    let n = orbit.form.dim();
    Ok((0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut p = MultiPoly::constant(&z, orbit.triple.e[(a, b)].clone());
                    for (i, w) in ws.iter().enumerate() {
                        if !w[(a, b)].is_zero() {
                            p = &p + &MultiPoly::var(&z, i).scale(&w[(a, b)]);
                        }
                    }
                    p
                })
                .collect()
        })
        .collect())
}

/// The restriction `p̄_j` of `ᵉq_{ν_j}` to the span of the `w_i`: the part
/// of standard degree `j` of the coefficient of `T^{N−2ν_j}` in
/// `det(T − e − Σ z_i w_i)`, computed by symbolic expansion.
pub fn pca3_observed(lambda: &Partition, alg: AlgebraType, j: usize) -> Result<MultiPoly, SliceError> {
    let pb = PrefixBlocks::of(lambda)?;
    if j == 0 || j > pb.k_prime {
        return Err(SliceError::HypothesisViolated(format!("index {j} out of range 1..={}", pb.k_prime)));
    }
    let orbit = OrbitData::new(lambda, alg)?;
    let m = line_point(&orbit, &pb)?;
    let nu = lambda.nu_sequence(pb.k_prime);
    Ok(poly::charpoly(&m)?.swap_remove(2 * nu[j - 1]).homogeneous_part(Grading::Standard, j as i64))
}

/// Initial component of the restriction of the Pfaffian generator to the
/// same span (type D only).
pub fn pca3_observed_pfaffian(lambda: &Partition, alg: AlgebraType) -> Result<MultiPoly, SliceError> {
    if alg.kind != AlgebraKind::D {
        return Err(SliceError::HypothesisViolated("the Pfaffian generator exists only in type D".into()));
    }
    let pb = PrefixBlocks::of(lambda)?;
    let orbit = OrbitData::new(lambda, alg)?;
    let m = line_point(&orbit, &pb)?;
    let n = m.len();
    let j = orbit.form.matrix();
    let jm: PolyMatrix = (0..n).map(|a| (0..n).map(|b| m[n - 1 - a][b].scale(&j[(a, n - 1 - a)])).collect()).collect();
    Ok(poly::pfaffian(&jm)?.initial_component(Grading::Standard)?)
}

/// Which hypothesis a modified-generator certificate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tca3Case {
    /// Condition (*) with an even prefix of equal parts.
    EqualPrefix,
    /// Four even parts `(a, a, b, b)` with `a > b`.
    FourEven,
}

/// One modified generator `r = q_g − R(q_{ν_1}, …)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModifiedGenerator {
    /// 1-based generator index `g = ν_j`.
    pub generator: usize,
    /// Position `j` in the `ν` sequence.
    pub j: usize,
    /// `r` over the symbols `q1, …, qℓ`.
    pub expression: String,
    pub delta_before: u32,
    pub delta_after: u32,
    pub bound: u32,
    /// `r` vanishes identically on the line `e + Σ z_i w_i`.
    pub vanishes_on_line: bool,
}

/// Certificate that modified generators close the defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tca3Certificate {
    pub algebra: String,
    pub partition: String,
    pub case: Tca3Case,
    pub k_prime: usize,
    pub nu: Vec<usize>,
    /// Sign `c` with `q̃ = c·σ_top` for the Pfaffian on the line, if used.
    pub pfaffian_sign: Option<i64>,
    pub modified: Vec<ModifiedGenerator>,
    pub original_defect: i64,
    pub modified_defect: i64,
    pub jacobian_rank: usize,
    pub seed: u64,
    pub passed: bool,
}

/// Builds the modified generators, checks their degree bounds and the
/// independence of the modified initial components.
pub fn tca3_certificate(lambda: &Partition, alg: AlgebraType, trials: usize, seed: u64) -> Result<Tca3Certificate, SliceError> {
    let parts = lambda.parts();
    let star = lambda.satisfies_star();
    let case = match star {
        Some(kp) if parts[..kp].iter().all(|&p| p == parts[0]) => Tca3Case::EqualPrefix,
        _ if parts.len() == 4 && parts.iter().all(|p| p % 2 == 0) => Tca3Case::FourEven,
        _ => {
            return Err(SliceError::HypothesisViolated(format!(
                "{lambda} has neither an equal even prefix with a very good tail nor four even parts"
            )))
        }
    };
    let pb = PrefixBlocks::of(lambda)?;
    let ctx = SliceContext::new(lambda, alg)?;
    let q = ctx.generator_vars().clone();
    let ell = ctx.rank();
    let nu = lambda.nu_sequence(pb.k_prime);
    let half = pb.pairs();
    // Restrictions to the line, used to fix the Pfaffian sign and to check
    // that every modified generator vanishes there.
    let line: Vec<MultiPoly> = (1..=pb.k_prime).map(|j| pca3_observed(lambda, alg, j)).collect::<Result<_, _>>()?;
    let z = z_vars(&pb);
    let pf_line = if alg.kind == AlgebraKind::D && nu.contains(&ell) { Some(pca3_observed_pfaffian(lambda, alg)?) } else { None };
    let line_of = |g: usize| -> MultiPoly {
        if ctx.is_pfaffian(g) {
            pf_line.clone().expect("Pfaffian restriction computed")
        } else {
            let j = nu.iter().position(|&v| v == g).expect("generator on the ν sequence");
            line[j].clone()
        }
    };
    let top = elementary_symmetric(&z, 0..half, half);
    let pfaffian_sign = match &pf_line {
        Some(p) if *p == top => Some(1),
        Some(p) if *p == -&top => Some(-1),
        Some(_) => return Err(SliceError::HypothesisViolated("Pfaffian is not ±σ_top on the line".into())),
        None => None,
    };
    let qv = |g: usize| MultiPoly::var(&q, g - 1);
    let mut targets: Vec<(usize, usize, MultiPoly, u32)> = Vec::new();
    match case {
        Tca3Case::EqualPrefix => {
            // σ_j in terms of ρ_j = q_{ν_j}, from ρ_j = (−1)^j Σ_r σ_{j−r}σ_r.
            let mut sigma: Vec<MultiPoly> = vec![MultiPoly::one(&q)];
            for j in 1..=half {
                let mut acc = qv(nu[j - 1]).scale(&rat(if j % 2 == 0 { 1 } else { -1 }));
                for r in 1..j {
                    acc = &acc - &(&sigma[j - r] * &sigma[r]);
                }
                sigma.push(acc.scale(&ratio(1, 2)));
            }
            let sig = |r: usize| if r <= half { sigma[r].clone() } else { MultiPoly::zero(&q) };
            for j in half + 1..=pb.k_prime {
                let g = nu[j - 1];
                let (r, bound) = if ctx.is_pfaffian(g) {
                    let c = rat(pfaffian_sign.expect("sign fixed above"));
                    (&qv(g) - &sig(half).scale(&c), half as u32 + 1)
                } else {
                    let mut sum = MultiPoly::zero(&q);
                    for r in 0..=j {
                        sum = &sum + &(&sig(j - r) * &sig(r));
                    }
                    let sign = rat(if j % 2 == 0 { 1 } else { -1 });
                    (&qv(g) - &sum.scale(&sign), j as u32 + 1)
                };
                targets.push((g, j, r, bound));
            }
        }
        Tca3Case::FourEven => {
            let c = rat(pfaffian_sign.ok_or_else(|| SliceError::HypothesisViolated("four even parts need type D".into()))?);
            let r2 = &qv(nu[1]) - &qv(nu[0]).pow(2).scale(&ratio(1, 4));
            let r3 = &qv(nu[2]) - &(&qv(nu[0]) * &qv(nu[3])).scale(&c);
            targets.push((nu[1], 2, r2, 3));
            targets.push((nu[2], 3, r3, 4));
        }
    }
    // Each modified generator must vanish on the line.
    let line_images: Vec<MultiPoly> = (1..=ell)
        .map(|g| if nu.contains(&g) || ctx.is_pfaffian(g) && pf_line.is_some() { line_of(g) } else { MultiPoly::zero(&z) })
        .collect();
    let base = ctx.base_family();
    let before = ctx.initial_orders(&base, trials, seed)?;
    let mut family = base.clone();
    for (g, _, r, _) in &targets {
        family[g - 1] = r.clone();
    }
    let after = ctx.initial_orders(&family, trials, seed)?;
    let mut modified = Vec::new();
    for (g, j, r, bound) in &targets {
        let vanishes_on_line = r.compose(&line_images)?.is_zero();
        modified.push(ModifiedGenerator {
            generator: *g,
            j: *j,
            expression: r.to_canonical_string(),
            delta_before: before[g - 1],
            delta_after: after[g - 1],
            bound: *bound,
            vanishes_on_line,
        });
    }
    let dim = ctx.dim_ge() as i64;
    let original_defect = dim + ell as i64 - 2 * before.iter().sum::<u32>() as i64;
    let modified_defect = dim + ell as i64 - 2 * after.iter().sum::<u32>() as i64;
    let jacobian_rank = ctx.jacobian_rank_numeric(&family, &after, trials, seed);
    let passed = modified.iter().all(|m| m.vanishes_on_line && m.delta_after >= m.bound)
        && modified_defect <= 0
        && jacobian_rank == ell;
    Ok(Tca3Certificate {
        algebra: alg.to_string(),
        partition: lambda.to_string(),
        case,
        k_prime: pb.k_prime,
        nu,
        pfaffian_sign,
        modified,
        original_defect,
        modified_defect,
        jacobian_rank,
        seed,
        passed,
    })
}

fn trace_product(a: &RationalMatrix, b: &RationalMatrix) -> Rational {
    let n = a.rows();
    let mut s = Rational::zero();
    for i in 0..n {
        for k in 0..n {
            if !a[(i, k)].is_zero() && !b[(k, i)].is_zero() {
                s += &a[(i, k)] * &b[(k, i)];
            }
        }
    }
    s
}

fn random_vector(len: usize, seed: u64, stream: u64, range: i64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..len).map(|_| rat(rng.gen_range(-range..=range))).collect()
}

/// Index of the first nonzero coefficient.
fn order(series: &[Rational]) -> Option<u32> {
    series.iter().position(|c| !c.is_zero()).map(|p| p as u32)
}

/// `d` with `r = base^d`, if any.
fn exact_log(r: &Rational, base: i64) -> Option<i64> {
    if !r.is_integer() || !r.is_positive() {
        return None;
    }
    let mut v = r.to_integer();
    let b = num_bigint::BigInt::from(base);
    let mut d = 0;
    while v > num_bigint::BigInt::one() {
        if (&v % &b) != num_bigint::BigInt::zero() {
            return None;
        }
        v /= &b;
        d += 1;
    }
    Some(d)
}

fn eval_monomial_mod(m: &Monomial, y: &[u64]) -> u64 {
    let mut v = 1u64;
    for (&x, &e) in y.iter().zip(m.exps()) {
        for _ in 0..e {
            v = linalg::mul_mod(v, x);
        }
    }
    v
}

/// Evaluates a polynomial in the generator symbols on univariate series.
fn eval_on_series(p: &MultiPoly, series: &[Vec<Rational>]) -> Vec<Rational> {
    let len = series.first().map_or(1, Vec::len);
    let mut out = vec![Rational::zero(); len];
    for (m, c) in p.terms() {
        let mut term = vec![Rational::zero(); len];
        term[0] = c.clone();
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                term = mul_truncated(&term, &series[i]);
            }
        }
        for (o, t) in out.iter_mut().zip(term) {
            *o += t;
        }
    }
    out
}

/// Product of two series, truncated to the common length.
fn mul_truncated(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len();
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Monomials of standard degree `d` and Slodowy degree `s`.
pub fn monomials_with_degrees(vars: &VarTable, d: u32, s: i64) -> Vec<Monomial> {
    let w: Vec<i64> = (0..vars.len()).map(|i| vars.slodowy_weight(i)).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; w.len()];
    fn rec(w: &[i64], k: usize, d: u32, s: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if d == 0 {
            if s == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        if k == w.len() {
            return;
        }
        let rest = &w[k..];
        let (lo, hi) = (rest.iter().min().copied().unwrap_or(0), rest.iter().max().copied().unwrap_or(0));
        if s < lo * d as i64 || s > hi * d as i64 {
            return;
        }
        for e in (0..=d).rev() {
            let used = w[k] * e as i64;
            if used > s {
                continue;
            }
            exps[k] = e;
            rec(w, k + 1, d - e, s - used, exps, out);
        }
        exps[k] = 0;
    }
    rec(&w, 0, d, s, &mut exps, &mut out);
    out
}

/// All `j`-element subsets of `0..n`, as sorted index lists.
fn subsets(n: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, j, &mut Vec::new(), &mut out);
    out
}

/// Converts a nonnegative rational weight to `usize`.
#[allow(dead_code)]
fn to_usize(r: &Rational) -> Option<usize> {
    r.is_integer().then(|| r.to_integer().to_usize()).flatten()
}
