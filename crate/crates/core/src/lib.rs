//! Exact computations with nilpotent orbits of `so(N)` and `sp(N)`.
//!
//! The crate classifies nilpotent orbits by combinatorial goodness criteria,
//! realizes them as explicit rational matrices inside a fixed form, restricts
//! the characteristic-polynomial invariants to the Slodowy slice `e + g^f`
//! and studies their initial homogeneous components: degrees, Slodowy
//! homogeneity, algebraic independence and explicit relations.
//!
//! Everything is exact: scalars are arbitrary-precision rationals and no
//! floating point is used anywhere.
//!
//! Module map:
//! - [`linalg`]: rationals, dense matrices, kernels, ranks, solves.
//! - [`partition`]: partition combinatorics and the goodness classifier.
//! - [`orbit`]: forms, nilpotent representatives, sl2-triples, centralizers.
//! - [`poly`]: sparse multivariate polynomials with a dual grading.
//! - [`slice`]: restriction to the slice, degrees, ranks, relations and the
//!   symmetric-function certificates for even-prefix partitions.
//! - [`fixtures`]: embedded data for the exceptional algebras.

// Matrix algorithms read more clearly with explicit row and column indices.
#![allow(clippy::needless_range_loop)]

pub mod fixtures;
pub mod linalg;
pub mod orbit;
pub mod partition;
pub mod poly;
pub mod slice;

pub use linalg::{LinalgError, Rational, RationalMatrix, RationalVector};
pub use orbit::{FormKind, FormRealization, GradedSubspace, OrbitError, Sl2Triple};
pub use partition::{AlgebraKind, AlgebraType, DefectReport, Partition, PartitionError, Verdict, VerdictTag};
pub use poly::{DetStrategy, Grading, Monomial, MultiPoly, PolyError, VarTable};
pub use slice::{SliceContext, SliceError, SliceReport};

/// Version string folded into cache keys so that engine changes invalidate
/// stored results.
pub const ENGINE_VERSION: &str = concat!("slodowy-", env!("CARGO_PKG_VERSION"), "-e1");
