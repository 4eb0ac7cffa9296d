//! Embedded data for nilpotent orbits of the exceptional algebras `E6`, `F4`
//! and `G2`, with consistency checks on the degree columns.
//!
//! Each row lists an orbit, the degrees of the initial components of a fixed
//! set of generators, their `ad h` weights and the two sums compared by the
//! independence criterion: `Σ = Σ deg ᵉp_i` and `Σ' = (dim g^e + ℓ)/2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A failed fixture check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("{algebra} row {row} ({label}): {what}")]
    Mismatch { algebra: &'static str, row: usize, label: &'static str, what: String },
}

/// One orbit of an exceptional algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalFixture {
    pub row: usize,
    pub label: &'static str,
    /// Weighted Dynkin diagram, kept as an opaque string.
    pub weighted_dynkin: &'static str,
    pub dim_ge: usize,
    /// Jordan type in the smallest faithful representation, as `(part, multiplicity)`.
    pub partition: &'static [(usize, usize)],
    pub degrees: &'static [u32],
    pub weights: &'static [i64],
    /// Largest eigenvalue of `ad h` on `g`.
    pub nu: u32,
    pub sigma: u32,
    pub sigma_prime: u32,
}

impl ExceptionalFixture {
    /// Partition in the `(7^3,1^6)` notation.
    pub fn partition_string(&self) -> String {
        let parts: Vec<String> =
            self.partition.iter().map(|&(p, m)| if m == 1 { p.to_string() } else { format!("{p}^{m}") }).collect();
        format!("({})", parts.join(","))
    }

    pub fn partition_total(&self) -> usize {
        self.partition.iter().map(|&(p, m)| p * m).sum()
    }
}

/// An exceptional algebra with its generator degrees and orbit table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalTable {
    pub algebra: &'static str,
    pub rank: usize,
    pub dim: usize,
    /// Dimension of the representation the partitions refer to.
    pub rep_dim: usize,
    /// Degrees of the generators `p_{d_1}, …, p_{d_ℓ}`.
    pub generator_degrees: &'static [u32],
    pub rows: &'static [ExceptionalFixture],
}

macro_rules! row {
    ($row:expr, $label:expr, $wd:expr, $dim:expr, [$(($p:expr, $m:expr)),*], [$($d:expr),*], [$($w:expr),*], $nu:expr, $s:expr, $sp:expr) => {
        ExceptionalFixture {
            row: $row,
            label: $label,
            weighted_dynkin: $wd,
            dim_ge: $dim,
            partition: &[$(($p, $m)),*],
            degrees: &[$($d),*],
            weights: &[$($w),*],
            nu: $nu,
            sigma: $s,
            sigma_prime: $sp,
        }
    };
}

pub const E6: ExceptionalTable = ExceptionalTable {
    algebra: "E6",
    rank: 6,
    dim: 78,
    rep_dim: 27,
    generator_degrees: &[2, 5, 6, 8, 9, 12],
    rows: &[
        row!(1, "E6", "22222/2", 6, [(17, 1), (9, 1), (1, 1)], [1, 1, 1, 1, 1, 1], [2, 8, 10, 14, 16, 22], 16, 6, 6),
        row!(2, "E6(a1)", "22022/2", 8, [(13, 1), (9, 1), (5, 1)], [1, 1, 1, 1, 1, 1], [2, 8, 10, 14, 16, 22], 16, 6, 7),
        row!(3, "D5", "20202/2", 10, [(11, 1), (9, 1), (5, 1), (1, 2)], [1, 1, 1, 1, 1, 1], [2, 8, 10, 14, 16, 22], 14, 6, 8),
        row!(4, "A5+A1", "20202/0", 12, [(9, 1), (7, 1), (5, 2), (1, 1)], [1, 1, 1, 1, 1, 2], [2, 8, 10, 14, 16, 20], 10, 7, 9),
        row!(5, "D5(a1)", "11011/2", 14, [(8, 1), (7, 1), (6, 1), (3, 1), (2, 1), (1, 1)], [1, 1, 1, 1, 2, 2], [2, 8, 10, 14, 14, 20], 10, 8, 10),
        row!(6, "A5", "21012/1", 14, [(9, 1), (6, 2), (5, 1), (1, 1)], [1, 1, 1, 1, 1, 2], [2, 8, 10, 14, 16, 20], 10, 7, 10),
        row!(7, "A4+A1", "11011/1", 16, [(7, 1), (6, 1), (5, 1), (4, 1), (3, 1), (2, 1)], [1, 1, 1, 2, 2, 2], [2, 8, 10, 12, 14, 20], 8, 9, 11),
        row!(8, "D4", "00200/2", 18, [(7, 3), (1, 6)], [1, 1, 1, 2, 2, 2], [2, 8, 10, 12, 14, 20], 10, 9, 12),
        row!(9, "A3+2A1", "00200/0", 20, [(5, 3), (3, 3), (1, 3)], [1, 1, 2, 2, 2, 3], [2, 8, 8, 12, 14, 18], 6, 11, 13),
        row!(10, "A1+2A2", "10101/0", 24, [(5, 1), (4, 2), (3, 3), (2, 2), (1, 1)], [1, 1, 2, 2, 2, 3], [2, 8, 8, 12, 14, 18], 5, 11, 15),
    ],
};

pub const F4: ExceptionalTable = ExceptionalTable {
    algebra: "F4",
    rank: 4,
    dim: 52,
    rep_dim: 26,
    generator_degrees: &[2, 6, 8, 12],
    rows: &[
        row!(1, "F4", "2222", 4, [(17, 1), (9, 1)], [1, 1, 1, 1], [2, 10, 14, 22], 22, 4, 4),
        row!(2, "B4", "2202", 6, [(11, 1), (9, 1), (5, 1), (1, 1)], [1, 1, 1, 1], [2, 10, 14, 22], 14, 4, 5),
        row!(3, "C3+A1", "0202", 8, [(9, 1), (7, 1), (5, 2)], [1, 1, 1, 2], [2, 10, 14, 20], 10, 5, 6),
        row!(4, "C3", "1012", 10, [(9, 1), (6, 2), (5, 1)], [1, 1, 1, 2], [2, 10, 14, 20], 10, 5, 7),
        row!(5, "B3", "2200", 10, [(7, 3), (1, 5)], [1, 1, 2, 2], [2, 10, 12, 20], 10, 6, 7),
        row!(6, "Ã2+A2", "0200", 12, [(5, 3), (3, 3), (1, 2)], [1, 2, 2, 3], [2, 8, 12, 18], 6, 8, 8),
        row!(7, "B2+A1", "1010", 14, [(5, 2), (4, 2), (3, 1), (2, 2), (1, 1)], [1, 2, 2, 3], [2, 8, 12, 18], 6, 8, 9),
        row!(8, "Ã2+A1", "0101", 16, [(5, 1), (4, 2), (3, 3), (2, 2)], [1, 2, 2, 3], [2, 8, 12, 18], 5, 8, 10),
    ],
};

pub const G2: ExceptionalTable = ExceptionalTable {
    algebra: "G2",
    rank: 2,
    dim: 14,
    rep_dim: 7,
    generator_degrees: &[2, 6],
    rows: &[
        row!(1, "G2", "22", 2, [(7, 1)], [1, 1], [2, 10], 10, 2, 2),
        row!(2, "A1+Ã1", "02", 4, [(3, 2), (1, 1)], [1, 2], [2, 8], 4, 3, 3),
        row!(3, "Ã1", "10", 6, [(3, 1), (2, 2)], [1, 3], [2, 6], 3, 4, 4),
        row!(4, "A1", "01", 8, [(2, 2), (1, 3)], [1, 4], [2, 4], 2, 5, 5),
    ],
};

/// All three tables.
pub const TABLES: [ExceptionalTable; 3] = [E6, F4, G2];

/// Outcome of checking one row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub algebra: String,
    pub row: usize,
    pub label: String,
    pub sigma_computed: u32,
    pub sigma_prime_computed: u32,
    /// `Σ = Σ'`, in which case the initial components are independent.
    pub conclusive: bool,
    pub errors: Vec<String>,
}

/// Recomputes `Σ`, `Σ'` and the weight column of every row of a table.
///
/// The weight of `ᵉp_i` is its Slodowy degree `2d_i` minus twice its
/// standard degree, so the weight column is determined by the degrees.
pub fn check_table(t: &ExceptionalTable) -> Vec<RowCheck> {
    t.rows
        .iter()
        .map(|r| {
            let mut errors = Vec::new();
            let sigma: u32 = r.degrees.iter().sum();
            let twice = r.dim_ge + t.rank;
            let sigma_prime = (twice / 2) as u32;
            if sigma != r.sigma {
                errors.push(format!("Σ = {sigma}, stored {}", r.sigma));
            }
            if !twice.is_multiple_of(2) || sigma_prime != r.sigma_prime {
                errors.push(format!("Σ' = {twice}/2, stored {}", r.sigma_prime));
            }
            if r.partition_total() != t.rep_dim {
                errors.push(format!("partition sums to {}, expected {}", r.partition_total(), t.rep_dim));
            }
            if r.degrees.len() != t.rank || r.weights.len() != t.rank {
                errors.push("degree or weight column has the wrong length".into());
            } else {
                for ((&d, &deg), &w) in t.generator_degrees.iter().zip(r.degrees).zip(r.weights) {
                    if w != 2 * (d as i64 - deg as i64) {
                        errors.push(format!("weight {w} for generator of degree {d} with initial degree {deg}"));
                    }
                }
            }
            if sigma > sigma_prime {
                errors.push(format!("Σ = {sigma} exceeds Σ' = {sigma_prime}"));
            }
            if r.dim_ge < t.rank || r.dim_ge > t.dim {
                errors.push(format!("dim g^e = {} out of range", r.dim_ge));
            }
            RowCheck {
                algebra: t.algebra.into(),
                row: r.row,
                label: r.label.into(),
                sigma_computed: sigma,
                sigma_prime_computed: sigma_prime,
                conclusive: sigma == sigma_prime,
                errors,
            }
        })
        .collect()
}

/// Checks every table; for `G2` additionally requires `Σ = Σ'` on each row.
pub fn check_all() -> Result<Vec<RowCheck>, FixtureError> {
    let mut out = Vec::new();
    for t in &TABLES {
        for (c, r) in check_table(t).into_iter().zip(t.rows) {
            if let Some(what) = c.errors.first() {
                return Err(FixtureError::Mismatch { algebra: t.algebra, row: r.row, label: r.label, what: what.clone() });
            }
            if t.algebra == "G2" && !c.conclusive {
                return Err(FixtureError::Mismatch {
                    algebra: t.algebra,
                    row: r.row,
                    label: r.label,
                    what: "Σ ≠ Σ' on a G2 row".into(),
                });
            }
            out.push(c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_consistent() {
        let rows = check_all().unwrap();
        assert_eq!(rows.len(), 22);
    }

    #[test]
    fn named_rows() {
        let e6 = check_table(&E6);
        assert_eq!((e6[1].sigma_computed, e6[1].sigma_prime_computed), (6, 7));
        let f4 = check_table(&F4);
        assert_eq!((f4[5].sigma_computed, f4[5].sigma_prime_computed), (8, 8));
        let g2 = check_table(&G2);
        assert_eq!((g2[3].sigma_computed, g2[3].sigma_prime_computed), (5, 5));
    }

    #[test]
    fn corrupted_row_is_caught() {
        let mut rows = E6.rows.to_vec();
        rows[0].sigma = 7;
        let t = ExceptionalTable { rows: Box::leak(rows.into_boxed_slice()), ..E6 };
        assert!(!check_table(&t)[0].errors.is_empty());
    }

    #[test]
    fn partition_notation() {
        assert_eq!(E6.rows[7].partition_string(), "(7^3,1^6)");
    }
}
