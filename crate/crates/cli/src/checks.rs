//! Named end-to-end checks bundling the published computations.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use slodowy::linalg::rat;
use slodowy::slice::{
    elementary_symmetric, pca3_observed, pca3_predicted, slice_report, tca3_certificate, verify_relation, z_vars, EvalMode,
    PrefixBlocks, ReportOptions, SliceContext, SliceError, DEFAULT_TRIALS,
};
use slodowy::{AlgebraType, Partition};

/// Relation among the initial components on the `so(10)` slice of `(3,3,2,2)`.
pub const SO10_RELATION: &str = "q4^2 - 4*q3*q5^2";

/// Relations among the initial components on the `so(14)` slice of `(3,3,2,2,2,2)`.
pub const SO14_RELATIONS: [&str; 2] = ["16*q3^2*q5^2 + q4^4 - 8*q3*q5*q4^2 - 64*q3^3*q7^2", "q3*q6^2 - q7^2*q4^2"];

/// Known relations for an orbit, written over `q1, …, qℓ`.
pub fn known_relations(alg: AlgebraType, lambda: &Partition) -> &'static [&'static str] {
    match (alg.dim_v(), lambda.parts()) {
        (10, [3, 3, 2, 2]) => std::slice::from_ref(&SO10_RELATION),
        (14, [3, 3, 2, 2, 2, 2]) => &SO14_RELATIONS,
        _ => &[],
    }
}

/// The bundled example checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Example {
    /// so(10), (3,3,2,2): degrees and the quadratic relation, exactly.
    #[value(name = "e7_4")]
    #[serde(rename = "e7_4")]
    E7_4,
    /// so(14), (3,3,2,2,2,2): degrees and two relations at random points.
    #[value(name = "e7_8")]
    #[serde(rename = "e7_8")]
    E7_8,
    /// Closed forms of the restricted invariants on the paired-block line.
    #[value(name = "e5_21")]
    #[serde(rename = "e5_21")]
    E5_21,
    /// Modified-generator certificates in so(12) and so(5).
    #[value(name = "tca3_so12")]
    #[serde(rename = "tca3_so12")]
    Tca3So12,
}

impl Example {
    pub fn name(&self) -> &'static str {
        match self {
            Self::E7_4 => "e7_4",
            Self::E7_8 => "e7_8",
            Self::E5_21 => "e5_21",
            Self::Tca3So12 => "tca3_so12",
        }
    }
}

/// One named assertion with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn equal<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, found: T, expected: T) -> Self {
        let passed = found == expected;
        let detail = if passed { format!("{found:?}") } else { format!("found {found:?}, expected {expected:?}") };
        Self::new(name, passed, detail)
    }
}

/// Runs every assertion of an example.
pub fn run_example(example: Example, seed: u64) -> Result<Vec<Assertion>, SliceError> {
    match example {
        Example::E7_4 => relations_example(10, &[3, 3, 2, 2], &[1, 2, 2, 3, 2], 17, EvalMode::Identical, seed),
        Example::E7_8 => relations_example(14, &[3, 3, 2, 2, 2, 2], &[1, 2, 2, 3, 4, 5, 3], 37, EvalMode::Randomized, seed),
        Example::E5_21 => closed_forms(),
        Example::Tca3So12 => certificates(seed),
    }
}

fn orthogonal(n: usize, parts: &[usize]) -> Result<(AlgebraType, Partition), SliceError> {
    let alg = AlgebraType::orthogonal(n)?;
    Ok((alg, Partition::validate(parts, alg)?))
}

fn relations_example(
    n: usize,
    parts: &[usize],
    deltas: &[u32],
    dim_ge: usize,
    mode: EvalMode,
    seed: u64,
) -> Result<Vec<Assertion>, SliceError> {
    let (alg, lambda) = orthogonal(n, parts)?;
    let ctx = SliceContext::new(&lambda, alg)?;
    let mut out = vec![Assertion::equal("dim g^e", ctx.dim_ge(), dim_ge)];
    let opts = ReportOptions { seed, trials: DEFAULT_TRIALS, mode, include_kappa: false };
    match slice_report(&ctx, &opts) {
        Ok(r) => {
            out.push(Assertion::new("Slodowy homogeneity of every initial component", true, "degree 2d_i"));
            out.push(Assertion::equal("degrees of the initial components", r.deltas.clone(), deltas.to_vec()));
            out.push(Assertion::new(
                "initial components are dependent",
                r.defect > 0 && !r.independent,
                format!("defect {}, Jacobian rank {} of {}", r.defect, r.jacobian_rank, r.rank),
            ));
        }
        Err(e) => out.push(Assertion::new("slice report", false, e.to_string())),
    }
    for rel in known_relations(alg, &lambda) {
        let holds = verify_relation(&ctx, rel, mode, seed)?;
        let how = match mode {
            EvalMode::Identical => "expands to zero".to_string(),
            EvalMode::Randomized => format!("vanishes at {} seeded points", slodowy::slice::RELATION_POINTS),
        };
        out.push(Assertion::new(format!("relation {rel}"), holds, if holds { how } else { "does not vanish".into() }));
    }
    Ok(out)
}

fn closed_forms() -> Result<Vec<Assertion>, SliceError> {
    let mut out = Vec::new();
    let (alg, lambda) = orthogonal(12, &[4, 4, 3, 1])?;
    for (j, expected) in [(1, "-2*z1"), (2, "1*z1^2")] {
        let p = pca3_observed(&lambda, alg, j)?;
        out.push(Assertion::equal(format!("{lambda} restricted p_{j}"), p.to_canonical_string(), expected.to_string()));
    }
    for (n, parts) in [(12, &[4, 4, 3, 1][..]), (12, &[4, 4, 2, 2]), (5, &[2, 2, 1]), (13, &[4, 4, 2, 2, 1])] {
        let (alg, lambda) = orthogonal(n, parts)?;
        let pb = PrefixBlocks::of(&lambda)?;
        for j in 1..=pb.k_prime {
            let (s, local) = pb.locate(j).expect("index within the prefix");
            let observed = pca3_observed(&lambda, alg, j)?;
            let predicted = pca3_predicted(&lambda, s, local)?;
            out.push(Assertion::new(
                format!("{lambda} p_{j} matches the symmetric-function formula"),
                observed == predicted,
                observed.to_canonical_string(),
            ));
        }
    }
    // Single block: p_1 = −2σ_1, p_2 = 2σ_2 + σ_1², p_k' = σ_{k'/2}².
    let (alg, lambda) = orthogonal(9, &[2, 2, 2, 2, 1])?;
    let pb = PrefixBlocks::of(&lambda)?;
    let z = z_vars(&pb);
    let sigma = |r| elementary_symmetric(&z, 0..pb.pairs(), r);
    let expected = [
        (1, sigma(1).scale(&rat(-2))),
        (2, &sigma(2).scale(&rat(2)) + &sigma(1).pow(2)),
        (pb.k_prime, sigma(pb.pairs()).pow(2)),
    ];
    for (j, e) in expected {
        let p = pca3_observed(&lambda, alg, j)?;
        out.push(Assertion::new(format!("{lambda} single-block p_{j}"), p == e, p.to_canonical_string()));
    }
    Ok(out)
}

fn certificates(seed: u64) -> Result<Vec<Assertion>, SliceError> {
    let mut out = Vec::new();
    for (n, parts) in [(12, &[4, 4, 3, 1][..]), (12, &[4, 4, 2, 2]), (5, &[2, 2, 1])] {
        let (alg, lambda) = orthogonal(n, parts)?;
        let cert = tca3_certificate(&lambda, alg, DEFAULT_TRIALS, seed)?;
        let degrees: Vec<String> = cert
            .modified
            .iter()
            .map(|m| format!("{}: degree {} -> {} (bound {})", m.expression, m.delta_before, m.delta_after, m.bound))
            .collect();
        out.push(Assertion::new(
            format!("{lambda} in {alg}: modified degrees meet their bounds"),
            cert.modified.iter().all(|m| m.delta_after >= m.bound),
            degrees.join("; "),
        ));
        out.push(Assertion::new(
            format!("{lambda} in {alg}: modified initial components are independent"),
            cert.passed && cert.modified_defect == 0 && cert.jacobian_rank == alg.rank,
            format!("defect {} -> {}, Jacobian rank {} of {}", cert.original_defect, cert.modified_defect, cert.jacobian_rank, alg.rank),
        ));
        if parts == [4, 4, 2, 2] {
            let exprs: Vec<&str> = cert.modified.iter().map(|m| m.expression.as_str()).collect();
            out.push(Assertion::equal(
                "(4,4,2,2) modified generators",
                exprs,
                vec!["-1/4*q2^2 + 1*q4", "1*q2*q6 + 1*q5"],
            ));
        }
    }
    Ok(out)
}
