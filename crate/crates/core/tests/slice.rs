//! Slice engine against symbolic expansion, stored goldens, closed forms
//! and the independence criterion.

use slodowy::partition::nilpotent_partitions;
use slodowy::poly::Grading;
use slodowy::slice::{
    elementary_symmetric, pca3_observed, pca3_predicted, slice_report, tca3_certificate, verify_relation, z_vars, EvalMode,
    PrefixBlocks, ReportOptions, SliceContext, SliceError, Tca3Case, DEFAULT_SEED,
};
use num_traits::Zero;
use slodowy::{AlgebraType, MultiPoly, Partition};

fn context(n: usize, parts: &[usize]) -> SliceContext {
    let alg = AlgebraType::orthogonal(n).unwrap();
    SliceContext::new(&Partition::validate(parts, alg).unwrap(), alg).unwrap()
}

fn identical() -> ReportOptions {
    ReportOptions { mode: EvalMode::Identical, ..Default::default() }
}

fn golden(name: &str) -> Vec<String> {
    let path = format!("{}/tests/golden/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap().lines().map(|l| l.split_once(" = ").unwrap().1.to_owned()).collect()
}

/// Compares stored components with the report and with the initial
/// components of the fully expanded restrictions.
fn check_golden(n: usize, parts: &[usize], name: &str) {
    let ctx = context(n, parts);
    let report = slice_report(&ctx, &identical()).unwrap();
    let stored = golden(name);
    assert_eq!(stored.len(), ctx.rank());
    for (i, g) in report.generators.iter().enumerate() {
        assert_eq!(g.initial.as_deref(), Some(stored[i].as_str()), "q{}", i + 1);
        let oracle = ctx.kappa_expanded(i + 1).unwrap().initial_component(Grading::Standard).unwrap();
        assert_eq!(oracle.to_canonical_string(), stored[i], "q{} against expansion", i + 1);
    }
}

#[test]
fn so7_regular_golden() {
    check_golden(7, &[7], "so7_7");
}

#[test]
fn so10_golden() {
    check_golden(10, &[3, 3, 2, 2], "so10_3322");
}

#[test]
fn so10_degrees_and_relation() {
    let ctx = context(10, &[3, 3, 2, 2]);
    assert_eq!(ctx.dim_ge(), 17);
    let report = slice_report(&ctx, &ReportOptions::default()).unwrap();
    assert_eq!(report.deltas, vec![1, 2, 2, 3, 2]);
    assert_eq!(report.defect, 2);
    assert!(!report.independent);
    for mode in [EvalMode::Identical, EvalMode::Randomized] {
        assert!(verify_relation(&ctx, "q4^2 - 4*q3*q5^2", mode, DEFAULT_SEED).unwrap(), "{mode:?}");
        assert!(!verify_relation(&ctx, "q4^2 + 4*q3*q5^2", mode, DEFAULT_SEED).unwrap(), "{mode:?}");
    }
}

#[test]
fn relation_input_errors() {
    let ctx = context(10, &[3, 3, 2, 2]);
    assert!(matches!(verify_relation(&ctx, "q4*q5", EvalMode::Randomized, 1), Err(SliceError::OddPfaffianPower)));
    assert!(matches!(verify_relation(&ctx, "q9 - q1", EvalMode::Randomized, 1), Err(SliceError::UnknownSymbol(_))));
}

#[test]
fn kappa_vanishes_at_the_origin() {
    for (n, parts) in [(7, vec![7]), (7, vec![3, 2, 2]), (8, vec![3, 3, 1, 1])] {
        let ctx = context(n, &parts);
        let origin = vec![slodowy::linalg::rat(0); ctx.coords().len()];
        for i in 1..=ctx.rank() {
            assert!(ctx.kappa(i, DEFAULT_SEED).unwrap().eval(&origin).is_zero(), "q{i} for {parts:?}");
        }
    }
}

#[test]
fn criterion_holds_up_to_nine() {
    for n in 3..=9 {
        let alg = AlgebraType::orthogonal(n).unwrap();
        for lambda in nilpotent_partitions(alg) {
            let ctx = SliceContext::new(&lambda, alg).unwrap();
            let r = slice_report(&ctx, &ReportOptions::default()).unwrap_or_else(|e| panic!("{lambda} in {alg}: {e}"));
            assert_eq!(r.independent, r.defect == 0, "{lambda} in {alg}");
            assert!(2 * r.sum_delta as usize <= ctx.dim_ge() + ctx.rank(), "{lambda} in {alg}");
            assert!(r.generators.iter().all(|g| g.slodowy_degree == 2 * g.degree as i64));
        }
    }
}

#[test]
fn initial_components_are_bihomogeneous() {
    for (n, parts) in [(8, vec![2, 2, 2, 2]), (9, vec![3, 3, 1, 1, 1]), (9, vec![2, 2, 2, 2, 1])] {
        let ctx = context(n, &parts);
        let r = slice_report(&ctx, &identical()).unwrap();
        for g in &r.generators {
            let p = MultiPoly::parse(g.initial.as_deref().unwrap(), ctx.coords()).unwrap();
            assert_eq!(p.homogeneous_degree(Grading::Standard), Some(g.delta as i64));
            assert_eq!(p.homogeneous_degree(Grading::Slodowy), Some(2 * g.degree as i64));
        }
    }
}

/// Under (*), `p_j = ᵉq_{ν_j}` has `ad h` weight `2(2ν_j − j)`.
#[test]
fn weight_identity_on_star_partitions() {
    let mut seen = 0;
    for n in 4..=11 {
        let alg = AlgebraType::orthogonal(n).unwrap();
        for lambda in nilpotent_partitions(alg) {
            let Some(kp) = lambda.satisfies_star() else { continue };
            let ctx = SliceContext::new(&lambda, alg).unwrap();
            let r = slice_report(&ctx, &ReportOptions::default()).unwrap();
            for (j, &nu) in lambda.nu_sequence(kp).iter().enumerate() {
                let g = &r.generators[nu - 1];
                // When the prefix is the whole partition, p_k is the square of
                // the Pfaffian component.
                let power = if g.pfaffian { 2 } else { 1 };
                let weight = power * (g.slodowy_degree - 2 * g.delta as i64);
                assert_eq!(weight, 2 * (2 * nu as i64 - (j as i64 + 1)), "{lambda}, j = {}", j + 1);
            }
            seen += 1;
        }
    }
    assert!(seen > 10);
}

fn check_closed_form(n: usize, parts: &[usize]) {
    let alg = AlgebraType::orthogonal(n).unwrap();
    let lambda = Partition::validate(parts, alg).unwrap();
    let pb = PrefixBlocks::of(&lambda).unwrap();
    for j in 1..=pb.k_prime {
        let (s, local) = pb.locate(j).unwrap();
        let observed = pca3_observed(&lambda, alg, j).unwrap();
        let predicted = pca3_predicted(&lambda, s, local).unwrap();
        assert_eq!(observed, predicted, "{lambda}, j = {j}");
    }
}

#[test]
fn closed_form_on_line() {
    check_closed_form(12, &[4, 4, 3, 1]);
    check_closed_form(12, &[4, 4, 2, 2]);
    check_closed_form(16, &[6, 6, 3, 1]);
    check_closed_form(5, &[2, 2, 1]);
    check_closed_form(9, &[2, 2, 2, 2, 1]);
    check_closed_form(13, &[4, 4, 2, 2, 1]);
}

#[test]
fn closed_form_explicit_values() {
    let alg = AlgebraType::orthogonal(12).unwrap();
    let lambda = Partition::validate(&[4, 4, 3, 1], alg).unwrap();
    assert_eq!(pca3_observed(&lambda, alg, 1).unwrap().to_canonical_string(), "-2*z1");
    assert_eq!(pca3_observed(&lambda, alg, 2).unwrap().to_canonical_string(), "1*z1^2");
}

/// Single block: `p̄_1 = −2σ_1`, `p̄_2 = 2σ_2 + σ_1²`, `p̄_{k'} = σ_{k'/2}²`.
#[test]
fn single_block_formulas() {
    for (n, parts) in [(9, vec![2, 2, 2, 2, 1]), (13, vec![2, 2, 2, 2, 2, 2, 1]), (17, vec![4, 4, 4, 4, 1])] {
        let alg = AlgebraType::orthogonal(n).unwrap();
        let lambda = Partition::validate(&parts, alg).unwrap();
        let pb = PrefixBlocks::of(&lambda).unwrap();
        assert_eq!(pb.blocks.len(), 1);
        let z = z_vars(&pb);
        let sigma = |r| elementary_symmetric(&z, 0..pb.pairs(), r);
        let two = slodowy::linalg::rat(2);
        assert_eq!(pca3_observed(&lambda, alg, 1).unwrap(), sigma(1).scale(&-two.clone()));
        assert_eq!(pca3_observed(&lambda, alg, 2).unwrap(), &sigma(2).scale(&two) + &sigma(1).pow(2));
        assert_eq!(pca3_observed(&lambda, alg, pb.k_prime).unwrap(), sigma(pb.pairs()).pow(2));
    }
}

#[test]
fn modified_generator_certificates() {
    for (n, parts, case, k_prime) in [
        (5, vec![2, 2, 1], Tca3Case::EqualPrefix, 2),
        (12, vec![4, 4, 3, 1], Tca3Case::EqualPrefix, 2),
        (12, vec![4, 4, 2, 2], Tca3Case::FourEven, 4),
    ] {
        let alg = AlgebraType::orthogonal(n).unwrap();
        let lambda = Partition::validate(&parts, alg).unwrap();
        let cert = tca3_certificate(&lambda, alg, 3, DEFAULT_SEED).unwrap();
        assert!(cert.passed, "{cert:?}");
        assert_eq!(cert.case, case);
        assert_eq!(cert.k_prime, k_prime);
        assert_eq!(cert.modified_defect, 0);
        assert_eq!(cert.original_defect, k_prime as i64);
        assert_eq!(cert.jacobian_rank, alg.rank);
        assert!(cert.modified.iter().all(|m| m.delta_after >= m.bound && m.delta_after > m.delta_before));
    }
}

#[test]
fn four_even_expressions() {
    let alg = AlgebraType::orthogonal(12).unwrap();
    let lambda = Partition::validate(&[4, 4, 2, 2], alg).unwrap();
    let cert = tca3_certificate(&lambda, alg, 3, DEFAULT_SEED).unwrap();
    let exprs: Vec<(&str, u32)> = cert.modified.iter().map(|m| (m.expression.as_str(), m.bound)).collect();
    assert_eq!(exprs, vec![("-1/4*q2^2 + 1*q4", 3), ("1*q2*q6 + 1*q5", 4)]);
    assert_eq!(cert.nu, vec![2, 4, 5, 6]);
}

#[test]
fn certificate_rejects_other_partitions() {
    let alg = AlgebraType::orthogonal(10).unwrap();
    let lambda = Partition::validate(&[3, 3, 2, 2], alg).unwrap();
    assert!(matches!(tca3_certificate(&lambda, alg, 3, 1), Err(SliceError::HypothesisViolated(_) | SliceError::StarViolated(_))));
}
