//! Nilpotent construction round trips against Jordan types and an
//! ungraded kernel computation.

use std::time::Instant;

use rayon::prelude::*;
use slodowy::orbit::{build_nilpotent, jordan_type, kernel_dim_centralizer, OrbitData};
use slodowy::partition::{dim_centralizer, nilpotent_partitions};
use slodowy::{AlgebraType, FormRealization, Partition};

fn algebras(max_dim: usize) -> Vec<AlgebraType> {
    (3..=max_dim)
        .flat_map(|n| [AlgebraType::orthogonal(n).ok(), AlgebraType::symplectic(n).ok()])
        .flatten()
        .collect()
}

#[test]
fn round_trip_up_to_fourteen() {
    let start = Instant::now();
    let cases: Vec<(AlgebraType, Partition)> =
        algebras(14).into_iter().flat_map(|alg| nilpotent_partitions(alg).into_iter().map(move |p| (alg, p))).collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(alg, lambda)| {
            let form = FormRealization::for_algebra(*alg).unwrap();
            let e = build_nilpotent(lambda, &form).unwrap();
            let ok = form.contains(&e)
                && jordan_type(&e).unwrap() == lambda.parts()
                && kernel_dim_centralizer(&e, &form) == dim_centralizer(lambda, *alg);
            (!ok).then(|| format!("{lambda} in {alg}"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
    assert!(cases.len() > 300);
    assert!(start.elapsed().as_secs() < 300);
}

#[test]
fn sl2_triples_and_graded_centralizers() {
    for alg in algebras(10) {
        for lambda in nilpotent_partitions(alg) {
            let orbit = OrbitData::new(&lambda, alg).unwrap();
            assert!(orbit.triple.is_valid(&orbit.form), "{lambda} in {alg}");
            assert_eq!(orbit.ge.dim(), dim_centralizer(&lambda, alg), "{lambda} in {alg}");
            assert_eq!(orbit.gf.dim(), orbit.ge.dim(), "{lambda} in {alg}");
            // g^e lives in nonnegative ad-h weights, g^f in nonpositive ones.
            assert!(orbit.ge.weights.iter().all(|&w| w >= 0));
            assert!(orbit.gf.weights.iter().all(|&w| w <= 0));
        }
    }
}
