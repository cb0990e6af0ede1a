use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use pmxml_core::infoset::read_document;
use pmxml_core::schema::{polymake_schema, validate, validate_with, ValidateOptions};
use pmxml_testkit::brute::BruteValidator;
use pmxml_testkit::fixtures::{polynomial_tree, square_tree};
use pmxml_testkit::generate::{depth, small_tree};
use pmxml_testkit::mutations::MUTATIONS;

#[test]
fn fixtures_are_valid() {
    let graph = polymake_schema();
    for tree in [square_tree(), polynomial_tree()] {
        let report = validate(&tree, &graph).unwrap();
        assert!(report.valid, "{:?}", report.violations);
    }
}

#[test]
fn every_mutation_is_rejected_with_a_path() {
    let graph = polymake_schema();
    assert!(MUTATIONS.len() >= 12);
    for m in MUTATIONS {
        let tree = read_document(m.apply().as_bytes()).unwrap();
        let report = validate(&tree, &graph).unwrap();
        assert!(!report.valid, "{} was accepted", m.label);
        let v = &report.violations[0];
        assert!(v.path.starts_with('/'), "{}: {v}", m.label);
    }
}

#[test]
fn mutation_paths_point_at_the_edit() {
    let graph = polymake_schema();
    let path_of = |label: &str| {
        let m = MUTATIONS.iter().find(|m| m.label == label).unwrap();
        let tree = read_document(m.apply().as_bytes()).unwrap();
        validate(&tree, &graph).unwrap().violations[0].clone()
    };
    assert_eq!(path_of("missing type").path, "/object");
    assert_eq!(path_of("missing type").rule, "TopAttribs");
    assert_eq!(path_of("name violating SimpleName").path, "/object/property[1]");
    assert_eq!(path_of("name violating SimpleName").rule, "SimpleName");
    assert_eq!(path_of("negative i index").path, "/object/property[2]/m[1]/v[1]/e[1]");
    assert_eq!(path_of("non-integer cols").path, "/object/property[2]/m[1]");
    assert_eq!(path_of("data with a property child").path, "/data/property[1]");
}

#[test]
fn oracle_agrees_on_fixtures_and_mutations() {
    let graph = polymake_schema();
    let mut brute = BruteValidator::new(&graph);
    assert!(brute.is_valid(&square_tree(), false));
    assert!(brute.is_valid(&polynomial_tree(), false));
    for m in MUTATIONS {
        let tree = read_document(m.apply().as_bytes()).unwrap();
        assert!(!brute.is_valid(&tree, false), "{}", m.label);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_validator_matches_oracle(seed in any::<u64>(), lax in any::<bool>()) {
        let tree = small_tree(&mut StdRng::seed_from_u64(seed), 4);
        prop_assume!(depth(&tree.root) <= 4);
        let graph = polymake_schema();
        let fast = validate_with(&tree, &graph, ValidateOptions { lax_namespace: lax }).unwrap();
        let slow = BruteValidator::new(&graph).is_valid(&tree, lax);
        prop_assert_eq!(fast.valid, slow, "{:?}", fast.violations);
    }
}
