use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use pmxml_core::codec::{decode, encode, DecodeOptions};
use pmxml_core::infoset::{infoset_equal, read_document, write_document};
use pmxml_core::model::check_document;
use pmxml_core::schema::{polymake_schema, validate};
use pmxml_testkit::generate::{document, Limits};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_documents_satisfy_invariants(seed in any::<u64>()) {
        let doc = document(&mut StdRng::seed_from_u64(seed), Limits::default());
        prop_assert_eq!(check_document(&doc), Ok(()));
        let report = validate(&encode(&doc), &polymake_schema()).unwrap();
        prop_assert!(report.valid, "{:?}", report.violations);
    }

    #[test]
    fn decode_inverts_encode(seed in any::<u64>()) {
        let doc = document(&mut StdRng::seed_from_u64(seed), Limits::default());
        let back = decode(&encode(&doc), &DecodeOptions::default()).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn decode_inverts_encode_through_bytes(seed in any::<u64>()) {
        let doc = document(&mut StdRng::seed_from_u64(seed), Limits::default());
        let bytes = write_document(&encode(&doc));
        let tree = read_document(&bytes).unwrap();
        prop_assert!(infoset_equal(&tree, &encode(&doc)));
        let back = decode(&tree, &DecodeOptions::default()).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn canonical_form_is_a_fixed_point(seed in any::<u64>()) {
        let doc = document(&mut StdRng::seed_from_u64(seed), Limits::default());
        let once = encode(&doc);
        let twice = encode(&decode(&once, &DecodeOptions::default()).unwrap());
        prop_assert!(infoset_equal(&once, &twice));
    }
}
