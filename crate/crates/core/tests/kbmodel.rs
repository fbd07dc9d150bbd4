use goalspot_core::demo::demo_kb;
use goalspot_core::harness::random::random_small_kb;
use goalspot_core::harness::{synth_kb, SynthParams};
use goalspot_core::kbmodel::validate_kb;
use goalspot_core::{load_kb, KbError, KnowledgeBase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn round_trips(kb: &KnowledgeBase) {
    let again = load_kb(&kb.to_json()).unwrap();
    assert_eq!(&again, kb);
    assert_eq!(again.to_json(), kb.to_json());
}

#[test]
fn demo_round_trips() {
    round_trips(&demo_kb());
}

#[test]
fn synth_round_trips() {
    round_trips(&synth_kb(&SynthParams::new(40, 300, 2000, 5)).unwrap());
}

#[test]
fn surface_disjointness_is_enforced_across_kinds() {
    let doc = r#"{
        "meta": {"name": "dup", "version": "1", "language": "en"},
        "goals": [{"id": "g", "title": "G"}],
        "nodes": [
            {"id": "chart", "kind": "term", "surfaces": [{"tokens": ["chart"]}]},
            {"id": "graphics", "kind": "metonym", "surfaces": [{"tokens": ["graph"]}, {"tokens": ["chart"]}]}
        ],
        "links": []
    }"#;
    match load_kb(doc) {
        Err(KbError::Invalid(v)) => assert!(v.iter().any(|v| v.to_string().contains("surface-disjointness"))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn leak_above_bucket_floor_is_rejected() {
    let doc = r#"{
        "meta": {"name": "leaky", "version": "1", "language": "en"},
        "leak": 0.05,
        "goals": [{"id": "g", "title": "G"}],
        "nodes": [],
        "links": []
    }"#;
    match load_kb(doc) {
        Err(KbError::Invalid(v)) => assert!(v.iter().any(|v| v.to_string().contains("leak-exceeds-bucket-floor"))),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #[test]
    fn random_kbs_round_trip_and_validate(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kb = random_small_kb(&mut rng, 4, 6);
        prop_assert!(validate_kb(kb.model()).is_empty());
        let sum: f64 = kb.goals().iter().map(|g| g.prior).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-9);
        let again = load_kb(&kb.to_json()).unwrap();
        prop_assert_eq!(again, kb);
    }

    #[test]
    fn raw_priors_are_normalized(weights in prop::collection::vec(1e-3f64..1e3, 1..12)) {
        let goals: Vec<String> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| format!(r#"{{"id": "g{i}", "title": "G", "prior": {w}}}"#))
            .collect();
        let doc = format!(
            r#"{{"meta": {{"name": "p", "version": "1", "language": "en"}}, "goals": [{}], "nodes": [], "links": []}}"#,
            goals.join(",")
        );
        let kb = load_kb(&doc).unwrap();
        let sum: f64 = kb.goals().iter().map(|g| g.prior).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-9);
    }
}
