use butson::constructions::{cyclic_applicable, cyclic_bh};
use butson::existence::*;
use butson::numtheory::factorize;
use proptest::prelude::*;

#[test]
fn no_pair_is_both_built_and_refuted() {
    for n in 1..=100 {
        for h in 1..=100 {
            let e = evaluate_all(n, h);
            assert!(!e.conflict(), "({n},{h}): {:?} vs {:?}", e.exists, e.refutations);
        }
    }
}

#[test]
fn construction_test_matches_region() {
    for n in 1..=100 {
        for h in 1..=100 {
            let built = matches!(test_construction(n, h), Verdict::Exists { .. });
            assert_eq!(built, cyclic_applicable(n, h), "({n},{h})");
        }
    }
}

#[test]
fn prime_power_orders_are_decided() {
    for n in (2..=100u64).filter(|&n| factorize(n).unwrap().as_prime_power().is_some()) {
        for h in 1..=100 {
            assert!(!classify(n, h).is_open(), "({n},{h})");
        }
    }
}

#[test]
fn every_certificate_rechecks() {
    for n in 1..=100 {
        for h in 1..=100 {
            for (rule, cert) in refutations(n, h) {
                assert!(cert.recheck(n, h), "{rule} on ({n},{h})");
            }
            if let Verdict::NotExists { rule, certificate } = classify(n, h) {
                assert!(certificate.recheck(n, h), "{rule} on ({n},{h})");
            }
        }
    }
}

#[test]
fn closure_never_contradicts_constructions() {
    for n in 2..=60 {
        for h in 1..=60 {
            if cyclic_applicable(n, h) {
                assert!(divisor_closure(n, h, 120).is_open(), "({n},{h})");
            }
        }
    }
}

#[test]
fn exists_verdicts_have_witnesses() {
    for n in 1..=100 {
        for h in 1..=100 {
            if let Verdict::Exists { .. } = classify(n, h) {
                assert!(cyclic_bh(n, h).unwrap().verify());
            }
        }
    }
}

#[test]
fn verdicts_serialize() {
    let v = classify(8, 2);
    let text = serde_json::to_string(&v).unwrap();
    assert!(text.contains("\"verdict\":\"not_exists\""));
    let back: Verdict = serde_json::from_str(&text).unwrap();
    assert_eq!(back, v);
}

proptest! {
    #[test]
    fn pipeline_returns_first_decisive_test(n in 1u64..150, h in 1u64..150) {
        let first = PIPELINE.iter().map(|(_, t)| t(n, h)).find(|v| !v.is_open());
        let v = classify_with(n, h, ClassifyOptions { closure_limit: 0 });
        prop_assert_eq!(v, first.unwrap_or(Verdict::Open));
    }

    #[test]
    fn certificates_survive_json(n in 2u64..150, h in 1u64..150) {
        for (_, cert) in refutations(n, h) {
            let text = serde_json::to_string(&cert).unwrap();
            let back: Certificate = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &cert);
            prop_assert!(back.recheck(n, h));
        }
    }

    #[test]
    fn nonexistence_descends_to_divisors(n in 2u64..80, h in 2u64..80, k in 2u64..4) {
        // Whatever refutes (n, kh) must not leave (n, h) constructible.
        if !refutations(n, k * h).is_empty() {
            prop_assert!(!cyclic_applicable(n, h));
        }
    }
}
