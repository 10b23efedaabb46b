use std::collections::BTreeMap;

use divfan_core::construction::shift_vector;
use divfan_core::corpus::{
    corpus_entry, corpus_names, corpus_source, load_corpus, CorpusEntry, CorpusEntryJson,
};
use divfan_core::{equal_canonical, LatticeVector};

#[test]
fn every_corpus_file_round_trips() {
    for name in corpus_names() {
        let e = corpus_entry(&name, &BTreeMap::new()).unwrap();
        let once = serde_json::to_value(e.to_json()).unwrap();
        let again = CorpusEntry::from_json(&once.to_string()).unwrap();
        assert_eq!(
            serde_json::to_value(again.to_json()).unwrap(),
            once,
            "{name}"
        );
        if let (Some(a), Some(b)) = (&e.expected, &again.expected) {
            assert!(equal_canonical(a, b, None), "{name}");
        }
    }
}

#[test]
fn corpus_has_every_example() {
    let names = corpus_names();
    for want in [
        "c2_parabolic",
        "c2_elliptic",
        "c2_hyperbolic",
        "o_n_bundle_1",
        "o_n_bundle_2",
        "p2_102",
        "sl2u_a",
        "sl2u_b",
        "sl2u_c",
        "sl2u_d",
        "sl2u_e",
        "sl3_a",
        "sl3_b",
        "gl2_c4",
        "gl2_blc4",
        "gl2_p4",
        "gl2_blp4",
        "grass24",
    ] {
        assert!(names.iter().any(|n| n == want), "{want} missing");
    }
    assert_eq!(load_corpus().unwrap().len(), names.len());
}

#[test]
fn computed_fans_match_expected() {
    for e in load_corpus().unwrap() {
        if let Some(ok) = e.matches_expected().unwrap() {
            assert!(ok, "{}", e.name);
        }
        if let Some(bad) = e.table_mismatches().unwrap() {
            assert!(bad.is_empty(), "{}: {bad:?}", e.name);
        }
    }
}

#[test]
fn toric_models_agree_with_the_construction() {
    let mut checked = 0;
    for e in load_corpus()
        .unwrap()
        .into_iter()
        .filter(|e| e.is_toric_downgradable())
    {
        let c = e.crosscheck().unwrap();
        assert!(c.equal, "{}: {:?}", e.name, c.diff);
        checked += 1;
    }
    assert_eq!(checked, 9);
}

#[test]
fn sl2u_member_counts() {
    let counts: Vec<usize> = ["a", "b", "c", "d", "e"]
        .iter()
        .map(|k| {
            corpus_entry(&format!("sl2u_{k}"), &BTreeMap::new())
                .unwrap()
                .compute()
                .unwrap()
                .maximal()
                .len()
        })
        .collect();
    assert_eq!(counts, vec![2, 1, 2, 4, 3]);
    for (k, n) in [("d", 4), ("e", 3)] {
        let e = corpus_entry(&format!("sl2u_{k}"), &BTreeMap::new()).unwrap();
        assert_eq!(e.expected.unwrap().maximal().len(), n);
    }
}

#[test]
fn perturbed_shift_breaks_the_crosscheck() {
    let mut j: CorpusEntryJson = serde_json::from_str(corpus_source("gl2_p4").unwrap()).unwrap();
    // another cosection of the same projection moves the shift from -1 to 1
    j.datum.as_mut().unwrap().split.cosection = vec![vec![-1, 0]];
    let e = j.parse().unwrap();
    let datum = e.datum.as_ref().unwrap();
    assert_eq!(
        shift_vector("D", datum).unwrap(),
        LatticeVector::from_ints(&[1])
    );
    let c = e.crosscheck().unwrap();
    assert!(!c.equal);
    assert!(!c.diff.is_empty());
}

#[test]
fn bundle_degree_is_a_parameter() {
    for n in [0, 1, 5] {
        let params = BTreeMap::from([("n".to_string(), n)]);
        for action in ["o_n_bundle_1", "o_n_bundle_2"] {
            let e = corpus_entry(action, &params).unwrap();
            assert_eq!(e.matches_expected().unwrap(), Some(true), "{action} n={n}");
        }
    }
}
