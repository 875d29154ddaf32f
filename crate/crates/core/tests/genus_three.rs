//! Every suite over the genus-3 atlas, contraction sweeps sampled with a fixed
//! seed to keep debug builds quick.

use std::collections::BTreeSet;

use ocalc::atlas::{automorphisms, canonical_key, enumerate_stable_graphs, enumerate_stable_graphs_slow, Atlas};
use ocalc::graph::fixtures;
use ocalc::verify::{run_suite, Corpus, Suite, VerifyConfig};
use ocalc::Graph;

#[test]
fn generators_agree() {
    let fast: BTreeSet<_> = enumerate_stable_graphs(3).unwrap().iter().map(canonical_key).collect();
    let slow: BTreeSet<_> = enumerate_stable_graphs_slow(3).unwrap().iter().map(canonical_key).collect();
    assert_eq!(fast.len(), 42);
    assert_eq!(fast, slow);
}

#[test]
fn automorphism_group_orders() {
    let two_loops = Graph::new(vec![0], vec![(0, 0), (0, 0)]).unwrap();
    // swaps of parallel edges, loop flips and vertex swaps
    assert_eq!(automorphisms(&fixtures::theta()).len(), 12);
    assert_eq!(automorphisms(&fixtures::dumbbell()).len(), 8);
    assert_eq!(automorphisms(&two_loops).len(), 8);
    let k4 = Graph::new(vec![0; 4], vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert_eq!(automorphisms(&k4).len(), 24);
    let atlas = Atlas::new(3).unwrap();
    assert!(atlas.index_of(&k4).is_some());
}

#[test]
fn every_suite_passes() {
    let cfg = VerifyConfig { sample: 200, ..VerifyConfig::new(3) };
    let corpus = Corpus::new(&cfg).unwrap();
    assert!(corpus.sampled);
    assert_eq!(corpus.contractions.len(), cfg.sample);
    for s in Suite::ALL {
        let r = run_suite(s, &corpus, &cfg).unwrap();
        assert!(r.passed(), "{}: {:?}", r.suite, &r.failures[..r.failures.len().min(3)]);
        assert_eq!(r.passes + r.failures.len(), r.instances);
    }
}

#[test]
fn sampling_is_reproducible() {
    let cfg = VerifyConfig { sample: 200, ..VerifyConfig::new(3) };
    let a = Corpus::new(&cfg).unwrap();
    let b = Corpus::new(&cfg).unwrap();
    let key = |c: &Corpus| c.contractions.iter().map(|(i, j, g)| (*i, *j, g.contracted().bits())).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
    let other = Corpus::new(&VerifyConfig { seed: 7, ..cfg }).unwrap();
    assert_ne!(key(&a), key(&other));
}
