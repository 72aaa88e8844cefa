//! Blossom, Hopcroft-Karp and the König-Ore witness against the exhaustive oracles.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kext::matching::{
    augment, bipartite_maximum_matching, enumerate_matchings, extends_to_perfect,
    find_augmenting_path, has_perfect_matching, koenig_ore_deficiency, maximum_matching,
    Matching,
};
use kext::verifier::{generate_corpus, random_bipartite_graphs, CorpusSpec};
use kext::{oracle, Graph};

fn exhaustive(n: usize) -> impl Iterator<Item = Graph> {
    generate_corpus(&CorpusSpec::Exhaustive { n }).unwrap().map(Result::unwrap)
}

fn random(n: usize, count: usize, seed: u64) -> Vec<Graph> {
    generate_corpus(&CorpusSpec::random(n, count, seed)).unwrap().map(Result::unwrap).collect()
}

fn is_valid_matching(g: &Graph, m: &Matching) -> bool {
    m.validate_in(g).is_ok() && m.covered().len() == 2 * m.len()
}

/// A random maximal-or-smaller matching: greedy over shuffled edges, then
/// drop a random number of edges.
fn random_matching(g: &Graph, rng: &mut ChaCha8Rng) -> Matching {
    let mut edges = g.edges();
    edges.shuffle(rng);
    let mut used = vec![false; g.order()];
    let mut picked = Vec::new();
    for e in edges {
        if !used[e.u()] && !used[e.v()] {
            used[e.u()] = true;
            used[e.v()] = true;
            picked.push(e);
        }
    }
    let keep = rand::Rng::random_range(rng, 0..=picked.len());
    picked.truncate(keep);
    Matching::new(picked).unwrap()
}

#[test]
fn blossom_matches_oracle_exhaustively() {
    for n in 0..=6 {
        for g in exhaustive(n) {
            let m = maximum_matching(&g);
            assert!(is_valid_matching(&g, &m));
            assert_eq!(m.len(), oracle::matching_number(&g), "{g:?}");
            assert_eq!(has_perfect_matching(&g), oracle::has_perfect_matching(&g));
        }
    }
}

#[test]
fn blossom_matches_oracle_on_random_graphs() {
    for (n, seed) in [(9, 11), (11, 12), (12, 13)] {
        for p in [0.2, 0.35, 0.5] {
            let spec = CorpusSpec::Random { n, count: 150, seed, edge_probability: p };
            for g in generate_corpus(&spec).unwrap().map(Result::unwrap) {
                let m = maximum_matching(&g);
                assert!(is_valid_matching(&g, &m));
                assert_eq!(m.len(), oracle::matching_number(&g), "{g:?}");
            }
        }
    }
}

#[test]
fn berge_and_augmentation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    for n in [5, 6, 7, 8, 9, 10] {
        for g in random(n, 300, n as u64) {
            let m = random_matching(&g, &mut rng);
            let path = find_augmenting_path(&g, &m).unwrap();
            let maximum = m.len() == oracle::matching_number(&g);
            assert_eq!(path.is_none(), maximum, "{g:?} {m:?}");
            if let Some(p) = path {
                p.validate(&g, &m).unwrap();
                let bigger = augment(&g, &m, &p).unwrap();
                assert_eq!(bigger.len(), m.len() + 1);
                assert!(is_valid_matching(&g, &bigger));
                let ends = [p.vertices[0], *p.vertices.last().unwrap()];
                let expected = m.covered().union(&ends.into());
                assert_eq!(bigger.covered(), expected);
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 1800);
}

#[test]
fn enumeration_counts_match_oracle() {
    for n in 0..=6 {
        for g in exhaustive(n).step_by(7) {
            for k in 0..=3 {
                let ours: Vec<Matching> = enumerate_matchings(&g, k).collect();
                let theirs = oracle::matchings_of_size(&g, k);
                assert_eq!(ours.len(), theirs.len());
                for (a, b) in ours.iter().zip(&theirs) {
                    let b = Matching::from_pairs(b.iter().copied()).unwrap();
                    assert_eq!(a, &b);
                }
            }
        }
    }
}

#[test]
fn extension_is_deletion_plus_perfect_matching() {
    for g in random(8, 200, 5).into_iter().chain(exhaustive(5)) {
        for k in 0..=2 {
            for m in enumerate_matchings(&g, k) {
                let ext = extends_to_perfect(&g, &m).unwrap();
                let (rest, _) = g.delete_vertices(&m.covered()).unwrap();
                assert_eq!(ext.is_some(), oracle::has_perfect_matching(&rest));
                if let Some(pm) = ext {
                    assert!(pm.is_perfect_in(&g));
                    assert!(m.edges().iter().all(|e| pm.contains(e)));
                    pm.validate_in(&g).unwrap();
                }
            }
        }
    }
}

#[test]
fn koenig_ore_against_subset_oracle() {
    let mut graphs: Vec<Graph> = exhaustive(6).filter(|g| g.bipartition().is_ok()).collect();
    graphs.extend(random_bipartite_graphs(5, 6, 200, 3, 0.4));
    for g in graphs {
        let bp = g.bipartition().unwrap();
        let hk = bipartite_maximum_matching(&g, &bp).unwrap();
        assert!(is_valid_matching(&g, &hk));
        assert_eq!(hk.len(), maximum_matching(&g).len());
        let d = koenig_ore_deficiency(&g, &bp).unwrap();
        let (value, _) = oracle::deficiency(&g, &bp.x);
        assert_eq!(d.value, value);
        assert_eq!(d.value + hk.len(), bp.x.len());
        let nb = g.neighborhood(&d.witness, None).unwrap();
        assert_eq!(d.witness.len() - nb.len(), d.value);
        assert!(d.witness.is_subset(&bp.x));
        if d.value == 0 {
            assert!(d.witness.is_empty());
        }
    }
}
