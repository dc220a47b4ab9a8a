mod common;

use std::collections::{HashMap, HashSet};

use burgers::enumeration::perfect_words;
use burgers::map::{build_map_from_word, unicycle_geometry, CombinatorialMap, MapJson, MapWithSubgraph};
use burgers::sampler::{RandomSource, Theta0Sampler, ThetaKSampler};
use burgers::tutte::spanning_tree_count_oracle;
use burgers::word::{loop_stats_from_word, validate};
use burgers::Error;
use common::word;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Relabels darts in breadth-first order from the root, following the
/// rotation and the edge involution; equal codes mean isomorphic rooted maps.
fn rooted_code(map: &CombinatorialMap, subset: Option<&[bool]>) -> Vec<(usize, usize, bool)> {
    let n = map.n_darts();
    let mut label = vec![usize::MAX; n];
    let mut order = vec![map.root_dart()];
    label[map.root_dart()] = 0;
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for next in [map.rotation()[d], CombinatorialMap::involution(d)] {
            if label[next] == usize::MAX {
                label[next] = order.len();
                order.push(next);
            }
        }
        i += 1;
    }
    order
        .iter()
        .map(|&d| {
            let member = subset.is_some_and(|s| s[d / 2]);
            (label[map.rotation()[d]], label[CombinatorialMap::involution(d)], member)
        })
        .collect()
}

fn built(s: &str) -> MapWithSubgraph {
    build_map_from_word(&word(s)).unwrap()
}

#[test]
fn invariants_on_every_small_word() {
    for n in 1..=5 {
        for k in 0..=2 {
            for w in perfect_words(n, k).unwrap() {
                let m = build_map_from_word(&w).unwrap();
                m.check_invariants(&w).unwrap();
                assert_eq!(m.map.n_edges(), n);
            }
        }
    }
}

#[test]
fn encoding_is_injective() {
    for n in 1..=4 {
        for k in 0..=2 {
            let words = perfect_words(n, k).unwrap();
            let codes: HashSet<_> = words
                .iter()
                .map(|w| {
                    let m = build_map_from_word(w).unwrap();
                    rooted_code(&m.map, Some(&m.config.members()))
                })
                .collect();
            assert_eq!(codes.len(), words.len(), "n={n} k={k}");
        }
    }
}

#[test]
fn every_rooted_map_appears_once_per_spanning_tree() {
    // Rooted planar maps with n edges: 2, 9, 54, 378.
    for (n, maps) in [(1usize, 2usize), (2, 9), (3, 54), (4, 378)] {
        let mut by_map: HashMap<Vec<(usize, usize, bool)>, (u64, CombinatorialMap)> = HashMap::new();
        for w in perfect_words(n, 0).unwrap() {
            let m = build_map_from_word(&w).unwrap();
            by_map.entry(rooted_code(&m.map, None)).or_insert((0, m.map.clone())).0 += 1;
        }
        assert_eq!(by_map.len(), maps, "n={n}");
        for (count, map) in by_map.values() {
            let g = map.to_multigraph(0).unwrap();
            assert_eq!(spanning_tree_count_oracle(&g), BigUint::from(*count));
        }
    }
}

#[test]
fn unicycle_geometry_matches_word() {
    for n in 1..=5 {
        for w in perfect_words(n, 1).unwrap() {
            let m = build_map_from_word(&w).unwrap();
            let r = loop_stats_from_word(&w, &validate(&w).unwrap()).unwrap()[0];
            assert_eq!(unicycle_geometry(&m).unwrap(), (r.length, r.area), "{w}");
        }
    }
    assert_eq!(unicycle_geometry(&built("CF")).unwrap(), (1, 1));
    assert_eq!(unicycle_geometry(&built("CHhF")).unwrap(), (1, 3));
    assert_eq!(unicycle_geometry(&built("HChF")).unwrap(), (2, 2));
    assert!(matches!(unicycle_geometry(&built("Hh")), Err(Error::InvalidInput(_))));
}

#[test]
fn json_round_trip() {
    let m = built("HChF");
    let json = serde_json::to_string(&m.to_json()).unwrap();
    let back: MapJson = serde_json::from_str(&json).unwrap();
    assert_eq!(back, m.to_json());
    assert_eq!(back.fk_edges.len(), 2);
    assert_eq!(back.tree_edges, vec![0]);
    let again = CombinatorialMap::new(back.rotation, back.root_dart).unwrap();
    assert_eq!(again, m.map);
}

#[test]
fn rejects_hamburger_fresh_orders() {
    assert!(matches!(build_map_from_word(&word("HF")), Err(Error::InvalidInput(_))));
    assert!(build_map_from_word(&word("Hc")).is_err());
    assert!(CombinatorialMap::new(vec![0, 0], 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_maps_satisfy_invariants(seed in any::<u64>(), n in 1usize..120) {
        let mut rng = RandomSource::new(seed);
        let w = Theta0Sampler::new(n).sample(&mut rng);
        let m = build_map_from_word(&w).unwrap();
        prop_assert!(m.check_invariants(&w).is_ok());
        let w = ThetaKSampler::new(n, 1).unwrap().sample(&mut rng).unwrap();
        let m = build_map_from_word(&w).unwrap();
        prop_assert!(m.check_invariants(&w).is_ok());
        let r = loop_stats_from_word(&w, &validate(&w).unwrap()).unwrap()[0];
        let (l, a) = unicycle_geometry(&m).unwrap();
        prop_assert_eq!((l, a), (r.length, r.area));
        prop_assert_eq!(a % 2, l % 2);
    }
}
