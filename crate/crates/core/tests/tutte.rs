mod common;

use burgers::map::build_map_from_word;
use burgers::sampler::{RandomSource, Theta0Sampler};
use burgers::sandpile::{enumerate_recurrent, level_generating_function};
use burgers::tutte::{
    excess_counts, excess_from_level_poly, spanning_tree_count_oracle, tutte, tutte_eval_1_y, tutte_with_cap,
    BivariatePoly,
};
use burgers::{Error, MultiGraph};
use common::{connected_multigraphs, corpus, excess_by_subsets, graph, random_graph, tutte_by_subsets};
use num_bigint::BigUint;
use proptest::prelude::*;

fn assert_matches_subsets(g: &MultiGraph) {
    let t = tutte(g).unwrap();
    let oracle = tutte_by_subsets(g);
    for (i, row) in t.coeffs().iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            assert_eq!(c as i64, oracle.get(&(i, j)).copied().unwrap_or(0), "x^{i} y^{j} in {g}");
        }
    }
    for (&(i, j), &c) in &oracle {
        assert_eq!(t.coeff(i, j) as i64, c);
    }
}

fn small_maps(count: usize) -> Vec<MultiGraph> {
    let mut rng = RandomSource::new(6);
    (0..count)
        .map(|i| {
            let w = Theta0Sampler::new(2 + i % 5).sample(&mut rng);
            let m = build_map_from_word(&w).unwrap();
            m.map.to_multigraph(m.map.vertex_of(m.map.root_dart())).unwrap()
        })
        .collect()
}

#[test]
fn subset_expansion_on_corpus() {
    for (_, g) in corpus() {
        assert_matches_subsets(&g);
    }
}

#[test]
fn isomorph_list_sizes() {
    // Connected multigraphs with loops allowed, by exact edge count: 2, 4, 11, 30.
    let all = connected_multigraphs(4);
    let by_edges: Vec<usize> = (1..=4).map(|e| all.iter().filter(|g| g.edge_count() == e).count()).collect();
    assert_eq!(by_edges, vec![2, 4, 11, 30]);
}

#[test]
fn merino_on_small_multigraphs_and_maps() {
    let mut graphs = connected_multigraphs(4);
    graphs.extend(small_maps(20));
    for g in &graphs {
        assert_matches_subsets(g);
        let gf = level_generating_function(g).unwrap();
        assert_eq!(gf, tutte_eval_1_y(g).unwrap(), "{g}");
        let trees = tutte(g).unwrap().eval(1, 1);
        assert_eq!(trees, spanning_tree_count_oracle(g));
        assert_eq!(trees, BigUint::from(enumerate_recurrent(g).unwrap().len()));
    }
}

#[test]
fn excess_counts_match_subsets() {
    for (name, g) in corpus() {
        let ex = excess_counts(&g).unwrap();
        for (l, &c) in ex.iter().enumerate() {
            assert_eq!(c, excess_by_subsets(&g, l), "{name} l={l}");
        }
    }
    assert_eq!(excess_from_level_poly(&[1, 2, 1]), vec![4, 4, 1]);
}

#[test]
fn standard_evaluations() {
    for (_, g) in corpus() {
        let t = tutte(&g).unwrap();
        assert_eq!(t.eval(2, 2), BigUint::from(1u32) << g.edge_count());
        assert_eq!(t.eval(1, 2), BigUint::from(excess_by_subsets_all(&g)));
    }
}

fn excess_by_subsets_all(g: &MultiGraph) -> u64 {
    (0..=g.cyclomatic_number()).map(|l| excess_by_subsets(g, l)).sum()
}

#[test]
fn known_polynomials() {
    let triangle = graph("3 3 0\n0 1\n1 2\n2 0\n");
    assert_eq!(tutte(&triangle).unwrap(), BivariatePoly::from_coeffs(vec![vec![0, 1], vec![1], vec![1]]));
    let loop_and_bridge = graph("2 2 0\n0 1\n1 1\n");
    assert_eq!(tutte(&loop_and_bridge).unwrap(), BivariatePoly::monomial(1, 1));
    assert!(matches!(tutte_with_cap(&triangle, 2), Err(Error::ResourceCap(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_graphs_match_subsets(seed in any::<u64>(), v in 1usize..7, extra in 0usize..6) {
        let g = random_graph(&mut RandomSource::new(seed), v, extra);
        assert_matches_subsets(&g);
        prop_assert_eq!(level_generating_function(&g).unwrap(), tutte_eval_1_y(&g).unwrap());
    }
}
