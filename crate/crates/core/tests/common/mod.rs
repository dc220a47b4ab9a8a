//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use itertools::Itertools;
use rand::Rng;

use burgers::graph::MultiGraph;
use burgers::sandpile::{stabilize, SandpileConfig};
use burgers::word::{Letter, Word};

pub fn word(s: &str) -> Word {
    s.parse().unwrap()
}

pub fn graph(s: &str) -> MultiGraph {
    s.parse().unwrap()
}

/// Words of length `2n` filtered by a direct simulation that keeps the
/// whole stack as a vector.
pub fn naive_perfect_words(n: usize, k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for letters in (0..2 * n).map(|_| Letter::ALL.into_iter()).multi_cartesian_product() {
        if letters.iter().filter(|&&l| l == Letter::FreshOrdered).count() != k {
            continue;
        }
        let mut stack: Vec<Letter> = Vec::new();
        let mut ok = true;
        for &l in &letters {
            match l {
                Letter::HamburgerProduced | Letter::CheeseburgerProduced => stack.push(l),
                Letter::FreshOrdered => {
                    if stack.pop() != Some(Letter::CheeseburgerProduced) {
                        ok = false;
                    }
                }
                order => {
                    let want = if order == Letter::HamburgerOrdered {
                        Letter::HamburgerProduced
                    } else {
                        Letter::CheeseburgerProduced
                    };
                    match stack.iter().rposition(|&b| b == want) {
                        Some(i) => {
                            stack.remove(i);
                        }
                        None => ok = false,
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if ok && stack.is_empty() {
            out.push(Word::new(letters));
        }
    }
    out.sort();
    out
}

fn components(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = vertices;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Signed coefficients of the subset expansion
/// `Σ_A (x-1)^(κ(A)-κ(E)) (y-1)^(κ(A)+|A|-|V|)`.
pub fn tutte_by_subsets(g: &MultiGraph) -> HashMap<(usize, usize), i64> {
    let edges = g.edges();
    let v = g.vertex_count();
    let base = components(v, edges);
    let binom = |n: usize, k: usize| -> i64 { (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64) };
    let mut out: HashMap<(usize, usize), i64> = HashMap::new();
    for mask in 0u64..(1u64 << edges.len()) {
        let subset: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let kappa = components(v, &subset);
        let a = kappa - base;
        let b = kappa + subset.len() - v;
        for i in 0..=a {
            for j in 0..=b {
                let sign = if (a - i + b - j) % 2 == 0 { 1 } else { -1 };
                *out.entry((i, j)).or_default() += sign * binom(a, i) * binom(b, j);
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Recurrent configurations as the closed class of the add-and-stabilize
/// chain that contains the maximal stable configuration.
pub fn recurrent_by_reachability(g: &MultiGraph) -> BTreeSet<Vec<u64>> {
    let start = SandpileConfig::max_stable(g);
    let mut seen = HashSet::new();
    seen.insert(start.0.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for v in (0..g.vertex_count()).filter(|&v| v != g.sink()) {
            let mut next = c.clone();
            next.0[v] += 1;
            let (s, _) = stabilize(g, &next);
            if seen.insert(s.0.clone()) {
                queue.push_back(s);
            }
        }
    }
    seen.into_iter().collect()
}

fn canonical(vertices: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    (0..vertices)
        .permutations(vertices)
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap()
}

/// One representative of every isomorphism class of connected multigraphs
/// (loops allowed) with between 1 and `max_edges` edges.
pub fn connected_multigraphs(max_edges: usize) -> Vec<MultiGraph> {
    let mut out = Vec::new();
    for v in 1..=max_edges + 1 {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        let mut seen = HashSet::new();
        for e in v.saturating_sub(1).max(1)..=max_edges {
            for edges in pairs.iter().cloned().combinations_with_replacement(e) {
                if components(v, &edges) != 1 {
                    continue;
                }
                let key = canonical(v, &edges);
                if seen.insert(key.clone()) {
                    out.push(MultiGraph::new(v, key, 0).unwrap());
                }
            }
        }
    }
    out
}

/// Random connected multigraph: a random tree plus random extra edges,
/// loops included.
pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, extra: usize) -> MultiGraph {
    let mut edges: Vec<(usize, usize)> = (1..vertices).map(|v| (rng.random_range(0..v), v)).collect();
    for _ in 0..extra {
        edges.push((rng.random_range(0..vertices), rng.random_range(0..vertices)));
    }
    if vertices == 1 && edges.is_empty() {
        edges.push((0, 0));
    }
    let sink = rng.random_range(0..vertices);
    MultiGraph::new(vertices, edges, sink).unwrap()
}

/// Spanning connected edge subsets with `|V| - 1 + l` edges.
pub fn excess_by_subsets(g: &MultiGraph, l: usize) -> u64 {
    let edges = g.edges();
    let v = g.vertex_count();
    (0u64..(1u64 << edges.len()))
        .filter(|mask| mask.count_ones() as usize == v - 1 + l)
        .filter(|&mask| {
            let subset: Vec<(usize, usize)> =
                (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            components(v, &subset) == 1
        })
        .count() as u64
}

/// Small named graphs with at most ten edges.
pub fn corpus() -> Vec<(&'static str, MultiGraph)> {
    let g = |v: usize, e: &[(usize, usize)]| MultiGraph::new(v, e.to_vec(), 0).unwrap();
    vec![
        ("edge", g(2, &[(0, 1)])),
        ("loop", g(1, &[(0, 0)])),
        ("edge+loop", g(2, &[(0, 1), (1, 1)])),
        ("triangle", g(3, &[(0, 1), (1, 2), (2, 0)])),
        ("double+loop", g(2, &[(0, 1), (0, 1), (0, 0)])),
        ("theta", g(2, &[(0, 1), (0, 1), (0, 1)])),
        ("c5", g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])),
        ("k4", g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        ("k23", g(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])),
        ("k4+double+loop", g(4, &[(0, 1), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 3)])),
        ("prism", g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])),
        (
            "wheel5",
            g(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]),
        ),
    ]
}
