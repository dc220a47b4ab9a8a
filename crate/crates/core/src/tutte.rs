//! Tutte polynomials of multigraphs by deletion-contraction.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Largest edge count accepted by [`tutte`]. Every coefficient is at most
/// `T(1, 1) <= 2^|E|`, so `u64` coefficients cannot overflow below 64.
pub const DEFAULT_EDGE_CAP: usize = 48;

/// Polynomial in `x` and `y` with `coeffs[i][j]` the coefficient of
/// `x^i y^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BivariatePoly {
    coeffs: Vec<Vec<u64>>,
}

impl BivariatePoly {
    pub fn one() -> Self {
        Self::monomial(0, 0)
    }

    pub fn monomial(i: usize, j: usize) -> Self {
        let mut p = BivariatePoly::default();
        p.add_term(i, j, 1);
        p
    }

    pub fn from_coeffs(coeffs: Vec<Vec<u64>>) -> Self {
        let mut p = BivariatePoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        for row in &mut self.coeffs {
            while row.last() == Some(&0) {
                row.pop();
            }
        }
        while self.coeffs.last().is_some_and(|r| r.is_empty()) {
            self.coeffs.pop();
        }
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: u64) {
        if c == 0 {
            return;
        }
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, Vec::new());
        }
        let row = &mut self.coeffs[i];
        if row.len() <= j {
            row.resize(j + 1, 0);
        }
        row[j] += c;
    }

    pub fn coeff(&self, i: usize, j: usize) -> u64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&mut self, other: &BivariatePoly) {
        for (i, row) in other.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                self.add_term(i, j, c);
            }
        }
    }

    /// Multiplies by `x^a y^b`.
    fn shifted(&self, a: usize, b: usize) -> BivariatePoly {
        let mut p = BivariatePoly::default();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                p.add_term(i + a, j + b, c);
            }
        }
        p
    }

    /// Coefficients of `T(1, y)`.
    pub fn at_x_one(&self) -> Vec<u64> {
        let width = self.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![0u64; width];
        for row in &self.coeffs {
            for (j, &c) in row.iter().enumerate() {
                out[j] += c;
            }
        }
        out
    }

    pub fn eval(&self, x: u64, y: u64) -> BigUint {
        let mut total = BigUint::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                total += BigUint::from(c) * BigUint::from(x).pow(i as u32) * BigUint::from(y).pow(j as u32);
            }
        }
        total
    }
}

/// Loopless connected multigraph on vertices `0..n`, as a multiset of
/// unordered pairs `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Reduced {
    n: usize,
    edges: Vec<(u8, u8, u32)>,
}

impl Reduced {
    fn from_map(n: usize, classes: &BTreeMap<(usize, usize), u32>) -> Self {
        // Relabel by descending degree so that isomorphic inputs built in
        // different orders often share a memo entry.
        let mut degree = vec![0u32; n];
        for (&(a, b), &m) in classes {
            degree[a] += m;
            degree[b] += m;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
        let mut label = vec![0u8; n];
        for (new, &old) in order.iter().enumerate() {
            label[old] = new as u8;
        }
        let mut edges: Vec<(u8, u8, u32)> = classes
            .iter()
            .map(|(&(a, b), &m)| {
                let (x, y) = (label[a], label[b]);
                (x.min(y), x.max(y), m)
            })
            .collect();
        edges.sort_unstable();
        Reduced { n, edges }
    }

    fn classes(&self) -> BTreeMap<(usize, usize), u32> {
        self.edges.iter().map(|&(a, b, m)| ((a as usize, b as usize), m)).collect()
    }

    fn connected_without(&self, skip: usize) -> bool {
        let mut uf = UnionFind::new(self.n);
        let mut parts = self.n;
        for (idx, &(a, b, _)) in self.edges.iter().enumerate() {
            if idx != skip && uf.union(a as usize, b as usize) {
                parts -= 1;
            }
        }
        parts == 1
    }
}

fn contract(classes: &BTreeMap<(usize, usize), u32>, n: usize, u: usize, v: usize) -> (usize, BTreeMap<(usize, usize), u32>) {
    // Merge v into u, then move the last vertex into v's slot.
    let last = n - 1;
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x == last { v } else { x }
    };
    let mut out = BTreeMap::new();
    for (&(a, b), &m) in classes {
        if (a, b) == (u.min(v), u.max(v)) {
            continue;
        }
        let (x, y) = (relabel(a), relabel(b));
        *out.entry((x.min(y), x.max(y))).or_insert(0) += m;
    }
    (n - 1, out)
}

fn tutte_reduced(g: Reduced, memo: &mut HashMap<Reduced, BivariatePoly>) -> BivariatePoly {
    if g.edges.is_empty() {
        return BivariatePoly::one();
    }
    if let Some(p) = memo.get(&g) {
        return p.clone();
    }
    let cut = (0..g.edges.len()).find(|&i| !g.connected_without(i));
    let pick = cut.unwrap_or_else(|| {
        (0..g.edges.len())
            .max_by_key(|&i| (g.edges[i].2, std::cmp::Reverse(i)))
            .unwrap()
    });
    let (a, b, m) = g.edges[pick];
    let classes = g.classes();
    let (n2, contracted) = contract(&classes, g.n, a as usize, b as usize);
    let t_contract = tutte_reduced(Reduced::from_map(n2, &contracted), memo);
    let result = if cut.is_some() {
        // (x + y + ... + y^(m-1)) T(G / uv)
        let mut r = t_contract.shifted(1, 0);
        for j in 1..m as usize {
            r.add(&t_contract.shifted(0, j));
        }
        r
    } else {
        let mut deleted = classes.clone();
        deleted.remove(&(a as usize, b as usize));
        let mut r = tutte_reduced(Reduced::from_map(g.n, &deleted), memo);
        for j in 0..m as usize {
            r.add(&t_contract.shifted(0, j));
        }
        r
    };
    memo.insert(g, result.clone());
    result
}

/// Tutte polynomial of a connected multigraph.
pub fn tutte(g: &MultiGraph) -> Result<BivariatePoly> {
    tutte_with_cap(g, DEFAULT_EDGE_CAP)
}

pub fn tutte_with_cap(g: &MultiGraph, cap: usize) -> Result<BivariatePoly> {
    if g.edge_count() > cap.min(63) {
        return Err(Error::ResourceCap(format!("{} edges exceed the cap of {cap}", g.edge_count())));
    }
    if g.vertex_count() > 255 {
        return Err(Error::ResourceCap("more than 255 vertices".into()));
    }
    let mut loops = 0;
    let mut classes = BTreeMap::new();
    for &(a, b) in g.edges() {
        if a == b {
            loops += 1;
        } else {
            *classes.entry((a.min(b), a.max(b))).or_insert(0u32) += 1;
        }
    }
    let mut memo = HashMap::new();
    let t = tutte_reduced(Reduced::from_map(g.vertex_count(), &classes), &mut memo);
    Ok(t.shifted(0, loops))
}

/// Coefficients of `T(1, y)`.
pub fn tutte_eval_1_y(g: &MultiGraph) -> Result<Vec<u64>> {
    Ok(tutte(g)?.at_x_one())
}

/// `|U_l|`, the number of spanning connected subgraphs with `|V| - 1 + l`
/// edges, from `T(1, y) = Σ_l |U_l| (y - 1)^l`.
pub fn excess_counts(g: &MultiGraph) -> Result<Vec<u64>> {
    let c = tutte_eval_1_y(g)?;
    Ok(excess_from_level_poly(&c))
}

pub fn excess_from_level_poly(c: &[u64]) -> Vec<u64> {
    (0..c.len())
        .map(|l| (l..c.len()).map(|i| c[i] * binomial_u64(i as u64, l as u64)).sum())
        .collect()
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Spanning trees by the matrix-tree theorem, using fraction-free
/// elimination on the Laplacian with the sink row and column removed.
pub fn spanning_tree_count_oracle(g: &MultiGraph) -> BigUint {
    let n = g.vertex_count();
    let keep: Vec<usize> = (0..n).filter(|&v| v != g.sink()).collect();
    let size = keep.len();
    if size == 0 {
        return BigUint::from(1u32);
    }
    let mut a: Vec<Vec<BigInt>> = keep
        .iter()
        .map(|&v| {
            keep.iter()
                .map(|&w| {
                    if v == w {
                        BigInt::from(g.degree(v) - g.multiplicity(v, v))
                    } else {
                        -BigInt::from(g.multiplicity(v, w))
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigUint::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det: BigInt = &a[size - 1][size - 1] * BigInt::from(sign);
    det.abs().to_biguint().unwrap()
}
