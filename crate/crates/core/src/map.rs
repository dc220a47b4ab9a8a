//! Rooted planar maps as rotation systems, and the map built from a word.
//!
//! Darts `2i` and `2i + 1` are the two halves of edge `i`. The vertex
//! rotation gives the next dart counterclockwise around the same vertex;
//! faces are the orbits of `rotation ∘ involution`.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::word::{classify_f_matches, Letter, MatchPairing, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialMap {
    rotation: Vec<usize>,
    root_dart: usize,
    vertex_of: Vec<usize>,
    vertex_count: usize,
}

/// Partition of darts into orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbits {
    /// Orbit id of each dart.
    pub id: Vec<usize>,
    pub count: usize,
}

fn orbits(n: usize, next: impl Fn(usize) -> usize) -> Orbits {
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if id[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while id[d] == usize::MAX {
            id[d] = count;
            d = next(d);
        }
        count += 1;
    }
    Orbits { id, count }
}

impl CombinatorialMap {
    /// Checks that `rotation` is a permutation of the darts and that the
    /// map is connected.
    pub fn new(rotation: Vec<usize>, root_dart: usize) -> Result<Self> {
        let n = rotation.len();
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidInput(format!("{n} darts do not form a map")));
        }
        if root_dart >= n {
            return Err(Error::InvalidInput(format!("root dart {root_dart} out of range")));
        }
        let mut seen = vec![false; n];
        for &d in &rotation {
            if d >= n || std::mem::replace(&mut seen[d], true) {
                return Err(Error::InvalidInput("rotation is not a permutation".into()));
            }
        }
        let vertices = orbits(n, |d| rotation[d]);
        let map = CombinatorialMap {
            rotation,
            root_dart,
            vertex_of: vertices.id,
            vertex_count: vertices.count,
        };
        let mut uf = UnionFind::new(map.vertex_count);
        for e in 0..map.n_edges() {
            uf.union(map.vertex_of[2 * e], map.vertex_of[2 * e + 1]);
        }
        let root = uf.find(0);
        if (0..map.vertex_count).any(|v| uf.find(v) != root) {
            return Err(Error::InvalidInput("map is not connected".into()));
        }
        Ok(map)
    }

    pub fn n_edges(&self) -> usize {
        self.rotation.len() / 2
    }

    pub fn n_darts(&self) -> usize {
        self.rotation.len()
    }

    pub fn root_dart(&self) -> usize {
        self.root_dart
    }

    pub fn rotation(&self) -> &[usize] {
        &self.rotation
    }

    pub fn involution(d: usize) -> usize {
        d ^ 1
    }

    pub fn face_successor(&self, d: usize) -> usize {
        self.rotation[d ^ 1]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertex_of(&self, dart: usize) -> usize {
        self.vertex_of[dart]
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        (self.vertex_of[2 * edge], self.vertex_of[2 * edge + 1])
    }

    pub fn faces(&self) -> Orbits {
        orbits(self.n_darts(), |d| self.face_successor(d))
    }

    pub fn face_count(&self) -> usize {
        self.faces().count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.n_edges() as i64 + self.face_count() as i64
    }

    /// Face that contains the root dart in its boundary walk.
    pub fn outer_face(&self) -> usize {
        self.faces().id[self.root_dart]
    }

    /// Components of the spanning subgraph with edges `subset`.
    pub fn subgraph_components(&self, subset: &[bool]) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut count = self.vertex_count;
        for e in (0..self.n_edges()).filter(|&e| subset[e]) {
            let (a, b) = self.endpoints(e);
            if uf.union(a, b) {
                count -= 1;
            }
        }
        count
    }

    /// Components of the dual subgraph spanned by the duals of the edges
    /// outside `subset`.
    pub fn dual_components(&self, subset: &[bool]) -> usize {
        let faces = self.faces();
        let mut uf = UnionFind::new(faces.count);
        let mut count = faces.count;
        for e in (0..self.n_edges()).filter(|&e| !subset[e]) {
            if uf.union(faces.id[2 * e], faces.id[2 * e + 1]) {
                count -= 1;
            }
        }
        count
    }

    pub fn to_multigraph(&self, sink: usize) -> Result<MultiGraph> {
        let edges = (0..self.n_edges()).map(|e| self.endpoints(e)).collect();
        MultiGraph::new(self.vertex_count, edges, sink)
    }
}

/// Distinguished edge set of a map built from a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FkConfig {
    /// Edges from hamburger pairs.
    pub tree: Vec<bool>,
    /// Edges from fresh orders matched to cheeseburgers.
    pub extra: Vec<bool>,
}

impl FkConfig {
    pub fn contains(&self, edge: usize) -> bool {
        self.tree[edge] || self.extra[edge]
    }

    pub fn members(&self) -> Vec<bool> {
        self.tree.iter().zip(&self.extra).map(|(a, b)| a | b).collect()
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.tree.len()).filter(|&e| self.contains(e)).collect()
    }

    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.tree.len()).filter(|&e| self.tree[e]).collect()
    }

    pub fn len(&self) -> usize {
        self.edges().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MapWithSubgraph {
    pub map: CombinatorialMap,
    pub config: FkConfig,
    pub order: usize,
    pub k: usize,
    /// Hamburgers in the source word.
    pub hamburgers: usize,
}

/// Serialized form of a built map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub n_edges: usize,
    pub root_dart: usize,
    pub rotation: Vec<usize>,
    pub fk_edges: Vec<usize>,
    pub tree_edges: Vec<usize>,
}

impl MapWithSubgraph {
    pub fn to_json(&self) -> MapJson {
        MapJson {
            n_edges: self.map.n_edges(),
            root_dart: self.map.root_dart(),
            rotation: self.map.rotation().to_vec(),
            fk_edges: self.config.edges(),
            tree_edges: self.config.tree_edges(),
        }
    }

    pub fn subgraph_components(&self) -> usize {
        self.map.subgraph_components(&self.config.members())
    }

    pub fn dual_components(&self) -> usize {
        self.map.dual_components(&self.config.members())
    }

    /// Checks Euler's formula, `|V| = J + 1` and bijection properties 1-3.
    pub fn check_invariants(&self, word: &Word) -> Result<()> {
        let fail = |what: &str| Err(Error::Invariant(format!("{what} fails for {word}")));
        if self.map.euler_characteristic() != 2 {
            return fail("Euler formula");
        }
        if self.map.vertex_count() != self.hamburgers + 1 {
            return fail("|V| = J + 1");
        }
        let h_orders = word.count(Letter::HamburgerOrdered);
        if self.config.len() != h_orders + self.k {
            return fail("edge count of E'");
        }
        if self.subgraph_components() != 1 {
            return fail("connectivity of E'");
        }
        if self.dual_components() != 1 + self.k {
            return fail("dual component count");
        }
        Ok(())
    }
}

/// Builds the map and edge subset encoded by a perfect word whose fresh
/// orders all match cheeseburgers.
///
/// Hamburger pairs form a plane tree explored in contour order; every
/// cheeseburger pair joins the two corners at which its letters are read.
pub fn build_map(word: &Word, pairing: &MatchPairing) -> Result<MapWithSubgraph> {
    let (k, ham_fresh) = classify_f_matches(pairing);
    if ham_fresh > 0 {
        return Err(Error::InvalidInput(format!(
            "{ham_fresh} fresh orders are fulfilled by hamburgers"
        )));
    }
    let letters = word.letters();
    let n = word.order();
    let mut edge_at = vec![usize::MAX; letters.len()];
    let mut corners: Vec<Vec<usize>> = vec![Vec::new()];
    let mut path = vec![0usize];
    let mut tree = vec![false; n];
    let mut extra = vec![false; n];
    let mut next_edge = 0;
    for (t, &l) in letters.iter().enumerate() {
        let here = *path.last().unwrap();
        match l {
            Letter::HamburgerProduced | Letter::CheeseburgerProduced => {
                let e = next_edge;
                next_edge += 1;
                edge_at[t] = e;
                corners[here].push(2 * e);
                if l == Letter::HamburgerProduced {
                    tree[e] = true;
                    corners.push(vec![2 * e + 1]);
                    path.push(corners.len() - 1);
                }
            }
            Letter::HamburgerOrdered => {
                if path.len() < 2 {
                    return Err(Error::Invariant(format!("contour leaves the root at {t}")));
                }
                path.pop();
            }
            Letter::CheeseburgerOrdered | Letter::FreshOrdered => {
                let e = edge_at[pairing.partner(t)];
                corners[here].push(2 * e + 1);
                if l == Letter::FreshOrdered {
                    extra[e] = true;
                }
            }
        }
    }
    if next_edge != n {
        return Err(Error::Invariant(format!("{next_edge} edges for order {n}")));
    }
    let mut rotation = vec![usize::MAX; 2 * n];
    for list in &corners {
        for (i, &d) in list.iter().enumerate() {
            rotation[d] = list[(i + 1) % list.len()];
        }
    }
    let map = CombinatorialMap::new(rotation, 0)?;
    Ok(MapWithSubgraph {
        map,
        config: FkConfig { tree, extra },
        order: n,
        k,
        hamburgers: word.count(Letter::HamburgerProduced),
    })
}

/// Validates `word` and builds its map.
pub fn build_map_from_word(word: &Word) -> Result<MapWithSubgraph> {
    let pairing = crate::word::validate(word)?;
    build_map(word, &pairing)
}

/// Length and area of the unique cycle of a spanning unicycle.
pub fn unicycle_geometry(mws: &MapWithSubgraph) -> Result<(usize, usize)> {
    let map = &mws.map;
    let members = mws.config.members();
    let v = map.vertex_count();
    if members.iter().filter(|&&b| b).count() != v || mws.subgraph_components() != 1 {
        return Err(Error::InvalidInput("edge subset is not a spanning unicycle".into()));
    }

    let mut degree = vec![0usize; v];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); v];
    for e in (0..map.n_edges()).filter(|&e| members[e]) {
        let (a, b) = map.endpoints(e);
        degree[a] += 1;
        degree[b] += 1;
        incident[a].push(e);
        if a != b {
            incident[b].push(e);
        }
    }
    let mut on_cycle = members.clone();
    let mut leaves: Vec<usize> = (0..v).filter(|&x| degree[x] == 1).collect();
    while let Some(x) = leaves.pop() {
        for &e in &incident[x] {
            if !on_cycle[e] {
                continue;
            }
            on_cycle[e] = false;
            let (a, b) = map.endpoints(e);
            let other = if a == x { b } else { a };
            degree[x] -= 1;
            degree[other] -= 1;
            if degree[other] == 1 {
                leaves.push(other);
            }
        }
    }
    let length = on_cycle.iter().filter(|&&b| b).count();
    if length == 0 {
        return Err(Error::Invariant("no cycle left after stripping leaves".into()));
    }

    let faces = map.faces();
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); faces.count];
    for e in (0..map.n_edges()).filter(|&e| !on_cycle[e]) {
        let (f, g) = (faces.id[2 * e], faces.id[2 * e + 1]);
        adjacent[f].push(g);
        adjacent[g].push(f);
    }
    let mut outside = vec![false; faces.count];
    let outer = map.outer_face();
    outside[outer] = true;
    let mut queue = std::collections::VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        for &g in &adjacent[f] {
            if !std::mem::replace(&mut outside[g], true) {
                queue.push_back(g);
            }
        }
    }
    let inside_edges = (0..map.n_edges())
        .filter(|&e| !on_cycle[e] && !outside[faces.id[2 * e]] && !outside[faces.id[2 * e + 1]])
        .count();
    Ok((length, 2 * inside_edges + length))
}
