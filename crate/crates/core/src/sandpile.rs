//! Abelian sandpiles on multigraphs.
//!
//! A configuration stores one grain count per vertex; the sink entry is
//! ignored and its mass is taken to be `deg(sink)`. Toppling `v` sends one
//! grain along every edge end at `v`, so a loop returns two grains to `v`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Default bound on the number of stable configurations enumerated.
pub const DEFAULT_STATE_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SandpileConfig(pub Vec<u64>);

impl SandpileConfig {
    pub fn zero(g: &MultiGraph) -> Self {
        SandpileConfig(vec![0; g.vertex_count()])
    }

    /// `deg(v) - 1` everywhere; stable and recurrent.
    pub fn max_stable(g: &MultiGraph) -> Self {
        let mut c: Vec<u64> = (0..g.vertex_count()).map(|v| u64::from(g.degree(v)) - 1).collect();
        c[g.sink()] = 0;
        SandpileConfig(c)
    }

    pub fn grains(&self) -> &[u64] {
        &self.0
    }

    /// `|σ|`, counting `deg(sink)` at the sink.
    pub fn mass(&self, g: &MultiGraph) -> u64 {
        let s = g.sink();
        self.0
            .iter()
            .enumerate()
            .map(|(v, &x)| if v == s { u64::from(g.degree(s)) } else { x })
            .sum()
    }

    /// `|σ| - |E|`.
    pub fn level(&self, g: &MultiGraph) -> i64 {
        self.mass(g) as i64 - g.edge_count() as i64
    }

    pub fn is_stable(&self, g: &MultiGraph) -> bool {
        (0..g.vertex_count()).all(|v| v == g.sink() || self.0[v] < u64::from(g.degree(v)))
    }
}

/// Topples `v` once, regardless of stability.
pub fn topple(g: &MultiGraph, config: &mut SandpileConfig, v: usize) {
    let out = u64::from(g.degree(v) - g.multiplicity(v, v));
    config.0[v] -= out;
    for &(w, m) in g.neighbours(v) {
        if w != g.sink() {
            config.0[w] += u64::from(m);
        }
    }
}

/// Stable configuration reached from `config`, with per-vertex toppling
/// counts.
pub fn stabilize(g: &MultiGraph, config: &SandpileConfig) -> (SandpileConfig, Vec<u64>) {
    let sink = g.sink();
    let mut c = config.clone();
    c.0[sink] = 0;
    let mut topplings = vec![0u64; g.vertex_count()];
    let mut queued = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for v in 0..g.vertex_count() {
        if v != sink && c.0[v] >= u64::from(g.degree(v)) {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let deg = u64::from(g.degree(v));
        if c.0[v] < deg {
            continue;
        }
        // Each toppling loses the non-loop edge ends only.
        let net = deg - u64::from(g.multiplicity(v, v));
        let times = (c.0[v] - deg) / net + 1;
        c.0[v] -= times * net;
        topplings[v] += times;
        for &(w, m) in g.neighbours(v) {
            if w == sink {
                continue;
            }
            c.0[w] += times * u64::from(m);
            if !queued[w] && c.0[w] >= u64::from(g.degree(w)) {
                queued[w] = true;
                queue.push_back(w);
            }
        }
    }
    (c, topplings)
}

/// Burning test. The sink starts burnt; an unburnt vertex burns once its
/// grains reach the number of edge ends leading to unburnt vertices,
/// including both ends of each of its loops.
pub fn is_recurrent(g: &MultiGraph, config: &SandpileConfig) -> Result<bool> {
    if !config.is_stable(g) {
        return Err(Error::InvalidInput("burning test needs a stable configuration".into()));
    }
    let sink = g.sink();
    let mut need: Vec<u64> = (0..g.vertex_count())
        .map(|v| u64::from(g.degree(v) - g.multiplicity(v, sink)))
        .collect();
    let mut burnt = vec![false; g.vertex_count()];
    burnt[sink] = true;
    let mut fire = vec![sink];
    let mut count = 1;
    for v in 0..g.vertex_count() {
        if v != sink && config.0[v] >= need[v] {
            burnt[v] = true;
            fire.push(v);
            count += 1;
        }
    }
    // `need` already discounts the sink, so only real spreads remain.
    fire.retain(|&v| v != sink);
    while let Some(w) = fire.pop() {
        for &(v, m) in g.neighbours(w) {
            if burnt[v] {
                continue;
            }
            need[v] -= u64::from(m);
            if config.0[v] >= need[v] {
                burnt[v] = true;
                fire.push(v);
                count += 1;
            }
        }
    }
    Ok(count == g.vertex_count())
}

fn stable_state_count(g: &MultiGraph) -> u128 {
    (0..g.vertex_count())
        .filter(|&v| v != g.sink())
        .map(|v| u128::from(g.degree(v)))
        .product()
}

/// All recurrent configurations with their levels.
pub fn enumerate_recurrent(g: &MultiGraph) -> Result<Vec<(SandpileConfig, i64)>> {
    enumerate_recurrent_with_cap(g, DEFAULT_STATE_CAP)
}

pub fn enumerate_recurrent_with_cap(g: &MultiGraph, cap: u64) -> Result<Vec<(SandpileConfig, i64)>> {
    let states = stable_state_count(g);
    if states > u128::from(cap) {
        return Err(Error::ResourceCap(format!("{states} stable configurations exceed the cap of {cap}")));
    }
    let sink = g.sink();
    let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != sink).collect();
    let mut c = SandpileConfig::zero(g);
    let mut out = Vec::new();
    'outer: loop {
        if is_recurrent(g, &c)? {
            let level = c.level(g);
            out.push((c.clone(), level));
        }
        for &v in &free {
            c.0[v] += 1;
            if c.0[v] < u64::from(g.degree(v)) {
                continue 'outer;
            }
            c.0[v] = 0;
        }
        break;
    }
    Ok(out)
}

/// `Σ y^level` over recurrent configurations, as a coefficient list.
pub fn level_generating_function(g: &MultiGraph) -> Result<Vec<u64>> {
    let mut coeffs = vec![0u64; g.cyclomatic_number() + 1];
    for (_, level) in enumerate_recurrent(g)? {
        let l = usize::try_from(level)
            .ok()
            .filter(|&l| l < coeffs.len())
            .ok_or_else(|| Error::Invariant(format!("level {level} outside the Biggs range")))?;
        coeffs[l] += 1;
    }
    Ok(coeffs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Densities {
    #[serde(serialize_with = "crate::stats::ser_rational")]
    pub mean_mass: BigRational,
    #[serde(serialize_with = "crate::stats::ser_rational")]
    pub rho_e: BigRational,
    #[serde(serialize_with = "crate::stats::ser_rational")]
    pub rho_v: BigRational,
    pub recurrent: usize,
}

/// Mean mass of a uniform recurrent configuration, normalised by the edge
/// and vertex counts.
pub fn densities(g: &MultiGraph) -> Result<Densities> {
    let rec = enumerate_recurrent(g)?;
    let total: u64 = rec.iter().map(|(c, _)| c.mass(g)).sum();
    let mean_mass = BigRational::new(BigInt::from(total), BigInt::from(rec.len()));
    let rho_e = &mean_mass / BigInt::from(g.edge_count());
    let rho_v = &mean_mass / BigInt::from(g.vertex_count());
    Ok(Densities { mean_mass, rho_e, rho_v, recurrent: rec.len() })
}

/// Markov chain that adds a grain at a uniform non-sink vertex and
/// stabilizes. It starts from the maximal stable configuration, which is
/// recurrent, so every state it visits is recurrent.
#[derive(Clone, Debug)]
pub struct SandpileChain<'g> {
    graph: &'g MultiGraph,
    state: SandpileConfig,
    free: Vec<usize>,
}

impl<'g> SandpileChain<'g> {
    pub fn new<R: Rng + ?Sized>(graph: &'g MultiGraph, burn_in: u64, rng: &mut R) -> Self {
        let free = (0..graph.vertex_count()).filter(|&v| v != graph.sink()).collect();
        let mut chain = SandpileChain { graph, state: SandpileConfig::max_stable(graph), free };
        for _ in 0..burn_in {
            chain.step(rng);
        }
        chain
    }

    pub fn state(&self) -> &SandpileConfig {
        &self.state
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &SandpileConfig {
        if !self.free.is_empty() {
            let v = self.free[rng.random_range(0..self.free.len())];
            self.state.0[v] += 1;
            self.state = stabilize(self.graph, &self.state).0;
        }
        &self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::RandomSource;

    fn graph(s: &str) -> MultiGraph {
        s.parse().unwrap()
    }

    fn k3() -> MultiGraph {
        graph("3 3 0\n0 1\n1 2\n2 0\n")
    }

    #[test]
    fn stabilize_examples() {
        let path = graph("2 1 0\n0 1\n");
        let (c, t) = stabilize(&path, &SandpileConfig(vec![0, 3]));
        assert_eq!((c.0[1], t[1]), (0, 3));

        let (c, _) = stabilize(&k3(), &SandpileConfig(vec![0, 2, 2]));
        assert_eq!(c.0[1..], [1, 1]);

        let stable = SandpileConfig(vec![0, 1, 0]);
        assert_eq!(stabilize(&k3(), &stable).0, stable);
    }

    #[test]
    fn loop_returns_grains() {
        let g = graph("2 2 0\n0 1\n1 1\n");
        let (c, t) = stabilize(&g, &SandpileConfig(vec![0, 5]));
        assert_eq!((c.0[1], t[1]), (2, 3));
    }

    #[test]
    fn burning_examples() {
        let g = k3();
        assert!(is_recurrent(&g, &SandpileConfig(vec![0, 1, 1])).unwrap());
        assert!(!is_recurrent(&g, &SandpileConfig(vec![0, 0, 0])).unwrap());
        assert!(is_recurrent(&g, &SandpileConfig(vec![0, 2, 2])).is_err());

        let double = graph("2 2 0\n0 1\n0 1\n");
        assert!(is_recurrent(&double, &SandpileConfig(vec![0, 0])).unwrap());
        assert!(is_recurrent(&double, &SandpileConfig(vec![0, 1])).unwrap());

        let looped = graph("2 2 0\n0 1\n1 1\n");
        let rec: Vec<u64> = enumerate_recurrent(&looped).unwrap().iter().map(|(c, _)| c.0[1]).collect();
        assert_eq!(rec, vec![2]);
    }

    #[test]
    fn enumeration_examples() {
        let mut levels: Vec<i64> = enumerate_recurrent(&k3()).unwrap().into_iter().map(|x| x.1).collect();
        levels.sort();
        assert_eq!(levels, vec![0, 0, 1]);
        assert_eq!(level_generating_function(&graph("2 2 0\n0 1\n0 1\n")).unwrap(), vec![1, 1]);
        assert_eq!(level_generating_function(&graph("3 2 0\n0 1\n1 2\n")).unwrap(), vec![1]);
        assert_eq!(level_generating_function(&graph("1 1 0\n0 0\n")).unwrap(), vec![0, 1]);
        assert_eq!(level_generating_function(&graph("2 1 1\n0 1\n")).unwrap(), vec![1]);
    }

    #[test]
    fn k3_densities() {
        let d = densities(&k3()).unwrap();
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        // Masses 3, 3, 4 for levels 0, 0, 1.
        assert_eq!(d.mean_mass, r(10, 3));
        assert_eq!(d.rho_e, r(10, 9));
        assert_eq!(d.rho_v, r(10, 9));
        let bridge = densities(&graph("2 1 0\n0 1\n")).unwrap();
        assert_eq!(bridge.rho_e, r(1, 1));
    }

    #[test]
    fn state_cap() {
        let g = k3();
        assert!(matches!(enumerate_recurrent_with_cap(&g, 3), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn chain_level_frequencies_on_k3() {
        let g = k3();
        let mut rng = RandomSource::new(1);
        let mut chain = SandpileChain::new(&g, 100, &mut rng);
        let steps = 60_000;
        let mut top = 0;
        for _ in 0..steps {
            let c = chain.step(&mut rng);
            assert!(is_recurrent(&g, c).unwrap());
            if c.level(&g) == 1 {
                top += 1;
            }
        }
        let f = top as f64 / steps as f64;
        assert!((f - 1.0 / 3.0).abs() < 0.02, "{f}");

        let bridge = graph("2 1 0\n0 1\n");
        let mut chain = SandpileChain::new(&bridge, 10, &mut rng);
        assert_eq!(chain.step(&mut rng).0, vec![0, 0]);
    }
}
