//! Finite connected multigraphs with a designated sink.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    sink: usize,
    /// `(neighbour, multiplicity)` for every distinct neighbour other than
    /// the vertex itself.
    neighbours: Vec<Vec<(usize, u32)>>,
    loops: Vec<u32>,
}

impl MultiGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, sink: usize) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidInput("graph has no vertices".into()));
        }
        if sink >= vertices {
            return Err(Error::InvalidInput(format!("sink {sink} out of range")));
        }
        let mut loops = vec![0u32; vertices];
        let mut counts = vec![std::collections::BTreeMap::<usize, u32>::new(); vertices];
        let mut uf = UnionFind::new(vertices);
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices {
                return Err(Error::InvalidInput(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                loops[a] += 1;
            } else {
                *counts[a].entry(b).or_default() += 1;
                *counts[b].entry(a).or_default() += 1;
                uf.union(a, b);
            }
        }
        let root = uf.find(0);
        if (0..vertices).any(|v| uf.find(v) != root) {
            return Err(Error::InvalidInput("graph is not connected".into()));
        }
        let neighbours: Vec<Vec<(usize, u32)>> = counts.into_iter().map(|m| m.into_iter().collect()).collect();
        let graph = MultiGraph { vertices, edges, sink, neighbours, loops };
        if let Some(v) = (0..vertices).find(|&v| graph.degree(v) == 0) {
            return Err(Error::InvalidInput(format!("vertex {v} has degree 0")));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn with_sink(&self, sink: usize) -> Result<Self> {
        MultiGraph::new(self.vertices, self.edges.clone(), sink)
    }

    /// Loops count twice.
    pub fn degree(&self, v: usize) -> u32 {
        2 * self.loops[v] + self.neighbours[v].iter().map(|&(_, m)| m).sum::<u32>()
    }

    pub fn loops_at(&self, v: usize) -> u32 {
        self.loops[v]
    }

    /// Distinct neighbours other than `v` itself, with multiplicities.
    pub fn neighbours(&self, v: usize) -> &[(usize, u32)] {
        &self.neighbours[v]
    }

    /// `c(v, w)`; for `v == w` this is twice the number of loops.
    pub fn multiplicity(&self, v: usize, w: usize) -> u32 {
        if v == w {
            2 * self.loops[v]
        } else {
            self.neighbours[v]
                .iter()
                .find(|&&(x, _)| x == w)
                .map_or(0, |&(_, m)| m)
        }
    }

    /// `|E| - |V| + 1`.
    pub fn cyclomatic_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }
}

impl FromStr for MultiGraph {
    type Err = Error;

    /// First line `V E sink`, then `E` lines `u v`. Lines starting with `#`
    /// are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |what: &str| Error::InvalidInput(format!("graph file: {what}"));
        let numbers = |line: &str| -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(&format!("bad number {t:?}"))))
                .collect()
        };
        let header = numbers(lines.next().ok_or_else(|| bad("empty"))?)?;
        let [v, e, sink] = header[..] else {
            return Err(bad("header must be `V E sink`"));
        };
        let mut edges = Vec::with_capacity(e);
        for line in lines {
            match numbers(line)?[..] {
                [a, b] => edges.push((a, b)),
                _ => return Err(bad(&format!("edge line {line:?}"))),
            }
        }
        if edges.len() != e {
            return Err(bad(&format!("expected {e} edges, found {}", edges.len())));
        }
        MultiGraph::new(v, edges, sink)
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.vertices, self.edges.len(), self.sink)?;
        for (a, b) in &self.edges {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}
