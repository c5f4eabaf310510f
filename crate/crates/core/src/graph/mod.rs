//! Weighted simple graphs, directed or undirected, plus the sparse
//! matrices derived from them.

mod io;
mod matrix;

pub use io::{parse_edge_list, write_edge_list};
pub use matrix::{
    adjacency_matrix, degree_matrix, hermitian_dilation, incidence_matrix, laplacian,
    pad_to_power_of_two, RectMatrix, SymmetricMatrix,
};

use crate::error::{Error, Result};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Simple graph on vertices `0..n`. Undirected edges are stored once with
/// the orientation they were inserted with.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    index: HashSet<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, directed: bool) -> Self {
        Graph {
            n,
            directed,
            edges: Vec::new(),
            index: HashSet::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn key(&self, u: usize, v: usize) -> (usize, usize) {
        if self.directed || u < v {
            (u, v)
        } else {
            (v, u)
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains(&self.key(u, v))
    }

    /// True if `u` and `v` are joined in either direction.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || (self.directed && self.has_edge(v, u))
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidGraph(format!(
                "weight {w} on ({u}, {v}) must be finite and positive"
            )));
        }
        if !self.index.insert(self.key(u, v)) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
        }
        self.edges.push(Edge { u, v, w });
        self.out_adj[u].push(v);
        self.in_adj[v].push(u);
        Ok(())
    }

    /// Inserts a unit edge unless it would be a loop or duplicate.
    pub fn add_unit_if_absent(&mut self, u: usize, v: usize) -> bool {
        u != v && !self.has_edge(u, v) && self.add_edge(u, v, 1.0).is_ok()
    }

    /// Removes the directed edge `u -> v` and inserts `v -> u` with the same
    /// weight.
    pub fn reverse_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let pos = self
            .edges
            .iter()
            .position(|e| e.u == u && e.v == v)
            .ok_or_else(|| Error::InvalidGraph(format!("no edge ({u}, {v}) to reverse")))?;
        if !self.directed {
            return Err(Error::InvalidGraph("cannot reverse an undirected edge".into()));
        }
        if self.has_edge(v, u) {
            return Err(Error::InvalidGraph(format!("edge ({v}, {u}) already present")));
        }
        let e = self.edges.remove(pos);
        self.index.remove(&(u, v));
        self.out_adj[u].retain(|&x| x != v);
        self.in_adj[v].retain(|&x| x != u);
        self.add_edge(v, u, e.w)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        if self.directed {
            self.out_adj[v].len()
        } else {
            self.degree(v)
        }
    }

    pub fn in_degree(&self, v: usize) -> usize {
        if self.directed {
            self.in_adj[v].len()
        } else {
            self.degree(v)
        }
    }

    /// Number of incident edges regardless of direction.
    pub fn degree(&self, v: usize) -> usize {
        self.out_adj[v].len() + self.in_adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.out_adj[v].iter().chain(&self.in_adj[v]).copied().collect()
    }

    /// Heads of edges leaving `v` (for undirected graphs, the edges stored
    /// with `v` first).
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.in_adj[v].is_empty()).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.out_adj[v].is_empty()).collect()
    }

    /// Any pair with both `u -> v` and `v -> u` present.
    pub fn has_bidirected_pair(&self) -> bool {
        self.directed && self.edges.iter().any(|e| self.index.contains(&(e.v, e.u)))
    }

    pub fn set_weight(&mut self, idx: usize, w: f64) -> Result<()> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidGraph(format!("weight {w} must be finite and positive")));
        }
        self.edges[idx].w = w;
        Ok(())
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.out_adj[v].iter().chain(&self.in_adj[v]) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Copy with the given vertices removed and the rest relabelled in order.
    pub fn without_vertices(&self, drop: &HashSet<usize>) -> Graph {
        let mut map = vec![usize::MAX; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !drop.contains(&v) {
                map[v] = next;
                next += 1;
            }
        }
        let mut g = Graph::new(next, self.directed);
        for e in &self.edges {
            if map[e.u] != usize::MAX && map[e.v] != usize::MAX {
                g.add_edge(map[e.u], map[e.v], e.w).expect("relabelled edge is valid");
            }
        }
        g
    }
}
