//! Structural parameters of an instance: primal and incidence graphs,
//! tree decompositions, exact and heuristic treewidth.

mod treewidth;

pub use treewidth::{treewidth_exact, treewidth_heuristic, TREEWIDTH_EXACT_MAX_VERTICES};

use crate::error::{Error, Result};
use crate::instance::CspInstance;
use std::collections::BTreeSet;

/// An undirected simple graph: no loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    num_vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(num_vertices: usize) -> Self {
        SimpleGraph {
            num_vertices,
            edges: BTreeSet::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::Invalid(format!("loop at vertex {}", u)));
        }
        if u >= self.num_vertices || v >= self.num_vertices {
            return Err(Error::Invalid(format!(
                "edge ({}, {}) out of vertex range {}",
                u, v, self.num_vertices
            )));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Adjacency sets, one per vertex.
    pub fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj
    }
}

/// A tree decomposition: bags of vertices plus tree edges over bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Width = maximum bag size minus one (0 for degenerate empty bags).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// The single-bag decomposition containing every vertex.
    pub fn trivial(num_vertices: usize) -> Self {
        TreeDecomposition {
            bags: vec![(0..num_vertices).collect()],
            tree_edges: Vec::new(),
        }
    }
}

/// Primal graph: one vertex per variable, an edge wherever two variables
/// occur together in a constraint scope.
pub fn primal_graph(instance: &CspInstance) -> SimpleGraph {
    let mut g = SimpleGraph::new(instance.num_vars());
    for c in &instance.constraints {
        for i in 0..c.scope.len() {
            for j in i + 1..c.scope.len() {
                g.add_edge(c.scope[i], c.scope[j]).expect("valid instance");
            }
        }
    }
    g
}

/// Incidence graph: bipartite on variables (ids `0..n`) and constraints
/// (ids `n..n+m`), with an edge wherever a variable occurs in a scope.
pub fn incidence_graph(instance: &CspInstance) -> SimpleGraph {
    let n = instance.num_vars();
    let mut g = SimpleGraph::new(n + instance.constraints.len());
    for (ci, c) in instance.constraints.iter().enumerate() {
        for &v in &c.scope {
            g.add_edge(v, n + ci).expect("valid instance");
        }
    }
    g
}

/// Checks the three tree-decomposition axioms plus tree-ness of the bag
/// graph; reports the first violation.
pub fn validate_decomposition(
    graph: &SimpleGraph,
    dec: &TreeDecomposition,
) -> std::result::Result<(), String> {
    let nb = dec.bags.len();
    if nb == 0 {
        return Err("decomposition has no bags".into());
    }
    for (i, bag) in dec.bags.iter().enumerate() {
        for &v in bag {
            if v >= graph.num_vertices() {
                return Err(format!("bag {} contains unknown vertex {}", i, v));
            }
        }
    }
    for &(a, b) in &dec.tree_edges {
        if a >= nb || b >= nb {
            return Err(format!("tree edge ({}, {}) out of bag range", a, b));
        }
        if a == b {
            return Err(format!("tree edge loop at bag {}", a));
        }
    }
    if dec.tree_edges.len() != nb - 1 {
        return Err(format!(
            "bag graph has {} edges, a tree over {} bags needs {}",
            dec.tree_edges.len(),
            nb,
            nb - 1
        ));
    }
    // Connectivity over all bags; with nb-1 edges this also implies acyclicity.
    let mut adj = vec![Vec::new(); nb];
    for &(a, b) in &dec.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; nb];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(b) = stack.pop() {
        for &nxt in &adj[b] {
            if !seen[nxt] {
                seen[nxt] = true;
                stack.push(nxt);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("bag graph is not connected".into());
    }

    let mut covered = vec![false; graph.num_vertices()];
    for bag in &dec.bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(format!("vertex {} appears in no bag", v));
    }

    for (u, v) in graph.edges() {
        let in_some_bag = dec
            .bags
            .iter()
            .any(|bag| bag.contains(&u) && bag.contains(&v));
        if !in_some_bag {
            return Err(format!("edge ({}, {}) is contained in no bag", u, v));
        }
    }

    // Occurrence subtrees must be connected.
    for v in 0..graph.num_vertices() {
        let holding: Vec<usize> = (0..nb).filter(|&i| dec.bags[i].contains(&v)).collect();
        if holding.is_empty() {
            continue;
        }
        let mut reach = vec![false; nb];
        let mut stack = vec![holding[0]];
        reach[holding[0]] = true;
        while let Some(b) = stack.pop() {
            for &nxt in &adj[b] {
                if !reach[nxt] && dec.bags[nxt].contains(&v) {
                    reach[nxt] = true;
                    stack.push(nxt);
                }
            }
        }
        if let Some(&bad) = holding.iter().find(|&&b| !reach[b]) {
            return Err(format!(
                "bags containing vertex {} are disconnected (bag {} unreachable)",
                v, bad
            ));
        }
    }
    Ok(())
}

/// Treewidth parameters of an instance: primal `tw` and incidence `tw*`,
/// exact when the graph fits the exact-solver budget, heuristic upper bounds
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwParams {
    pub tw: usize,
    pub tw_exact: bool,
    pub tw_star: usize,
    pub tw_star_exact: bool,
}

pub fn tw_params(instance: &CspInstance) -> TwParams {
    let primal = primal_graph(instance);
    let (tw, tw_exact) = width_of(&primal);
    let incidence = incidence_graph(instance);
    let (tw_star, tw_star_exact) = width_of(&incidence);
    TwParams {
        tw,
        tw_exact,
        tw_star,
        tw_star_exact,
    }
}

fn width_of(graph: &SimpleGraph) -> (usize, bool) {
    if graph.num_vertices() <= TREEWIDTH_EXACT_MAX_VERTICES {
        let (w, _) = treewidth_exact(graph).expect("within budget");
        (w, true)
    } else {
        let (w, _) = treewidth_heuristic(graph);
        (w, false)
    }
}
