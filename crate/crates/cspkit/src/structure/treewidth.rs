//! Exact treewidth by dynamic programming over elimination orderings
//! (bitmask subsets, budgeted), and a min-fill elimination heuristic for
//! everything larger. Both return a tree decomposition built from the
//! elimination order they found.

use super::{SimpleGraph, TreeDecomposition};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Largest vertex count accepted by [`treewidth_exact`]; the subset DP keeps
/// two byte arrays of length `2^n`.
pub const TREEWIDTH_EXACT_MAX_VERTICES: usize = 24;

/// Exact treewidth with an optimal decomposition.
///
/// `f[S]` is the best width achievable when the vertex set `S` has already
/// been eliminated; eliminating `v` next costs the number of remaining
/// vertices reachable from `v` through `S` (its neighborhood in the fill
/// graph).
pub fn treewidth_exact(graph: &SimpleGraph) -> Result<(usize, TreeDecomposition)> {
    let n = graph.num_vertices();
    if n > TREEWIDTH_EXACT_MAX_VERTICES {
        return Err(Error::Budget(format!(
            "exact treewidth supports at most {} vertices, got {}",
            TREEWIDTH_EXACT_MAX_VERTICES, n
        )));
    }
    if n == 0 {
        return Ok((
            0,
            TreeDecomposition {
                bags: vec![Vec::new()],
                tree_edges: Vec::new(),
            },
        ));
    }

    let mut adj = vec![0u64; n];
    for (u, v) in graph.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }

    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let size = 1usize << n;
    const INF: u8 = u8::MAX;
    let mut best_width = vec![INF; size];
    let mut last_added = vec![0u8; size];
    best_width[0] = 0;

    for s in 0..size as u64 {
        let cur = best_width[s as usize];
        if cur == INF {
            continue;
        }
        // Connected components of the eliminated set, with their boundaries
        // into the remaining vertices.
        let mut comps: Vec<(u64, u64)> = Vec::new();
        let mut rest = s;
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            loop {
                let mut grow = comp;
                let mut bits = comp;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    grow |= adj[b] & s;
                }
                if grow == comp {
                    break;
                }
                comp = grow;
            }
            let mut boundary = 0u64;
            let mut bits = comp;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                boundary |= adj[b];
            }
            comps.push((comp, boundary & !s));
            rest &= !comp;
        }

        let mut remaining = full & !s;
        while remaining != 0 {
            let v = remaining.trailing_zeros() as usize;
            remaining &= remaining - 1;
            let mut through = adj[v] & !s;
            for &(comp, boundary) in &comps {
                if adj[v] & comp != 0 {
                    through |= boundary;
                }
            }
            through &= !(1u64 << v);
            let degree = through.count_ones() as u8;
            let candidate = cur.max(degree);
            let t = (s | (1 << v)) as usize;
            if candidate < best_width[t] {
                best_width[t] = candidate;
                last_added[t] = v as u8;
            }
        }
    }

    let width = best_width[full as usize] as usize;
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last_added[s as usize] as usize;
        order.push(v);
        s &= !(1u64 << v);
    }
    order.reverse();

    let (order_width, dec) = decomposition_from_order(graph, &order);
    assert_eq!(
        order_width, width,
        "elimination order must realize the DP width"
    );
    Ok((width, dec))
}

/// Min-fill elimination ordering: repeatedly eliminate the vertex whose
/// neighborhood needs the fewest fill edges (smallest id on ties). Returns
/// an upper bound on the treewidth with a matching decomposition; exact on
/// chordal graphs.
pub fn treewidth_heuristic(graph: &SimpleGraph) -> (usize, TreeDecomposition) {
    let n = graph.num_vertices();
    if n == 0 {
        return (
            0,
            TreeDecomposition {
                bags: vec![Vec::new()],
                tree_edges: Vec::new(),
            },
        );
    }
    let mut adj = graph.adjacency();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let mut best = usize::MAX;
        let mut best_fill = usize::MAX;
        for &v in &alive {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for i in 0..nbrs.len() {
                for j in i + 1..nbrs.len() {
                    if !adj[nbrs[i]].contains(&nbrs[j]) {
                        fill += 1;
                    }
                }
            }
            if fill < best_fill {
                best_fill = fill;
                best = v;
            }
        }
        let v = best;
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                adj[nbrs[i]].insert(nbrs[j]);
                adj[nbrs[j]].insert(nbrs[i]);
            }
        }
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive.remove(&v);
        order.push(v);
    }
    decomposition_from_order(graph, &order)
}

/// Builds the tree decomposition induced by an elimination order: the bag of
/// `v` is `v` plus its not-yet-eliminated neighbors in the fill graph, and
/// each bag hangs off the bag of the first-eliminated vertex among those
/// neighbors.
pub fn decomposition_from_order(
    graph: &SimpleGraph,
    order: &[usize],
) -> (usize, TreeDecomposition) {
    let n = graph.num_vertices();
    assert_eq!(order.len(), n, "order must cover every vertex");
    if n == 0 {
        return (
            0,
            TreeDecomposition {
                bags: vec![Vec::new()],
                tree_edges: Vec::new(),
            },
        );
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj = graph.adjacency();
    let mut bags = Vec::with_capacity(n);
    let mut tree_edges = Vec::new();
    let mut width = 0usize;
    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        width = width.max(nbrs.len());
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        if let Some(&parent) = nbrs.iter().min_by_key(|&&u| pos[u]) {
            tree_edges.push((i, pos[parent]));
        } else if i + 1 < n {
            tree_edges.push((i, i + 1));
        }
        for a in 0..nbrs.len() {
            for b in a + 1..nbrs.len() {
                adj[nbrs[a]].insert(nbrs[b]);
                adj[nbrs[b]].insert(nbrs[a]);
            }
        }
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        adj[v].clear();
    }
    (width, TreeDecomposition { bags, tree_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::validate_decomposition;

    fn path(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    fn cycle(n: usize) -> SimpleGraph {
        let mut g = path(n);
        g.add_edge(n - 1, 0).unwrap();
        g
    }

    fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn tree_has_width_one() {
        let (w, dec) = treewidth_exact(&path(6)).unwrap();
        assert_eq!(w, 1);
        assert!(validate_decomposition(&path(6), &dec).is_ok());
    }

    #[test]
    fn cycles_have_width_two() {
        for n in 3..=10 {
            let g = cycle(n);
            let (w, dec) = treewidth_exact(&g).unwrap();
            assert_eq!(w, 2, "cycle C{}", n);
            assert!(validate_decomposition(&g, &dec).is_ok());
        }
    }

    #[test]
    fn clique_has_width_n_minus_one() {
        for n in 1..=7 {
            let g = complete(n);
            let (w, dec) = treewidth_exact(&g).unwrap();
            assert_eq!(w, n - 1);
            assert!(validate_decomposition(&g, &dec).is_ok());
        }
    }

    #[test]
    fn heuristic_is_exact_on_trees_and_cliques() {
        let (w, dec) = treewidth_heuristic(&path(8));
        assert_eq!(w, 1);
        assert!(validate_decomposition(&path(8), &dec).is_ok());
        let (w, _) = treewidth_heuristic(&complete(5));
        assert_eq!(w, 4);
    }

    #[test]
    fn heuristic_never_beats_exact() {
        // Small fixed graph: C5 plus a chord.
        let mut g = cycle(5);
        g.add_edge(0, 2).unwrap();
        let (exact, _) = treewidth_exact(&g).unwrap();
        let (heur, dec) = treewidth_heuristic(&g);
        assert!(heur >= exact);
        assert!(validate_decomposition(&g, &dec).is_ok());
    }

    #[test]
    fn disconnected_graph_decomposes() {
        let mut g = SimpleGraph::new(5);
        g.add_edge(0, 1).unwrap();
        g.add_edge(3, 4).unwrap();
        let (w, dec) = treewidth_exact(&g).unwrap();
        assert_eq!(w, 1);
        assert!(validate_decomposition(&g, &dec).is_ok());
    }

    #[test]
    fn budget_is_enforced() {
        let g = SimpleGraph::new(25);
        assert!(matches!(treewidth_exact(&g), Err(Error::Budget(_))));
    }

    #[test]
    fn singleton_and_empty_graphs() {
        let (w, dec) = treewidth_exact(&SimpleGraph::new(1)).unwrap();
        assert_eq!(w, 0);
        assert_eq!(dec.bags, vec![vec![0]]);
        let (w, _) = treewidth_exact(&SimpleGraph::new(0)).unwrap();
        assert_eq!(w, 0);
    }
}
