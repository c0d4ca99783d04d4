//! Star and clique expansions of a hypergraph into simple weighted graphs.

use crate::hypergraph::{kahan_sum, Hypergraph};

/// Undirected weighted simple graph as adjacency lists.
///
/// Parallel edges are merged at construction by summing weights; neighbor
/// lists are sorted by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<(u32, f64)>>,
}

impl Graph {
    /// Build from undirected edge triples, merging parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut adjacency: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            adjacency[u as usize].push((v, w));
            adjacency[v as usize].push((u, w));
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(v, _)| v);
            let mut merged: Vec<(u32, f64)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += w,
                    _ => merged.push((v, w)),
                }
            }
            *list = merged;
        }
        Graph { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Distinct undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(u, list)| list.iter().filter(|&&(v, _)| v as usize >= u).count())
            .sum()
    }

    /// Sorted `(neighbor, weight)` pairs of `v`.
    pub fn neighbors(&self, v: u32) -> &[(u32, f64)] {
        &self.adjacency[v as usize]
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, v: u32) -> f64 {
        kahan_sum(self.neighbors(v).iter().map(|&(_, w)| w))
    }
}

/// Star expansion: original vertices on the left, one star node per
/// hyperedge on the right, in one combined node space `0..n_left+n_right`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    pub graph: Graph,
    pub n_left: usize,
    pub n_right: usize,
}

impl BipartiteGraph {
    pub fn node_count(&self) -> usize {
        self.n_left + self.n_right
    }

    /// Combined-space id of the star node for hyperedge `e`.
    pub fn star_node(&self, e: u32) -> u32 {
        (self.n_left + e as usize) as u32
    }
}

/// Replace each hyperedge `e` by a star node connected to its pins with
/// edges of weight w(e), so a vertex keeps its weighted degree d_v.
pub fn star_expand(h: &Hypergraph) -> BipartiteGraph {
    let n = h.vertex_count();
    let m = h.hyperedge_count();
    let edges = (0..m as u32).flat_map(|e| {
        let star = (n + e as usize) as u32;
        let w = h.hyperedge_weight(e);
        h.pins(e).iter().map(move |&v| (v, star, w))
    });
    BipartiteGraph {
        graph: Graph::from_edges(n + m, edges),
        n_left: n,
        n_right: m,
    }
}

/// Replace each hyperedge by a clique over its pins with per-pair weight
/// w(e)/(|e|−1), again preserving weighted vertex degrees.
///
/// Hyperedges larger than `max_cardinality` fall back to a star node
/// (appended after the original `n` vertices) to avoid quadratic blowup,
/// so the returned graph may have more than `n` nodes.
pub fn clique_expand(h: &Hypergraph, max_cardinality: usize) -> Graph {
    let n = h.vertex_count();
    let mut edges = Vec::new();
    let mut next_star = n as u32;
    for e in 0..h.hyperedge_count() as u32 {
        let pins = h.pins(e);
        let w = h.hyperedge_weight(e);
        if pins.len() == 1 {
            continue;
        }
        if pins.len() <= max_cardinality {
            let pair_weight = w / (pins.len() - 1) as f64;
            for (i, &u) in pins.iter().enumerate() {
                for &v in &pins[i + 1..] {
                    edges.push((u, v, pair_weight));
                }
            }
        } else {
            for &v in pins {
                edges.push((v, next_star, w));
            }
            next_star += 1;
        }
    }
    Graph::from_edges(next_star as usize, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_hyperedge_star() {
        let h = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
        let b = star_expand(&h);
        assert_eq!(b.node_count(), 3);
        assert_eq!(b.graph.neighbors(0), &[(2, 1.0)]);
        assert_eq!(b.graph.neighbors(1), &[(2, 1.0)]);
        assert_eq!(b.graph.neighbors(2), &[(0, 1.0), (1, 1.0)]);
    }

    #[test]
    fn star_counts_for_two_hyperedges() {
        let h = Hypergraph::unit(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        let b = star_expand(&h);
        assert_eq!(b.node_count(), 6);
        assert_eq!(b.graph.edge_count(), 5);
        assert_eq!(b.graph.neighbors(2).len(), 2);
    }

    #[test]
    fn triangle_of_stars() {
        let h = Hypergraph::unit(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let b = star_expand(&h);
        assert_eq!(b.node_count(), 6);
        assert_eq!(b.graph.edge_count(), 6);
    }

    #[test]
    fn star_edge_count_is_pin_count() {
        let h = Hypergraph::unit(5, vec![vec![0, 1, 2, 3], vec![3, 4], vec![0, 4]]).unwrap();
        let b = star_expand(&h);
        assert_eq!(b.graph.edge_count(), h.pin_count());
        // star node j connects exactly to the pins of hyperedge j
        for e in 0..h.hyperedge_count() as u32 {
            let star_neighbors: Vec<u32> = b
                .graph
                .neighbors(b.star_node(e))
                .iter()
                .map(|&(v, _)| v)
                .collect();
            assert_eq!(star_neighbors, h.pins(e));
        }
    }

    #[test]
    fn star_preserves_weighted_degree() {
        let h = Hypergraph::new(
            3,
            vec![vec![0, 1, 2], vec![1, 2]],
            vec![1.0; 3],
            vec![2.5, 4.0],
        )
        .unwrap();
        let b = star_expand(&h);
        for v in 0..3 {
            assert_eq!(b.graph.weighted_degree(v), h.degree(v));
        }
    }

    #[test]
    fn clique_pair_weights() {
        let h = Hypergraph::unit(3, vec![vec![0, 1, 2]]).unwrap();
        let g = clique_expand(&h, 8);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(0), &[(1, 0.5), (2, 0.5)]);
        for v in 0..3 {
            assert!((g.weighted_degree(v) - h.degree(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn clique_merges_parallel_edges() {
        let h = Hypergraph::unit(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let g = clique_expand(&h, 8);
        assert_eq!(g.neighbors(0), &[(1, 2.0)]);
    }

    #[test]
    fn oversized_hyperedge_falls_back_to_star() {
        let h = Hypergraph::unit(5, vec![vec![0, 1, 2, 3, 4], vec![0, 1]]).unwrap();
        let g = clique_expand(&h, 4);
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.neighbors(5).len(), 5);
        // the small hyperedge still became a direct edge
        assert!(g.neighbors(0).contains(&(1, 1.0)));
        for v in 0..5 {
            assert!((g.weighted_degree(v) - h.degree(v)).abs() < 1e-12);
        }
    }
}
