//! Low-pass spectral embedding and per-hyperedge seed clustering.
//!
//! Exact eigenvectors are never computed. Random vectors are deflated
//! against the all-one vector (the trivial kernel direction) and run
//! through a few Gauss–Seidel sweeps on `Lx = 0`; each sweep damps the
//! high-frequency Laplacian components, leaving coordinates dominated by
//! the slowest cut-revealing modes. Seed clusters are then carved out of
//! each hyperedge by k-means in that coordinate space.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{kahan_sum, BipartiteGraph, Graph, Hypergraph};
use crate::kmeans::kmeans;
use crate::rng::{item_rng, item_seed};
use rand::Rng;

/// Node coordinates produced by [`smooth_embed`].
///
/// Rows cover every node of the bipartite graph; the first `n` rows are
/// the original hypergraph vertices and are the only rows consumed
/// downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    coords: Vec<f64>,
    n_total: usize,
    pub k: usize,
    pub smoothing_iters: usize,
    pub seed: u64,
}

impl Embedding {
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Coordinate row of one node.
    pub fn row(&self, node: u32) -> &[f64] {
        let start = node as usize * self.k;
        &self.coords[start..start + self.k]
    }

    /// One smoothed column over all nodes.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_total)
            .map(|v| self.coords[v * self.k + j])
            .collect()
    }

    /// Dense text dump of the first `rows` rows, one node per line.
    pub fn to_dense_text(&self, rows: usize) -> String {
        let mut out = String::new();
        for v in 0..rows.min(self.n_total) {
            let row: Vec<String> = self
                .row(v as u32)
                .iter()
                .map(|x| format!("{x:.9}"))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// One in-place Gauss–Seidel sweep for `Lx = 0` in ascending node order:
/// `x(v) ← Σ_{u~v} w(u,v)·x(u) / Σ_{u~v} w(u,v)`. Isolated nodes go to 0.
pub fn gauss_seidel_sweep(g: &Graph, x: &mut [f64]) {
    for v in 0..g.node_count() {
        let mut weighted = 0.0;
        let mut total = 0.0;
        for &(u, w) in g.neighbors(v as u32) {
            weighted += w * x[u as usize];
            total += w;
        }
        x[v] = if total > 0.0 { weighted / total } else { 0.0 };
    }
}

/// Laplacian quadratic form `xᵀLx = Σ_{uv∈E} w(u,v)·(x_u − x_v)²`.
pub fn laplacian_energy(g: &Graph, x: &[f64]) -> f64 {
    kahan_sum((0..g.node_count() as u32).flat_map(|u| {
        g.neighbors(u)
            .iter()
            .filter(move |&&(v, _)| v > u)
            .map(move |&(v, w)| {
                let d = x[u as usize] - x[v as usize];
                w * d * d
            })
    }))
}

fn deflate(x: &mut [f64]) {
    let mean = kahan_sum(x.iter().copied()) / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

fn normalize(x: &mut [f64]) {
    let norm = kahan_sum(x.iter().map(|v| v * v)).sqrt();
    if norm >= 1e-12 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    // a fully damped column (e.g. on complete graphs) stays identically 0
}

fn smooth_column(g: &Graph, iters: usize, seed: u64, column: u64) -> Vec<f64> {
    let mut rng = item_rng(seed, "embed", column);
    let mut x: Vec<f64> = (0..g.node_count())
        .map(|_| rng.gen_range(-0.5..=0.5))
        .collect();
    deflate(&mut x);
    for _ in 0..iters {
        gauss_seidel_sweep(g, &mut x);
    }
    deflate(&mut x);
    normalize(&mut x);
    x
}

/// Embed every node of the star-expanded graph into `k` smoothed
/// coordinates. Columns are independent (each has its own RNG stream), so
/// they are computed in parallel without affecting the result.
pub fn smooth_embed(g: &BipartiteGraph, k: usize, iters: usize, seed: u64) -> Result<Embedding> {
    if k == 0 {
        return Err(Error::param("k", "embedding dimension must be at least 1"));
    }
    if iters == 0 {
        return Err(Error::param(
            "iters",
            "smoothing iteration count must be at least 1",
        ));
    }
    let n_total = g.node_count();
    let columns: Vec<Vec<f64>> = (0..k as u64)
        .into_par_iter()
        .map(|j| smooth_column(&g.graph, iters, seed, j))
        .collect();
    let mut coords = vec![0.0; n_total * k];
    for (j, column) in columns.iter().enumerate() {
        for (v, &value) in column.iter().enumerate() {
            coords[v * k + j] = value;
        }
    }
    Ok(Embedding {
        coords,
        n_total,
        k,
        smoothing_iters: iters,
        seed,
    })
}

/// Where a seed cluster came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterOrigin {
    /// Carved out of this hyperedge by k-means.
    Hyperedge(u32),
    /// Leftover vertex promoted to its own cluster.
    Singleton,
}

/// Disjoint seed clusters covering every vertex exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedClusterSet {
    pub clusters: Vec<Vec<u32>>,
    pub origins: Vec<ClusterOrigin>,
}

impl SeedClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Algorithm: visit hyperedges by descending cardinality (ties by
/// ascending id); skip any hyperedge containing an already-flagged vertex;
/// otherwise split its pins into `c = max(1, round(|e|·(1−rr)))` k-means
/// clusters in embedding space and flag them all. Unflagged vertices end
/// up as singleton clusters.
pub fn initial_clusters(
    h: &Hypergraph,
    emb: &Embedding,
    reduction_ratio: f64,
    seed: u64,
) -> Result<SeedClusterSet> {
    if !(reduction_ratio > 0.0 && reduction_ratio < 1.0) {
        return Err(Error::param(
            "reduction_ratio",
            "must lie strictly between 0 and 1",
        ));
    }
    if emb.n_total() < h.vertex_count() {
        return Err(Error::param(
            "emb",
            "embedding has fewer rows than the hypergraph has vertices",
        ));
    }

    let mut order: Vec<u32> = (0..h.hyperedge_count() as u32).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(h.pins(e).len()), e));

    let mut flagged = vec![false; h.vertex_count()];
    let mut clusters = Vec::new();
    let mut origins = Vec::new();
    for &e in &order {
        let pins = h.pins(e);
        if pins.iter().any(|&v| flagged[v as usize]) {
            continue;
        }
        let c = ((pins.len() as f64 * (1.0 - reduction_ratio)).round() as usize).max(1);
        let points: Vec<Vec<f64>> = pins.iter().map(|&v| emb.row(v).to_vec()).collect();
        let result = kmeans(&points, c, item_seed(seed, "kmeans", e as u64))?;
        let mut groups: Vec<Vec<u32>> = vec![Vec::new(); c];
        for (&v, &label) in pins.iter().zip(&result.labels) {
            groups[label as usize].push(v);
            flagged[v as usize] = true;
        }
        for group in groups {
            debug_assert!(!group.is_empty(), "k-means repair keeps clusters non-empty");
            clusters.push(group);
            origins.push(ClusterOrigin::Hyperedge(e));
        }
    }
    for v in 0..h.vertex_count() as u32 {
        if !flagged[v as usize] {
            clusters.push(vec![v]);
            origins.push(ClusterOrigin::Singleton);
        }
    }
    Ok(SeedClusterSet { clusters, origins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::star_expand;

    fn wrap(graph: Graph) -> BipartiteGraph {
        let n_left = graph.node_count();
        BipartiteGraph {
            graph,
            n_left,
            n_right: 0,
        }
    }

    fn complete_graph(n: usize) -> Graph {
        let edges = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v, 1.0)));
        Graph::from_edges(n, edges)
    }

    fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, (0..n as u32 - 1).map(|u| (u, u + 1, 1.0)))
    }

    /// Two K_8 cliques on 0..8 and 8..16 joined by the bridge (7, 8).
    fn two_cliques() -> Graph {
        let mut edges = Vec::new();
        for base in [0u32, 8] {
            for i in 0..8 {
                for j in i + 1..8 {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        }
        edges.push((7, 8, 1.0));
        Graph::from_edges(16, edges)
    }

    #[test]
    fn complete_graph_coordinates_shrink_to_zero() {
        let g = wrap(complete_graph(4));
        let emb = smooth_embed(&g, 3, 60, 5).unwrap();
        for v in 0..4 {
            for &x in emb.row(v) {
                assert!(x.abs() < 1e-9, "coordinate {x} did not vanish");
            }
        }
    }

    #[test]
    fn path_embedding_tracks_fiedler_vector() {
        let g = wrap(path_graph(100));
        let emb = smooth_embed(&g, 1, 50, 6).unwrap();
        let x = emb.column(0);

        // sign pattern: at most 3 contiguous runs along the path
        let runs = x
            .windows(2)
            .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
            .count()
            + 1;
        assert!(runs <= 3, "sign pattern has {runs} runs");

        // closed-form Fiedler vector of the path Laplacian
        let fiedler: Vec<f64> = (0..100)
            .map(|i| (std::f64::consts::PI * (i as f64 + 0.5) / 100.0).cos())
            .collect();
        let r = pearson(&x, &fiedler);
        assert!(r.abs() >= 0.9, "|Pearson r| = {} < 0.9", r.abs());
    }

    fn pearson(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
        cov / (va.sqrt() * vb.sqrt())
    }

    #[test]
    fn two_means_on_embedding_recovers_planted_cliques() {
        let g = wrap(two_cliques());
        let emb = smooth_embed(&g, 2, 30, 3).unwrap();
        let points: Vec<Vec<f64>> = (0..16).map(|v| emb.row(v).to_vec()).collect();
        let r = kmeans(&points, 2, 0).unwrap();
        for v in 1..8 {
            assert_eq!(r.labels[v], r.labels[0]);
        }
        for v in 9..16 {
            assert_eq!(r.labels[v], r.labels[8]);
        }
        assert_ne!(r.labels[0], r.labels[8]);
    }

    #[test]
    fn sweeps_never_increase_laplacian_energy() {
        let g = two_cliques();
        let mut rng = item_rng(9, "test", 0);
        let mut x: Vec<f64> = (0..16).map(|_| rng.gen_range(-0.5..=0.5)).collect();
        deflate(&mut x);
        let mut prev = laplacian_energy(&g, &x);
        for _ in 0..25 {
            gauss_seidel_sweep(&g, &mut x);
            let next = laplacian_energy(&g, &x);
            assert!(next <= prev * (1.0 + 1e-12) + 1e-300);
            prev = next;
        }
    }

    #[test]
    fn columns_are_deflated_and_finite() {
        let h = Hypergraph::unit(6, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5]]).unwrap();
        let emb = smooth_embed(&star_expand(&h), 4, 10, 42).unwrap();
        for j in 0..4 {
            let col = emb.column(j);
            assert!(col.iter().all(|x| x.is_finite()));
            assert!(kahan_sum(col.iter().copied()).abs() < 1e-8);
        }
    }

    #[test]
    fn embedding_is_deterministic() {
        let h = Hypergraph::unit(5, vec![vec![0, 1, 2, 3], vec![3, 4]]).unwrap();
        let g = star_expand(&h);
        let a = smooth_embed(&g, 3, 10, 7).unwrap();
        let b = smooth_embed(&g, 3, 10, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_parameters() {
        let h = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
        let g = star_expand(&h);
        assert!(smooth_embed(&g, 0, 10, 0).is_err());
        assert!(smooth_embed(&g, 1, 0, 0).is_err());
    }

    #[test]
    fn cluster_count_rule_on_one_hyperedge() {
        let h = Hypergraph::unit(8, vec![(0..8).collect()]).unwrap();
        let emb = smooth_embed(&star_expand(&h), 2, 10, 0).unwrap();
        let seeds = initial_clusters(&h, &emb, 0.75, 0).unwrap();
        assert_eq!(seeds.len(), 2);
        let covered: usize = seeds.clusters.iter().map(Vec::len).sum();
        assert_eq!(covered, 8);
    }

    #[test]
    fn flagged_hyperedges_are_skipped_and_leftovers_become_singletons() {
        let h = Hypergraph::unit(5, vec![vec![0, 1, 2, 3], vec![3, 4]]).unwrap();
        let emb = smooth_embed(&star_expand(&h), 2, 10, 1).unwrap();
        let seeds = initial_clusters(&h, &emb, 0.75, 1).unwrap();
        // hyperedge 0 (cardinality 4) produces c = 1 cluster and flags 0..4;
        // hyperedge 1 is skipped; vertex 4 is filled in as a singleton
        assert_eq!(seeds.clusters[0], vec![0, 1, 2, 3]);
        assert_eq!(seeds.origins[0], ClusterOrigin::Hyperedge(0));
        assert_eq!(seeds.clusters[1], vec![4]);
        assert_eq!(seeds.origins[1], ClusterOrigin::Singleton);
    }

    #[test]
    fn seed_clusters_partition_the_vertex_set() {
        let h = Hypergraph::unit(
            9,
            vec![
                vec![0, 1, 2, 3],
                vec![2, 3, 4],
                vec![4, 5, 6, 7],
                vec![7, 8],
                vec![0, 8],
            ],
        )
        .unwrap();
        let emb = smooth_embed(&star_expand(&h), 3, 10, 2).unwrap();
        for rr in [0.25, 0.5, 0.75] {
            let seeds = initial_clusters(&h, &emb, rr, 2).unwrap();
            let mut seen = [false; 9];
            for cluster in &seeds.clusters {
                for &v in cluster {
                    assert!(!seen[v as usize], "vertex {v} appears twice");
                    seen[v as usize] = true;
                }
            }
            assert!(seen.iter().all(|&s| s), "some vertex is uncovered");
        }
    }

    #[test]
    fn well_separated_split_inside_one_hyperedge() {
        // embed the two-clique graph, then cluster one hyperedge that spans
        // both cliques: k-means with c=2 must split it along the bridge
        let g = wrap(two_cliques());
        let emb = smooth_embed(&g, 2, 30, 3).unwrap();
        let h = Hypergraph::unit(16, vec![(0..16).collect()]).unwrap();
        let seeds = initial_clusters(&h, &emb, 7.0 / 8.0, 3).unwrap();
        assert_eq!(seeds.len(), 2);
        let mut sides: Vec<Vec<u32>> = seeds.clusters.clone();
        sides.sort_by_key(|c| c[0]);
        assert_eq!(sides[0], (0..8).collect::<Vec<u32>>());
        assert_eq!(sides[1], (8..16).collect::<Vec<u32>>());
    }
}
