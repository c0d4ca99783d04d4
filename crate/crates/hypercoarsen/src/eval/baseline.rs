use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::coarsen::{contract, ClusterAssignment};
use crate::eval::phi_summary;
use crate::rng::stage_rng;
use crate::{Error, Hypergraph, Result};

/// Hyperedges spanning more groups than this contribute no matching
/// candidates (their pair expansion is quadratic and they carry little
/// locality signal anyway).
const MATCHING_SPAN_CAP: usize = 64;

/// Reference coarsening strategies the pipeline is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Uniformly random vertex grouping at the same reduction ratio.
    Random,
    /// Greedy heaviest-edge matching on star-expansion pair weights.
    Star,
    /// Greedy heaviest-edge matching on clique-expansion pair weights.
    Clique,
}

/// A baseline coarsening plus the same summary metrics the pipeline
/// reports, for side-by-side comparison.
#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub coarse: Hypergraph,
    pub vertex_map: Vec<u32>,
    pub assignment: ClusterAssignment,
    /// Mean cluster conductance, zero-volume clusters excluded.
    pub phi_avg: f64,
    pub zero_volume_clusters: usize,
}

/// Coarse vertex count implied by a reduction ratio.
pub fn coarse_target(n: usize, rr: f64) -> usize {
    ((n as f64) * (1.0 - rr)).round().max(1.0) as usize
}

/// Run one baseline coarsening at reduction ratio `rr`.
pub fn run_baseline(
    h: &Hypergraph,
    kind: BaselineKind,
    rr: f64,
    seed: u64,
) -> Result<BaselineResult> {
    match kind {
        BaselineKind::Random => random_contraction(h, rr, seed),
        BaselineKind::Star => matching_baseline(h, rr, BaselineKind::Star),
        BaselineKind::Clique => matching_baseline(h, rr, BaselineKind::Clique),
    }
}

fn validate_rr(rr: f64) -> Result<()> {
    if !(rr > 0.0 && rr < 1.0) {
        return Err(Error::param(
            "rr",
            "reduction ratio must lie strictly between 0 and 1",
        ));
    }
    Ok(())
}

fn finish(h: &Hypergraph, clusters: Vec<Vec<u32>>) -> Result<BaselineResult> {
    let assignment = ClusterAssignment::from_clusters(h.vertex_count(), clusters)?;
    let (coarse, vertex_map) = contract(h, &assignment, false, false)?;
    let phi = phi_summary(h, &assignment)?;
    Ok(BaselineResult {
        coarse,
        vertex_map,
        assignment,
        phi_avg: phi.phi_avg,
        zero_volume_clusters: phi.zero_volume_clusters,
    })
}

/// Structure-blind baseline: shuffle the vertices and deal them
/// round-robin into `coarse_target(n, rr)` groups.
pub fn random_contraction(h: &Hypergraph, rr: f64, seed: u64) -> Result<BaselineResult> {
    validate_rr(rr)?;
    let n = h.vertex_count();
    if n == 0 {
        return Err(Error::Degenerate("empty hypergraph".into()));
    }
    let target = coarse_target(n, rr);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut stage_rng(seed, "baseline-random"));
    let mut clusters: Vec<Vec<u32>> = vec![Vec::new(); target];
    for (i, v) in order.into_iter().enumerate() {
        clusters[i % target].push(v);
    }
    for members in &mut clusters {
        members.sort_unstable();
    }
    finish(h, clusters)
}

/// Simple-graph baseline: derive pairwise vertex weights from a star or
/// clique expansion, then repeat greedy heaviest-edge matching rounds
/// (merging each matched pair) until the target size is reached or no
/// pair remains. Deterministic: ties rank by lower group ids.
fn matching_baseline(h: &Hypergraph, rr: f64, kind: BaselineKind) -> Result<BaselineResult> {
    validate_rr(rr)?;
    let n = h.vertex_count();
    if n == 0 {
        return Err(Error::Degenerate("empty hypergraph".into()));
    }
    let target = coarse_target(n, rr);
    let mut group: Vec<u32> = (0..n as u32).collect();
    let mut n_groups = n;

    while n_groups > target {
        let mut pair: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for e in 0..h.hyperedge_count() as u32 {
            let mut spanned: Vec<u32> = h.pins(e).iter().map(|&v| group[v as usize]).collect();
            spanned.sort_unstable();
            spanned.dedup();
            if spanned.len() < 2 || spanned.len() > MATCHING_SPAN_CAP {
                continue;
            }
            let w = h.hyperedge_weight(e);
            let scale = match kind {
                // Two hops through the star node, spread over the pins.
                BaselineKind::Star => w / h.pins(e).len() as f64,
                // Same normalization the clique expansion uses.
                BaselineKind::Clique => w / (spanned.len() - 1) as f64,
                BaselineKind::Random => unreachable!(),
            };
            for i in 0..spanned.len() {
                for j in i + 1..spanned.len() {
                    *pair.entry((spanned[i], spanned[j])).or_insert(0.0) += scale;
                }
            }
        }
        if pair.is_empty() {
            break;
        }
        let mut ranked: Vec<((u32, u32), f64)> = pair.into_iter().collect();
        ranked.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));

        let mut matched = vec![false; n_groups];
        let mut merge_into: Vec<u32> = (0..n_groups as u32).collect();
        let mut budget = n_groups - target;
        let mut merged_any = false;
        for ((a, b), _) in ranked {
            if budget == 0 {
                break;
            }
            if matched[a as usize] || matched[b as usize] {
                continue;
            }
            matched[a as usize] = true;
            matched[b as usize] = true;
            merge_into[b as usize] = a;
            budget -= 1;
            merged_any = true;
        }
        if !merged_any {
            break;
        }

        // Compact surviving group ids, preserving ascending order.
        let mut new_id = vec![u32::MAX; n_groups];
        let mut next = 0u32;
        for (g, &root) in merge_into.iter().enumerate() {
            if root == g as u32 {
                new_id[g] = next;
                next += 1;
            }
        }
        for g in group.iter_mut() {
            *g = new_id[merge_into[*g as usize] as usize];
        }
        n_groups = next as usize;
    }

    let mut clusters: Vec<Vec<u32>> = vec![Vec::new(); n_groups];
    for v in 0..n as u32 {
        clusters[group[v as usize] as usize].push(v);
    }
    finish(h, clusters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques() -> Hypergraph {
        let mut pins = Vec::new();
        for base in [0u32, 8] {
            for i in 0..8 {
                for j in i + 1..8 {
                    pins.push(vec![base + i, base + j]);
                }
            }
        }
        pins.push(vec![7, 8]);
        Hypergraph::unit(16, pins).unwrap()
    }

    #[test]
    fn random_contraction_hits_target_and_is_deterministic() {
        let h = two_cliques();
        let a = random_contraction(&h, 0.75, 9).unwrap();
        let b = random_contraction(&h, 0.75, 9).unwrap();
        assert_eq!(a.coarse.vertex_count(), 4);
        assert_eq!(a.vertex_map, b.vertex_map);
        // Every vertex lands somewhere, groups are near-even.
        assert!(a.assignment.clusters().iter().all(|c| c.len() == 4));
    }

    #[test]
    fn matching_baselines_recover_the_planted_cliques() {
        let h = two_cliques();
        for kind in [BaselineKind::Star, BaselineKind::Clique] {
            let result = run_baseline(&h, kind, 0.875, 0).unwrap();
            assert_eq!(result.coarse.vertex_count(), 2);
            let mut clusters = result.assignment.clusters().to_vec();
            clusters.sort();
            assert_eq!(clusters[0], (0..8).collect::<Vec<u32>>());
            assert_eq!(clusters[1], (8..16).collect::<Vec<u32>>());
            assert!((result.phi_avg - 1.0 / 57.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matching_stops_exactly_at_the_target() {
        let h = two_cliques();
        let result = matching_baseline(&h, 0.5, BaselineKind::Clique).unwrap();
        assert_eq!(result.coarse.vertex_count(), 8);
    }

    #[test]
    fn matching_without_edges_cannot_shrink() {
        let h = Hypergraph::unit(4, vec![vec![0, 1]]).unwrap();
        // Only one mergeable pair exists; the other two vertices stay put.
        let result = matching_baseline(&h, 0.75, BaselineKind::Star).unwrap();
        assert_eq!(result.coarse.vertex_count(), 3);
    }

    #[test]
    fn reduction_ratio_is_validated() {
        let h = two_cliques();
        assert!(random_contraction(&h, 0.0, 0).is_err());
        assert!(random_contraction(&h, 1.0, 0).is_err());
        assert!(matching_baseline(&h, -0.5, BaselineKind::Clique).is_err());
    }
}
