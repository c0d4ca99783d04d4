//! Coarsening orchestration: partition, refine per part, aggregate,
//! contract.
//!
//! The pipeline splits the vertex set into parts (so flow refinement
//! stays local and parts can run in parallel), refines every seed cluster
//! inside its part, resolves overlapping claims deterministically, and
//! contracts the resulting clusters into a smaller hypergraph.

use std::time::Instant;

use rayon::prelude::*;

use crate::embed::{initial_clusters, smooth_embed, Embedding, SeedClusterSet};
use crate::error::{Error, Result};
use crate::flow::flow_refine_filtered;
use crate::hypergraph::{kahan_sum, star_expand, Hypergraph, VertexSet};

/// A total, disjoint split of the vertex set into non-empty parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    part_of: Vec<u32>,
    parts: Vec<Vec<u32>>,
}

impl Partitioning {
    /// Build from a vertex→part map; every id in `0..max+1` must occur.
    pub fn from_part_ids(part_of: Vec<u32>) -> Result<Self> {
        let count = match part_of.iter().max() {
            Some(&max) => max as usize + 1,
            None => return Err(Error::Degenerate("empty partitioning".into())),
        };
        let mut parts = vec![Vec::new(); count];
        for (v, &p) in part_of.iter().enumerate() {
            parts[p as usize].push(v as u32);
        }
        if let Some(empty) = parts.iter().position(Vec::is_empty) {
            return Err(Error::Degenerate(format!("part {empty} has no vertices")));
        }
        Ok(Partitioning { part_of, parts })
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part_of(&self, v: u32) -> u32 {
        self.part_of[v as usize]
    }

    /// Sorted vertices of part `p`.
    pub fn part(&self, p: u32) -> &[u32] {
        &self.parts[p as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }
}

/// Parse an external partition file: one 0-based part id per vertex line.
pub fn load_partition_file(text: &str, n: usize) -> Result<Partitioning> {
    let mut ids = Vec::with_capacity(n);
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let id: u32 = line.parse().map_err(|_| Error::Malformed {
            line: i + 1,
            reason: format!("part id `{line}` is not a non-negative integer"),
        })?;
        ids.push(id);
    }
    if ids.len() != n {
        return Err(Error::Malformed {
            line: 0,
            reason: format!("expected {n} part ids, found {}", ids.len()),
        });
    }
    Partitioning::from_part_ids(ids)
}

/// Recursive median bisection of the embedding, restricted to original
/// vertices. Each split sorts the current vertex block along its
/// highest-variance smoothed column and cuts at the proportional median,
/// so part sizes stay within one vertex of each other per level.
pub fn partition(h: &Hypergraph, emb: &Embedding, p: usize) -> Result<Partitioning> {
    let n = h.vertex_count();
    if p == 0 || p > n {
        return Err(Error::param(
            "p",
            format!("part count {p} must lie in 1..={n}"),
        ));
    }
    if emb.n_total() < n {
        return Err(Error::param(
            "emb",
            "embedding has fewer rows than vertices",
        ));
    }
    let mut part_of = vec![0u32; n];
    let mut next_part = 0u32;
    let vertices: Vec<u32> = (0..n as u32).collect();
    split_block(emb, vertices, p, &mut part_of, &mut next_part);
    Partitioning::from_part_ids(part_of)
}

fn split_block(
    emb: &Embedding,
    mut vertices: Vec<u32>,
    parts: usize,
    part_of: &mut [u32],
    next_part: &mut u32,
) {
    if parts == 1 {
        for &v in &vertices {
            part_of[v as usize] = *next_part;
        }
        *next_part += 1;
        return;
    }
    let col = dominant_column(emb, &vertices);
    vertices.sort_unstable_by(|&a, &b| {
        emb.row(a)[col]
            .partial_cmp(&emb.row(b)[col])
            .unwrap()
            .then(a.cmp(&b))
    });
    let left_parts = parts / 2;
    let right_parts = parts - left_parts;
    let len = vertices.len();
    let proportional = (len * left_parts + parts / 2) / parts;
    let left_len = proportional.clamp(left_parts, len - right_parts);
    let right = vertices.split_off(left_len);
    split_block(emb, vertices, left_parts, part_of, next_part);
    split_block(emb, right, right_parts, part_of, next_part);
}

/// Column with the largest variance over the given vertices (ties toward
/// the lower column index).
fn dominant_column(emb: &Embedding, vertices: &[u32]) -> usize {
    let n = vertices.len() as f64;
    let mut best = 0;
    let mut best_var = f64::NEG_INFINITY;
    for j in 0..emb.k {
        let mean = kahan_sum(vertices.iter().map(|&v| emb.row(v)[j])) / n;
        let var = kahan_sum(vertices.iter().map(|&v| {
            let d = emb.row(v)[j] - mean;
            d * d
        }));
        if var > best_var {
            best_var = var;
            best = j;
        }
    }
    best
}

/// How a final cluster came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterProvenance {
    /// Flow-refined from seed cluster `seed` of the initial clustering.
    Refined { seed: usize },
    /// Straddler remainder: this vertex's seed cluster was assigned to a
    /// different part, so it restarted as a singleton in its own part.
    Remainder(u32),
    /// Left unclaimed after refinement and promoted to a singleton.
    Fill(u32),
}

/// Final disjoint clusters covering every vertex exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    cluster_of: Vec<u32>,
    clusters: Vec<Vec<u32>>,
    hlc_values: Vec<f64>,
    provenance: Vec<ClusterProvenance>,
}

impl ClusterAssignment {
    pub fn new(
        n: usize,
        clusters: Vec<Vec<u32>>,
        hlc_values: Vec<f64>,
        provenance: Vec<ClusterProvenance>,
    ) -> Result<Self> {
        if hlc_values.len() != clusters.len() || provenance.len() != clusters.len() {
            return Err(Error::param(
                "clusters",
                "per-cluster metadata length mismatch",
            ));
        }
        let mut cluster_of = vec![u32::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Degenerate(format!("cluster {c} is empty")));
            }
            for &v in members {
                if v as usize >= n {
                    return Err(Error::param("clusters", format!("vertex {v} out of range")));
                }
                if cluster_of[v as usize] != u32::MAX {
                    return Err(Error::Degenerate(format!("vertex {v} is in two clusters")));
                }
                cluster_of[v as usize] = c as u32;
            }
        }
        if let Some(v) = cluster_of.iter().position(|&c| c == u32::MAX) {
            return Err(Error::Degenerate(format!("vertex {v} is in no cluster")));
        }
        Ok(ClusterAssignment {
            cluster_of,
            clusters,
            hlc_values,
            provenance,
        })
    }

    /// Assignment without per-cluster metadata (for tests and baselines).
    pub fn from_clusters(n: usize, clusters: Vec<Vec<u32>>) -> Result<Self> {
        let count = clusters.len();
        let provenance = clusters
            .iter()
            .map(|members| ClusterProvenance::Fill(members[0]))
            .collect();
        Self::new(n, clusters, vec![0.0; count], provenance)
    }

    pub fn vertex_count(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, v: u32) -> u32 {
        self.cluster_of[v as usize]
    }

    pub fn members(&self, c: u32) -> &[u32] {
        &self.clusters[c as usize]
    }

    pub fn clusters(&self) -> &[Vec<u32>] {
        &self.clusters
    }

    /// Final local conductance of cluster `c` (cut over volume; 0 for
    /// zero-volume clusters).
    pub fn hlc(&self, c: u32) -> f64 {
        self.hlc_values[c as usize]
    }

    pub fn provenance(&self, c: u32) -> ClusterProvenance {
        self.provenance[c as usize]
    }
}

/// Conductance of one cluster under the seed-equals-cluster reading:
/// cut(S)/vol(S). Zero-volume clusters (isolated vertices) have no
/// well-defined conductance and yield `None`; averages skip them.
pub(crate) fn cluster_phi(h: &Hypergraph, members: &[u32]) -> Option<f64> {
    let s = VertexSet::new(h, members.iter().copied());
    if s.volume() <= 0.0 {
        None
    } else {
        Some(h.cut(&s) / s.volume())
    }
}

/// Contract each cluster into one coarse vertex.
///
/// Coarse vertex weights are summed member weights; hyperedge pins are
/// mapped and de-duplicated within each hyperedge. By default the
/// hyperedge list is preserved one-to-one; `dedup` merges identical
/// coarse hyperedges (weights summed) and `prune_singletons` drops
/// hyperedges with fewer than two pins.
pub fn contract(
    h: &Hypergraph,
    assignment: &ClusterAssignment,
    dedup: bool,
    prune_singletons: bool,
) -> Result<(Hypergraph, Vec<u32>)> {
    if assignment.vertex_count() != h.vertex_count() {
        return Err(Error::param(
            "assignment",
            "assignment does not cover this hypergraph",
        ));
    }
    let n_coarse = assignment.cluster_count();
    let mut vertex_weights = vec![0.0; n_coarse];
    for v in 0..h.vertex_count() as u32 {
        vertex_weights[assignment.cluster_of(v) as usize] += h.vertex_weight(v);
    }

    let mut pins: Vec<Vec<u32>> = Vec::with_capacity(h.hyperedge_count());
    let mut weights: Vec<f64> = Vec::with_capacity(h.hyperedge_count());
    for e in 0..h.hyperedge_count() as u32 {
        let mut mapped: Vec<u32> = h
            .pins(e)
            .iter()
            .map(|&v| assignment.cluster_of(v))
            .collect();
        mapped.sort_unstable();
        mapped.dedup();
        if prune_singletons && mapped.len() <= 1 {
            continue;
        }
        pins.push(mapped);
        weights.push(h.hyperedge_weight(e));
    }

    if dedup {
        let mut merged: indexmap::IndexMap<Vec<u32>, f64> = indexmap::IndexMap::new();
        for (edge, w) in pins.into_iter().zip(weights) {
            *merged.entry(edge).or_insert(0.0) += w;
        }
        let (p, w): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
        pins = p;
        weights = w;
    }

    let coarse = Hypergraph::new(n_coarse, pins, vertex_weights, weights)?;
    Ok((coarse, assignment.cluster_of.clone()))
}

/// Pipeline parameters. Defaults mirror the CLI flags.
#[derive(Debug, Clone)]
pub struct CoarsenConfig {
    /// Target reduction ratio in (0,1): the coarse hypergraph aims for
    /// (1−rr)·n vertices.
    pub rr: f64,
    /// Embedding dimension.
    pub k: usize,
    /// Gauss–Seidel smoothing sweeps.
    pub iters: usize,
    /// Locality parameter δ of the flow objective.
    pub delta: f64,
    /// Refinement convergence threshold ε.
    pub epsilon: f64,
    /// Flow-refinement iteration cap per cluster.
    pub max_iters: usize,
    /// Part count; `None` selects max(1, n/5000).
    pub parts: Option<usize>,
    pub seed: u64,
    pub dedup: bool,
    pub prune_singletons: bool,
    /// Externally supplied partitioning (replaces the internal bisection).
    pub partitioning: Option<Partitioning>,
}

impl Default for CoarsenConfig {
    fn default() -> Self {
        CoarsenConfig {
            rr: 0.5,
            k: 25,
            iters: 10,
            delta: 0.5,
            epsilon: 0.01,
            max_iters: 20,
            parts: None,
            seed: 0,
            dedup: false,
            prune_singletons: false,
            partitioning: None,
        }
    }
}

impl CoarsenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rr > 0.0 && self.rr < 1.0) {
            return Err(Error::param(
                "rr",
                "reduction ratio must lie strictly between 0 and 1",
            ));
        }
        if self.k == 0 {
            return Err(Error::param("k", "embedding dimension must be at least 1"));
        }
        if self.iters == 0 {
            return Err(Error::param(
                "iters",
                "smoothing iteration count must be at least 1",
            ));
        }
        if !(self.delta > 0.0) {
            return Err(Error::param("delta", "locality parameter must be positive"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::param(
                "epsilon",
                "convergence threshold must be positive",
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::param(
                "max_iters",
                "refinement iteration cap must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Default part count: one part per 5000 vertices.
pub fn default_part_count(n: usize) -> usize {
    (n / 5000).max(1)
}

/// Wall-clock breakdown of one coarsening run, in milliseconds.
#[derive(Debug, Clone, Default)]
pub struct StageTimings {
    pub embed_ms: u64,
    pub seed_ms: u64,
    pub partition_ms: u64,
    pub refine_ms: u64,
    pub contract_ms: u64,
    pub total_ms: u64,
}

/// Per-seed refinement record (for quality and locality audits).
#[derive(Debug, Clone)]
pub struct RefineLogEntry {
    pub part: u32,
    pub provenance: ClusterProvenance,
    pub seed_hlc: f64,
    pub refined_hlc: f64,
    /// Local conductance after the seed and each accepted flow step;
    /// non-increasing, first entry `seed_hlc`, last `refined_hlc`.
    pub hlc_trace: Vec<f64>,
    pub touched: usize,
    pub iterations: usize,
}

/// Everything a coarsening run produces.
#[derive(Debug, Clone)]
pub struct CoarseningResult {
    pub coarse: Hypergraph,
    /// Original vertex → coarse vertex.
    pub vertex_map: Vec<u32>,
    pub assignment: ClusterAssignment,
    /// Mean final cluster conductance (the headline quality number).
    pub phi_avg: f64,
    pub timings: StageTimings,
    pub refine_log: Vec<RefineLogEntry>,
}

/// One seed cluster queued for refinement inside a part.
#[derive(Debug, Clone)]
struct SeedTask {
    provenance: ClusterProvenance,
    members: Vec<u32>,
}

/// Restrict seed clusters to parts: each cluster goes to the part holding
/// the majority of its members (ties toward the lower part id), keeping
/// only the members inside that part; displaced members restart as
/// singletons in their own parts, after all majority clusters.
fn assign_seeds_to_parts(
    seeds: &SeedClusterSet,
    partitioning: &Partitioning,
) -> Vec<Vec<SeedTask>> {
    let p = partitioning.part_count();
    let mut tasks: Vec<Vec<SeedTask>> = vec![Vec::new(); p];
    let mut remainders: Vec<Vec<u32>> = vec![Vec::new(); p];
    for (i, members) in seeds.clusters.iter().enumerate() {
        let mut counts = vec![0usize; p];
        for &v in members {
            counts[partitioning.part_of(v) as usize] += 1;
        }
        let majority = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(part, _)| part)
            .unwrap();
        let (kept, displaced): (Vec<u32>, Vec<u32>) = members
            .iter()
            .partition(|&&v| partitioning.part_of(v) as usize == majority);
        tasks[majority].push(SeedTask {
            provenance: ClusterProvenance::Refined { seed: i },
            members: kept,
        });
        for v in displaced {
            remainders[partitioning.part_of(v) as usize].push(v);
        }
    }
    for (part, mut displaced) in remainders.into_iter().enumerate() {
        displaced.sort_unstable();
        for v in displaced {
            tasks[part].push(SeedTask {
                provenance: ClusterProvenance::Remainder(v),
                members: vec![v],
            });
        }
    }
    tasks
}

struct RefinedSeed {
    part: u32,
    provenance: ClusterProvenance,
    members: Vec<u32>,
    hlc_trace: Vec<f64>,
    touched: usize,
    iterations: usize,
}

/// Refine every seed inside every part (parts in parallel), then resolve
/// claims in (part id, seed order) and fill unclaimed vertices as
/// singletons.
fn refine_and_claim(
    h: &Hypergraph,
    seeds: &SeedClusterSet,
    partitioning: &Partitioning,
    config: &CoarsenConfig,
) -> Result<(ClusterAssignment, Vec<RefineLogEntry>)> {
    let tasks = assign_seeds_to_parts(seeds, partitioning);
    let refined: Result<Vec<Vec<RefinedSeed>>> = tasks
        .par_iter()
        .enumerate()
        .map(|(part, part_tasks)| {
            let part = part as u32;
            part_tasks
                .iter()
                .map(|task| {
                    let r = VertexSet::new(h, task.members.iter().copied());
                    let result = flow_refine_filtered(
                        h,
                        &r,
                        config.delta,
                        config.epsilon,
                        config.max_iters,
                        |v| partitioning.part_of(v) == part,
                    )?;
                    Ok(RefinedSeed {
                        part,
                        provenance: task.provenance,
                        members: result.cluster.members().to_vec(),
                        hlc_trace: result.hlc_trace,
                        touched: result.touched,
                        iterations: result.iterations,
                    })
                })
                .collect()
        })
        .collect();
    let refined = refined?;

    let n = h.vertex_count();
    let mut claimed = vec![false; n];
    let mut clusters = Vec::new();
    let mut hlc_values = Vec::new();
    let mut provenance = Vec::new();
    let mut log = Vec::new();
    for part_results in &refined {
        for seed in part_results {
            log.push(RefineLogEntry {
                part: seed.part,
                provenance: seed.provenance,
                seed_hlc: seed.hlc_trace[0],
                refined_hlc: *seed.hlc_trace.last().unwrap(),
                hlc_trace: seed.hlc_trace.clone(),
                touched: seed.touched,
                iterations: seed.iterations,
            });
            let members: Vec<u32> = seed
                .members
                .iter()
                .copied()
                .filter(|&v| !claimed[v as usize])
                .collect();
            if members.is_empty() {
                continue;
            }
            for &v in &members {
                claimed[v as usize] = true;
            }
            hlc_values.push(cluster_phi(h, &members).unwrap_or(0.0));
            clusters.push(members);
            provenance.push(seed.provenance);
        }
    }
    for v in 0..n as u32 {
        if !claimed[v as usize] {
            hlc_values.push(cluster_phi(h, &[v]).unwrap_or(0.0));
            clusters.push(vec![v]);
            provenance.push(ClusterProvenance::Fill(v));
        }
    }

    let assignment = ClusterAssignment::new(n, clusters, hlc_values, provenance)?;
    Ok((assignment, log))
}

/// Run the full coarsening pipeline.
pub fn coarsen(h: &Hypergraph, config: &CoarsenConfig) -> Result<CoarseningResult> {
    config.validate()?;
    let total_start = Instant::now();
    let mut timings = StageTimings::default();

    let stage = Instant::now();
    let bipartite = star_expand(h);
    let emb = smooth_embed(&bipartite, config.k, config.iters, config.seed)?;
    timings.embed_ms = stage.elapsed().as_millis() as u64;

    let stage = Instant::now();
    let seeds = initial_clusters(h, &emb, config.rr, config.seed)?;
    timings.seed_ms = stage.elapsed().as_millis() as u64;

    let stage = Instant::now();
    let partitioning = match &config.partitioning {
        Some(p) => {
            if p.vertex_count() != h.vertex_count() {
                return Err(Error::param(
                    "partitioning",
                    "partition does not cover this hypergraph",
                ));
            }
            p.clone()
        }
        None => {
            let p = config
                .parts
                .unwrap_or_else(|| default_part_count(h.vertex_count()));
            partition(h, &emb, p)?
        }
    };
    timings.partition_ms = stage.elapsed().as_millis() as u64;

    let stage = Instant::now();
    let (assignment, refine_log) = refine_and_claim(h, &seeds, &partitioning, config)?;
    timings.refine_ms = stage.elapsed().as_millis() as u64;

    let stage = Instant::now();
    let (coarse, vertex_map) = contract(h, &assignment, config.dedup, config.prune_singletons)?;
    timings.contract_ms = stage.elapsed().as_millis() as u64;
    timings.total_ms = total_start.elapsed().as_millis() as u64;

    let phi: Vec<f64> = assignment
        .clusters()
        .iter()
        .filter_map(|members| cluster_phi(h, members))
        .collect();
    let phi_avg = if phi.is_empty() {
        0.0
    } else {
        kahan_sum(phi.iter().copied()) / phi.len() as f64
    };

    Ok(CoarseningResult {
        coarse,
        vertex_map,
        assignment,
        phi_avg,
        timings,
        refine_log,
    })
}

/// Partition into `nparts` balanced parts using the coarsening pipeline.
///
/// Flow-refined clusters are produced at the reduction ratio implied by
/// `nparts`, then packed into `nparts` regions (the embedding's median
/// bisection) under a per-part capacity of
/// `floor((1 + ubfactor/100)·n/nparts)`. Each cluster joins the region
/// holding most of its members when it fits; vertices of clusters that
/// do not fit move individually to the nearest non-full region by
/// embedding-space distance.
pub fn balanced_assign(
    h: &Hypergraph,
    emb: &Embedding,
    nparts: usize,
    ubfactor: f64,
    config: &CoarsenConfig,
) -> Result<Partitioning> {
    let n = h.vertex_count();
    if nparts < 2 {
        return Err(Error::param(
            "nparts",
            "balanced assignment needs at least 2 parts",
        ));
    }
    if nparts > n {
        return Err(Error::param(
            "nparts",
            format!("part count {nparts} exceeds vertex count {n}"),
        ));
    }
    if ubfactor < 0.0 {
        return Err(Error::param(
            "ubfactor",
            "imbalance budget must be non-negative",
        ));
    }
    let capacity = ((1.0 + ubfactor / 100.0) * n as f64 / nparts as f64).floor() as usize;
    if capacity * nparts < n {
        return Err(Error::Degenerate(format!(
            "total capacity {} cannot hold {n} vertices",
            capacity * nparts
        )));
    }
    if nparts == n {
        return Partitioning::from_part_ids((0..n as u32).collect());
    }

    // clusters at the reduction ratio implied by the part count
    let rr = 1.0 - nparts as f64 / n as f64;
    let mut pipeline_config = config.clone();
    pipeline_config.rr = rr;
    pipeline_config.validate()?;
    let seeds = initial_clusters(h, emb, rr, pipeline_config.seed)?;
    let regions = match &pipeline_config.partitioning {
        Some(p) => {
            if p.part_count() != nparts {
                return Err(Error::param(
                    "partitioning",
                    "external partition must have nparts parts",
                ));
            }
            p.clone()
        }
        None => partition(h, emb, nparts)?,
    };
    let (assignment, _) = refine_and_claim(h, &seeds, &regions, &pipeline_config)?;

    // fixed anchor centroids per region keep the distance rule stable
    let centroids: Vec<Vec<f64>> = (0..nparts)
        .map(|p| centroid(emb, regions.part(p as u32)))
        .collect();

    // pack whole clusters (largest first) into their majority region
    let mut order: Vec<usize> = (0..assignment.cluster_count()).collect();
    order.sort_by(|&a, &b| {
        assignment.clusters()[b]
            .len()
            .cmp(&assignment.clusters()[a].len())
            .then(a.cmp(&b))
    });
    let mut part_members: Vec<Vec<u32>> = vec![Vec::new(); nparts];
    let mut overflow: Vec<u32> = Vec::new();
    for idx in order {
        let members = &assignment.clusters()[idx];
        let mut counts = vec![0usize; nparts];
        for &v in members {
            counts[regions.part_of(v) as usize] += 1;
        }
        let majority = (0..nparts)
            .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
            .unwrap();
        if part_members[majority].len() + members.len() <= capacity {
            part_members[majority].extend_from_slice(members);
        } else {
            overflow.extend_from_slice(members);
        }
    }

    // vertex-level overflow: nearest non-full region by embedding distance
    overflow.sort_unstable();
    for v in overflow {
        let p = (0..nparts)
            .filter(|&p| part_members[p].len() < capacity)
            .min_by(|&a, &b| {
                dist2(emb.row(v), &centroids[a])
                    .partial_cmp(&dist2(emb.row(v), &centroids[b]))
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .expect("total capacity fits all vertices");
        part_members[p].push(v);
    }

    // no part may end up empty: steal the nearest vertex from the largest
    for p in 0..nparts {
        if !part_members[p].is_empty() {
            continue;
        }
        let donor = (0..nparts)
            .max_by(|&a, &b| {
                part_members[a]
                    .len()
                    .cmp(&part_members[b].len())
                    .then(b.cmp(&a))
            })
            .unwrap();
        let (pos, _) = part_members[donor]
            .iter()
            .enumerate()
            .min_by(|&(_, &a), &(_, &b)| {
                dist2(emb.row(a), &centroids[p])
                    .partial_cmp(&dist2(emb.row(b), &centroids[p]))
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .unwrap();
        let victim = part_members[donor].remove(pos);
        part_members[p].push(victim);
    }

    let mut part_of = vec![0u32; n];
    for (p, members) in part_members.iter().enumerate() {
        for &v in members {
            part_of[v as usize] = p as u32;
        }
    }
    Partitioning::from_part_ids(part_of)
}

fn centroid(emb: &Embedding, members: &[u32]) -> Vec<f64> {
    let mut c = vec![0.0; emb.k];
    for &v in members {
        for (acc, &x) in c.iter_mut().zip(emb.row(v)) {
            *acc += x;
        }
    }
    for acc in &mut c {
        *acc /= members.len() as f64;
    }
    c
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
