//! Evaluation metrics and small-instance oracles: average cluster
//! conductance, cut preservation under coarsen→bisect→project, k-way
//! conductance, exhaustive HLC/cut enumerations, a dense eigensolver for
//! Cheeger checks, and reference baselines to compare the pipeline
//! against. Everything here is read-only and off the hot path.

mod baseline;
mod oracle;
mod spectrum;

pub use baseline::{coarse_target, random_contraction, run_baseline, BaselineKind, BaselineResult};
pub use oracle::{
    brute_force_st_cut, oracle_suite, random_assignment, random_graph, random_hypergraph,
    OracleCheck, OracleReport,
};
pub use spectrum::{
    brute_force_graph_conductance, dense_spectrum, Spectrum, CONDUCTANCE_NODE_CAP,
    SPECTRUM_NODE_CAP,
};

use crate::coarsen::{cluster_phi, partition, ClusterAssignment, CoarseningResult, Partitioning};
use crate::embed::smooth_embed;
use crate::flow;
use crate::hypergraph::{kahan_sum, star_expand};
use crate::report::Report;
use crate::{Error, Hypergraph, Result, VertexSet};

/// Per-cluster conductance summary under the seed-equals-cluster
/// reading: each cluster scores `cut(S)/vol(S)`.
#[derive(Debug, Clone)]
pub struct PhiSummary {
    /// Mean over clusters with positive volume; 0 when none have any.
    pub phi_avg: f64,
    /// `(cluster index, conductance)` for every positive-volume cluster;
    /// `phi_avg` is exactly the mean of these values.
    pub per_cluster: Vec<(usize, f64)>,
    /// Clusters of isolated vertices, excluded from the mean.
    pub zero_volume_clusters: usize,
}

impl PhiSummary {
    /// CSV of the per-cluster values, one row per positive-volume cluster.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cluster,hlc\n");
        for &(c, phi) in &self.per_cluster {
            out.push_str(&format!("{c},{phi:.9}\n"));
        }
        out
    }
}

/// Conductance of every cluster of `assignment` in `h`.
pub fn phi_summary(h: &Hypergraph, assignment: &ClusterAssignment) -> Result<PhiSummary> {
    if assignment.vertex_count() != h.vertex_count() {
        return Err(Error::param(
            "assignment",
            "assignment does not cover this hypergraph",
        ));
    }
    if assignment.cluster_count() == 0 {
        return Err(Error::Degenerate("no clusters to average".into()));
    }
    let mut per_cluster = Vec::new();
    let mut zero_volume = 0usize;
    for (c, members) in assignment.clusters().iter().enumerate() {
        match cluster_phi(h, members) {
            Some(phi) => per_cluster.push((c, phi)),
            None => zero_volume += 1,
        }
    }
    let phi_avg = if per_cluster.is_empty() {
        0.0
    } else {
        kahan_sum(per_cluster.iter().map(|&(_, phi)| phi)) / per_cluster.len() as f64
    };
    Ok(PhiSummary {
        phi_avg,
        per_cluster,
        zero_volume_clusters: zero_volume,
    })
}

/// Average local conductance of a clustering: the mean over clusters of
/// `cut(S)/vol(S)`, with each cluster acting as its own seed set. Under
/// that reading the locality parameter cancels from the denominator, so
/// `delta` is validated (it is echoed into reports) but cannot change
/// the value. Zero-volume clusters are excluded from the mean; use
/// [`phi_summary`] to see how many there were.
pub fn average_local_conductance(
    h: &Hypergraph,
    assignment: &ClusterAssignment,
    delta: f64,
) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::param("delta", "locality parameter must be positive"));
    }
    Ok(phi_summary(h, assignment)?.phi_avg)
}

/// Worst-part conductance of a k-way partitioning: the maximum over
/// parts of `cut(part)/vol(part)`.
pub fn kway_conductance(h: &Hypergraph, parts: &Partitioning) -> Result<f64> {
    if parts.vertex_count() != h.vertex_count() {
        return Err(Error::param(
            "parts",
            "partitioning does not cover this hypergraph",
        ));
    }
    if parts.part_count() < 2 {
        return Err(Error::param("parts", "need at least two parts"));
    }
    let mut worst = 0.0f64;
    for p in 0..parts.part_count() as u32 {
        let s = VertexSet::new(h, parts.part(p).iter().copied());
        let vol = s.volume();
        if vol <= 0.0 {
            return Err(Error::Degenerate(format!("part {p} has zero volume")));
        }
        if h.total_volume() - vol <= 0.0 {
            return Err(Error::Degenerate(format!(
                "part {p} has a zero-volume complement"
            )));
        }
        worst = worst.max(h.cut(&s) / vol);
    }
    Ok(worst)
}

/// Any 2-way vertex partitioner usable by [`cut_preservation`].
pub trait Bisector {
    fn bisect(&self, h: &Hypergraph) -> Result<Partitioning>;
}

/// Default bisector: smoothed spectral embedding followed by a median
/// split on the dominant coordinate.
#[derive(Debug, Clone)]
pub struct SpectralBisector {
    pub k: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for SpectralBisector {
    fn default() -> Self {
        SpectralBisector {
            k: 8,
            iters: 30,
            seed: 0,
        }
    }
}

impl Bisector for SpectralBisector {
    fn bisect(&self, h: &Hypergraph) -> Result<Partitioning> {
        if h.vertex_count() < 2 {
            return Err(Error::Degenerate(
                "cannot bisect fewer than two vertices".into(),
            ));
        }
        let embedding = smooth_embed(&star_expand(h), self.k, self.iters, self.seed)?;
        partition(h, &embedding, 2)
    }
}

/// Bisector backed by an externally computed partition (for example a
/// reference partitioner's output loaded from a file). The stored
/// partition applies to whichever hypergraph it covers — typically the
/// coarse one — and the fallback handles the other side.
#[derive(Debug, Clone)]
pub struct FileBisector {
    pub partitioning: Partitioning,
    pub fallback: SpectralBisector,
}

impl Bisector for FileBisector {
    fn bisect(&self, h: &Hypergraph) -> Result<Partitioning> {
        if self.partitioning.vertex_count() != h.vertex_count() {
            return self.fallback.bisect(h);
        }
        if self.partitioning.part_count() != 2 {
            return Err(Error::param(
                "partition-file",
                "external partition must have exactly 2 parts",
            ));
        }
        Ok(self.partitioning.clone())
    }
}

/// Outcome of [`cut_preservation`].
#[derive(Debug, Clone, Copy)]
pub struct CutPreservation {
    /// Weight cut by bisecting the original hypergraph directly.
    pub cut_before: f64,
    /// Weight cut in the original hypergraph by the projected bisection
    /// of the coarse hypergraph.
    pub cut_after: f64,
    /// `|after − before| / before`; 0 when both cuts are 0.
    pub relative_diff: f64,
}

/// How well coarsening preserves cuts: bisect the original hypergraph
/// and the coarse one with the same bisector, pull the coarse bisection
/// back through the vertex map, and compare cut weights in the original.
pub fn cut_preservation(
    h: &Hypergraph,
    result: &CoarseningResult,
    bisector: &dyn Bisector,
) -> Result<CutPreservation> {
    let fine = bisector.bisect(h)?;
    if fine.part_count() != 2 {
        return Err(Error::Degenerate(
            "bisection of the original hypergraph has one side".into(),
        ));
    }
    let cut_before = h.cut(&VertexSet::new(h, fine.part(0).iter().copied()));

    let coarse = bisector.bisect(&result.coarse)?;
    if coarse.part_count() != 2 {
        return Err(Error::Degenerate(
            "bisection of the coarse hypergraph has one side".into(),
        ));
    }
    let projected = (0..h.vertex_count() as u32)
        .filter(|&v| coarse.part_of(result.vertex_map[v as usize]) == 0);
    let cut_after = h.cut(&VertexSet::new(h, projected));

    let relative_diff = if cut_before > 0.0 {
        (cut_after - cut_before).abs() / cut_before
    } else if cut_after == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(CutPreservation {
        cut_before,
        cut_after,
        relative_diff,
    })
}

/// Exhaustive minimum of local conductance over every subset with a
/// positive seed-relative denominator. Exponential; capped at 20
/// vertices. Ties resolve to the first minimizer in ascending subset
/// order, so the result is deterministic.
pub fn brute_force_min_hlc(h: &Hypergraph, r: &VertexSet, delta: f64) -> Result<(VertexSet, f64)> {
    const CAP: usize = 20;
    let n = h.vertex_count();
    if n > CAP {
        return Err(Error::OracleTooLarge { n, cap: CAP });
    }
    if r.is_empty() {
        return Err(Error::param("r", "seed set must be non-empty"));
    }
    if delta <= 0.0 {
        return Err(Error::param("delta", "locality parameter must be positive"));
    }
    let mut best: Option<(u64, f64)> = None;
    for mask in 1..(1u64 << n) {
        let s = VertexSet::new(h, (0..n as u32).filter(|&v| mask >> v & 1 == 1));
        let value = flow::hlc(h, &s, r, delta)?;
        if !value.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((mask, value));
        }
    }
    match best {
        Some((mask, value)) => {
            let s = VertexSet::new(h, (0..n as u32).filter(|&v| mask >> v & 1 == 1));
            Ok((s, value))
        }
        None => Err(Error::Degenerate(
            "no subset has a positive seed-relative volume".into(),
        )),
    }
}

/// Everything `cmd_eval` measures, in one place.
#[derive(Debug, Clone)]
pub struct EvalReport {
    /// Locality parameter the run was annotated with.
    pub delta: f64,
    pub phi: PhiSummary,
    pub cut: Option<CutPreservation>,
    pub kway_conductance: Option<f64>,
    pub baseline: Option<(BaselineKind, f64)>,
    pub wall_ms: u64,
}

impl EvalReport {
    /// Key/value text form, matching the coarsener's report schema.
    pub fn to_report(&self) -> Report {
        let mut report = Report::new();
        report.set_float("delta", self.delta);
        report.set_float("phi_avg", self.phi.phi_avg);
        report.set(
            "clusters",
            (self.phi.per_cluster.len() + self.phi.zero_volume_clusters).to_string(),
        );
        report.set(
            "zero_volume_clusters",
            self.phi.zero_volume_clusters.to_string(),
        );
        if let Some(cut) = self.cut {
            report.set_float("cut_before", cut.cut_before);
            report.set_float("cut_after", cut.cut_after);
            report.set_float("relative_cut_diff", cut.relative_diff);
        }
        if let Some(kway) = self.kway_conductance {
            report.set_float("kway_conductance", kway);
        }
        if let Some((kind, phi)) = self.baseline {
            let name = match kind {
                BaselineKind::Random => "random",
                BaselineKind::Star => "star",
                BaselineKind::Clique => "clique",
            };
            report.set("baseline", name.to_string());
            report.set_float("baseline_phi_avg", phi);
        }
        report.set("wall_ms", self.wall_ms.to_string());
        report
    }
}
