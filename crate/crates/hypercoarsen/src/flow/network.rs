//! The s-t flow network encoding of the local cut objective, and an exact
//! Dinic max-flow solver over fixed-point integer capacities.
//!
//! Each hyperedge `e` becomes the two-node gadget `a_e → a'_e` with
//! capacity w(e); every pin feeds `a_e` and is fed by `a'_e` through
//! infinite arcs, so cutting the gadget arc is the only way to separate
//! pins — exactly the all-or-nothing hyperedge cut. Seed vertices hang off
//! the source with capacity d_r, non-seed vertices drain to the sink with
//! capacity δ·d_j. The min s-t cut value then equals
//! `cut(S) + vol(R∖S) + δ·vol(S∖R)` minimized over vertex sets S.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::flow::LocalHypergraph;
use crate::hypergraph::VertexSet;

/// Fixed-point scale for capacities: six decimal digits survive the
/// round-trip, and all flow arithmetic is exact u64 afterwards.
pub const CAPACITY_SCALE: f64 = 1e6;

/// Quantize one real capacity to fixed-point integer units.
pub fn quantize_capacity(x: f64) -> u64 {
    (x * CAPACITY_SCALE).round() as u64
}

const OVERFLOW_LIMIT: u64 = u64::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: u32,
    cap: u64,
}

/// Directed capacitated network with designated source and sink.
///
/// Node layout: 0 = s, 1 = t, then one node per local vertex (in local
/// insertion order), then the `a_e`/`a'_e` pair per local hyperedge.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<u32>>,
    /// Hypergraph vertex id of network node `i + 2`.
    vertex_ids: Vec<u32>,
    /// Finite sentinel standing in for ∞: 1 + sum of all finite capacities.
    infinite: u64,
    first_gadget_arc: Option<usize>,
}

pub const SOURCE: u32 = 0;
pub const SINK: u32 = 1;

impl FlowNetwork {
    fn with_nodes(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); nodes],
            vertex_ids: Vec::new(),
            infinite: 0,
            first_gadget_arc: None,
        }
    }

    fn add_arc(&mut self, from: u32, to: u32, cap: u64) -> usize {
        let idx = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adjacency[from as usize].push(idx as u32);
        self.adjacency[to as usize].push(idx as u32 + 1);
        idx
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Forward arc count.
    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn infinite_sentinel(&self) -> u64 {
        self.infinite
    }

    /// Halve the first hyperedge-gadget capacity. Test hook for the
    /// self-check's negative control: the damaged network must disagree
    /// with the brute-force oracle somewhere.
    pub(crate) fn corrupt_gadget(&mut self) {
        if let Some(idx) = self.first_gadget_arc {
            self.arcs[idx].cap /= 2;
        }
    }

    /// Line-oriented `from to capacity` dump for external cross-checking.
    /// Nodes are labelled `s`, `t`, `v<vertex id>`, `a<i>`/`b<i>`.
    pub fn to_text(&self) -> String {
        let label = |node: u32| -> String {
            match node {
                SOURCE => "s".into(),
                SINK => "t".into(),
                v if (v as usize) < 2 + self.vertex_ids.len() => {
                    format!("v{}", self.vertex_ids[v as usize - 2])
                }
                aux => {
                    let offset = aux as usize - 2 - self.vertex_ids.len();
                    let pair = offset / 2;
                    if offset.is_multiple_of(2) {
                        format!("a{pair}")
                    } else {
                        format!("b{pair}")
                    }
                }
            }
        };
        let mut out = String::new();
        for (from, list) in self.adjacency.iter().enumerate() {
            for &idx in list {
                if idx % 2 != 0 {
                    continue; // skip reverse arcs
                }
                let arc = &self.arcs[idx as usize];
                let cap = if arc.cap == self.infinite {
                    "inf".to_string()
                } else {
                    format!("{}", arc.cap as f64 / CAPACITY_SCALE)
                };
                let _ = writeln!(out, "{} {} {}", label(from as u32), label(arc.to), cap);
            }
        }
        out
    }

    /// Exact max flow (Dinic) plus the minimal source-side min cut.
    ///
    /// The network itself is immutable; flow runs on a scratch copy of the
    /// residual capacities. The source side is the set of nodes reachable
    /// from s in the final residual graph — the unique minimal min cut, so
    /// extraction is deterministic even when several min cuts tie.
    pub fn max_flow(&self) -> FlowResult {
        let mut residual: Vec<u64> = self.arcs.iter().map(|a| a.cap).collect();
        let n = self.node_count();
        let mut value: u64 = 0;
        let mut level = vec![-1i32; n];
        let mut queue = VecDeque::new();

        loop {
            // BFS layering over positive-residual arcs
            level.fill(-1);
            level[SOURCE as usize] = 0;
            queue.clear();
            queue.push_back(SOURCE);
            while let Some(v) = queue.pop_front() {
                for &idx in &self.adjacency[v as usize] {
                    let to = self.arcs[idx as usize].to as usize;
                    if residual[idx as usize] > 0 && level[to] < 0 {
                        level[to] = level[v as usize] + 1;
                        queue.push_back(to as u32);
                    }
                }
            }
            if level[SINK as usize] < 0 {
                break;
            }
            // blocking flow via iterative DFS with per-node arc cursors
            let mut cursor = vec![0usize; n];
            loop {
                let pushed = Self::augment(
                    &self.adjacency,
                    &self.arcs,
                    &mut residual,
                    &level,
                    &mut cursor,
                );
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }

        // residual-reachable set = minimal min-cut source side
        let mut reachable = vec![false; n];
        reachable[SOURCE as usize] = true;
        queue.clear();
        queue.push_back(SOURCE);
        while let Some(v) = queue.pop_front() {
            for &idx in &self.adjacency[v as usize] {
                let to = self.arcs[idx as usize].to as usize;
                if residual[idx as usize] > 0 && !reachable[to] {
                    reachable[to] = true;
                    queue.push_back(to as u32);
                }
            }
        }
        let source_side: Vec<u32> = self
            .vertex_ids
            .iter()
            .enumerate()
            .filter(|&(i, _)| reachable[i + 2])
            .map(|(_, &v)| v)
            .collect();

        FlowResult {
            value,
            source_side,
            reachable,
        }
    }

    /// One source-to-sink augmenting path within the BFS layering;
    /// returns the bottleneck pushed (0 when the layering is exhausted).
    fn augment(
        adjacency: &[Vec<u32>],
        arcs: &[Arc],
        residual: &mut [u64],
        level: &[i32],
        cursor: &mut [usize],
    ) -> u64 {
        let mut path: Vec<u32> = Vec::new();
        let mut node = SOURCE;
        loop {
            if node == SINK {
                let bottleneck = path
                    .iter()
                    .map(|&idx| residual[idx as usize])
                    .min()
                    .expect("path to sink is non-empty");
                for &idx in &path {
                    residual[idx as usize] -= bottleneck;
                    residual[(idx ^ 1) as usize] += bottleneck;
                }
                return bottleneck;
            }
            let list = &adjacency[node as usize];
            let mut advanced = false;
            while cursor[node as usize] < list.len() {
                let idx = list[cursor[node as usize]];
                let to = arcs[idx as usize].to;
                if residual[idx as usize] > 0 && level[to as usize] == level[node as usize] + 1 {
                    path.push(idx);
                    node = to;
                    advanced = true;
                    break;
                }
                cursor[node as usize] += 1;
            }
            if advanced {
                continue;
            }
            // dead end: retreat (or give up at the source)
            match path.pop() {
                Some(idx) => {
                    let from = arcs[(idx ^ 1) as usize].to;
                    cursor[from as usize] += 1;
                    node = from;
                }
                None => return 0,
            }
        }
    }
}

/// Max-flow outcome: exact value and the minimal min-cut source side.
#[derive(Debug, Clone)]
pub struct FlowResult {
    /// Flow value in fixed-point units (divide by [`CAPACITY_SCALE`]).
    pub value: u64,
    /// Hypergraph vertices on the source side, sorted in local order.
    pub source_side: Vec<u32>,
    /// Residual reachability per network node (for cut-value audits).
    pub reachable: Vec<bool>,
}

impl FlowResult {
    /// Recompute the cut value from the reachability split; equals
    /// `self.value` by max-flow/min-cut duality (tested, not assumed).
    pub fn cut_value(&self, net: &FlowNetwork) -> u64 {
        let mut total = 0u64;
        for (from, list) in net.adjacency.iter().enumerate() {
            if !self.reachable[from] {
                continue;
            }
            for &idx in list {
                if idx % 2 != 0 {
                    continue;
                }
                let arc = &net.arcs[idx as usize];
                if !self.reachable[arc.to as usize] {
                    total += arc.cap;
                }
            }
        }
        total
    }
}

/// Assemble the gadget network around a local hypergraph.
///
/// Degrees come from the global hypergraph: the objective's volumes are
/// global even when only a local patch is materialized. Every pin of a
/// local hyperedge is represented — pins outside the grown vertex set
/// (the ring) are by definition non-seed and get sink arcs.
pub fn build_flow_network(hl: &LocalHypergraph, r: &VertexSet, delta: f64) -> Result<FlowNetwork> {
    if !(delta > 0.0) {
        return Err(Error::param("delta", "locality parameter must be positive"));
    }
    for v in r.iter() {
        if !hl.core_contains(v) {
            return Err(Error::param(
                "r",
                format!("seed vertex {v} is outside the local vertex set"),
            ));
        }
    }
    let h = hl.global();
    let universe: Vec<u32> = hl.vertex_universe().collect();
    let edges: Vec<u32> = hl.edges().collect();

    // first pass: total finite capacity fixes the ∞ sentinel
    let mut finite_total: u64 = 0;
    for &v in &universe {
        let cap = if r.contains(v) {
            quantize_capacity(h.degree(v))
        } else {
            quantize_capacity(delta * h.degree(v))
        };
        finite_total = finite_total
            .checked_add(cap)
            .ok_or(Error::CapacityOverflow)?;
    }
    for &e in &edges {
        finite_total = finite_total
            .checked_add(quantize_capacity(h.hyperedge_weight(e)))
            .ok_or(Error::CapacityOverflow)?;
    }
    if finite_total >= OVERFLOW_LIMIT {
        return Err(Error::CapacityOverflow);
    }
    let infinite = finite_total + 1;

    let nodes = 2 + universe.len() + 2 * edges.len();
    let mut net = FlowNetwork::with_nodes(nodes);
    net.vertex_ids = universe.clone();
    net.infinite = infinite;

    let mut node_of = std::collections::HashMap::with_capacity(universe.len());
    for (i, &v) in universe.iter().enumerate() {
        node_of.insert(v, (i + 2) as u32);
    }

    for (i, &v) in universe.iter().enumerate() {
        let node = (i + 2) as u32;
        if r.contains(v) {
            net.add_arc(SOURCE, node, quantize_capacity(h.degree(v)));
        } else {
            net.add_arc(node, SINK, quantize_capacity(delta * h.degree(v)));
        }
    }
    let aux_base = 2 + universe.len();
    for (i, &e) in edges.iter().enumerate() {
        let a = (aux_base + 2 * i) as u32;
        let a_prime = a + 1;
        let idx = net.add_arc(a, a_prime, quantize_capacity(h.hyperedge_weight(e)));
        net.first_gadget_arc.get_or_insert(idx);
        for &v in h.pins(e) {
            let node = node_of[&v];
            net.add_arc(node, a, infinite);
            net.add_arc(a_prime, node, infinite);
        }
    }
    Ok(net)
}
