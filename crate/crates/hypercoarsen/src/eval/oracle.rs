use std::fmt::Write as _;

use rand::Rng;

use crate::coarsen::{contract, ClusterAssignment};
use crate::eval::{brute_force_graph_conductance, brute_force_min_hlc, dense_spectrum};
use crate::flow::{build_flow_network, flow_refine, hlc, quantize_capacity, LocalHypergraph};
use crate::hypergraph::Graph;
use crate::rng::stage_rng;
use crate::{Error, Hypergraph, Result, VertexSet};

/// Exhaustive minimum of the quantized s–t cut objective
/// `cut(S) + vol(R∖S) + δ·vol(S∖R)` over all S ⊆ V, mirroring the flow
/// network's per-arc fixed-point rounding term by term. This is the
/// independent oracle the network's min cut is checked against.
pub fn brute_force_st_cut(h: &Hypergraph, r: &VertexSet, delta: f64) -> Result<u64> {
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
    let mut best = u64::MAX;
    for mask in 0..(1u64 << n) {
        let inside = |v: u32| mask >> v & 1 == 1;
        let mut total = 0u64;
        for e in 0..h.hyperedge_count() as u32 {
            let pins = h.pins(e);
            if pins.iter().any(|&v| inside(v)) && pins.iter().any(|&v| !inside(v)) {
                total += quantize_capacity(h.hyperedge_weight(e));
            }
        }
        for v in r.iter() {
            if !inside(v) {
                total += quantize_capacity(h.degree(v));
            }
        }
        for v in 0..n as u32 {
            if inside(v) && !r.contains(v) {
                total += quantize_capacity(delta * h.degree(v));
            }
        }
        best = best.min(total);
    }
    Ok(best)
}

/// One named check of the self-test suite.
#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`oracle_suite`]; any failed check means the build cannot
/// be trusted.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let status = if check.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{status} {} — {}", check.name, check.detail);
        }
        out
    }
}

/// Random test hypergraph: `3..=max_n` vertices, `1..=max_m` hyperedges
/// of cardinality 2..=4, unit weights, no duplicate pins.
pub fn random_hypergraph(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Hypergraph {
    let n = rng.gen_range(3..=max_n.max(3));
    let m = rng.gen_range(1..=max_m.max(1));
    let mut pins = Vec::with_capacity(m);
    for _ in 0..m {
        let cardinality = rng.gen_range(2..=4.min(n));
        let mut edge: Vec<u32> = Vec::with_capacity(cardinality);
        while edge.len() < cardinality {
            let v = rng.gen_range(0..n as u32);
            if !edge.contains(&v) {
                edge.push(v);
            }
        }
        pins.push(edge);
    }
    Hypergraph::unit(n, pins).unwrap()
}

/// Random weighted connected graph (spanning tree plus extra edges), so
/// every vertex has positive degree and Cheeger's inequality applies.
pub fn random_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(3..=max_n.max(3));
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    for v in 1..n as u32 {
        let u = rng.gen_range(0..v);
        edges.push((u, v, rng.gen_range(0.5..2.0)));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v {
            let (a, b) = (u.min(v), u.max(v));
            edges.push((a, b, rng.gen_range(0.5..2.0)));
        }
    }
    Graph::from_edges(n, edges)
}

/// Random total cluster assignment with nonempty clusters.
pub fn random_assignment(rng: &mut impl Rng, n: usize) -> ClusterAssignment {
    let k = rng.gen_range(1..=n);
    let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    // Compact labels so every cluster is nonempty.
    let mut remap = vec![usize::MAX; k];
    let mut next = 0;
    for label in labels.iter_mut() {
        if remap[*label] == usize::MAX {
            remap[*label] = next;
            next += 1;
        }
        *label = remap[*label];
    }
    let mut clusters: Vec<Vec<u32>> = vec![Vec::new(); next];
    for (v, &label) in labels.iter().enumerate() {
        clusters[label].push(v as u32);
    }
    ClusterAssignment::from_clusters(n, clusters).unwrap()
}

fn random_seed_set(rng: &mut impl Rng, h: &Hypergraph) -> VertexSet {
    let n = h.vertex_count();
    let size = rng.gen_range(1..n.max(2));
    let mut members: Vec<u32> = Vec::with_capacity(size);
    while members.len() < size {
        let v = rng.gen_range(0..n as u32);
        if !members.contains(&v) {
            members.push(v);
        }
    }
    VertexSet::new(h, members)
}

fn check_flow_matches_enumeration(seed: u64, instances: usize, corrupt: bool) -> OracleCheck {
    let mut rng = stage_rng(seed, "oracle-flow");
    let mut cases = 0usize;
    let mut failure = None;
    // Fixed instance whose min cut runs through a hyperedge gadget, so
    // the corruption hook is guaranteed to be caught.
    let fixed = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
    for i in 0..=instances {
        let h = if i == 0 {
            fixed.clone()
        } else {
            random_hypergraph(&mut rng, 8, 8)
        };
        let r = if i == 0 {
            VertexSet::new(&h, [0])
        } else {
            random_seed_set(&mut rng, &h)
        };
        for delta in [0.1, 0.5, 1.0] {
            let mut net = match build_flow_network(&LocalHypergraph::full(&h), &r, delta) {
                Ok(net) => net,
                Err(err) => {
                    failure = Some(format!("instance {i}: network construction failed: {err}"));
                    break;
                }
            };
            if corrupt {
                net.corrupt_gadget();
            }
            let flow = net.max_flow().value;
            let expected = match brute_force_st_cut(&h, &r, delta) {
                Ok(v) => v,
                Err(err) => {
                    failure = Some(format!("instance {i}: enumeration failed: {err}"));
                    break;
                }
            };
            cases += 1;
            if flow != expected {
                failure = Some(format!(
                    "instance {i} (n={}, m={}, δ={delta}): flow {flow} vs enumeration {expected}",
                    h.vertex_count(),
                    h.hyperedge_count()
                ));
                break;
            }
        }
        if failure.is_some() {
            break;
        }
    }
    match failure {
        None => OracleCheck {
            name: "flow-matches-enumeration",
            passed: true,
            detail: format!("{cases} cases match exactly"),
        },
        Some(detail) => OracleCheck {
            name: "flow-matches-enumeration",
            passed: false,
            detail,
        },
    }
}

fn check_cheeger_sandwich(seed: u64, instances: usize) -> OracleCheck {
    const TOLERANCE: f64 = 1e-6;
    let mut rng = stage_rng(seed, "oracle-cheeger");
    for i in 0..instances {
        let g = random_graph(&mut rng, 10);
        let spectrum = match dense_spectrum(&g) {
            Ok(s) => s,
            Err(err) => {
                return OracleCheck {
                    name: "cheeger-sandwich",
                    passed: false,
                    detail: format!("instance {i}: eigensolve failed: {err}"),
                }
            }
        };
        let phi = match brute_force_graph_conductance(&g) {
            Ok(p) => p,
            Err(err) => {
                return OracleCheck {
                    name: "cheeger-sandwich",
                    passed: false,
                    detail: format!("instance {i}: conductance enumeration failed: {err}"),
                }
            }
        };
        let lower = spectrum.omega2 / 2.0;
        let upper = (2.0 * spectrum.omega2).sqrt();
        if phi < lower - TOLERANCE || phi > upper + TOLERANCE {
            return OracleCheck {
                name: "cheeger-sandwich",
                passed: false,
                detail: format!(
                    "instance {i} (n={}): Φ={phi} outside [{lower}, {upper}]",
                    g.node_count()
                ),
            };
        }
    }
    OracleCheck {
        name: "cheeger-sandwich",
        passed: true,
        detail: format!("{instances} graphs inside ω₂/2 ≤ Φ ≤ √(2ω₂)"),
    }
}

fn check_cut_projection(seed: u64, instances: usize) -> OracleCheck {
    let mut rng = stage_rng(seed, "oracle-projection");
    for i in 0..instances {
        let h = random_hypergraph(&mut rng, 10, 8);
        let assignment = random_assignment(&mut rng, h.vertex_count());
        let (coarse, vertex_map) = match contract(&h, &assignment, false, false) {
            Ok(pair) => pair,
            Err(err) => {
                return OracleCheck {
                    name: "cut-projection",
                    passed: false,
                    detail: format!("instance {i}: contraction failed: {err}"),
                }
            }
        };
        for _ in 0..8 {
            let coarse_subset: Vec<u32> = (0..coarse.vertex_count() as u32)
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let preimage = (0..h.vertex_count() as u32)
                .filter(|&v| coarse_subset.contains(&vertex_map[v as usize]));
            let cut_coarse = coarse.cut(&VertexSet::new(&coarse, coarse_subset.iter().copied()));
            let cut_fine = h.cut(&VertexSet::new(&h, preimage));
            if cut_coarse != cut_fine {
                return OracleCheck {
                    name: "cut-projection",
                    passed: false,
                    detail: format!(
                        "instance {i}: coarse cut {cut_coarse} vs preimage cut {cut_fine}"
                    ),
                };
            }
        }
    }
    OracleCheck {
        name: "cut-projection",
        passed: true,
        detail: format!("{instances} hypergraphs, 8 subsets each, bit-exact"),
    }
}

fn check_hlc_lower_bound(seed: u64, instances: usize) -> OracleCheck {
    let mut rng = stage_rng(seed, "oracle-hlc");
    for i in 0..instances {
        let h = random_hypergraph(&mut rng, 8, 6);
        let r = random_seed_set(&mut rng, &h);
        let delta = [0.1, 0.5, 1.0][rng.gen_range(0..3)];
        let optimum = match brute_force_min_hlc(&h, &r, delta) {
            Ok((_, value)) => value,
            Err(Error::Degenerate(_)) => continue,
            Err(err) => {
                return OracleCheck {
                    name: "hlc-lower-bound",
                    passed: false,
                    detail: format!("instance {i}: enumeration failed: {err}"),
                }
            }
        };
        let refined = match flow_refine(&h, &r, delta, 1e-9, 50) {
            Ok(result) => result,
            Err(err) => {
                return OracleCheck {
                    name: "hlc-lower-bound",
                    passed: false,
                    detail: format!("instance {i}: refinement failed: {err}"),
                }
            }
        };
        let achieved = hlc(&h, &refined.cluster, &r, delta).unwrap_or(f64::INFINITY);
        if achieved < optimum - 1e-9 {
            return OracleCheck {
                name: "hlc-lower-bound",
                passed: false,
                detail: format!(
                    "instance {i} (δ={delta}): refined HLC {achieved} below exhaustive optimum {optimum}"
                ),
            };
        }
    }
    OracleCheck {
        name: "hlc-lower-bound",
        passed: true,
        detail: format!("{instances} instances never beat the exhaustive optimum"),
    }
}

/// Run the bundled self-check suite: flow min cuts against exhaustive
/// enumeration (δ sweep), the Cheeger sandwich, exact cut projection
/// under contraction, and refinement-vs-enumeration HLC bounds.
///
/// `corrupt_gadget` deliberately damages every flow network first; the
/// suite must then fail — a negative control proving the checks can
/// detect a broken gadget.
pub fn oracle_suite(seed: u64, instances: usize, corrupt_gadget: bool) -> OracleReport {
    let per_check = instances.max(1);
    OracleReport {
        checks: vec![
            check_flow_matches_enumeration(seed, per_check, corrupt_gadget),
            check_cheeger_sandwich(seed, per_check),
            check_cut_projection(seed, per_check),
            check_hlc_lower_bound(seed, per_check),
        ],
    }
}
