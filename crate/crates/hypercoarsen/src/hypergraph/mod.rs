//! Hypergraph data model and the weight/volume/cut primitives.
//!
//! A [`Hypergraph`] is an immutable incidence structure: each hyperedge
//! holds the sorted list of its member vertices (pins) and each vertex
//! holds the list of hyperedges containing it. Vertex degree is the summed
//! weight of incident hyperedges, the volume of a vertex set is the sum of
//! its degrees, and cuts are all-or-nothing: a hyperedge pays its full
//! weight whenever its pins land on both sides of a split.

mod expand;
mod io;

pub use expand::{clique_expand, star_expand, BipartiteGraph, Graph};
pub use io::{parse_hmetis, write_hmetis};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Compensated (Kahan) summation; keeps volume/cut sums exact for unit
/// weights and tight for weighted inputs.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Immutable weighted hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    pins: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
    vertex_weights: Vec<f64>,
    hyperedge_weights: Vec<f64>,
    degrees: Vec<f64>,
    total_volume: f64,
}

impl Hypergraph {
    /// Build a hypergraph with explicit weights.
    ///
    /// Pins may arrive in any order; they are stored sorted. Rejects out of
    /// range pins, duplicate pins within a hyperedge, empty hyperedges,
    /// non-positive hyperedge weights and negative vertex weights.
    pub fn new(
        n: usize,
        pins: Vec<Vec<u32>>,
        vertex_weights: Vec<f64>,
        hyperedge_weights: Vec<f64>,
    ) -> Result<Self> {
        if vertex_weights.len() != n {
            return Err(Error::param("vertex_weights", "length must equal n"));
        }
        if hyperedge_weights.len() != pins.len() {
            return Err(Error::param("hyperedge_weights", "length must equal m"));
        }
        for (v, &w) in vertex_weights.iter().enumerate() {
            if !(w >= 0.0) {
                return Err(Error::NegativeVertexWeight {
                    vertex: v,
                    weight: w,
                });
            }
        }
        let mut sorted_pins = pins;
        for (e, pin_list) in sorted_pins.iter_mut().enumerate() {
            if pin_list.is_empty() {
                return Err(Error::EmptyHyperedge { edge: e });
            }
            pin_list.sort_unstable();
            for pair in pin_list.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::DuplicatePin {
                        edge: e,
                        pin: pair[0] as usize + 1,
                    });
                }
            }
            let last = *pin_list.last().unwrap() as usize;
            if last >= n {
                return Err(Error::PinOutOfRange {
                    edge: e,
                    pin: last + 1,
                    n,
                });
            }
            let w = hyperedge_weights[e];
            if !(w > 0.0) {
                return Err(Error::NonPositiveEdgeWeight { edge: e, weight: w });
            }
        }

        let mut incidence = vec![Vec::new(); n];
        for (e, pin_list) in sorted_pins.iter().enumerate() {
            for &v in pin_list {
                incidence[v as usize].push(e as u32);
            }
        }
        let degrees: Vec<f64> = incidence
            .iter()
            .map(|edges| kahan_sum(edges.iter().map(|&e| hyperedge_weights[e as usize])))
            .collect();
        let total_volume = kahan_sum(degrees.iter().copied());

        Ok(Hypergraph {
            pins: sorted_pins,
            incidence,
            vertex_weights,
            hyperedge_weights,
            degrees,
            total_volume,
        })
    }

    /// Build with unit vertex and hyperedge weights.
    pub fn unit(n: usize, pins: Vec<Vec<u32>>) -> Result<Self> {
        let m = pins.len();
        Self::new(n, pins, vec![1.0; n], vec![1.0; m])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn hyperedge_count(&self) -> usize {
        self.pins.len()
    }

    /// Sorted member vertices of hyperedge `e`.
    pub fn pins(&self, e: u32) -> &[u32] {
        &self.pins[e as usize]
    }

    /// Hyperedges containing vertex `v`.
    pub fn edges_of(&self, v: u32) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// Weighted degree d(v) = sum of w(e) over hyperedges containing v.
    pub fn degree(&self, v: u32) -> f64 {
        self.degrees[v as usize]
    }

    pub fn vertex_weight(&self, v: u32) -> f64 {
        self.vertex_weights[v as usize]
    }

    pub fn hyperedge_weight(&self, e: u32) -> f64 {
        self.hyperedge_weights[e as usize]
    }

    /// True when every vertex and hyperedge weight is exactly 1.
    pub fn has_unit_weights(&self) -> bool {
        self.vertex_weights.iter().all(|&w| w == 1.0)
            && self.hyperedge_weights.iter().all(|&w| w == 1.0)
    }

    /// Total pin count, i.e. the sum of hyperedge cardinalities.
    pub fn pin_count(&self) -> usize {
        self.pins.iter().map(Vec::len).sum()
    }

    /// vol(V): sum of all weighted degrees.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// vol over an arbitrary collection of vertices (no dedup performed).
    pub fn volume_of(&self, vertices: impl IntoIterator<Item = u32>) -> f64 {
        kahan_sum(vertices.into_iter().map(|v| self.degree(v)))
    }

    /// True when hyperedge `e` has pins both inside and outside `s`.
    pub fn crosses(&self, e: u32, s: &VertexSet) -> bool {
        let mut inside = false;
        let mut outside = false;
        for &v in self.pins(e) {
            if s.contains(v) {
                inside = true;
            } else {
                outside = true;
            }
            if inside && outside {
                return true;
            }
        }
        false
    }

    /// All-or-nothing cut weight: sum of w(e) over hyperedges crossing `s`.
    ///
    /// Only hyperedges incident to `s` are examined, so the cost is
    /// proportional to the pins touching `s`, not to the whole hypergraph.
    pub fn cut(&self, s: &VertexSet) -> f64 {
        let mut seen: HashSet<u32> = HashSet::new();
        let mut crossing = Vec::new();
        for &v in s.members() {
            for &e in self.edges_of(v) {
                if seen.insert(e) && self.crosses(e, s) {
                    crossing.push(self.hyperedge_weight(e));
                }
            }
        }
        kahan_sum(crossing)
    }

    /// Conductance cut(S, S̄) / min(vol(S), vol(S̄)).
    ///
    /// Undefined (an error) for the empty set, the full vertex set, and
    /// whenever the smaller side has zero volume.
    pub fn conductance(&self, s: &VertexSet) -> Result<f64> {
        if s.is_empty() {
            return Err(Error::Degenerate("empty vertex set".into()));
        }
        if s.len() == self.vertex_count() {
            return Err(Error::Degenerate("full vertex set".into()));
        }
        let vol_s = s.volume();
        let vol_rest = self.total_volume - vol_s;
        let smaller = vol_s.min(vol_rest);
        if smaller <= 0.0 {
            return Err(Error::Degenerate("zero volume on one side".into()));
        }
        Ok(self.cut(s) / smaller)
    }
}

/// A set of vertices with its volume cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet {
    members: Vec<u32>,
    volume: f64,
}

impl VertexSet {
    /// Collect, sort and dedup the given vertices; caches vol(S).
    pub fn new(h: &Hypergraph, vertices: impl IntoIterator<Item = u32>) -> Self {
        let mut members: Vec<u32> = vertices.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        debug_assert!(members
            .last()
            .is_none_or(|&v| (v as usize) < h.vertex_count()));
        let volume = h.volume_of(members.iter().copied());
        VertexSet { members, volume }
    }

    pub fn empty() -> Self {
        VertexSet {
            members: Vec::new(),
            volume: 0.0,
        }
    }

    /// Sorted member list.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Cached vol(S).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_edge_graph() -> Hypergraph {
        // degrees (1, 1, 2, 1)
        Hypergraph::unit(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap()
    }

    #[test]
    fn degrees_match_incident_count_for_unit_weights() {
        let h = two_edge_graph();
        assert_eq!(h.degree(0), 1.0);
        assert_eq!(h.degree(1), 1.0);
        assert_eq!(h.degree(2), 2.0);
        assert_eq!(h.degree(3), 1.0);
        assert_eq!(h.total_volume(), 5.0);
    }

    #[test]
    fn incidence_is_transpose_of_pins() {
        let h = two_edge_graph();
        for v in 0..h.vertex_count() as u32 {
            for &e in h.edges_of(v) {
                assert!(h.pins(e).contains(&v));
            }
        }
        for e in 0..h.hyperedge_count() as u32 {
            for &v in h.pins(e) {
                assert!(h.edges_of(v).contains(&e));
            }
        }
    }

    #[test]
    fn cut_counts_crossing_hyperedges() {
        let h = two_edge_graph();
        let s = VertexSet::new(&h, [0, 1]);
        assert_eq!(h.cut(&s), 1.0);
        assert_eq!(h.cut(&VertexSet::empty()), 0.0);
        let all = VertexSet::new(&h, 0..4);
        assert_eq!(h.cut(&all), 0.0);
    }

    #[test]
    fn conductance_hand_oracle() {
        let h = two_edge_graph();
        let s = VertexSet::new(&h, [0, 1]);
        // cut 1, vol(S) 2, vol(rest) 3
        assert_eq!(h.conductance(&s).unwrap(), 0.5);
        let single = VertexSet::new(&h, [3]);
        assert_eq!(h.conductance(&single).unwrap(), 1.0);
    }

    #[test]
    fn single_hyperedge_always_cut_once() {
        let h = Hypergraph::unit(3, vec![vec![0, 1, 2]]).unwrap();
        for s in [vec![0], vec![1], vec![0, 1], vec![1, 2]] {
            let set = VertexSet::new(&h, s);
            assert_eq!(h.cut(&set), 1.0);
        }
    }

    #[test]
    fn conductance_rejects_degenerate_sets() {
        let h = two_edge_graph();
        assert!(h.conductance(&VertexSet::empty()).is_err());
        assert!(h.conductance(&VertexSet::new(&h, 0..4)).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            Hypergraph::unit(3, vec![vec![0, 3]]),
            Err(Error::PinOutOfRange { .. })
        ));
        assert!(matches!(
            Hypergraph::unit(3, vec![vec![1, 1]]),
            Err(Error::DuplicatePin { .. })
        ));
        assert!(matches!(
            Hypergraph::unit(3, vec![vec![]]),
            Err(Error::EmptyHyperedge { .. })
        ));
        assert!(matches!(
            Hypergraph::new(2, vec![vec![0, 1]], vec![1.0; 2], vec![0.0]),
            Err(Error::NonPositiveEdgeWeight { .. })
        ));
    }

    #[test]
    fn vertex_set_volume_matches_recomputation() {
        let h = two_edge_graph();
        let s = VertexSet::new(&h, [2, 3, 3, 2]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.volume(), h.volume_of(s.iter()));
    }
}
