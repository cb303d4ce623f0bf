//! Reduction from 3-Partition to simultaneous right-angle-crossing drawing.
//!
//! The reduced instance consists of a subdivided pumpkin (all shared), one
//! alternating transversal path per wedge and one subdivided slice per
//! element of `A`. Vertex ids are assigned pumpkin first, then transversal
//! paths by wedge, then slices by element, each gadget in construction order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeLabel, SefeInstance, VertexId};
use crate::threep::{validate_instance, InvalidInstance, ThreePartitionInstance};

/// Vertices of the subdivided pumpkin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpkinIndex {
    pub s: VertexId,
    pub t: VertexId,
    /// Rim vertices `v_0 .. v_m`.
    pub v: Vec<VertexId>,
    /// Subdivision vertex of `(s, v_j)`.
    pub v_s: Vec<VertexId>,
    /// Subdivision vertex of `(t, v_j)`.
    pub v_t: Vec<VertexId>,
    /// Handle subdivision vertices, the first adjacent to `v_0`.
    pub handle: [VertexId; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalIndex {
    /// Inner vertices from `v_{j-1}` towards `v_j`.
    pub inner: Vec<VertexId>,
    /// Edge indices in path order. Odd positions (1-based) are `Private1`.
    pub edges: Vec<usize>,
}

/// One subdivided slice encoding the value `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub a: u64,
    /// `pi_t(1) .. pi_t(a+1)`.
    pub pi_t: Vec<VertexId>,
    /// `pi_s(1) .. pi_s(a+1)`.
    pub pi_s: Vec<VertexId>,
    /// Subdivision vertex between `t` and `pi_t(k)`.
    pub sub_t: Vec<VertexId>,
    /// Subdivision vertex between `s` and `pi_s(k)`.
    pub sub_s: Vec<VertexId>,
    /// `Private2` edges `pi_s(k)-pi_t(k)`, k = 1..a+1.
    pub rungs: Vec<usize>,
    /// `Private1` edges, k = 1..a.
    pub zigzags: Vec<usize>,
}

impl SliceSpec {
    /// Half the number of tunnel triangles.
    pub fn width(&self) -> u64 {
        self.a
    }

    pub fn tunnel_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.pi_t.iter().chain(self.pi_s.iter()).copied()
    }

    pub fn private_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.rungs.iter().chain(self.zigzags.iter()).copied()
    }
}

/// Structural annotation of a reduced instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetIndex {
    #[serde(rename = "B")]
    pub bound: u64,
    #[serde(flatten)]
    pub pumpkin: PumpkinIndex,
    pub transversals: Vec<TransversalIndex>,
    pub slices: Vec<SliceSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("gadget index does not describe a 3-partition instance: {0}")]
    Source(#[from] InvalidInstance),
    #[error("gadget index has {transversals} transversal paths for {slices} slices")]
    Shape { transversals: usize, slices: usize },
}

impl GadgetIndex {
    pub fn m(&self) -> usize {
        self.transversals.len()
    }

    /// The 3-Partition instance encoded by the slices.
    pub fn source_instance(&self) -> Result<ThreePartitionInstance, IndexError> {
        if self.slices.len() != 3 * self.transversals.len() {
            return Err(IndexError::Shape { transversals: self.transversals.len(), slices: self.slices.len() });
        }
        Ok(validate_instance(self.bound, self.slices.iter().map(|s| s.a).collect())?)
    }

    /// Which slice owns each edge (`None` for pumpkin and transversal edges).
    pub fn slice_of_edge(&self, edge_count: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; edge_count];
        for (i, s) in self.slices.iter().enumerate() {
            for e in s.private_edges() {
                owner[e] = Some(i);
            }
        }
        owner
    }

    /// Which transversal path owns each edge.
    pub fn transversal_of_edge(&self, edge_count: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; edge_count];
        for (j, tr) in self.transversals.iter().enumerate() {
            for &e in &tr.edges {
                owner[e] = Some(j);
            }
        }
        owner
    }
}

/// Appends a subdivided pumpkin for `m` wedges: `3m + 7` vertices and
/// `4m + 7` shared edges.
pub fn build_pumpkin_subdivided(inst: &mut SefeInstance, m: usize) -> PumpkinIndex {
    assert!(m >= 1, "a pumpkin needs at least one wedge");
    let s = inst.add_vertex("pole:s");
    let t = inst.add_vertex("pole:t");
    let v: Vec<VertexId> = (0..=m).map(|j| inst.add_vertex(format!("rim:{j}"))).collect();
    let handle = [inst.add_vertex("handle:0"), inst.add_vertex("handle:1")];
    let mut v_s = Vec::with_capacity(m + 1);
    let mut v_t = Vec::with_capacity(m + 1);
    for j in 0..=m {
        v_s.push(inst.add_vertex(format!("spoke_s:{j}")));
        v_t.push(inst.add_vertex(format!("spoke_t:{j}")));
    }
    inst.add_edge(v[0], handle[0], EdgeLabel::Shared);
    inst.add_edge(handle[0], handle[1], EdgeLabel::Shared);
    inst.add_edge(handle[1], v[m], EdgeLabel::Shared);
    for j in 0..=m {
        inst.add_edge(s, v_s[j], EdgeLabel::Shared);
        inst.add_edge(v_s[j], v[j], EdgeLabel::Shared);
        inst.add_edge(t, v_t[j], EdgeLabel::Shared);
        inst.add_edge(v_t[j], v[j], EdgeLabel::Shared);
    }
    PumpkinIndex { s, t, v, v_s, v_t, handle }
}

/// Appends an alternating path of `2 * half + 1` private edges from `from` to
/// `to`, starting and ending with `Private1`.
pub fn add_transversal_subdivided(
    inst: &mut SefeInstance,
    from: VertexId,
    to: VertexId,
    half: u64,
    tag: &str,
) -> TransversalIndex {
    let inner: Vec<VertexId> = (1..=2 * half).map(|p| inst.add_vertex(format!("{tag}:{p}"))).collect();
    let mut edges = Vec::with_capacity(inner.len() + 1);
    let mut prev = from;
    for (q, &w) in inner.iter().chain(std::iter::once(&to)).enumerate() {
        let label = if q % 2 == 0 { EdgeLabel::Private1 } else { EdgeLabel::Private2 };
        edges.push(inst.add_edge(prev, w, label));
        prev = w;
    }
    TransversalIndex { inner, edges }
}

/// Appends a subdivided slice for value `a` attached to the poles: `4a + 4`
/// vertices, `6a + 4` shared edges, `a + 1` `Private2` rungs and `a`
/// `Private1` zig-zag edges.
pub fn build_slice_subdivided(
    inst: &mut SefeInstance,
    a: u64,
    s: VertexId,
    t: VertexId,
    tag: &str,
) -> SliceSpec {
    assert!(a >= 1, "slice value must be positive");
    let len = a as usize + 1;
    let pi_t: Vec<VertexId> = (1..=len).map(|k| inst.add_vertex(format!("{tag}:pi_t:{k}"))).collect();
    let sub_t: Vec<VertexId> = (1..=len).map(|k| inst.add_vertex(format!("{tag}:sub_t:{k}"))).collect();
    let pi_s: Vec<VertexId> = (1..=len).map(|k| inst.add_vertex(format!("{tag}:pi_s:{k}"))).collect();
    let sub_s: Vec<VertexId> = (1..=len).map(|k| inst.add_vertex(format!("{tag}:sub_s:{k}"))).collect();
    for (pole, path, sub) in [(t, &pi_t, &sub_t), (s, &pi_s, &sub_s)] {
        for w in path.windows(2) {
            inst.add_edge(w[0], w[1], EdgeLabel::Shared);
        }
        for k in 0..len {
            inst.add_edge(pole, sub[k], EdgeLabel::Shared);
            inst.add_edge(sub[k], path[k], EdgeLabel::Shared);
        }
    }
    let rungs = (0..len).map(|k| inst.add_edge(pi_s[k], pi_t[k], EdgeLabel::Private2)).collect();
    // 1-based k odd: pi_s(k)-pi_t(k+1); k even: pi_t(k)-pi_s(k+1)
    let zigzags = (0..len - 1)
        .map(|k| {
            if k % 2 == 0 {
                inst.add_edge(pi_s[k], pi_t[k + 1], EdgeLabel::Private1)
            } else {
                inst.add_edge(pi_t[k], pi_s[k + 1], EdgeLabel::Private1)
            }
        })
        .collect();
    SliceSpec { a, pi_t, pi_s, sub_t, sub_s, rungs, zigzags }
}

/// Builds the reduced instance. It has `6Bm + 15m + 7` vertices and
/// `10Bm + 20m + 7` edges.
pub fn reduce_gracsim(src: &ThreePartitionInstance) -> (SefeInstance, GadgetIndex) {
    let m = src.m();
    let bound = src.bound();
    let mut inst = SefeInstance::new();
    let pumpkin = build_pumpkin_subdivided(&mut inst, m);
    let transversals = (1..=m)
        .map(|j| add_transversal_subdivided(&mut inst, pumpkin.v[j - 1], pumpkin.v[j], bound, &format!("transversal:{j}")))
        .collect();
    let slices = src
        .values()
        .iter()
        .enumerate()
        .map(|(i, &a)| build_slice_subdivided(&mut inst, a, pumpkin.s, pumpkin.t, &format!("slice:{i}")))
        .collect();
    (inst, GadgetIndex { bound, pumpkin, transversals, slices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::split_layers;
    use crate::planarity::is_planar;

    #[test]
    fn pumpkin_counts() {
        for (m, nv, ne) in [(3, 16, 19), (1, 10, 11)] {
            let mut inst = SefeInstance::new();
            let p = build_pumpkin_subdivided(&mut inst, m);
            assert_eq!(inst.vertex_count(), nv);
            assert_eq!(inst.edge_count(), ne);
            assert_eq!(inst.count_label(EdgeLabel::Shared), ne);
            assert!(is_planar(&split_layers(&inst).unwrap().union));
            // every spoke path has exactly two edges through its subdivision vertex
            for j in 0..=m {
                for (pole, mid) in [(p.s, p.v_s[j]), (p.t, p.v_t[j])] {
                    let incident: Vec<_> = inst.edges().iter().filter(|e| e.has_endpoint(mid)).collect();
                    assert_eq!(incident.len(), 2);
                    assert!(incident.iter().any(|e| e.has_endpoint(pole)));
                    assert!(incident.iter().any(|e| e.has_endpoint(p.v[j])));
                }
            }
        }
    }

    #[test]
    fn slice_a1_by_enumeration() {
        let mut inst = SefeInstance::with_vertices(2);
        let spec = build_slice_subdivided(&mut inst, 1, VertexId(0), VertexId(1), "slice:0");
        assert_eq!(inst.vertex_count() - 2, 8);
        assert_eq!(inst.count_label(EdgeLabel::Shared), 10);
        assert_eq!(spec.rungs.len(), 2);
        assert_eq!(spec.zigzags.len(), 1);
        let z = inst.edge(spec.zigzags[0]);
        assert_eq!((z.u, z.v), (spec.pi_s[0], spec.pi_t[1]));
    }

    #[test]
    fn slice_a7_private_edge_counts() {
        let mut inst = SefeInstance::with_vertices(2);
        let spec = build_slice_subdivided(&mut inst, 7, VertexId(0), VertexId(1), "slice:0");
        assert_eq!(spec.rungs.len(), 8);
        assert_eq!(spec.zigzags.len(), 7);
        assert_eq!(inst.count_label(EdgeLabel::Private2), 8);
        assert_eq!(inst.count_label(EdgeLabel::Private1), 7);
        assert_eq!(spec.width(), 7);
        // second zig-zag goes from the t side down
        let z = inst.edge(spec.zigzags[1]);
        assert_eq!((z.u, z.v), (spec.pi_t[1], spec.pi_s[2]));
    }

    #[test]
    fn transversal_alternates_and_ends_with_private1() {
        let mut inst = SefeInstance::with_vertices(2);
        let tr = add_transversal_subdivided(&mut inst, VertexId(0), VertexId(1), 4, "transversal:1");
        assert_eq!(tr.inner.len(), 8);
        assert_eq!(tr.edges.len(), 9);
        let labels: Vec<_> = tr.edges.iter().map(|&e| inst.edge(e).label).collect();
        assert_eq!(labels.first(), Some(&EdgeLabel::Private1));
        assert_eq!(labels.last(), Some(&EdgeLabel::Private1));
        assert!(labels.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn reduction_is_deterministic() {
        let src = validate_instance(24, vec![7, 7, 7, 8, 8, 8, 8, 9, 10]).unwrap();
        assert_eq!(reduce_gracsim(&src), reduce_gracsim(&src));
    }

    #[test]
    fn index_recovers_source_instance() {
        let src = validate_instance(24, vec![7, 7, 7, 8, 8, 8, 8, 9, 10]).unwrap();
        let (_, index) = reduce_gracsim(&src);
        assert_eq!(index.source_instance().unwrap(), src);
    }
}
