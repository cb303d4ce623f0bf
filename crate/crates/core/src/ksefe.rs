//! Reduction from 3-Partition to 1-SEFE, its expansion to k-SEFE, and the
//! wheel family that admits a (k+1)-SEFE but no k-SEFE.
//!
//! Unlike the right-angle variant nothing is subdivided: the pumpkin is a
//! plain `K_{2,m+1}` plus handle, and each slice is an alternating private
//! path whose odd positions fan to `s` and whose even positions fan to `t`.
//! The index addresses edges by [`EdgeKey`] so it survives the expansion,
//! which rewrites the edge list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKey, EdgeLabel, SefeInstance, VertexId};
use crate::threep::{validate_instance, InvalidInstance, ThreePartitionInstance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTransversal {
    /// `2B - 1` inner vertices from `v_{j-1}` towards `v_j`.
    pub inner: Vec<VertexId>,
    /// `2B` edges in path order, starting with `Private1`.
    pub edges: Vec<EdgeKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSlice {
    pub a: u64,
    /// `w_1 .. w_{2a+1}`; odd positions attach to `s`, even ones to `t`.
    pub path: Vec<VertexId>,
    /// The `2a` private path edges in order; the first is `Private2`.
    pub tunnel_edges: Vec<EdgeKey>,
    pub fan_t: Vec<EdgeKey>,
    pub fan_s: Vec<EdgeKey>,
}

impl KSlice {
    /// Half the number of private tunnel edges.
    pub fn width(&self) -> u64 {
        self.tunnel_edges.len() as u64 / 2
    }

    /// Inner faces of the tunnel: path plus both fan paths, poles removed.
    pub fn triangle_count(&self) -> usize {
        self.tunnel_edges.len() - 1
    }
}

/// A replacement path `first = (u, mid)`, `second = (mid, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(VertexId, EdgeKey, EdgeKey)", into = "(VertexId, EdgeKey, EdgeKey)")]
pub struct ReplacementPath {
    pub mid: VertexId,
    pub first: EdgeKey,
    pub second: EdgeKey,
}

impl From<(VertexId, EdgeKey, EdgeKey)> for ReplacementPath {
    fn from((mid, first, second): (VertexId, EdgeKey, EdgeKey)) -> Self {
        ReplacementPath { mid, first, second }
    }
}

impl From<ReplacementPath> for (VertexId, EdgeKey, EdgeKey) {
    fn from(p: ReplacementPath) -> Self {
        (p.mid, p.first, p.second)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSefeGadgetIndex {
    pub variant: String,
    pub k: usize,
    #[serde(rename = "B")]
    pub bound: u64,
    pub s: VertexId,
    pub t: VertexId,
    pub v: Vec<VertexId>,
    pub handle: EdgeKey,
    pub transversals: Vec<KTransversal>,
    pub slices: Vec<KSlice>,
    #[serde(default)]
    pub expansion: BTreeMap<EdgeKey, Vec<ReplacementPath>>,
}

fn variant_name(k: usize) -> String {
    if k == 1 {
        "1sefe".to_string()
    } else {
        format!("ksefe({k})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KSefeError {
    #[error("not a 1-SEFE reduction output: {0}")]
    NotAReducedInstance(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("gadget index does not describe a 3-partition instance: {0}")]
    Source(#[from] InvalidInstance),
}

impl KSefeGadgetIndex {
    pub fn m(&self) -> usize {
        self.transversals.len()
    }

    pub fn source_instance(&self) -> Result<ThreePartitionInstance, KSefeError> {
        if self.slices.len() != 3 * self.transversals.len() {
            return Err(KSefeError::NotAReducedInstance(format!(
                "{} slices for {} transversal paths",
                self.slices.len(),
                self.transversals.len()
            )));
        }
        Ok(validate_instance(self.bound, self.slices.iter().map(|s| s.a).collect())?)
    }

    /// Transversal edges of `layer` with both endpoints inner; they form an
    /// induced matching of `(B - 1)m` edges in that layer.
    pub fn inner_matching(&self, layer: EdgeLabel) -> Vec<EdgeKey> {
        self.transversals
            .iter()
            .flat_map(|tr| {
                let last = tr.edges.len().saturating_sub(1);
                tr.edges[1..last].iter().filter(move |e| e.label == layer).copied()
            })
            .collect()
    }
}

/// Builds the reduced 1-SEFE instance with `4Bm + 3m + 3` vertices and
/// `8Bm + 2m + 3` edges.
pub fn reduce_1sefe(src: &ThreePartitionInstance) -> (SefeInstance, KSefeGadgetIndex) {
    let m = src.m();
    let bound = src.bound();
    let mut inst = SefeInstance::new();
    let s = inst.add_vertex("pole:s");
    let t = inst.add_vertex("pole:t");
    let v: Vec<VertexId> = (0..=m).map(|j| inst.add_vertex(format!("rim:{j}"))).collect();
    let shared = |inst: &mut SefeInstance, a: VertexId, b: VertexId| {
        inst.add_edge(a, b, EdgeLabel::Shared);
        EdgeKey::new(a, b, EdgeLabel::Shared)
    };
    for &vj in &v {
        shared(&mut inst, s, vj);
        shared(&mut inst, t, vj);
    }
    let handle = shared(&mut inst, v[0], v[m]);

    let mut transversals = Vec::with_capacity(m);
    for j in 1..=m {
        let inner: Vec<VertexId> =
            (1..2 * bound).map(|p| inst.add_vertex(format!("transversal:{j}:{p}"))).collect();
        let stops: Vec<VertexId> =
            std::iter::once(v[j - 1]).chain(inner.iter().copied()).chain(std::iter::once(v[j])).collect();
        let edges = stops
            .windows(2)
            .enumerate()
            .map(|(p, w)| {
                let label = if p % 2 == 0 { EdgeLabel::Private1 } else { EdgeLabel::Private2 };
                inst.add_edge(w[0], w[1], label);
                EdgeKey::new(w[0], w[1], label)
            })
            .collect();
        transversals.push(KTransversal { inner, edges });
    }

    let mut slices = Vec::with_capacity(src.len());
    for (i, &a) in src.values().iter().enumerate() {
        let path: Vec<VertexId> = (1..=2 * a + 1).map(|p| inst.add_vertex(format!("slice:{i}:w:{p}"))).collect();
        let tunnel_edges = path
            .windows(2)
            .enumerate()
            .map(|(p, w)| {
                let label = if p % 2 == 0 { EdgeLabel::Private2 } else { EdgeLabel::Private1 };
                inst.add_edge(w[0], w[1], label);
                EdgeKey::new(w[0], w[1], label)
            })
            .collect();
        let fan = |inst: &mut SefeInstance, pole: VertexId, start: usize| {
            let members: Vec<VertexId> = path.iter().skip(start).step_by(2).copied().collect();
            let mut keys: Vec<EdgeKey> = members.windows(2).map(|w| shared(inst, w[0], w[1])).collect();
            keys.extend(members.iter().map(|&w| shared(inst, pole, w)));
            keys
        };
        let fan_t = fan(&mut inst, t, 1);
        let fan_s = fan(&mut inst, s, 0);
        slices.push(KSlice { a, path, tunnel_edges, fan_t, fan_s });
    }

    let index = KSefeGadgetIndex {
        variant: variant_name(1),
        k: 1,
        bound,
        s,
        t,
        v,
        handle,
        transversals,
        slices,
        expansion: BTreeMap::new(),
    };
    (inst, index)
}

/// Replaces every private tunnel edge by `k` internally disjoint two-edge
/// paths of the same layer. Existing vertex ids are kept, midpoints are
/// appended and each replaced edge's paths take its place in the edge list.
pub fn expand_to_k(
    inst: &SefeInstance,
    index: &KSefeGadgetIndex,
    k: usize,
) -> Result<(SefeInstance, KSefeGadgetIndex), KSefeError> {
    if k == 0 {
        return Err(KSefeError::ZeroK);
    }
    if index.k != 1 || !index.expansion.is_empty() {
        return Err(KSefeError::NotAReducedInstance(format!("index is already expanded ({})", index.variant)));
    }
    let keys = inst.key_index();
    for key in index.slices.iter().flat_map(|s| &s.tunnel_edges) {
        if !keys.contains_key(key) {
            return Err(KSefeError::NotAReducedInstance(format!("tunnel edge {key} is missing")));
        }
    }
    if k == 1 {
        return Ok((inst.clone(), index.clone()));
    }

    let tunnel: std::collections::BTreeSet<EdgeKey> =
        index.slices.iter().flat_map(|s| s.tunnel_edges.iter().copied()).collect();
    let mut out = SefeInstance::new();
    for v in inst.vertices() {
        out.add_vertex(inst.tag(v).unwrap_or_default().to_string());
    }
    let mut expansion = BTreeMap::new();
    for e in inst.edges() {
        if !tunnel.contains(&e.key()) {
            out.add_edge(e.u, e.v, e.label);
            continue;
        }
        let paths = (0..k)
            .map(|c| {
                let mid = out.add_vertex(format!("mid:{}:{}", e.key(), c));
                out.add_edge(e.u, mid, e.label);
                out.add_edge(mid, e.v, e.label);
                ReplacementPath {
                    mid,
                    first: EdgeKey::new(e.u, mid, e.label),
                    second: EdgeKey::new(mid, e.v, e.label),
                }
            })
            .collect();
        expansion.insert(e.key(), paths);
    }
    let mut expanded = index.clone();
    expanded.k = k;
    expanded.variant = variant_name(k);
    expanded.expansion = expansion;
    Ok((out, expanded))
}

/// Vertex ids in [`wheel_instance`]: rim `u_0..u_{k+1}`, then `v_0..v_{k+1}`,
/// then the center.
pub fn wheel_u(i: usize) -> VertexId {
    VertexId::from(i)
}

pub fn wheel_v(k: usize, i: usize) -> VertexId {
    VertexId::from(k + 2 + i)
}

/// The single `Private1` edge `(u_0, v_0)` of [`wheel_instance`].
pub fn wheel_private1(k: usize) -> EdgeKey {
    EdgeKey::new(wheel_u(0), wheel_v(k, 0), EdgeLabel::Private1)
}

/// Wheel on `2k + 5` vertices with `Private1 = {(u_0, v_0)}` and `k + 1`
/// nested `Private2` chords `(u_i, v_{k+2-i})`, each separating `u_0` from
/// `v_0` on the rim.
pub fn wheel_instance(k: usize) -> SefeInstance {
    let mut inst = SefeInstance::new();
    for i in 0..=k + 1 {
        inst.add_vertex(format!("u:{i}"));
    }
    for i in 0..=k + 1 {
        inst.add_vertex(format!("v:{i}"));
    }
    let center = inst.add_vertex("center");
    let rim = 2 * k + 4;
    for i in 0..rim {
        let a = VertexId::from(i);
        inst.add_edge(a, VertexId::from((i + 1) % rim), EdgeLabel::Shared);
        inst.add_edge(a, center, EdgeLabel::Shared);
    }
    inst.add_edge(wheel_u(0), wheel_v(k, 0), EdgeLabel::Private1);
    for i in 1..=k + 1 {
        inst.add_edge(wheel_u(i), wheel_v(k, k + 2 - i), EdgeLabel::Private2);
    }
    inst
}
