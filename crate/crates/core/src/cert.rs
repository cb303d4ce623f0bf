//! Crossing-structure certificates for k-SEFE.
//!
//! A certificate lists, for every `Private1` edge, the `Private2` edges it
//! crosses in order, and for every `Private2` edge the `(Private1 edge,
//! occurrence)` pairs in order. Orders run from the smaller endpoint id of
//! the edge to the larger one. Replacing each crossing by a dummy vertex
//! yields a multigraph that is planar iff the certificate describes a
//! simultaneous embedding.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKey, EdgeLabel, Multigraph, SefeInstance};
use crate::ksefe::KSefeGadgetIndex;
use crate::planarity::is_planar;
use crate::threep::{solution_issues, SolutionIssue, ThreePartitionSolution};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingStructure {
    pub k: usize,
    #[serde(default)]
    pub e1: BTreeMap<EdgeKey, Vec<EdgeKey>>,
    #[serde(default)]
    pub e2: BTreeMap<EdgeKey, Vec<(EdgeKey, usize)>>,
}

impl CrossingStructure {
    pub fn total_crossings(&self) -> usize {
        self.e1.values().map(Vec::len).sum()
    }

    /// Largest number of crossings on a single edge of either layer.
    pub fn max_crossings(&self) -> usize {
        self.e1.values().map(Vec::len).chain(self.e2.values().map(Vec::len)).max().unwrap_or(0)
    }

    /// `(e1 edge, e2 edge, occurrence)` triples in `e1` order.
    fn triples_from_e1(&self) -> Vec<(EdgeKey, EdgeKey, usize)> {
        let mut out = Vec::with_capacity(self.total_crossings());
        for (&e, list) in &self.e1 {
            let mut seen: HashMap<EdgeKey, usize> = HashMap::new();
            for &f in list {
                let occ = seen.entry(f).or_insert(0);
                out.push((e, f, *occ));
                *occ += 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("edge {0} is not in the instance")]
    UnknownEdge(EdgeKey),
    #[error("inconsistent crossing structure: {0}")]
    InconsistentStructure(String),
    #[error("solution does not partition the planted values: {0:?}")]
    SolutionMismatch(Vec<SolutionIssue>),
    #[error("gadget index does not match the instance: {0}")]
    IndexMismatch(String),
    #[error("instance too large for exhaustive search: {private_edges} private edges, cap {cap} (limits {max_private_edges}, {max_cap})")]
    SizeLimitExceeded { private_edges: usize, cap: usize, max_private_edges: usize, max_cap: usize },
}

fn check_edge(keys: &HashMap<EdgeKey, usize>, key: &EdgeKey, label: EdgeLabel) -> Result<(), CertError> {
    if !keys.contains_key(key) {
        return Err(CertError::UnknownEdge(*key));
    }
    if key.label != label {
        return Err(CertError::InconsistentStructure(format!("{key} listed as a {label} edge")));
    }
    Ok(())
}

/// Checks that both views name the same crossings exactly once.
pub fn check_consistency(inst: &SefeInstance, cs: &CrossingStructure) -> Result<(), CertError> {
    let keys = inst.key_index();
    for (e, list) in &cs.e1 {
        check_edge(&keys, e, EdgeLabel::Private1)?;
        for f in list {
            check_edge(&keys, f, EdgeLabel::Private2)?;
        }
    }
    for (f, list) in &cs.e2 {
        check_edge(&keys, f, EdgeLabel::Private2)?;
        for (e, _) in list {
            check_edge(&keys, e, EdgeLabel::Private1)?;
        }
    }
    let from_e1: BTreeSet<_> = cs.triples_from_e1().into_iter().collect();
    let mut from_e2 = BTreeSet::new();
    for (&f, list) in &cs.e2 {
        for &(e, occ) in list {
            let triple = (e, f, occ);
            if !from_e2.insert(triple) {
                return Err(CertError::InconsistentStructure(format!("crossing {e} x {f} #{occ} listed twice on {f}")));
            }
            if !from_e1.contains(&triple) {
                return Err(CertError::InconsistentStructure(format!("crossing {e} x {f} #{occ} missing on {e}")));
            }
        }
    }
    if let Some((e, f, occ)) = from_e1.difference(&from_e2).next() {
        return Err(CertError::InconsistentStructure(format!("crossing {e} x {f} #{occ} missing on {f}")));
    }
    Ok(())
}

fn planarize_unchecked(inst: &SefeInstance, cs: &CrossingStructure) -> (Multigraph, Vec<EdgeLabel>) {
    let n = inst.vertex_count();
    let mut dummy: HashMap<(EdgeKey, EdgeKey, usize), usize> = HashMap::new();
    for triple in cs.triples_from_e1() {
        let id = n + dummy.len();
        dummy.insert(triple, id);
    }
    let mut edges = Vec::with_capacity(inst.edge_count() + 2 * dummy.len());
    let mut labels = Vec::with_capacity(edges.capacity());
    for edge in inst.edges() {
        let key = edge.key();
        let stops: Vec<usize> = match key.label {
            EdgeLabel::Private1 => {
                let mut seen: HashMap<EdgeKey, usize> = HashMap::new();
                cs.e1
                    .get(&key)
                    .into_iter()
                    .flatten()
                    .map(|&f| {
                        let occ = seen.entry(f).or_insert(0);
                        *occ += 1;
                        dummy[&(key, f, *occ - 1)]
                    })
                    .collect()
            }
            EdgeLabel::Private2 => {
                cs.e2.get(&key).into_iter().flatten().map(|&(e, occ)| dummy[&(e, key, occ)]).collect()
            }
            EdgeLabel::Shared => Vec::new(),
        };
        labels.extend(std::iter::repeat_n(key.label, stops.len() + 1));
        if stops.is_empty() {
            edges.push((edge.u.index(), edge.v.index()));
            continue;
        }
        let mut prev = key.u.index();
        for d in stops {
            edges.push((prev, d));
            prev = d;
        }
        edges.push((prev, key.v.index()));
    }
    (Multigraph::new(n + dummy.len(), edges).expect("dummy ids are in range"), labels)
}

/// Replaces every crossing by a fresh dummy vertex. Dummies are numbered
/// from `n` in `e1` order; each private edge becomes a path through its
/// dummies in the declared order.
pub fn planarize(inst: &SefeInstance, cs: &CrossingStructure) -> Result<Multigraph, CertError> {
    Ok(planarize_labeled(inst, cs)?.0)
}

/// [`planarize`] together with the layer each output edge comes from.
pub fn planarize_labeled(inst: &SefeInstance, cs: &CrossingStructure) -> Result<(Multigraph, Vec<EdgeLabel>), CertError> {
    check_consistency(inst, cs)?;
    Ok(planarize_unchecked(inst, cs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub valid: bool,
    pub k: usize,
    pub total_crossings: usize,
    pub max_crossings: usize,
    pub within_cap: bool,
    pub planar: bool,
}

pub fn certificate_report(inst: &SefeInstance, cs: &CrossingStructure, k: usize) -> Result<CertReport, CertError> {
    let g = planarize(inst, cs)?;
    let max_crossings = cs.max_crossings();
    let planar = is_planar(&g);
    let within_cap = max_crossings <= k;
    Ok(CertReport {
        valid: within_cap && planar,
        k,
        total_crossings: cs.total_crossings(),
        max_crossings,
        within_cap,
        planar,
    })
}

/// True iff every private edge has at most `k` crossings and the
/// planarization is planar.
pub fn verify_certificate(inst: &SefeInstance, cs: &CrossingStructure, k: usize) -> Result<bool, CertError> {
    Ok(certificate_report(inst, cs, k)?.valid)
}

/// Certificate for a reduced (and possibly expanded) 1-SEFE instance: in
/// wedge `j` the tunnels of triple `j` are traversed left to right and the
/// `p`-th transversal edge crosses the `p`-th tunnel edge, or the first edge
/// of each of its replacement paths.
pub fn construct_certificate(
    inst: &SefeInstance,
    index: &KSefeGadgetIndex,
    sol: &ThreePartitionSolution,
) -> Result<CrossingStructure, CertError> {
    let source = index.source_instance().map_err(|e| CertError::IndexMismatch(e.to_string()))?;
    let issues = solution_issues(&source, sol);
    if !issues.is_empty() {
        return Err(CertError::SolutionMismatch(issues));
    }
    let keys = inst.key_index();
    let mut cs = CrossingStructure { k: index.k, ..Default::default() };
    for (j, triple) in sol.triples.iter().enumerate() {
        let tunnel: Vec<EdgeKey> = triple.iter().flat_map(|&i| index.slices[i].tunnel_edges.iter().copied()).collect();
        let path = &index.transversals[j].edges;
        if tunnel.len() != path.len() {
            return Err(CertError::IndexMismatch(format!(
                "wedge {} has {} tunnel edges for a path of {}",
                j + 1,
                tunnel.len(),
                path.len()
            )));
        }
        for (&t_edge, &tunnel_edge) in path.iter().zip(&tunnel) {
            if t_edge.label != tunnel_edge.label.opposite() {
                return Err(CertError::IndexMismatch(format!("{t_edge} and {tunnel_edge} are in the same layer")));
            }
            let targets: Vec<EdgeKey> = if index.k == 1 {
                vec![tunnel_edge]
            } else {
                let paths = index
                    .expansion
                    .get(&tunnel_edge)
                    .ok_or_else(|| CertError::IndexMismatch(format!("no expansion for {tunnel_edge}")))?;
                paths.iter().map(|p| p.first).collect()
            };
            for key in targets.iter().chain(std::iter::once(&t_edge)) {
                if !keys.contains_key(key) {
                    return Err(CertError::UnknownEdge(*key));
                }
            }
            if t_edge.label == EdgeLabel::Private1 {
                for &f in &targets {
                    cs.e2.entry(f).or_default().push((t_edge, 0));
                }
                cs.e1.insert(t_edge, targets);
            } else {
                for &e in &targets {
                    cs.e1.entry(e).or_default().push(t_edge);
                }
                cs.e2.insert(t_edge, targets.into_iter().map(|e| (e, 0)).collect());
            }
        }
    }
    Ok(cs)
}

/// Bounds for [`min_private_edge_crossings`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimits {
    pub max_private_edges: usize,
    pub max_cap: usize,
}

impl Default for SizeLimits {
    fn default() -> Self {
        SizeLimits { max_private_edges: 10, max_cap: 6 }
    }
}

fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|x| *x > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

fn all_orders<T: Ord + Clone>(mut items: Vec<T>) -> Vec<Vec<T>> {
    items.sort();
    let mut out = vec![items.clone()];
    while next_permutation(&mut items) {
        out.push(items.clone());
    }
    out
}

struct Search<'a> {
    inst: &'a SefeInstance,
    p1: Vec<EdgeKey>,
    p2: Vec<EdgeKey>,
    cap: usize,
    /// Row or column of the target edge.
    target: (EdgeLabel, usize),
    counts: Vec<usize>,
}

impl Search<'_> {
    fn line_sum(&self, label: EdgeLabel, i: usize) -> usize {
        let cols = self.p2.len();
        match label {
            EdgeLabel::Private1 => self.counts[i * cols..(i + 1) * cols].iter().sum(),
            _ => (0..self.p1.len()).map(|r| self.counts[r * cols + i]).sum(),
        }
    }

    /// Fills the count matrix cell by cell, then tries every order.
    fn fill(&mut self, cell: usize, want: usize) -> Option<CrossingStructure> {
        let cols = self.p2.len();
        if cell == self.counts.len() {
            let (label, i) = self.target;
            if self.line_sum(label, i) != want {
                return None;
            }
            return self.try_orders();
        }
        let (r, c) = (cell / cols, cell % cols);
        let row_used: usize = self.counts[r * cols..r * cols + c].iter().sum();
        let col_used: usize = (0..r).map(|q| self.counts[q * cols + c]).sum();
        let mut room = self.cap - row_used.max(col_used);
        let (label, i) = self.target;
        let on_target = (label == EdgeLabel::Private1 && i == r) || (label == EdgeLabel::Private2 && i == c);
        if on_target {
            room = room.min(want.saturating_sub(if label == EdgeLabel::Private1 { row_used } else { col_used }));
        }
        for x in 0..=room {
            self.counts[cell] = x;
            if let Some(found) = self.fill(cell + 1, want) {
                return Some(found);
            }
        }
        self.counts[cell] = 0;
        None
    }

    fn try_orders(&self) -> Option<CrossingStructure> {
        let cols = self.p2.len();
        let mut choices: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
        for r in 0..self.p1.len() {
            let partners: Vec<(usize, usize)> =
                (0..cols).flat_map(|c| std::iter::repeat_n((c, 0), self.counts[r * cols + c])).collect();
            choices.push(all_orders(partners));
        }
        for c in 0..cols {
            let items: Vec<(usize, usize)> =
                (0..self.p1.len()).flat_map(|r| (0..self.counts[r * cols + c]).map(move |o| (r, o))).collect();
            choices.push(all_orders(items));
        }
        let mut pick = vec![0usize; choices.len()];
        loop {
            let cs = self.structure(&choices, &pick);
            if is_planar(&planarize_unchecked(self.inst, &cs).0) {
                return Some(cs);
            }
            let mut d = choices.len();
            loop {
                if d == 0 {
                    return None;
                }
                d -= 1;
                pick[d] += 1;
                if pick[d] < choices[d].len() {
                    break;
                }
                pick[d] = 0;
            }
        }
    }

    fn structure(&self, choices: &[Vec<Vec<(usize, usize)>>], pick: &[usize]) -> CrossingStructure {
        let mut cs = CrossingStructure { k: self.cap, ..Default::default() };
        for (r, &e) in self.p1.iter().enumerate() {
            let order = &choices[r][pick[r]];
            if !order.is_empty() {
                cs.e1.insert(e, order.iter().map(|&(c, _)| self.p2[c]).collect());
            }
        }
        for (c, &f) in self.p2.iter().enumerate() {
            let d = self.p1.len() + c;
            let order = &choices[d][pick[d]];
            if !order.is_empty() {
                cs.e2.insert(f, order.iter().map(|&(r, o)| (self.p1[r], o)).collect());
            }
        }
        cs
    }
}

/// Smallest `c <= cap` for which some certificate with every private edge
/// crossed at most `cap` times and `e` crossed exactly `c` times passes
/// verification, together with the first such certificate in enumeration
/// order. `None` if no certificate within `cap` exists.
pub fn min_crossings_witness(
    inst: &SefeInstance,
    e: &EdgeKey,
    cap: usize,
    limits: SizeLimits,
) -> Result<Option<(usize, CrossingStructure)>, CertError> {
    if !e.label.is_private() || inst.find_edge(e).is_none() {
        return Err(CertError::UnknownEdge(*e));
    }
    let mut p1: Vec<EdgeKey> = inst.edges().iter().filter(|x| x.label == EdgeLabel::Private1).map(|x| x.key()).collect();
    let mut p2: Vec<EdgeKey> = inst.edges().iter().filter(|x| x.label == EdgeLabel::Private2).map(|x| x.key()).collect();
    p1.sort();
    p2.sort();
    if p1.len() + p2.len() > limits.max_private_edges || cap > limits.max_cap {
        return Err(CertError::SizeLimitExceeded {
            private_edges: p1.len() + p2.len(),
            cap,
            max_private_edges: limits.max_private_edges,
            max_cap: limits.max_cap,
        });
    }
    let target = match e.label {
        EdgeLabel::Private1 => (EdgeLabel::Private1, p1.binary_search(e).unwrap()),
        _ => (EdgeLabel::Private2, p2.binary_search(e).unwrap()),
    };
    let cells = p1.len() * p2.len();
    let mut search = Search { inst, p1, p2, cap, target, counts: vec![0; cells] };
    for want in 0..=cap {
        if let Some(cs) = search.fill(0, want) {
            return Ok(Some((want, cs)));
        }
    }
    Ok(None)
}

pub fn min_private_edge_crossings(
    inst: &SefeInstance,
    e: &EdgeKey,
    cap: usize,
    limits: SizeLimits,
) -> Result<Option<usize>, CertError> {
    Ok(min_crossings_witness(inst, e, cap, limits)?.map(|(c, _)| c))
}
