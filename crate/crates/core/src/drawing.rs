//! Integer-grid drawings of reduced instances.
//!
//! [`construct_drawing`] lays out a reduced instance from a 3-partition:
//! every tunnel sits on a horizontal array of 4x4 cells, rungs on the vertical
//! cell sides and zig-zag edges on alternating cell diagonals, and the inner
//! vertices of each transversal path occupy the free anchor points of its
//! wedge from left to right. [`verify_drawing`] checks an arbitrary drawing
//! with exact arithmetic, and [`decode_solution`] reads the partition back
//! from which transversal path crosses which slice.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{on_open_segment, segments_properly_cross, Point, RationalPoint};
use crate::gracsim::{GadgetIndex, IndexError};
use crate::graph::{EdgeLabel, SefeInstance, VertexId};
use crate::threep::{solution_issues, verify_solution, SolutionIssue, ThreePartitionSolution};

/// Side length of a cell in grid units.
pub const CELL: i64 = 4;

/// A 4x4 grid square given by its bottom-left corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub origin: Point,
}

impl Cell {
    pub fn center(&self) -> Point {
        Point::new(self.origin.x + 2, self.origin.y + 2)
    }

    /// Anchor points on the positive-slope diagonal, left to right.
    pub fn positive_anchors(&self) -> [Point; 2] {
        let o = self.origin;
        [Point::new(o.x + 1, o.y + 1), Point::new(o.x + 3, o.y + 3)]
    }

    /// Anchor points on the negative-slope diagonal, left to right.
    pub fn negative_anchors(&self) -> [Point; 2] {
        let o = self.origin;
        [Point::new(o.x + 1, o.y + 3), Point::new(o.x + 3, o.y + 1)]
    }
}

/// A horizontal run of `len` cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct CellArray {
    x0: i64,
    y0: i64,
    len: i64,
}

impl CellArray {
    fn cell(&self, c: i64) -> Cell {
        Cell { origin: Point::new(self.x0 + CELL * c, self.y0) }
    }

    fn right(&self) -> i64 {
        self.x0 + CELL * self.len
    }

    /// Anchors left free by the zig-zag: cells with a `+1` diagonal (odd
    /// 1-based position) keep their negative-slope anchors and vice versa.
    fn free_anchors(&self) -> Vec<Point> {
        (0..self.len)
            .flat_map(|c| {
                let cell = self.cell(c);
                if c % 2 == 0 {
                    cell.negative_anchors()
                } else {
                    cell.positive_anchors()
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDrawing {
    pub coords: BTreeMap<VertexId, Point>,
}

impl GridDrawing {
    pub fn get(&self, v: VertexId) -> Option<Point> {
        self.coords.get(&v).copied()
    }

    pub fn set(&mut self, v: VertexId, p: Point) {
        self.coords.insert(v, p);
    }

    pub fn scaled(&self, factor: i64) -> GridDrawing {
        GridDrawing { coords: self.coords.iter().map(|(&v, &p)| (v, p.scaled(factor))).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrawingError {
    #[error("vertex {0} has no coordinates")]
    UnmappedVertex(VertexId),
    #[error("solution does not partition the planted values: {0:?}")]
    SolutionMismatch(Vec<SolutionIssue>),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("gadget index does not match the instance: {0}")]
    IndexMismatch(String),
    #[error("drawing is not a valid simultaneous right-angle drawing ({0} violations)")]
    InvalidDrawing(usize),
    #[error("drawing does not decode to a 3-partition: {0}")]
    MalformedDrawing(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRecord {
    /// Edge indices, smaller first.
    pub edges: (usize, usize),
    pub labels: (EdgeLabel, EdgeLabel),
    pub point: RationalPoint,
    pub right_angle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "code")]
pub enum DrawingViolation {
    UnknownVertex { vertex: VertexId },
    DuplicatePoint { a: VertexId, b: VertexId },
    VertexOnEdge { vertex: VertexId, edge: usize },
    Overlap { a: usize, b: usize },
    SharedEdgeCrossed { a: usize, b: usize },
    SameLayerCrossing { a: usize, b: usize },
    NonPerpendicular { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub valid: bool,
    pub crossings: Vec<CrossingRecord>,
    pub violations: Vec<DrawingViolation>,
}

impl CrossingReport {
    /// Crossings touching edge `e`.
    pub fn crossings_of(&self, e: usize) -> impl Iterator<Item = &CrossingRecord> {
        self.crossings.iter().filter(move |c| c.edges.0 == e || c.edges.1 == e)
    }
}

fn check_index(inst: &SefeInstance, index: &GadgetIndex) -> Result<(), DrawingError> {
    let n = inst.vertex_count();
    let e = inst.edge_count();
    let p = &index.pumpkin;
    let vertices = [p.s, p.t]
        .into_iter()
        .chain(p.v.iter().copied())
        .chain(p.v_s.iter().copied())
        .chain(p.v_t.iter().copied())
        .chain(p.handle)
        .chain(index.transversals.iter().flat_map(|t| t.inner.iter().copied()))
        .chain(index.slices.iter().flat_map(|s| {
            s.pi_t.iter().chain(&s.pi_s).chain(&s.sub_t).chain(&s.sub_s).copied()
        }));
    for v in vertices {
        if v.index() >= n {
            return Err(DrawingError::IndexMismatch(format!("vertex {v} outside the instance")));
        }
    }
    let edges = index
        .transversals
        .iter()
        .flat_map(|t| t.edges.iter())
        .chain(index.slices.iter().flat_map(|s| s.rungs.iter().chain(&s.zigzags)));
    for &ei in edges {
        if ei >= e {
            return Err(DrawingError::IndexMismatch(format!("edge {ei} outside the instance")));
        }
    }
    let m = index.m();
    if p.v.len() != m + 1 || p.v_s.len() != m + 1 || p.v_t.len() != m + 1 {
        return Err(DrawingError::IndexMismatch("rim size differs from the wedge count".into()));
    }
    for (j, tr) in index.transversals.iter().enumerate() {
        if tr.inner.len() as u64 != 2 * index.bound {
            return Err(DrawingError::IndexMismatch(format!("transversal {} has {} inner vertices", j + 1, tr.inner.len())));
        }
    }
    for (i, s) in index.slices.iter().enumerate() {
        let len = s.a as usize + 1;
        if [s.pi_t.len(), s.pi_s.len(), s.sub_t.len(), s.sub_s.len(), s.rungs.len()].iter().any(|&l| l != len)
            || s.zigzags.len() != len - 1
        {
            return Err(DrawingError::IndexMismatch(format!("slice {i} has inconsistent vertex lists")));
        }
    }
    Ok(())
}

/// Integer-grid drawing of a reduced instance from a 3-partition of its
/// slice values. Slices of triple `j` go into wedge `j` in the triple's order.
pub fn construct_drawing(
    inst: &SefeInstance,
    index: &GadgetIndex,
    sol: &ThreePartitionSolution,
) -> Result<GridDrawing, DrawingError> {
    check_index(inst, index)?;
    let source = index.source_instance()?;
    let issues = solution_issues(&source, sol);
    if !issues.is_empty() {
        return Err(DrawingError::SolutionMismatch(issues));
    }

    // cell arrays left to right; 1-cell gaps inside a triple, 2-cell between
    let mut arrays: Vec<Vec<(usize, CellArray)>> = Vec::with_capacity(sol.triples.len());
    let mut prev: Option<CellArray> = None;
    for triple in &sol.triples {
        let mut wedge = Vec::with_capacity(3);
        for (k, &i) in triple.iter().enumerate() {
            let len = index.slices[i].a as i64;
            let (x0, y0) = match prev {
                None => (0, 0),
                Some(p) => {
                    let gap = if k == 0 { 2 } else { 1 };
                    // odd predecessor: drop half a cell so free anchors line up
                    let y0 = if p.len % 2 == 1 { p.y0 - CELL / 2 } else { p.y0 };
                    (p.right() + CELL * gap, y0)
                }
            };
            let array = CellArray { x0, y0, len };
            wedge.push((i, array));
            prev = Some(array);
        }
        arrays.push(wedge);
    }

    let all = || arrays.iter().flatten().map(|(_, a)| a);
    let left = all().map(|a| a.x0).min().unwrap() - CELL;
    let right = all().map(|a| a.right()).max().unwrap() + CELL;
    let bottom = all().map(|a| a.y0).min().unwrap() - CELL;
    let top = all().map(|a| a.y0 + CELL).max().unwrap() + CELL;

    let mut d = GridDrawing::default();
    for wedge in &arrays {
        for &(i, array) in wedge {
            let slice = &index.slices[i];
            for k in 0..slice.pi_t.len() {
                let x = array.x0 + CELL * k as i64;
                d.set(slice.pi_s[k], Point::new(x, array.y0));
                d.set(slice.pi_t[k], Point::new(x, array.y0 + CELL));
                d.set(slice.sub_s[k], Point::new(x, bottom));
                d.set(slice.sub_t[k], Point::new(x, top));
            }
        }
    }

    let p = &index.pumpkin;
    let m = index.m();
    let mut rim = Vec::with_capacity(m + 1);
    for wedge in &arrays {
        let first = wedge[0].1;
        rim.push(Point::new(first.x0 - CELL, first.free_anchors()[0].y));
    }
    let last = arrays[m - 1][2].1;
    let last_anchor = *last.free_anchors().last().unwrap();
    rim.push(Point::new(last.right() + CELL, last_anchor.y));
    for (j, &pt) in rim.iter().enumerate() {
        d.set(p.v[j], pt);
        d.set(p.v_t[j], Point::new(pt.x, top));
        d.set(p.v_s[j], Point::new(pt.x, bottom));
    }

    let bisector = (left + right).div_euclid(2);
    let t = Point::new(bisector, top + 2 * CELL);
    let s = Point::new(bisector, bottom - 2 * CELL);
    d.set(p.t, t);
    d.set(p.s, s);
    d.set(p.handle[0], Point::new(rim[0].x - CELL, t.y + CELL));
    d.set(p.handle[1], Point::new(rim[m].x + CELL, t.y + CELL));

    for (j, wedge) in arrays.iter().enumerate() {
        let anchors: Vec<Point> = wedge.iter().flat_map(|(_, a)| a.free_anchors()).collect();
        let inner = &index.transversals[j].inner;
        debug_assert_eq!(anchors.len(), inner.len());
        for (&v, &pt) in inner.iter().zip(&anchors) {
            d.set(v, pt);
        }
    }

    if let Some(v) = inst.vertices().find(|v| d.get(*v).is_none()) {
        return Err(DrawingError::IndexMismatch(format!("vertex {v} is not part of any gadget")));
    }
    Ok(d)
}

/// Exhaustive exact check of a straight-line drawing.
///
/// The drawing is valid iff all vertices sit on distinct points, no vertex
/// lies inside a non-incident edge, no two segments overlap, and every
/// crossing pairs a `Private1` edge with a `Private2` edge at a right angle.
pub fn verify_drawing(inst: &SefeInstance, d: &GridDrawing) -> Result<CrossingReport, DrawingError> {
    let pts: Vec<Point> = inst
        .vertices()
        .map(|v| d.get(v).ok_or(DrawingError::UnmappedVertex(v)))
        .collect::<Result<_, _>>()?;
    let mut violations = Vec::new();
    for &v in d.coords.keys() {
        if v.index() >= inst.vertex_count() {
            violations.push(DrawingViolation::UnknownVertex { vertex: v });
        }
    }

    let mut by_point: Vec<(Point, VertexId)> = inst.vertices().map(|v| (pts[v.index()], v)).collect();
    by_point.sort_unstable();
    for w in by_point.windows(2) {
        if w[0].0 == w[1].0 {
            violations.push(DrawingViolation::DuplicatePoint { a: w[0].1, b: w[1].1 });
        }
    }

    let edges = inst.edges();
    let seg = |e: usize| (pts[edges[e].u.index()], pts[edges[e].v.index()]);
    let bbox = |e: usize| {
        let (a, b) = seg(e);
        (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
    };

    for (ei, e) in edges.iter().enumerate() {
        let (a, b) = seg(ei);
        let (x0, x1, y0, y1) = bbox(ei);
        for (vi, &p) in pts.iter().enumerate() {
            if p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1 {
                continue;
            }
            let v = VertexId::from(vi);
            if !e.has_endpoint(v) && on_open_segment(p, a, b) {
                violations.push(DrawingViolation::VertexOnEdge { vertex: v, edge: ei });
            }
        }
    }

    // sweep over edges sorted by left end; pairs with disjoint x-ranges never meet
    let boxes: Vec<_> = (0..edges.len()).map(bbox).collect();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&e| (boxes[e].0, e));
    let mut crossings = Vec::new();
    for (pos, &a) in order.iter().enumerate() {
        let (_, ax1, ay0, ay1) = boxes[a];
        for &b in &order[pos + 1..] {
            let (bx0, _, by0, by1) = boxes[b];
            if bx0 > ax1 {
                break;
            }
            if by0 > ay1 || by1 < ay0 {
                continue;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            let (p1, p2) = seg(lo);
            let (q1, q2) = seg(hi);
            match segments_properly_cross(p1, p2, q1, q2) {
                Err(_) => violations.push(DrawingViolation::Overlap { a: lo, b: hi }),
                Ok(None) => {}
                Ok(Some(c)) => {
                    let labels = (edges[lo].label, edges[hi].label);
                    if labels.0 == EdgeLabel::Shared || labels.1 == EdgeLabel::Shared {
                        violations.push(DrawingViolation::SharedEdgeCrossed { a: lo, b: hi });
                    } else if labels.0 == labels.1 {
                        violations.push(DrawingViolation::SameLayerCrossing { a: lo, b: hi });
                    } else if !c.perpendicular {
                        violations.push(DrawingViolation::NonPerpendicular { a: lo, b: hi });
                    }
                    crossings.push(CrossingRecord {
                        edges: (lo, hi),
                        labels,
                        point: c.point,
                        right_angle: c.perpendicular,
                    });
                }
            }
        }
    }
    crossings.sort_by_key(|c| c.edges);
    violations.sort();
    Ok(CrossingReport { valid: violations.is_empty(), crossings, violations })
}

/// Reads a 3-partition off a valid drawing of a reduced instance: slice `i`
/// belongs to wedge `j` iff its tunnel edges cross transversal path `j`.
pub fn decode_solution(
    inst: &SefeInstance,
    index: &GadgetIndex,
    d: &GridDrawing,
) -> Result<ThreePartitionSolution, DrawingError> {
    check_index(inst, index)?;
    let source = index.source_instance()?;
    let report = verify_drawing(inst, d)?;
    if !report.valid {
        return Err(DrawingError::InvalidDrawing(report.violations.len()));
    }
    let slice_of = index.slice_of_edge(inst.edge_count());
    let path_of = index.transversal_of_edge(inst.edge_count());
    let mut crossed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); index.slices.len()];
    for c in &report.crossings {
        let (a, b) = c.edges;
        for (x, y) in [(a, b), (b, a)] {
            if let (Some(i), Some(j)) = (slice_of[x], path_of[y]) {
                crossed[i].insert(j);
            }
        }
    }
    let mut wedges: Vec<Vec<usize>> = vec![Vec::new(); index.m()];
    for (i, paths) in crossed.iter().enumerate() {
        match paths.len() {
            1 => wedges[*paths.first().unwrap()].push(i),
            k => {
                return Err(DrawingError::MalformedDrawing(format!("slice {i} crosses {k} transversal paths")));
            }
        }
    }
    let mut triples = Vec::with_capacity(wedges.len());
    for (j, w) in wedges.iter().enumerate() {
        let t: [usize; 3] = w
            .as_slice()
            .try_into()
            .map_err(|_| DrawingError::MalformedDrawing(format!("wedge {} holds {} slices", j + 1, w.len())))?;
        triples.push(t);
    }
    let sol = ThreePartitionSolution { triples };
    if !verify_solution(&source, &sol) {
        return Err(DrawingError::MalformedDrawing("wedge contents do not sum to B".into()));
    }
    Ok(sol)
}
