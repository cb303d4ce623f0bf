//! Left-right planarity test (Brandes' formulation of de Fraysseix and
//! Rosenstiehl's criterion), testing phase only.
//!
//! Both DFS passes run on explicit stacks so that deep inputs (long
//! transversal paths, planarized certificates) do not depend on the thread
//! stack size.

use crate::graph::Multigraph;

const NONE: usize = usize::MAX;

/// True iff `g` admits a planar drawing. Loops, parallel edges and isolated
/// vertices are ignored.
pub fn is_planar(g: &Multigraph) -> bool {
    let simple = g.simplify();
    let n = simple.vertex_count();
    let m = simple.edge_count();
    if n > 2 && m > 3 * n - 6 {
        return false;
    }
    LrState::new(&simple).run()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn single(e: usize) -> Self {
        Interval { low: Some(e), high: Some(e) }
    }

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState {
    n: usize,
    adj: Vec<Vec<(usize, usize)>>,
    // orientation, indexed by undirected edge id
    oriented: Vec<bool>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    out: Vec<Vec<usize>>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<usize>,
    roots: Vec<usize>,
    // testing
    refs: Vec<Option<usize>>,
    lowpt_edge: Vec<Option<usize>>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

impl LrState {
    fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        LrState {
            n,
            adj,
            oriented: vec![false; m],
            src: vec![NONE; m],
            tgt: vec![NONE; m],
            out: vec![Vec::new(); n],
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting_depth: vec![0; m],
            roots: Vec::new(),
            refs: vec![None; m],
            lowpt_edge: vec![None; m],
            stack_bottom: vec![0; m],
            stack: Vec::new(),
        }
    }

    fn run(mut self) -> bool {
        for v in 0..self.n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                self.roots.push(v);
                self.orient(v);
            }
        }
        for v in 0..self.n {
            let mut es = std::mem::take(&mut self.out[v]);
            es.sort_by_key(|&e| self.nesting_depth[e]);
            self.out[v] = es;
        }
        let roots = std::mem::take(&mut self.roots);
        roots.into_iter().all(|r| self.test(r))
    }

    fn orient(&mut self, root: usize) {
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.1 < self.adj[v].len() {
                let (w, e) = self.adj[v][frame.1];
                frame.1 += 1;
                if self.oriented[e] {
                    continue;
                }
                self.oriented[e] = true;
                self.src[e] = v;
                self.tgt[e] = w;
                self.out[v].push(e);
                self.lowpt[e] = self.height[v];
                self.lowpt2[e] = self.height[v];
                if self.height[w] == NONE {
                    self.parent_edge[w] = Some(e);
                    self.height[w] = self.height[v] + 1;
                    frames.push((w, 0));
                } else {
                    self.lowpt[e] = self.height[w];
                    self.finish_orientation(e);
                }
            } else {
                frames.pop();
                if let Some(e) = self.parent_edge[v] {
                    self.finish_orientation(e);
                }
            }
        }
    }

    /// Nesting depth of `vw` and lowpoint propagation to the parent edge of `v`.
    fn finish_orientation(&mut self, vw: usize) {
        let v = self.src[vw];
        self.nesting_depth[vw] = 2 * self.lowpt[vw];
        if self.lowpt2[vw] < self.height[v] {
            self.nesting_depth[vw] += 1;
        }
        if let Some(e) = self.parent_edge[v] {
            if self.lowpt[vw] < self.lowpt[e] {
                self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                self.lowpt[e] = self.lowpt[vw];
            } else if self.lowpt[vw] > self.lowpt[e] {
                self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
            } else {
                self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
            }
        }
    }

    fn test(&mut self, root: usize) -> bool {
        // (vertex, index into out[vertex], returning from a tree edge)
        let mut frames: Vec<(usize, usize, bool)> = vec![(root, 0, false)];
        while let Some(&(v, i, returning)) = frames.last() {
            if returning {
                let top = frames.last_mut().unwrap();
                top.2 = false;
                top.1 += 1;
                let ei = self.out[v][i];
                if !self.integrate(v, ei, i) {
                    return false;
                }
                continue;
            }
            if i < self.out[v].len() {
                let ei = self.out[v][i];
                let w = self.tgt[ei];
                self.stack_bottom[ei] = self.stack.len();
                if self.parent_edge[w] == Some(ei) {
                    frames.last_mut().unwrap().2 = true;
                    frames.push((w, 0, false));
                    continue;
                }
                self.lowpt_edge[ei] = Some(ei);
                self.stack.push(ConflictPair { left: Interval::default(), right: Interval::single(ei) });
                if !self.integrate(v, ei, i) {
                    return false;
                }
                frames.last_mut().unwrap().1 += 1;
            } else {
                frames.pop();
                if let Some(e) = self.parent_edge[v] {
                    self.remove_back_edges(e);
                }
            }
        }
        true
    }

    fn integrate(&mut self, v: usize, ei: usize, i: usize) -> bool {
        if self.lowpt[ei] < self.height[v] {
            let e = self.parent_edge[v].expect("return edge below the root");
            if i == 0 {
                self.lowpt_edge[e] = self.lowpt_edge[ei];
            } else {
                return self.add_constraints(ei, e);
            }
        }
        true
    }

    fn conflicting(&self, iv: &Interval, b: usize) -> bool {
        match iv.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        // merge return edges of ei into p.right
        loop {
            let mut q = self.stack.pop().expect("conflict stack underflow");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("nonempty right interval");
            if self.lowpt[q_low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[q_low] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        // merge conflicting return edges of earlier siblings into p.left
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.refs[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        let hu = self.height[u];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.tgt[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.tgt[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                self.refs[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }
}
