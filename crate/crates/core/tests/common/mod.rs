//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simgadget::graph::Multigraph;
use simgadget::threep::ThreePartitionInstance;

/// Rotation system over darts: dart `2e` runs `u -> v`, `2e + 1` back.
#[derive(Clone)]
struct Embedding {
    rot: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
}

impl Embedding {
    fn tail(&self, d: usize) -> usize {
        let (u, v) = self.ends[d / 2];
        if d.is_multiple_of(2) {
            u
        } else {
            v
        }
    }

    fn next_in_face(&self, d: usize) -> usize {
        let rev = d ^ 1;
        let w = self.tail(rev);
        let r = &self.rot[w];
        let i = r.iter().position(|&x| x == rev).unwrap();
        r[(i + 1) % r.len()]
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; 2 * self.ends.len()];
        let mut faces = Vec::new();
        for r in &self.rot {
            for &start in r {
                if seen[start] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start;
                while !seen[d] {
                    seen[d] = true;
                    face.push(d);
                    d = self.next_in_face(d);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Adds dart `d` leaving `w`, placed just before dart `before` (or alone).
    fn insert(&mut self, w: usize, d: usize, before: Option<usize>) {
        match before {
            None => self.rot[w].push(d),
            Some(b) => {
                let i = self.rot[w].iter().position(|&x| x == b).unwrap();
                self.rot[w].insert(i, d);
            }
        }
    }
}

fn embed(emb: &mut Embedding, placed: &mut [bool], order: &[(usize, usize)], next: usize) -> bool {
    if next == order.len() {
        return true;
    }
    let (u, v) = order[next];
    let e = emb.ends.len();
    emb.ends.push((u, v));
    let (du, dv) = (2 * e, 2 * e + 1);
    let ok = if placed[u] && placed[v] {
        let mut found = false;
        'faces: for face in emb.faces() {
            let corners_u: Vec<usize> = face.iter().copied().filter(|&d| emb.tail(d) == u).collect();
            let corners_v: Vec<usize> = face.iter().copied().filter(|&d| emb.tail(d) == v).collect();
            for &cu in &corners_u {
                for &cv in &corners_v {
                    let mut trial = emb.clone();
                    trial.insert(u, du, Some(cu));
                    trial.insert(v, dv, Some(cv));
                    if embed(&mut trial, placed, order, next + 1) {
                        found = true;
                        break 'faces;
                    }
                }
            }
        }
        found
    } else {
        let (old, new, d_old, d_new) = if placed[u] { (u, v, du, dv) } else { (v, u, dv, du) };
        let corners: Vec<Option<usize>> =
            if emb.rot[old].is_empty() { vec![None] } else { emb.rot[old].iter().map(|&d| Some(d)).collect() };
        placed[new] = true;
        let mut found = false;
        for c in corners {
            let mut trial = emb.clone();
            trial.insert(old, d_old, c);
            trial.insert(new, d_new, None);
            if embed(&mut trial, placed, order, next + 1) {
                found = true;
                break;
            }
        }
        placed[new] = false;
        found
    };
    emb.ends.pop();
    ok
}

/// Planarity by exhaustive search for a rotation system: edges are added in
/// an order that keeps the embedded part connected, each one into a corner
/// pair of a common face. Loops never matter and are skipped; parallel
/// edges are embedded like any other edge.
pub fn planar_by_embedding_search(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&(u, v)| u != v).collect();
    let distinct: BTreeSet<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    if n >= 3 && distinct.len() > 3 * n - 6 {
        return false;
    }
    let mut used = vec![false; edges.len()];
    let mut placed = vec![false; n];
    for root in 0..n {
        if placed[root] || !edges.iter().any(|&(u, v)| u == root || v == root) {
            continue;
        }
        // connected insertion order for the component of `root`
        let mut inside = vec![false; n];
        inside[root] = true;
        let mut order = Vec::new();
        loop {
            let pick = (0..edges.len()).find(|&i| {
                let (u, v) = edges[i];
                !used[i] && inside[u] && inside[v]
            });
            let pick = pick.or_else(|| {
                (0..edges.len()).find(|&i| {
                    let (u, v) = edges[i];
                    !used[i] && (inside[u] || inside[v])
                })
            });
            let Some(i) = pick else { break };
            used[i] = true;
            let (u, v) = edges[i];
            inside[u] = true;
            inside[v] = true;
            order.push((u, v));
        }
        let mut comp_placed = vec![false; n];
        comp_placed[root] = true;
        let mut emb = Embedding { rot: vec![Vec::new(); n], ends: Vec::new() };
        if !embed(&mut emb, &mut comp_placed, &order, 0) {
            return false;
        }
        for v in 0..n {
            placed[v] |= inside[v];
        }
    }
    true
}

/// Whether `A` splits into triples of sum `B`, by dynamic programming over
/// subsets of indices.
pub fn partition_exists_by_subsets(inst: &ThreePartitionInstance) -> bool {
    let a = inst.values();
    let n = a.len();
    assert!(n <= 20);
    let b = inst.bound();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if a[i] + a[j] + a[k] == b {
                    triples.push((1u32 << i) | (1 << j) | (1 << k));
                }
            }
        }
    }
    let full = (1u32 << n) - 1;
    let mut ok = vec![false; 1 << n];
    ok[0] = true;
    for mask in 1..=full {
        if mask.count_ones() % 3 != 0 {
            continue;
        }
        ok[mask as usize] = triples.iter().any(|&t| t & mask == t && ok[(mask & !t) as usize]);
    }
    ok[full as usize]
}

pub fn complete(n: usize) -> Multigraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Multigraph::new(n, edges).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
    let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).collect();
    Multigraph::new(a + b, edges).unwrap()
}

/// Wheel with `rim` rim vertices and the center last.
pub fn wheel(rim: usize) -> Multigraph {
    let mut edges: Vec<(usize, usize)> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
    edges.extend((0..rim).map(|i| (i, rim)));
    Multigraph::new(rim + 1, edges).unwrap()
}

/// Random multigraph on at most `max_n` vertices; may contain loops and
/// parallel edges.
pub fn random_multigraph(rng: &mut ChaCha8Rng, max_n: usize) -> Multigraph {
    let n = rng.gen_range(1..=max_n);
    let density: f64 = rng.gen_range(0.1..0.9);
    let pairs = n * (n - 1) / 2;
    let m = ((pairs as f64) * density).round() as usize + rng.gen_range(0..3);
    let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    Multigraph::new(n, edges).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
