//! Canonical labeling of vertex- and edge-coloured complete graphs by
//! individualization and refinement.
//!
//! Refinement splits cells by a commutative hash of (cell index, edge colour)
//! over all other vertices; it is isomorphism-invariant but not necessarily
//! equitable, which only costs extra branching. The canonical leaf minimises
//! the refinement trace followed by the relabelled colour matrix. Equal leaves
//! yield automorphisms, which prune siblings in the same orbit.

use super::ColoredGraph;

fn mix(a: u64, b: u64) -> u64 {
    let mut x = a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    x ^= x >> 31;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 29;
    x
}

type Cells = Vec<Vec<usize>>;

/// Refines the ordered partition in place and returns a hash of the process.
fn refine(g: &ColoredGraph, cells: &mut Cells) -> u64 {
    let n = g.n;
    let mut cell_of = vec![0usize; n];
    let mut trace = 0x1234_5678u64;
    let mut hash = vec![0u64; n];
    loop {
        for (ci, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = ci;
            }
        }
        for v in 0..n {
            let row = &g.ecolor[v * n..(v + 1) * n];
            let mut h = 0u64;
            for (u, &c) in row.iter().enumerate() {
                if u != v {
                    h = h.wrapping_add(mix(cell_of[u] as u64 + 1, c as u64 + 1));
                }
            }
            hash[v] = h;
        }
        let before = cells.len();
        let mut next: Cells = Vec::with_capacity(before);
        for c in cells.iter() {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut sorted = c.clone();
            sorted.sort_by_key(|&v| (hash[v], v));
            let mut start = 0;
            for i in 1..=sorted.len() {
                if i == sorted.len() || hash[sorted[i]] != hash[sorted[start]] {
                    trace = mix(trace, hash[sorted[start]] ^ (i - start) as u64);
                    let mut part = sorted[start..i].to_vec();
                    part.sort_unstable();
                    next.push(part);
                    start = i;
                }
            }
        }
        *cells = next;
        trace = mix(trace, cells.len() as u64);
        if cells.len() == before {
            return trace;
        }
    }
}

fn initial_cells(g: &ColoredGraph) -> Cells {
    let mut colors: Vec<u32> = g.vcolor.clone();
    colors.sort_unstable();
    colors.dedup();
    colors
        .iter()
        .map(|&c| (0..g.n).filter(|&v| g.vcolor[v] == c).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect()
}

/// Canonical labeling result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    /// `order[i]` is the vertex placed at position `i`.
    pub order: Vec<usize>,
    /// Relabelled vertex colours followed by the relabelled edge-colour matrix.
    pub certificate: Vec<u32>,
    /// Automorphisms discovered during the search (as vertex permutations).
    pub automorphisms: Vec<Vec<usize>>,
}

struct Search<'a> {
    g: &'a ColoredGraph,
    best: Option<(Vec<u64>, Vec<u32>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn certificate(&self, order: &[usize]) -> Vec<u32> {
        let n = self.g.n;
        let mut cert = Vec::with_capacity(n + n * n);
        cert.extend(order.iter().map(|&v| self.g.vcolor[v]));
        for &a in order {
            for &b in order {
                cert.push(self.g.ecolor[a * n + b]);
            }
        }
        cert
    }

    /// `Less` if the trace prefix beats the best leaf, `Greater` if it loses.
    fn compare_prefix(&self, traces: &[u64]) -> std::cmp::Ordering {
        match &self.best {
            None => std::cmp::Ordering::Less,
            Some((bt, _, _)) => traces.cmp(&bt[..traces.len().min(bt.len())]),
        }
    }

    fn leaf(&mut self, cells: &Cells, traces: &[u64]) {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let cert = self.certificate(&order);
        match &self.best {
            None => self.best = Some((traces.to_vec(), cert, order)),
            Some((bt, bc, border)) => match (traces, &cert).cmp(&(bt.as_slice(), bc)) {
                std::cmp::Ordering::Less => self.best = Some((traces.to_vec(), cert, order)),
                std::cmp::Ordering::Equal => {
                    let mut gamma = vec![0usize; self.g.n];
                    for (i, &v) in border.iter().enumerate() {
                        gamma[v] = order[i];
                    }
                    if gamma.iter().enumerate().any(|(i, &x)| i != x) && !self.autos.contains(&gamma) {
                        self.autos.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    fn orbit_reps_seen(&self, prefix: &[usize], v: usize, tried: &[usize]) -> bool {
        if tried.is_empty() {
            return false;
        }
        let gens: Vec<&Vec<usize>> = self
            .autos
            .iter()
            .filter(|a| prefix.iter().all(|&p| a[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for a in gens {
            for (x, &y) in a.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }

    fn run(&mut self, cells: Cells, traces: &mut Vec<u64>, prefix: &mut Vec<usize>) {
        if cells.iter().all(|c| c.len() == 1) {
            self.leaf(&cells, traces);
            return;
        }
        let (ti, target) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, c)| (i, c.clone()))
            .expect("non-discrete partition");
        let mut tried: Vec<usize> = Vec::new();
        for &v in &target {
            if self.orbit_reps_seen(prefix, v, &tried) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(vec![v]);
            child.push(target.iter().copied().filter(|&x| x != v).collect());
            child.extend_from_slice(&cells[ti + 1..]);
            let t = refine(self.g, &mut child);
            traces.push(t);
            if self.compare_prefix(traces) != std::cmp::Ordering::Greater {
                prefix.push(v);
                self.run(child, traces, prefix);
                prefix.pop();
            }
            traces.pop();
        }
    }
}

/// Canonical form of a coloured complete graph.
pub fn canonical_form(g: &ColoredGraph) -> Canonical {
    if g.n == 0 {
        return Canonical { order: Vec::new(), certificate: Vec::new(), automorphisms: Vec::new() };
    }
    let mut cells = initial_cells(g);
    let t0 = refine(g, &mut cells);
    let mut s = Search { g, best: None, autos: Vec::new() };
    let mut traces = vec![t0];
    s.run(cells, &mut traces, &mut Vec::new());
    let (_, certificate, order) = s.best.expect("at least one leaf");
    Canonical { order, certificate, automorphisms: s.autos }
}

/// Orbits of the group generated by `gens` on `0..n`, as a representative map.
pub fn orbit_representatives(n: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for a in gens {
        for (x, &y) in a.iter().enumerate() {
            let (rx, ry) = (find(&parent, x), find(&parent, y));
            if rx != ry {
                let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|x| find(&parent, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn relabelled_graphs_share_certificates() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]);
        let perm = [3, 5, 0, 1, 4, 2];
        let h = g.relabel(&perm);
        assert_eq!(
            canonical_form(&g.colored()).certificate,
            canonical_form(&h.colored()).certificate
        );
    }

    #[test]
    fn non_isomorphic_graphs_differ() {
        let c6 = cycle(6);
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(
            canonical_form(&c6.colored()).certificate,
            canonical_form(&two_triangles.colored()).certificate
        );
    }

    #[test]
    fn automorphisms_of_a_cycle() {
        let c = canonical_form(&cycle(7).colored());
        let reps = orbit_representatives(7, &c.automorphisms);
        assert!(reps.iter().all(|&r| r == 0));
        for a in &c.automorphisms {
            let g = cycle(7);
            for i in 0..7 {
                for j in 0..7 {
                    assert_eq!(g.adjacent(i, j), g.adjacent(a[i], a[j]));
                }
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn certificate_is_invariant(edges in proptest::collection::vec((0usize..9, 0usize..9), 0..30),
                                    perm in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
            let g = Graph::from_edges(9, edges.into_iter().filter(|(a, b)| a != b));
            let h = g.relabel(&perm);
            prop_assert_eq!(canonical_form(&g.colored()).certificate, canonical_form(&h.colored()).certificate);
        }
    }
}
