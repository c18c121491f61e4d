//! Small graphs: canonical forms, Dynkin recognition and the GQ(3,1) test.

pub mod canon;
pub mod dynkin;
pub mod gq;

use serde::{Deserialize, Serialize};

pub use canon::{canonical_form, orbit_representatives, Canonical};
pub use dynkin::{dynkin_shape, DynkinComponent, DynkinDiagram, DynkinKind};
pub use gq::{is_gq31, rook_graph};

/// Complete graph with vertex colours and symmetric edge colours (row-major `n × n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub n: usize,
    pub vcolor: Vec<u32>,
    pub ecolor: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(vcolor: Vec<u32>, ecolor: Vec<u32>) -> Self {
        let n = vcolor.len();
        assert_eq!(ecolor.len(), n * n, "edge colour matrix must be n × n");
        ColoredGraph { n, vcolor, ecolor }
    }
}

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![vec![false; n]; n] }
    }

    /// Loops are ignored; repeated edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                if f(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a][b] = true;
            self.adj[b][a] = true;
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.adj[v][u])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| (a + 1..self.n).filter(move |&b| self.adj[a][b]).map(move |b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Graph with vertex `i` renamed `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut h = Graph::empty(self.n);
        for (a, b) in self.edges() {
            h.add_edge(perm[a], perm[b]);
        }
        h
    }

    pub fn induced(&self, vertices: &[usize]) -> Graph {
        Graph::from_fn(vertices.len(), |i, j| self.adj[vertices[i]][vertices[j]])
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// All triangles `a < b < c`.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.adj[a][b] {
                    continue;
                }
                for c in b + 1..self.n {
                    if self.adj[a][c] && self.adj[b][c] {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    pub fn colored(&self) -> ColoredGraph {
        let n = self.n;
        let ecolor = (0..n * n).map(|k| u32::from(self.adj[k / n][k % n])).collect();
        ColoredGraph::new(vec![0; n], ecolor)
    }

    /// Canonical adjacency matrix, row-major, packed into bytes.
    pub fn certificate(&self) -> Vec<u8> {
        let c = canonical_form(&self.colored());
        let n = self.n;
        let mut bytes = Vec::with_capacity(2 + (n * n).div_ceil(8));
        bytes.extend_from_slice(&(n as u16).to_be_bytes());
        let mut acc = 0u8;
        let mut k = 0;
        for &a in &c.order {
            for &b in &c.order {
                acc = (acc << 1) | u8::from(self.adj[a][b]);
                k += 1;
                if k == 8 {
                    bytes.push(acc);
                    acc = 0;
                    k = 0;
                }
            }
        }
        if k > 0 {
            bytes.push(acc << (8 - k));
        }
        bytes
    }

    /// Graphviz rendering with optional vertex names.
    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for v in 0..self.n {
            match labels {
                Some(l) => s.push_str(&format!("  {v} [label=\"{}\"];\n", l[v])),
                None => s.push_str(&format!("  {v};\n")),
            }
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Isomorphism class of a graph with its Dynkin decomposition when parabolic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphShape {
    pub vertices: usize,
    pub edges: usize,
    /// Hex of the canonical adjacency matrix; equal iff the graphs are isomorphic.
    pub certificate: String,
    /// Dynkin decomposition, or `None` if the graph is not parabolic.
    pub dynkin: Option<String>,
}

impl GraphShape {
    pub fn of(g: &Graph) -> Self {
        let certificate = g.certificate().iter().map(|b| format!("{b:02x}")).collect();
        GraphShape {
            vertices: g.order(),
            edges: g.edge_count(),
            certificate,
            dynkin: dynkin_shape(g).map(|d| d.to_string()),
        }
    }

    /// Dynkin label, `GQ(3,1)` for the rook graph, or a size summary.
    pub fn label(&self, g: &Graph) -> String {
        if let Some(d) = &self.dynkin {
            return d.clone();
        }
        if is_gq31(g) {
            return "GQ(3,1)".into();
        }
        format!("graph({} vertices, {} edges)", self.vertices, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificates_distinguish_and_identify() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let p3b = Graph::from_edges(3, [(0, 2), (2, 1)]);
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(p3.certificate(), p3b.certificate());
        assert_ne!(p3.certificate(), k3.certificate());
        assert_eq!(GraphShape::of(&p3).dynkin.as_deref(), Some("A3"));
    }

    #[test]
    fn dot_export() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let dot = g.to_dot("x", None);
        assert!(dot.contains("0 -- 1"));
    }
}
