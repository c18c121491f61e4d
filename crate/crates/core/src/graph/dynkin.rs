//! Recognition of simply-laced Dynkin diagrams, finite and affine.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinKind {
    E,
    D,
    A,
}

/// One connected component: `rank` is the index of the diagram, so an affine
/// diagram of rank `r` has `r + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DynkinComponent {
    pub kind: DynkinKind,
    pub rank: usize,
    pub affine: bool,
}

impl DynkinComponent {
    fn sort_key(&self) -> (bool, DynkinKind, std::cmp::Reverse<usize>) {
        (!self.affine, self.kind, std::cmp::Reverse(self.rank))
    }

    pub fn vertices(&self) -> usize {
        self.rank + usize::from(self.affine)
    }
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match (self.kind, self.affine) {
            (DynkinKind::A, false) => "A",
            (DynkinKind::D, false) => "D",
            (DynkinKind::E, false) => "E",
            (DynkinKind::A, true) => "\u{c3}",
            (DynkinKind::D, true) => "D\u{303}",
            (DynkinKind::E, true) => "\u{1ebc}",
        };
        write!(f, "{letter}{}", self.rank)
    }
}

/// Disjoint union of Dynkin diagrams, kept in display order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DynkinDiagram {
    pub components: Vec<DynkinComponent>,
}

impl DynkinDiagram {
    pub fn new(mut components: Vec<DynkinComponent>) -> Self {
        components.sort_by_key(DynkinComponent::sort_key);
        DynkinDiagram { components }
    }

    /// Parses labels such as `2D̃4`, `D̃5⊕Ã3`, `3Ã2+A1`, `D~4`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.replace('⊕', "+").replace(' ', "");
        let mut comps = Vec::new();
        for tok in s.split('+') {
            let digits = tok.chars().take_while(|c| c.is_ascii_digit()).count();
            let mult: usize = if digits == 0 { 1 } else { tok[..digits].parse().ok()? };
            let rest = &tok[digits..];
            let mut chars = rest.chars();
            let (kind, mut affine) = match chars.next()? {
                'A' => (DynkinKind::A, false),
                'D' => (DynkinKind::D, false),
                'E' => (DynkinKind::E, false),
                '\u{c3}' => (DynkinKind::A, true),
                '\u{1ebc}' => (DynkinKind::E, true),
                _ => return None,
            };
            let mut tail = chars.as_str();
            for mark in ["\u{303}", "~"] {
                if let Some(t) = tail.strip_prefix(mark) {
                    tail = t;
                    affine = true;
                }
            }
            let rank: usize = tail.parse().ok()?;
            comps.extend(std::iter::repeat(DynkinComponent { kind, rank, affine }).take(mult));
        }
        Some(DynkinDiagram::new(comps))
    }

    pub fn vertices(&self) -> usize {
        self.components.iter().map(DynkinComponent::vertices).sum()
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("∅");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut j = i;
            while j < self.components.len() && self.components[j] == c {
                j += 1;
            }
            if !first {
                f.write_str("⊕")?;
            }
            first = false;
            if j - i > 1 {
                write!(f, "{}", j - i)?;
            }
            write!(f, "{c}")?;
            i = j;
        }
        Ok(())
    }
}

fn component_type(g: &Graph, comp: &[usize]) -> Option<DynkinComponent> {
    let n = comp.len();
    let sub = g.induced(comp);
    let m = sub.edge_count();
    let deg: Vec<usize> = (0..n).map(|v| sub.degree(v)).collect();
    let a = |rank, affine| Some(DynkinComponent { kind: DynkinKind::A, rank, affine });
    let d = |rank, affine| Some(DynkinComponent { kind: DynkinKind::D, rank, affine });
    let e = |rank, affine| Some(DynkinComponent { kind: DynkinKind::E, rank, affine });
    if m == n {
        return if n >= 3 && deg.iter().all(|&x| x == 2) { a(n - 1, true) } else { None };
    }
    if m + 1 != n {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    match branch.as_slice() {
        [] => a(n, false),
        [b] if deg[*b] == 4 => (n == 5).then_some(DynkinComponent { kind: DynkinKind::D, rank: 4, affine: true }),
        [b] if deg[*b] == 3 => {
            let mut arms: Vec<usize> = sub
                .neighbors(*b)
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (*b, start, 1);
                    while deg[cur] == 2 {
                        let next = sub.neighbors(cur).find(|&x| x != prev).expect("path continues");
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, c] => d(c + 3, false),
                [1, 2, 2] => e(6, false),
                [1, 2, 3] => e(7, false),
                [1, 2, 4] => e(8, false),
                [2, 2, 2] => e(6, true),
                [1, 3, 3] => e(7, true),
                [1, 2, 5] => e(8, true),
                _ => None,
            }
        }
        [b1, b2] if deg[*b1] == 3 && deg[*b2] == 3 => {
            let leaves = |b: usize| sub.neighbors(b).filter(|&x| deg[x] == 1).count();
            (leaves(*b1) == 2 && leaves(*b2) == 2).then_some(DynkinComponent {
                kind: DynkinKind::D,
                rank: n - 1,
                affine: true,
            })
        }
        _ => None,
    }
}

/// Dynkin decomposition of a simple graph, or `None` if some component is not
/// a finite or affine simply-laced diagram.
pub fn dynkin_shape(g: &Graph) -> Option<DynkinDiagram> {
    g.components()
        .iter()
        .map(|c| component_type(g, c))
        .collect::<Option<Vec<_>>>()
        .map(DynkinDiagram::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, edges: &[(usize, usize)]) -> Option<String> {
        dynkin_shape(&Graph::from_edges(n, edges.iter().copied())).map(|d| d.to_string())
    }

    #[test]
    fn paths_and_cycles() {
        assert_eq!(shape(3, &[(0, 1), (1, 2)]).as_deref(), Some("A3"));
        assert_eq!(shape(3, &[(0, 1), (1, 2), (2, 0)]).as_deref(), Some("Ã2"));
        assert_eq!(shape(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).as_deref(), Some("Ã3"));
        assert_eq!(shape(1, &[]).as_deref(), Some("A1"));
    }

    #[test]
    fn branched_trees() {
        assert_eq!(shape(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).as_deref(), Some("D̃4"));
        assert_eq!(shape(4, &[(0, 1), (0, 2), (0, 3)]).as_deref(), Some("D4"));
        // E6: arms 1, 2, 2.
        assert_eq!(shape(6, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]).as_deref(), Some("E6"));
        // D̃5: two adjacent branch vertices with two leaves each.
        assert_eq!(shape(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).as_deref(), Some("D̃5"));
        // Ẽ8: arms 1, 2, 5.
        assert_eq!(
            shape(9, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7), (7, 8)]).as_deref(),
            Some("Ẽ8")
        );
        // Star K1,5 is hyperbolic.
        assert_eq!(shape(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]), None);
        // K4 is not parabolic.
        assert_eq!(shape(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), None);
    }

    #[test]
    fn unions_and_parsing() {
        let s = shape(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5)]).unwrap();
        assert_eq!(s, "Ã3⊕A2⊕A1");
        for label in ["2D̃4", "D̃5⊕Ã3", "2Ã3⊕2A1", "4Ã2", "3Ã2⊕A1", "2Ã4"] {
            assert_eq!(DynkinDiagram::parse(label).unwrap().to_string(), label);
        }
        assert_eq!(DynkinDiagram::parse("D~4+D~4").unwrap().to_string(), "2D̃4");
        assert_eq!(DynkinDiagram::parse("2D̃4").unwrap().vertices(), 10);
    }
}
