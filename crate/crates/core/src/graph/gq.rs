//! The generalized quadrangle GQ(3,1): its collinearity graph is the 4×4 rook's graph.

use super::Graph;

/// Vertices `(r, c)` numbered `4r + c`; adjacent iff they share a row or a column.
pub fn rook_graph() -> Graph {
    Graph::from_fn(16, |a, b| a / 4 == b / 4 || a % 4 == b % 4)
}

/// Regularity and per-edge triangle counts of the rook graph: 16 vertices,
/// degree 6, every edge in exactly 2 triangles.
pub fn has_rook_local_counts(g: &Graph) -> bool {
    if g.order() != 16 || (0..16).any(|v| g.degree(v) != 6) {
        return false;
    }
    g.edges()
        .iter()
        .all(|&(a, b)| (0..16).filter(|&c| g.adjacent(a, c) && g.adjacent(b, c)).count() == 2)
}

/// Whether `g` is isomorphic to the point graph of GQ(3,1).
pub fn is_gq31(g: &Graph) -> bool {
    has_rook_local_counts(g) && g.certificate() == rook_graph().certificate()
}

/// The Shrikhande graph: strongly regular with the same parameters (16, 6, 2, 2)
/// as the rook graph but not isomorphic to it.
pub fn shrikhande_graph() -> Graph {
    let diffs = [(0i32, 1i32), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)];
    Graph::from_fn(16, |a, b| {
        let (ar, ac, br, bc) = ((a / 4) as i32, (a % 4) as i32, (b / 4) as i32, (b % 4) as i32);
        diffs.contains(&((br - ar).rem_euclid(4), (bc - ac).rem_euclid(4)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rook_graph_is_gq31() {
        let r = rook_graph();
        assert!(has_rook_local_counts(&r));
        assert!(is_gq31(&r));
        let perm: Vec<usize> = (0..16).map(|i| (i * 5 + 3) % 16).collect();
        assert!(is_gq31(&r.relabel(&perm)));
    }

    #[test]
    fn shrikhande_is_not() {
        let s = shrikhande_graph();
        assert!((0..16).all(|v| s.degree(v) == 6));
        assert!(has_rook_local_counts(&s));
        assert!(!is_gq31(&s));
    }

    #[test]
    fn triangle_deficient_circulant_is_not() {
        // Circulant C16(1, 2, 3): 6-regular; the edge {0, 3} lies in 2 triangles but
        // {0, 1} lies in 4, unlike the rook graph where every edge lies in 2.
        let c = Graph::from_fn(16, |a, b| {
            let d = (a as i32 - b as i32).rem_euclid(16);
            [1, 2, 3, 13, 14, 15].contains(&d)
        });
        assert!((0..16).all(|v| c.degree(v) == 6));
        assert!(!has_rook_local_counts(&c));
        assert!(!is_gq31(&c));
    }
}
