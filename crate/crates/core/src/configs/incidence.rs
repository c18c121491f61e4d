//! Candidates read as blocks over the `λ`-vectors.
//!
//! When each candidate is singled out by the `λ`-vectors it pairs with in a
//! minority value, and all pairings are functions of block intersections, two
//! sets are equivalent under [`super::Equivalence::Local`] iff their block
//! systems are isomorphic. The key below is a canonical block list, far
//! cheaper than a canonical form of the full pairing graph.

use std::collections::HashMap;

use super::system::ConfigSystem;
use crate::Rational;

pub const MAX_POINTS: usize = 16;

/// Block structure of a [`ConfigSystem`] over its `λ`-vectors.
#[derive(Debug, Clone)]
pub struct Incidence {
    points: usize,
    blocks: Vec<u16>,
}

impl Incidence {
    /// The block system, or `None` if the pairings are not determined by it.
    pub fn from_system(sys: &ConfigSystem) -> Option<Self> {
        let points = sys.lambda.len();
        if points == 0 || points > MAX_POINTS {
            return None;
        }
        let lambda_pair = |i: usize, j: usize| sys.lattice.pairing(&sys.vectors[i], &sys.lambda[j]).expect("same lattice");
        let mut blocks = Vec::with_capacity(sys.len());
        let mut member_value: Option<(Rational, Rational)> = None;
        for i in 0..sys.len() {
            let vals: Vec<Rational> = (0..points).map(|j| lambda_pair(i, j)).collect();
            let mut distinct = vals.clone();
            distinct.sort();
            distinct.dedup();
            if distinct.len() != 2 {
                return None;
            }
            let count = |x: Rational| vals.iter().filter(|&&v| v == x).count();
            let (inside, outside) = match count(distinct[0]).cmp(&count(distinct[1])) {
                std::cmp::Ordering::Less => (distinct[0], distinct[1]),
                std::cmp::Ordering::Greater => (distinct[1], distinct[0]),
                std::cmp::Ordering::Equal => return None,
            };
            if *member_value.get_or_insert((inside, outside)) != (inside, outside) {
                return None;
            }
            blocks.push(vals.iter().enumerate().filter(|(_, &v)| v == inside).fold(0u16, |m, (j, _)| m | 1 << j));
        }
        let mut sorted = blocks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != blocks.len() {
            return None;
        }
        let mut by_meet: HashMap<u32, Rational> = HashMap::new();
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                let meet = (blocks[i] & blocks[j]).count_ones();
                if *by_meet.entry(meet).or_insert_with(|| sys.pairing(i, j)) != sys.pairing(i, j) {
                    return None;
                }
            }
        }
        let off = (points > 1).then(|| sys.lattice.pairing(&sys.lambda[0], &sys.lambda[1]).expect("same lattice"));
        for a in 0..points {
            for b in 0..points {
                if a != b && Some(sys.lattice.pairing(&sys.lambda[a], &sys.lambda[b]).expect("same lattice")) != off {
                    return None;
                }
            }
        }
        Some(Incidence { points, blocks })
    }

    /// Number of candidates.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Point mask of the candidate `i`.
    pub fn block(&self, i: usize) -> u16 {
        self.blocks[i]
    }

    /// Number of members of `set` through each point.
    pub fn degrees(&self, set: &[usize]) -> Vec<usize> {
        (0..self.points).map(|p| set.iter().filter(|&&i| self.blocks[i] >> p & 1 == 1).count()).collect()
    }

    /// Canonical sorted block list of `set`; equal iff the sets are equivalent.
    pub fn key(&self, set: &[usize]) -> Vec<u16> {
        let blocks: Vec<u16> = set.iter().map(|&i| self.blocks[i]).collect();
        let mut colors = [0u8; MAX_POINTS];
        let n = self.points;
        refine(&blocks, &mut colors[..n]);
        let mut state = SearchState::default();
        search(&blocks, &colors[..n], &mut Vec::new(), &mut state);
        state.best.expect("search reaches a leaf").0
    }
}

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn cell_count(colors: &[u8]) -> usize {
    colors.iter().fold(0u32, |m, &c| m | 1 << c).count_ones() as usize
}

/// Equitable refinement of an ordered point colouring; cells keep their relative order.
/// Multisets are hashed by sums of mixed values, so the signatures are label invariant.
fn refine(blocks: &[u16], colors: &mut [u8]) {
    let n = colors.len();
    let mut cells = cell_count(colors);
    let mut weight = [0u64; MAX_POINTS];
    loop {
        for p in 0..n {
            weight[p] = mix(colors[p] as u64);
        }
        let mut sig = [0u64; MAX_POINTS];
        for &b in blocks {
            let mut total = 0u64;
            let mut bits = b;
            while bits != 0 {
                total = total.wrapping_add(weight[bits.trailing_zeros() as usize]);
                bits &= bits - 1;
            }
            let mut bits = b;
            while bits != 0 {
                let p = bits.trailing_zeros() as usize;
                sig[p] = sig[p].wrapping_add(mix(total.wrapping_sub(weight[p])));
                bits &= bits - 1;
            }
        }
        let mut order = [(0u8, 0u64); MAX_POINTS];
        for p in 0..n {
            order[p] = (colors[p], sig[p]);
        }
        let order = &mut order[..n];
        order.sort_unstable();
        let mut distinct = 0;
        for k in 0..n {
            if k == 0 || order[k] != order[distinct - 1] {
                order[distinct] = order[k];
                distinct += 1;
            }
        }
        let order = &order[..distinct];
        for p in 0..n {
            colors[p] = order.binary_search(&(colors[p], sig[p])).expect("present") as u8;
        }
        if distinct == cells {
            return;
        }
        cells = distinct;
    }
}

#[derive(Default)]
struct SearchState {
    best: Option<(Vec<u16>, [u8; MAX_POINTS])>,
    /// Automorphisms found so far, as point permutations.
    autos: Vec<[u8; MAX_POINTS]>,
}

fn relabel(blocks: &[u16], colors: &[u8]) -> Vec<u16> {
    let mut out: Vec<u16> = blocks
        .iter()
        .map(|&b| {
            let (mut m, mut bits) = (0u16, b);
            while bits != 0 {
                m |= 1 << colors[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            m
        })
        .collect();
    out.sort_unstable();
    out
}

/// Orbit representative of each point under the stored automorphisms fixing `path`.
fn orbit_roots(state: &SearchState, n: usize, path: &[u8]) -> [u8; MAX_POINTS] {
    let mut root = [0u8; MAX_POINTS];
    for (p, r) in root.iter_mut().enumerate().take(n) {
        *r = p as u8;
    }
    fn find(root: &mut [u8; MAX_POINTS], x: u8) -> u8 {
        let mut r = x;
        while root[r as usize] != r {
            r = root[r as usize];
        }
        root[x as usize] = r;
        r
    }
    for g in state.autos.iter().filter(|g| path.iter().all(|&p| g[p as usize] == p)) {
        for p in 0..n as u8 {
            let (a, b) = (find(&mut root, p), find(&mut root, g[p as usize]));
            if a != b {
                root[a.max(b) as usize] = a.min(b);
            }
        }
    }
    for p in 0..n as u8 {
        root[p as usize] = find(&mut root, p);
    }
    root
}

fn search(blocks: &[u16], colors: &[u8], path: &mut Vec<u8>, state: &mut SearchState) {
    let n = colors.len();
    let mut size = [0u8; MAX_POINTS];
    for &c in colors {
        size[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| size[c] > 1) else {
        let relabeled = relabel(blocks, colors);
        let mut leaf = [0u8; MAX_POINTS];
        leaf[..n].copy_from_slice(colors);
        match &state.best {
            Some((b, best_leaf)) if *b == relabeled => {
                let mut inverse = [0u8; MAX_POINTS];
                for q in 0..n {
                    inverse[best_leaf[q] as usize] = q as u8;
                }
                let mut g = [0u8; MAX_POINTS];
                for p in 0..n {
                    g[p] = inverse[leaf[p] as usize];
                }
                state.autos.push(g);
            }
            Some((b, _)) if *b < relabeled => {}
            _ => state.best = Some((relabeled, leaf)),
        }
        return;
    };
    let mut explored: Vec<u8> = Vec::new();
    for p in (0..n as u8).filter(|&p| colors[p as usize] as usize == target) {
        if !explored.is_empty() {
            let root = orbit_roots(state, n, path);
            if explored.iter().any(|&e| root[e as usize] == root[p as usize]) {
                continue;
            }
        }
        explored.push(p);
        let mut next = [0u8; MAX_POINTS];
        for q in 0..n {
            next[q] = 2 * colors[q] + u8::from(colors[q] as usize == target && q != p as usize);
        }
        refine(blocks, &mut next[..n]);
        path.push(p);
        search(blocks, &next[..n], path, state);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::system::tests::a11_system_with_lambda;
    use proptest::prelude::*;

    fn system() -> &'static ConfigSystem {
        static SYS: std::sync::OnceLock<ConfigSystem> = std::sync::OnceLock::new();
        SYS.get_or_init(a11_system_with_lambda)
    }

    #[test]
    fn a11_triples() {
        let s = system();
        let inc = Incidence::from_system(s).unwrap();
        assert_eq!(inc.points(), 12);
        assert!((0..s.len()).all(|i| inc.block(i).count_ones() == 3));
        assert!(Incidence::from_system(&crate::configs::system::tests::a11_system()).is_none());
    }

    proptest! {
        #[test]
        fn key_invariant_under_point_permutation(seed in proptest::collection::vec(0usize..220, 1..12), perm_seed in 0u64..1000) {
            let s = system();
            let inc = Incidence::from_system(s).unwrap();
            let mut perm: Vec<usize> = (0..12).collect();
            let mut state = perm_seed;
            for i in (1..12).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (state >> 33) as usize % (i + 1));
            }
            let index: HashMap<u16, usize> = (0..s.len()).map(|i| (inc.block(i), i)).collect();
            let mut set = seed.clone();
            set.sort_unstable();
            set.dedup();
            let image: Vec<usize> = set
                .iter()
                .map(|&i| {
                    let b = inc.block(i);
                    let m = (0..12).filter(|&p| b >> p & 1 == 1).fold(0u16, |m, p| m | 1 << perm[p]);
                    index[&m]
                })
                .collect();
            prop_assert_eq!(inc.key(&set), inc.key(&image));
        }
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let s = system();
        let inc = Incidence::from_system(s).unwrap();
        let find = |m: u16| (0..s.len()).find(|&i| inc.block(i) == m).unwrap();
        // Two triples meeting in a point versus two disjoint triples.
        let meeting = [find(0b111), find(0b11100)];
        let disjoint = [find(0b111), find(0b111000)];
        assert_ne!(inc.key(&meeting), inc.key(&disjoint));
    }
}
