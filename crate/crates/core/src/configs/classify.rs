//! Equivalence of admissible sets and grouping by adjacency graph.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::search::{admissible_sets, SearchSpec};
use super::system::ConfigSystem;
use crate::graph::{canonical_form, ColoredGraph, Graph, GraphShape};
use crate::Rational;

/// Which pairing graph decides whether two sets are equivalent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    /// The set together with the `λ`-vectors.
    Local,
    /// All candidates and `λ`-vectors, with the set marked.
    #[default]
    Full,
}

impl Equivalence {
    pub fn describe(self) -> &'static str {
        match self {
            Equivalence::Local => "isometries of the pairing graph on the set and the lambda-vectors",
            Equivalence::Full => "isometries of the pairing graph on all candidates and lambda-vectors fixing the set",
        }
    }
}

/// Canonical keys of subsets under an [`Equivalence`].
pub struct Canonizer<'a> {
    sys: &'a ConfigSystem,
    mode: Equivalence,
    values: Vec<Rational>,
}

impl<'a> Canonizer<'a> {
    pub fn new(sys: &'a ConfigSystem, mode: Equivalence) -> Self {
        let n = sys.len();
        let mut values: Vec<Rational> = Vec::new();
        let mut add = |x: Rational| {
            if let Err(pos) = values.binary_search(&x) {
                values.insert(pos, x);
            }
        };
        for i in 0..n {
            for j in 0..n {
                add(sys.pairing(i, j));
            }
            for l in &sys.lambda {
                add(sys.lattice.pairing(&sys.vectors[i], l).expect("same lattice"));
            }
        }
        for a in &sys.lambda {
            for b in &sys.lambda {
                add(sys.lattice.pairing(a, b).expect("same lattice"));
            }
        }
        Canonizer { sys, mode, values }
    }

    fn color(&self, x: Rational) -> u32 {
        self.values.binary_search(&x).expect("known pairing value") as u32
    }

    /// Certificate equal for two sets iff they are equivalent.
    pub fn key(&self, set: &[usize]) -> Vec<u32> {
        let sys = self.sys;
        let members: Vec<usize> = match self.mode {
            Equivalence::Local => set.to_vec(),
            Equivalence::Full => (0..sys.len()).collect(),
        };
        let m = members.len();
        let k = sys.lambda.len();
        let n = m + k;
        let mut vcolor = Vec::with_capacity(n);
        for &i in &members {
            vcolor.push(if set.contains(&i) { 1 } else { 0 });
        }
        vcolor.extend(std::iter::repeat(2).take(k));
        let mut ecolor = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let p = match (a < m, b < m) {
                    (true, true) => sys.pairing(members[a], members[b]),
                    (true, false) => sys.lattice.pairing(&sys.vectors[members[a]], &sys.lambda[b - m]).expect("same lattice"),
                    (false, false) => sys.lattice.pairing(&sys.lambda[a - m], &sys.lambda[b - m]).expect("same lattice"),
                    (false, true) => unreachable!("b >= a"),
                };
                let c = self.color(p);
                ecolor[a * n + b] = c;
                ecolor[b * n + a] = c;
            }
        }
        canonical_form(&ColoredGraph::new(vcolor, ecolor)).certificate
    }
}

/// One representative per equivalence class, in input order.
pub fn dedupe(sys: &ConfigSystem, sets: &[Vec<usize>], mode: Equivalence) -> Vec<Vec<usize>> {
    let coarse: Vec<Vec<u8>> = sets.par_iter().map(|s| sys.graph(s).certificate()).collect();
    let mut groups: BTreeMap<&[u8], Vec<usize>> = BTreeMap::new();
    for (i, c) in coarse.iter().enumerate() {
        groups.entry(c.as_slice()).or_default().push(i);
    }
    let canon = Canonizer::new(sys, mode);
    let mut keep: Vec<usize> = groups
        .into_par_iter()
        .flat_map_iter(|(_, members)| {
            if members.len() == 1 {
                return members;
            }
            let mut seen: Vec<Vec<u32>> = Vec::new();
            let mut reps = Vec::new();
            for i in members {
                let k = canon.key(&sets[i]);
                if !seen.contains(&k) {
                    seen.push(k);
                    reps.push(i);
                }
            }
            reps
        })
        .collect();
    keep.sort_unstable();
    keep.into_iter().map(|i| sets[i].clone()).collect()
}

/// Sets grouped by the isomorphism type of their adjacency graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeClass {
    pub size: usize,
    pub shape: GraphShape,
    /// Dynkin label, `GQ(3,1)`, or a size summary.
    pub label: String,
    pub representatives: Vec<Vec<usize>>,
    pub count: usize,
}

/// Groups sets by adjacency graph, ordered by size (descending) then certificate.
pub fn classify(sys: &ConfigSystem, sets: &[Vec<usize>]) -> Vec<ShapeClass> {
    let mut map: BTreeMap<(std::cmp::Reverse<usize>, String), ShapeClass> = BTreeMap::new();
    for s in sets {
        let g = sys.graph(s);
        let shape = GraphShape::of(&g);
        let entry = map
            .entry((std::cmp::Reverse(s.len()), shape.certificate.clone()))
            .or_insert_with(|| ShapeClass {
                size: s.len(),
                label: shape.label(&g),
                shape,
                representatives: Vec::new(),
                count: 0,
            });
        entry.representatives.push(s.clone());
        entry.count += 1;
    }
    map.into_values().collect()
}

/// Number of inequivalent admissible sets whose adjacency graph is isomorphic to `shape`.
pub fn embedding_orbits(sys: &ConfigSystem, shape: &Graph, mode: Equivalence) -> usize {
    let n = shape.order();
    if n == 0 {
        return 1;
    }
    let target = shape.certificate();
    let spec = SearchSpec::default().with_min_size(n).with_max_size(n);
    let hits: Vec<Vec<usize>> = admissible_sets(sys, &spec)
        .into_iter()
        .filter(|s| sys.graph(s).certificate() == target)
        .collect();
    dedupe(sys, &hits, mode).len()
}

#[cfg(test)]
mod tests {
    use std::sync::OnceLock;

    use proptest::prelude::*;

    use super::*;
    use crate::configs::system::tests::a11_system;

    fn sys() -> &'static ConfigSystem {
        static SYS: OnceLock<ConfigSystem> = OnceLock::new();
        SYS.get_or_init(a11_system)
    }

    fn greedy(sys: &ConfigSystem, order: &[usize], cap: usize) -> Vec<usize> {
        let mut set: Vec<usize> = Vec::new();
        for &x in order {
            if set.len() < cap && !set.contains(&x) && set.iter().all(|&y| sys.compatible(x, y)) {
                set.push(x);
            }
        }
        set.sort_unstable();
        set
    }

    fn summary(classes: &[ShapeClass]) -> Vec<(usize, String, usize)> {
        classes.iter().map(|c| (c.size, c.shape.certificate.clone(), c.count)).collect()
    }

    #[test]
    fn a11_has_one_orbit_of_triples() {
        let s = sys();
        let singles: Vec<Vec<usize>> = (0..s.len()).map(|i| vec![i]).collect();
        assert_eq!(dedupe(s, &singles, Equivalence::Full).len(), 1);
        let one = Graph::empty(1);
        assert_eq!(embedding_orbits(s, &one, Equivalence::Local), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn classify_ignores_order(
            orders in prop::collection::vec(prop::collection::vec(0usize..220, 1..80), 1..6),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let s = sys();
            let sets: Vec<Vec<usize>> = orders.iter().map(|o| greedy(s, o, 12)).collect();
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut shuffled: Vec<Vec<usize>> = sets.clone();
            for set in &mut shuffled {
                set.shuffle(&mut rng);
            }
            shuffled.shuffle(&mut rng);
            prop_assert_eq!(summary(&classify(s, &sets)), summary(&classify(s, &shuffled)));
        }

        #[test]
        fn keys_are_reflection_invariant(order in Just((0..220usize).collect::<Vec<_>>()).prop_shuffle(), cap in 1usize..8, k in 0usize..66) {
            let s = sys();
            let set = greedy(s, &order, cap);
            let image = s.reflect_set(k, &set);
            for mode in [Equivalence::Local, Equivalence::Full] {
                let canon = Canonizer::new(s, mode);
                prop_assert_eq!(canon.key(&set), canon.key(&image));
            }
            let reps = dedupe(s, &[set.clone(), image], Equivalence::Full);
            prop_assert_eq!(reps, vec![set]);
        }
    }
}
