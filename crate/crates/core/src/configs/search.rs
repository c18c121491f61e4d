//! Enumeration of admissible sets up to the Weyl group.
//!
//! The search adds one candidate at a time. At a node with chosen set `S` and
//! candidate set `P`, the pointwise stabilizer `H_S` is generated by the
//! reflections in roots orthogonal to `S`; the node branches on one
//! representative per `H_S`-orbit of `P` and removes each orbit from the
//! candidates of the later siblings. Every admissible set is therefore reached
//! up to the Weyl group, possibly more than once; callers dedupe with the
//! canonical forms of [`super::classify`].

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bits::Bits;
use super::system::ConfigSystem;

/// What kind of admissible sets to list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Inclusion-maximal admissible sets.
    ExhaustiveMaximal,
    /// All admissible sets with at least this many members.
    SizeAtLeast(usize),
    /// Admissible sets whose adjacency graph contains `K(4)`.
    ContainsK4,
    /// Admissible sets with triangle-free adjacency graph, maximal among those.
    TriangleFree,
}

impl std::str::FromStr for Strategy {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(k) = lower.strip_prefix("size-at-least:").or_else(|| lower.strip_prefix("size-at-least=")) {
            let k = k.parse().map_err(|_| crate::Error::Invalid(format!("bad size in strategy {s}")))?;
            return Ok(Strategy::SizeAtLeast(k));
        }
        match lower.as_str() {
            "exhaustive-maximal" | "maximal" => Ok(Strategy::ExhaustiveMaximal),
            "size-at-least" => Ok(Strategy::SizeAtLeast(1)),
            "contains-k4" | "k4" => Ok(Strategy::ContainsK4),
            "triangle-free" | "no-k3" => Ok(Strategy::TriangleFree),
            _ => Err(crate::Error::Invalid(format!("unknown strategy {s}"))),
        }
    }
}

/// Fully resolved search parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub min_size: usize,
    pub max_size: Option<usize>,
    pub maximal_only: bool,
    pub triangle_free: bool,
    /// Start sets; the search only lists supersets of one of them.
    pub seeds: Vec<Vec<usize>>,
    /// Candidates never used; must be invariant under the Weyl group.
    pub forbid: Bits,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            min_size: 0,
            max_size: None,
            maximal_only: false,
            triangle_free: false,
            seeds: vec![Vec::new()],
            forbid: Bits::EMPTY,
        }
    }
}

impl SearchSpec {
    pub fn from_strategy(system: &ConfigSystem, strategy: Strategy) -> Self {
        match strategy {
            Strategy::ExhaustiveMaximal => SearchSpec { maximal_only: true, min_size: 1, ..Default::default() },
            Strategy::SizeAtLeast(k) => SearchSpec { min_size: k.max(1), ..Default::default() },
            Strategy::ContainsK4 => SearchSpec { seeds: k4_seeds(system), min_size: 4, ..Default::default() },
            Strategy::TriangleFree => {
                SearchSpec { triangle_free: true, maximal_only: true, min_size: 1, ..Default::default() }
            }
        }
    }

    pub fn with_min_size(mut self, k: usize) -> Self {
        self.min_size = k;
        self
    }

    pub fn with_max_size(mut self, k: usize) -> Self {
        self.max_size = Some(k);
        self
    }

    pub fn with_forbid(mut self, forbid: Bits) -> Self {
        self.forbid = forbid;
        self
    }

    pub fn with_seeds(mut self, seeds: Vec<Vec<usize>>) -> Self {
        self.seeds = seeds;
        self
    }
}

#[derive(Debug, Clone)]
struct Node {
    set: Vec<usize>,
    /// Candidates for the next member, minus excluded orbits.
    cand: Bits,
    /// All vertices that could extend `set`, without exclusions.
    common: Bits,
}

/// Greedy colouring of the candidates into mutually incompatible classes; the
/// number of classes bounds the size of any admissible subset.
pub fn color_bound(system: &ConfigSystem, cand: Bits) -> usize {
    let mut uncolored = cand;
    let mut colors = 0;
    while !uncolored.is_empty() {
        colors += 1;
        let mut q = uncolored;
        while let Some(v) = q.first() {
            uncolored.remove(v);
            q.remove(v);
            q = q.and_not(&system.compat_set(v));
        }
    }
    colors
}

struct Engine<'a> {
    sys: &'a ConfigSystem,
    spec: &'a SearchSpec,
}

impl Engine<'_> {
    fn seed_node(&self, seed: &[usize]) -> Option<Node> {
        if !self.sys.is_admissible(seed) || seed.iter().any(|&x| self.spec.forbid.contains(x)) {
            return None;
        }
        let base = self.sys.all().and_not(&self.spec.forbid);
        let mut node = Node { set: Vec::new(), cand: base, common: base };
        for &x in seed {
            node = self.child(&node, x, node.common);
        }
        Some(node)
    }

    fn restriction(&self, set: &[usize], x: usize) -> Bits {
        let mut r = self.sys.compat_set(x);
        if self.spec.triangle_free {
            let mut near = Bits::EMPTY;
            for &s in set {
                if self.sys.adjacent(s, x) {
                    near |= self.sys.adj_set(s);
                }
            }
            r = r.and_not(&(self.sys.adj_set(x) & near));
        }
        r
    }

    fn child(&self, node: &Node, x: usize, cand: Bits) -> Node {
        let r = self.restriction(&node.set, x);
        let mut set = node.set.clone();
        set.push(x);
        Node { set, cand: cand & r, common: node.common & r }
    }

    /// Orbit representatives of the candidates with the candidate set each child inherits.
    fn branches(&self, node: &Node) -> Vec<(usize, Bits)> {
        let gens = self.sys.stabilizer(node.set.iter().copied());
        let mut orbits = if gens.is_empty() {
            node.cand.iter().map(Bits::singleton).collect()
        } else {
            self.sys.orbits(&gens, &node.cand)
        };
        orbits.sort_by_key(|o| o.first());
        let mut remaining = node.cand;
        let mut out = Vec::with_capacity(orbits.len());
        for o in orbits {
            out.push((o.first().expect("orbits are nonempty"), remaining));
            remaining = remaining.and_not(&o);
        }
        out
    }

    fn emits(&self, node: &Node) -> bool {
        let k = node.set.len();
        if k < self.spec.min_size || self.spec.max_size.is_some_and(|m| k > m) {
            return false;
        }
        !self.spec.maximal_only || node.common.is_empty()
    }

    /// Whether no emitted set can lie below this node.
    fn prunable(&self, node: &Node) -> bool {
        let k = node.set.len();
        if self.spec.max_size.is_some_and(|m| k >= m) || node.cand.is_empty() {
            return true;
        }
        if self.spec.maximal_only && !self.spec.triangle_free {
            // An excluded vertex compatible with every candidate extends every
            // set below this node, so none of them is maximal.
            let excluded = node.common.and_not(&node.cand);
            if excluded.iter().any(|y| node.cand.and_not(&self.sys.compat_set(y)).is_empty()) {
                return true;
            }
        }
        k < self.spec.min_size && k + color_bound(self.sys, node.cand) < self.spec.min_size
    }

    fn visit(&self, node: Node, sink: &mut dyn FnMut(&[usize])) {
        if self.emits(&node) {
            sink(&sorted(&node.set));
        }
        if self.prunable(&node) {
            return;
        }
        for (x, cand) in self.branches(&node) {
            let child = self.child(&node, x, cand);
            self.visit(child, sink);
        }
    }

    /// Expands the tree to the given depth below the seeds, emitting interior nodes.
    fn frontier(&self, depth: usize, sink: &mut dyn FnMut(&[usize])) -> Vec<Node> {
        let mut level: Vec<Node> = self.spec.seeds.iter().filter_map(|s| self.seed_node(s)).collect();
        for _ in 0..depth {
            let mut next = Vec::new();
            for node in level {
                if self.emits(&node) {
                    sink(&sorted(&node.set));
                }
                if self.prunable(&node) {
                    continue;
                }
                for (x, cand) in self.branches(&node) {
                    next.push(self.child(&node, x, cand));
                }
            }
            level = next;
        }
        level
    }
}

fn sorted(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v
}

/// Calls `visit` on every admissible set matching `spec`, at least
/// once per Weyl-group orbit. Subtrees run in parallel.
pub fn for_each_admissible(system: &ConfigSystem, spec: &SearchSpec, visit: &(dyn Fn(&[usize]) + Sync)) {
    let engine = Engine { sys: system, spec };
    let frontier = engine.frontier(2, &mut |s| visit(s));
    frontier.into_par_iter().for_each(|node| engine.visit(node, &mut |s| visit(s)));
}

/// The search tree cut at a fixed depth into independent subtrees, for
/// resumable runs. Subtree order is deterministic.
pub struct SearchTasks<'a> {
    engine: Engine<'a>,
    nodes: Vec<Node>,
}

impl<'a> SearchTasks<'a> {
    /// Cuts the tree; sets above the cut go to `shallow`.
    pub fn new(system: &'a ConfigSystem, spec: &'a SearchSpec, depth: usize, shallow: &mut dyn FnMut(&[usize])) -> Self {
        let engine = Engine { sys: system, spec };
        let nodes = engine.frontier(depth, shallow);
        SearchTasks { engine, nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Visits every emitted set of subtree `i`.
    pub fn run(&self, i: usize, visit: &mut dyn FnMut(&[usize])) {
        self.engine.visit(self.nodes[i].clone(), visit);
    }
}

/// All admissible sets matching `spec`, each at least once per
/// Weyl-group orbit, sorted and without literal duplicates.
pub fn admissible_sets(system: &ConfigSystem, spec: &SearchSpec) -> Vec<Vec<usize>> {
    let out = Mutex::new(Vec::new());
    for_each_admissible(system, spec, &|s| out.lock().expect("result lock").push(s.to_vec()));
    let mut out = out.into_inner().expect("result lock");
    out.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out.dedup();
    log::debug!("search produced {} raw sets", out.len());
    out
}

/// Admissible sets for a named strategy.
pub fn admissible_sets_by(system: &ConfigSystem, strategy: Strategy) -> Vec<Vec<usize>> {
    admissible_sets(system, &SearchSpec::from_strategy(system, strategy))
}

/// Orbit representatives of 4-cliques of the adjacency graph inside admissible sets.
pub fn k4_seeds(system: &ConfigSystem) -> Vec<Vec<usize>> {
    fn grow(sys: &ConfigSystem, set: &mut Vec<usize>, cand: Bits, out: &mut Vec<Vec<usize>>) {
        if set.len() == 4 {
            out.push(sorted(set));
            return;
        }
        let gens = sys.stabilizer(set.iter().copied());
        let mut orbits = if gens.is_empty() { cand.iter().map(Bits::singleton).collect() } else { sys.orbits(&gens, &cand) };
        orbits.sort_by_key(|o| o.first());
        let mut remaining = cand;
        for o in orbits {
            let x = o.first().expect("nonempty");
            set.push(x);
            grow(sys, set, remaining & sys.adj_set(x) & sys.compat_set(x), out);
            set.pop();
            remaining = remaining.and_not(&o);
        }
    }
    let mut out = Vec::new();
    grow(system, &mut Vec::new(), system.all(), &mut out);
    if out.is_empty() {
        log::warn!("no K(4) in the adjacency graph; the contains-K4 search is empty");
    }
    out
}

/// Maximum size of an admissible set avoiding `forbid` and containing `seed`,
/// with a witness. Branch and bound over the same orbit tree.
pub fn bnd_with(system: &ConfigSystem, seed: &[usize], forbid: Bits) -> (usize, Vec<usize>) {
    let spec = SearchSpec { seeds: vec![seed.to_vec()], forbid, ..Default::default() };
    bnd_witness(system, &spec)
}

/// Maximum size of a set admitted by `spec`, ignoring its size limits and
/// maximality, with a witness.
pub fn bnd_witness(system: &ConfigSystem, spec: &SearchSpec) -> (usize, Vec<usize>) {
    let spec = SearchSpec { min_size: 0, max_size: None, maximal_only: false, ..spec.clone() };
    let engine = Engine { sys: system, spec: &spec };
    let best = AtomicUsize::new(0);
    let witness = Mutex::new(Vec::new());
    let record = |set: &[usize]| {
        if set.len() > best.load(Ordering::Relaxed) {
            let mut w = witness.lock().expect("witness lock");
            if set.len() > best.load(Ordering::Relaxed) {
                best.store(set.len(), Ordering::Relaxed);
                *w = sorted(set);
            }
        }
    };
    fn go(engine: &Engine<'_>, node: Node, best: &AtomicUsize, record: &(dyn Fn(&[usize]) + Sync)) {
        record(&node.set);
        if node.cand.is_empty() {
            return;
        }
        let k = node.set.len();
        if k + color_bound(engine.sys, node.cand) <= best.load(Ordering::Relaxed) {
            return;
        }
        for (x, cand) in engine.branches(&node) {
            let avail = cand & engine.sys.compat_set(x);
            if k + 1 + avail.len() <= best.load(Ordering::Relaxed) {
                continue;
            }
            go(engine, engine.child(&node, x, cand), best, record);
        }
    }
    let frontier = engine.frontier(1, &mut |_| {});
    for s in engine.spec.seeds.iter().filter(|s| system.is_admissible(s)) {
        record(s);
    }
    frontier.into_par_iter().for_each(|node| go(&engine, node, &best, &record));
    let w = witness.into_inner().expect("witness lock");
    (best.into_inner(), w)
}

/// `bnd` over all candidates of the system.
pub fn bnd(system: &ConfigSystem) -> usize {
    bnd_with(system, &[], Bits::EMPTY).0
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, Just, ProptestConfig};
    use proptest::strategy::Strategy as _;

    use super::*;
    use crate::configs::system::tests::a11_system;
    use crate::enumeration::vec_std;
    use crate::lattice::{find_class, ClassSelector, Lattice};
    use crate::Rational;

    fn e7_gamma() -> ConfigSystem {
        let l = Lattice::parse("E7").unwrap();
        let q = Rational::new(-3, 2);
        let gamma = find_class(&l, q, &ClassSelector::NonZero).unwrap();
        let xs = vec_std(&l, &gamma);
        ConfigSystem::new(l, q, xs, Vec::new()).unwrap()
    }

    /// Every clique of the compatibility graph, by plain recursion.
    fn all_cliques(sys: &ConfigSystem) -> Vec<Vec<usize>> {
        fn go(sys: &ConfigSystem, set: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
            out.push(set.clone());
            for x in from..sys.len() {
                if set.iter().all(|&y| sys.compatible(x, y)) {
                    set.push(x);
                    go(sys, set, x + 1, out);
                    set.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(sys, &mut Vec::new(), 0, &mut out);
        out
    }

    fn pairwise_ok(sys: &ConfigSystem, set: &[usize]) -> bool {
        let (lo, hi) = (sys.q0 + 2, sys.q0 + 3);
        set.iter().enumerate().all(|(k, &a)| {
            set[k + 1..].iter().all(|&b| {
                let p = sys.lattice.pairing(&sys.vectors[a], &sys.vectors[b]).unwrap();
                p == lo || p == hi
            })
        })
    }

    fn shapes(sys: &ConfigSystem, sets: &[Vec<usize>]) -> BTreeSet<(usize, Vec<u8>)> {
        sets.iter().map(|s| (s.len(), sys.graph(s).certificate())).collect()
    }

    #[test]
    fn e7_agrees_with_brute_force() {
        let sys = e7_gamma();
        assert_eq!(sys.len(), 56);
        let naive = all_cliques(&sys);
        let top = naive.iter().map(Vec::len).max().unwrap();
        assert_eq!(top, 4);
        assert_eq!(bnd(&sys), top);
        let maximal: Vec<Vec<usize>> = naive
            .iter()
            .filter(|s| (0..sys.len()).all(|x| s.contains(&x) || s.iter().any(|&y| !sys.compatible(x, y))))
            .cloned()
            .collect();
        let found = admissible_sets_by(&sys, Strategy::ExhaustiveMaximal);
        assert!(found.iter().all(|s| pairwise_ok(&sys, s)));
        assert_eq!(shapes(&sys, &found), shapes(&sys, &maximal));
        let all = admissible_sets(&sys, &SearchSpec::default().with_min_size(1));
        assert_eq!(shapes(&sys, &all), shapes(&sys, &naive[1..]));
    }

    #[test]
    fn a11_bound_and_large_sets() {
        let sys = a11_system();
        let (size, witness) = bnd_witness(&sys, &SearchSpec::default());
        assert_eq!(size, 20);
        assert!(pairwise_ok(&sys, &witness));
        let top = admissible_sets(&sys, &SearchSpec::default().with_min_size(20));
        assert!(!top.is_empty() && top.iter().all(|s| s.len() == 20 && pairwise_ok(&sys, s)));
    }

    #[test]
    fn k4_seeds_are_cliques() {
        let sys = a11_system();
        let seeds = k4_seeds(&sys);
        assert!(!seeds.is_empty());
        for s in &seeds {
            assert_eq!(s.len(), 4);
            assert!(sys.is_admissible(s));
            assert_eq!(sys.graph(s).edge_count(), 6);
        }
    }

    #[test]
    fn triangle_free_strategy() {
        let sys = e7_gamma();
        for s in admissible_sets_by(&sys, Strategy::TriangleFree) {
            assert!(sys.graph(&s).triangles().is_empty());
        }
        assert!("size-at-least:3".parse::<Strategy>().unwrap() == Strategy::SizeAtLeast(3));
        assert!("bogus".parse::<Strategy>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn seeded_bound_extends_the_seed(order in Just((0..56usize).collect::<Vec<_>>()).prop_shuffle(), k in 1usize..4) {
            let sys = e7_gamma();
            let mut seed = Vec::new();
            for x in order {
                if seed.len() < k && seed.iter().all(|&y| sys.compatible(x, y)) {
                    seed.push(x);
                }
            }
            let (size, witness) = bnd_with(&sys, &seed, Bits::EMPTY);
            prop_assert!(size >= seed.len() && size <= 4);
            prop_assert_eq!(witness.len(), size);
            prop_assert!(seed.iter().all(|x| witness.contains(x)));
            prop_assert!(pairwise_ok(&sys, &witness));
        }
    }
}
