//! Exceptional roots compatible with a line set and the triangle property.

use serde::{Deserialize, Serialize};

use super::system::ConfigSystem;

/// The maximal set of compatible roots. A root and its negative both survive
/// only when orthogonal to everything; such pairs are listed once as `free`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Emax {
    /// Indices into `ConfigSystem::roots` of roots whose negative is excluded.
    pub oriented: Vec<usize>,
    /// One index per `±` pair of fully orthogonal roots (canonical sign).
    pub free: Vec<usize>,
}

impl Emax {
    /// Number of reported roots (each free pair counted once).
    pub fn len(&self) -> usize {
        self.oriented.len() + self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oriented.is_empty() && self.free.is_empty()
    }

    /// Every root in the set, free pairs expanded to both signs.
    pub fn all_roots(&self, system: &ConfigSystem) -> Vec<usize> {
        let mut v = self.oriented.clone();
        for &r in &self.free {
            v.push(r);
            v.push(system.negated_root(r));
        }
        v.sort_unstable();
        v
    }
}

/// Whether the root `r` is compatible with the line set: nonnegative on every
/// member and every `λ`-vector, and never meeting two adjacent members.
pub fn root_compatible(system: &ConfigSystem, set: &[usize], r: usize) -> bool {
    root_compatible_with(system, set, r, true)
}

/// [`root_compatible`], optionally ignoring the `λ`-vectors.
pub fn root_compatible_with(system: &ConfigSystem, set: &[usize], r: usize, use_lambda: bool) -> bool {
    if set.iter().any(|&i| system.root_dot(r, i) < 0)
        || (use_lambda && (0..system.lambda.len()).any(|j| system.root_lambda_dot(r, j) < 0))
    {
        return false;
    }
    let ones: Vec<usize> = set.iter().copied().filter(|&i| system.root_dot(r, i) == 1).collect();
    ones.iter()
        .enumerate()
        .all(|(k, &a)| ones[k + 1..].iter().all(|&b| system.pairing(a, b) == system.q0 + 2))
}

/// The maximal set of exceptional roots allowed by the line set.
pub fn emax(system: &ConfigSystem, set: &[usize]) -> Emax {
    emax_with(system, set, true)
}

/// [`emax`], optionally ignoring the `λ`-vectors.
pub fn emax_with(system: &ConfigSystem, set: &[usize], use_lambda: bool) -> Emax {
    let ok: Vec<bool> = (0..system.roots.len()).map(|r| root_compatible_with(system, set, r, use_lambda)).collect();
    let mut out = Emax::default();
    for r in 0..system.roots.len() {
        if !ok[r] {
            continue;
        }
        let neg = system.negated_root(r);
        if ok[neg] {
            if !system.roots[r].canonical_key().1 {
                out.free.push(r);
            }
        } else {
            out.oriented.push(r);
        }
    }
    out
}

/// Where the fourth line of a triangle may be looked for.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessScope {
    /// Inside the set itself.
    #[default]
    Set,
    /// Anywhere among the candidates of the system.
    All,
}

/// Outcome of the triangle property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub passes: bool,
    /// Triangles (as candidate indices) with neither a fourth line nor a root meeting them.
    pub violations: Vec<[usize; 3]>,
}

/// Checks that every triangle of the set has a fourth line adjacent to all
/// three or a root of `roots` meeting one of them with pairing 1.
pub fn triangle_filter(system: &ConfigSystem, set: &[usize], roots: &[usize], scope: WitnessScope) -> TriangleReport {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let pool: Vec<usize> = match scope {
        WitnessScope::Set => sorted.clone(),
        WitnessScope::All => (0..system.len()).collect(),
    };
    let mut violations = Vec::new();
    for (a_idx, &a) in sorted.iter().enumerate() {
        for (b_idx, &b) in sorted.iter().enumerate().skip(a_idx + 1) {
            if !system.adjacent(a, b) {
                continue;
            }
            for &c in &sorted[b_idx + 1..] {
                if !(system.adjacent(a, c) && system.adjacent(b, c)) {
                    continue;
                }
                let tri = [a, b, c];
                let fourth = pool
                    .iter()
                    .any(|&d| !tri.contains(&d) && tri.iter().all(|&t| system.adjacent(t, d)));
                let root = roots.iter().any(|&r| tri.iter().any(|&t| system.root_dot(r, t) == 1));
                if !fourth && !root {
                    violations.push(tri);
                }
            }
        }
    }
    TriangleReport { passes: violations.is_empty(), violations }
}

/// The rule for the `E8 ⊕ D1` lattice. With the special line present, every
/// edge of the set lies in a triangle of the set or has an endpoint meeting a
/// root of `roots`; without it, the set has no triangles. `set` excludes the
/// special line itself.
pub fn series_filter_jstar(system: &ConfigSystem, set: &[usize], has_ell_cross: bool, roots: &[usize]) -> bool {
    let g = system.graph(set);
    if !has_ell_cross {
        return g.triangles().is_empty();
    }
    g.edges().into_iter().all(|(a, b)| {
        let in_triangle = (0..set.len()).any(|c| c != a && c != b && g.adjacent(a, c) && g.adjacent(b, c));
        in_triangle || roots.iter().any(|&r| system.root_dot(r, set[a]) == 1 || system.root_dot(r, set[b]) == 1)
    })
}

#[cfg(test)]
mod tests {
    use std::sync::OnceLock;

    use proptest::prelude::*;

    use super::*;
    use crate::configs::system::tests::{a11_system, a11_system_with_lambda};

    fn plain() -> &'static ConfigSystem {
        static SYS: OnceLock<ConfigSystem> = OnceLock::new();
        SYS.get_or_init(a11_system)
    }

    fn with_lambda() -> &'static ConfigSystem {
        static SYS: OnceLock<ConfigSystem> = OnceLock::new();
        SYS.get_or_init(a11_system_with_lambda)
    }

    /// Greedy admissible set following the given candidate order.
    fn greedy(sys: &ConfigSystem, order: &[usize], cap: usize) -> Vec<usize> {
        let mut set: Vec<usize> = Vec::new();
        for &x in order {
            let x = x % sys.len();
            if set.len() < cap && !set.contains(&x) && set.iter().all(|&y| sys.compatible(x, y)) {
                set.push(x);
            }
        }
        set
    }

    fn orders() -> impl Strategy<Value = (Vec<usize>, usize)> {
        (prop::collection::vec(0usize..220, 1..300), 1usize..21)
    }

    #[test]
    fn empty_set_keeps_every_root_as_a_free_pair() {
        let sys = plain();
        let e = emax(sys, &[]);
        assert!(e.oriented.is_empty());
        assert_eq!(e.free.len(), sys.positive_root_count());
        assert_eq!(e.all_roots(sys).len(), sys.roots.len());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn all_roots_are_exactly_the_compatible_roots((order, cap) in orders(), use_lambda in any::<bool>()) {
            let sys = with_lambda();
            let set = greedy(sys, &order, cap);
            prop_assert!(sys.is_admissible(&set));
            let expected: Vec<usize> =
                (0..sys.roots.len()).filter(|&r| root_compatible_with(sys, &set, r, use_lambda)).collect();
            prop_assert_eq!(emax_with(sys, &set, use_lambda).all_roots(sys), expected);
        }

        #[test]
        fn lambda_only_removes_roots((order, cap) in orders()) {
            let sys = with_lambda();
            let set = greedy(sys, &order, cap);
            let with = emax_with(sys, &set, true).all_roots(sys);
            let without = emax_with(sys, &set, false).all_roots(sys);
            prop_assert!(with.iter().all(|r| without.contains(r)));
        }

        #[test]
        fn triangle_filter_is_monotone((order, cap) in orders(), keep in prop::collection::vec(any::<bool>(), 132)) {
            let sys = plain();
            let set = greedy(sys, &order, cap);
            let roots = emax(sys, &set).all_roots(sys);
            let some: Vec<usize> = roots.iter().copied().filter(|&r| keep[r]).collect();
            for scope in [WitnessScope::Set, WitnessScope::All] {
                let none = triangle_filter(sys, &set, &[], scope);
                let part = triangle_filter(sys, &set, &some, scope);
                let full = triangle_filter(sys, &set, &roots, scope);
                prop_assert!(full.violations.iter().all(|t| part.violations.contains(t)));
                prop_assert!(part.violations.iter().all(|t| none.violations.contains(t)));
                prop_assert!(!none.passes || part.passes);
                prop_assert!(!part.passes || full.passes);
                prop_assert_eq!(full.passes, full.violations.is_empty());
            }
        }

        #[test]
        fn wider_scope_only_helps((order, cap) in orders()) {
            let sys = plain();
            let set = greedy(sys, &order, cap);
            let roots = emax(sys, &set).all_roots(sys);
            let narrow = triangle_filter(sys, &set, &roots, WitnessScope::Set);
            let wide = triangle_filter(sys, &set, &roots, WitnessScope::All);
            prop_assert!(wide.violations.iter().all(|t| narrow.violations.contains(t)));
        }

        #[test]
        fn triangle_free_sets_pass((order, cap) in orders()) {
            let sys = plain();
            let set = greedy(sys, &order, cap);
            let triangle_free = sys.graph(&set).triangles().is_empty();
            prop_assert_eq!(series_filter_jstar(sys, &set, false, &[]), triangle_free);
            if triangle_free {
                prop_assert!(triangle_filter(sys, &set, &[], WitnessScope::Set).passes);
            }
        }
    }
}
