//! Candidate line classes with their pairing tables, exceptional roots and the
//! Weyl group action by root reflections.

use std::collections::HashMap;

use num_traits::Zero;

use super::bits::{Bits, CAPACITY};
use crate::enumeration::enumerate_in_coset;
use crate::graph::Graph;
use crate::lattice::{canonical_cmp, DualVector, Lattice};
use crate::{Error, Rational, Result};

/// The candidate vectors `X ⊆ Vec⁺(Σ, η)` of one search together with the
/// `λ`-vectors and roots that the geometric filters consult.
#[derive(Debug, Clone)]
pub struct ConfigSystem {
    pub lattice: Lattice,
    /// Norm of the candidate vectors; pairs are admissible at `q0 + 2` or `q0 + 3`.
    pub q0: Rational,
    pub vectors: Vec<DualVector>,
    pub lambda: Vec<DualVector>,
    /// All roots of `Σ`, both signs, in canonical order.
    pub roots: Vec<DualVector>,
    pair: Vec<Rational>,
    compat: Vec<Bits>,
    adj: Vec<Bits>,
    root_dot: Vec<Vec<i64>>,
    root_lambda_dot: Vec<Vec<i64>>,
    /// Indices into `roots` of one root per `±` pair.
    positive: Vec<usize>,
    /// Permutation of `vectors` induced by the reflection in each positive root.
    reflections: Vec<Vec<u16>>,
    /// For each vector, the positive roots orthogonal to it.
    orth: Vec<Bits>,
}

fn integer_pairing(lattice: &Lattice, a: &DualVector, b: &DualVector) -> i64 {
    let p = lattice.pairing(a, b).expect("same lattice");
    assert!(p.is_integer(), "roots pair integrally with dual vectors");
    p.to_integer()
}

impl ConfigSystem {
    pub fn new(lattice: Lattice, q0: Rational, vectors: Vec<DualVector>, lambda: Vec<DualVector>) -> Result<Self> {
        let n = vectors.len();
        if n > CAPACITY {
            return Err(Error::Invalid(format!("{n} candidate vectors exceed the capacity {CAPACITY}")));
        }
        if let Some(v) = vectors.iter().find(|v| v.norm != q0) {
            return Err(Error::Invalid(format!("candidate {v} has norm {} instead of {}", v.norm, q0)));
        }
        let (lo, hi) = (q0 + 2, q0 + 3);
        let mut pair = vec![Rational::zero(); n * n];
        let mut compat = vec![Bits::EMPTY; n];
        let mut adj = vec![Bits::EMPTY; n];
        for i in 0..n {
            for j in 0..n {
                let p = lattice.pairing(&vectors[i], &vectors[j])?;
                pair[i * n + j] = p;
                if i != j && (p == lo || p == hi) {
                    compat[i].insert(j);
                    if p == hi {
                        adj[i].insert(j);
                    }
                }
            }
        }
        let zero = vec![Rational::zero(); lattice.rank()];
        let mut roots = enumerate_in_coset(&lattice, &zero, Rational::from_integer(-2));
        roots.sort_by(canonical_cmp);
        let positive: Vec<usize> = (0..roots.len()).filter(|&i| !roots[i].canonical_key().1).collect();
        let root_dot: Vec<Vec<i64>> =
            roots.iter().map(|r| vectors.iter().map(|v| integer_pairing(&lattice, r, v)).collect()).collect();
        let root_lambda_dot: Vec<Vec<i64>> =
            roots.iter().map(|r| lambda.iter().map(|v| integer_pairing(&lattice, r, v)).collect()).collect();

        let den = vectors.iter().fold(1i64, |d, v| num_integer::lcm(d, v.den));
        let key = |num: &[i64], d: i64| -> Vec<i64> { num.iter().map(|x| x * (den / d)).collect() };
        let index: HashMap<Vec<i64>, usize> = vectors.iter().enumerate().map(|(i, v)| (key(&v.num, v.den), i)).collect();
        let mut reflections = Vec::with_capacity(positive.len());
        let mut orth = vec![Bits::EMPTY; n];
        for (k, &r) in positive.iter().enumerate() {
            let root = &roots[r];
            let mut perm = Vec::with_capacity(n);
            for (i, v) in vectors.iter().enumerate() {
                let c = root_dot[r][i];
                if c == 0 {
                    orth[i].insert(k);
                    perm.push(i as u16);
                    continue;
                }
                let image: Vec<i64> = v.num.iter().zip(&root.num).map(|(x, y)| x + c * v.den * y).collect();
                let j = *index
                    .get(&key(&image, v.den))
                    .ok_or_else(|| Error::Invalid("candidate set is not closed under reflections".into()))?;
                perm.push(j as u16);
            }
            reflections.push(perm);
        }
        Ok(ConfigSystem {
            lattice,
            q0,
            vectors,
            lambda,
            roots,
            pair,
            compat,
            adj,
            root_dot,
            root_lambda_dot,
            positive,
            reflections,
            orth,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn all(&self) -> Bits {
        Bits::full(self.len())
    }

    pub fn pairing(&self, i: usize, j: usize) -> Rational {
        self.pair[i * self.len() + j]
    }

    pub fn compatible(&self, i: usize, j: usize) -> bool {
        self.compat[i].contains(j)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn compat_set(&self, i: usize) -> Bits {
        self.compat[i]
    }

    pub fn adj_set(&self, i: usize) -> Bits {
        self.adj[i]
    }

    /// `e·v` for the root `roots[r]` and the candidate `vectors[i]`.
    pub fn root_dot(&self, r: usize, i: usize) -> i64 {
        self.root_dot[r][i]
    }

    /// `e·λ` for the root `roots[r]` and the `λ`-vector `lambda[j]`.
    pub fn root_lambda_dot(&self, r: usize, j: usize) -> i64 {
        self.root_lambda_dot[r][j]
    }

    /// Index of `−roots[r]`.
    pub fn negated_root(&self, r: usize) -> usize {
        let neg = self.roots[r].neg();
        self.roots.binary_search_by(|x| canonical_cmp(x, &neg)).expect("roots come in pairs")
    }

    /// Whether every pair of distinct members is admissible.
    pub fn is_admissible(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(k, &i)| set[k + 1..].iter().all(|&j| self.compatible(i, j)))
    }

    /// Adjacency graph of a subset (edges at pairing `q0 + 3`).
    pub fn graph(&self, set: &[usize]) -> Graph {
        Graph::from_fn(set.len(), |a, b| self.adjacent(set[a], set[b]))
    }

    pub fn positive_root_count(&self) -> usize {
        self.positive.len()
    }

    /// Positive roots (as reflection indices) orthogonal to every member of `set`.
    pub fn stabilizer(&self, set: impl IntoIterator<Item = usize>) -> Bits {
        set.into_iter().fold(Bits::full(self.positive.len()), |acc, i| acc & self.orth[i])
    }

    /// Orbits on the invariant set `within` of the group generated by the given reflections.
    pub fn orbits(&self, gens: &Bits, within: &Bits) -> Vec<Bits> {
        let n = self.len();
        let mut parent: Vec<u16> = (0..n as u16).collect();
        fn find(p: &mut [u16], x: usize) -> usize {
            let mut r = x;
            while p[r] as usize != r {
                r = p[r] as usize;
            }
            let mut y = x;
            while p[y] as usize != r {
                let next = p[y] as usize;
                p[y] = r as u16;
                y = next;
            }
            r
        }
        for k in gens.iter() {
            let perm = &self.reflections[k];
            for x in within.iter() {
                let y = perm[x] as usize;
                if y != x {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo as u16;
                    }
                }
            }
        }
        let mut by_root: Vec<(usize, Bits)> = Vec::new();
        for x in within.iter() {
            let r = find(&mut parent, x);
            match by_root.iter_mut().find(|(k, _)| *k == r) {
                Some((_, b)) => b.insert(x),
                None => by_root.push((r, Bits::singleton(x))),
            }
        }
        by_root.into_iter().map(|(_, b)| b).collect()
    }

    /// Image of a set under the reflection in the `k`-th positive root.
    pub fn reflect_set(&self, k: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| self.reflections[k][i] as usize).collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::enumeration::vec_plus;
    use crate::lattice::{find_class, ClassSelector};

    pub(crate) fn a11_system() -> ConfigSystem {
        let l = Lattice::parse("A11").unwrap();
        let eta = find_class(&l, Rational::new(-1, 4), &ClassSelector::Canonical).unwrap();
        let xs = vec_plus(&l, &eta);
        ConfigSystem::new(l, Rational::new(-9, 4), xs, Vec::new()).unwrap()
    }

    pub(crate) fn a11_system_with_lambda() -> ConfigSystem {
        let l = Lattice::parse("A11").unwrap();
        let eta = find_class(&l, Rational::new(-1, 4), &ClassSelector::Canonical).unwrap();
        let q1 = Rational::new(-11, 12);
        let lc = find_class(&l, q1, &ClassSelector::PairedWith { partner: eta.clone(), value: Rational::new(-1, 4) }).unwrap();
        let lambda = crate::enumeration::enumerate_in_coset(&l, &lc.coset_rep.coords(), q1);
        let xs = vec_plus(&l, &eta);
        ConfigSystem::new(l, Rational::new(-9, 4), xs, lambda).unwrap()
    }

    #[test]
    fn a11_tables() {
        let s = a11_system();
        assert_eq!(s.len(), 220);
        assert_eq!(s.roots.len(), 132);
        assert_eq!(s.positive_root_count(), 66);
        // A triple is incompatible exactly with the 27 triples sharing two points.
        assert!((0..220).all(|i| s.compat_set(i).len() == 192));
        // Disjoint triples: C(9, 3) = 84.
        assert!((0..220).all(|i| s.adj_set(i).len() == 84));
    }

    #[test]
    fn reflections_act_and_orbits() {
        let s = a11_system();
        let all = s.all();
        let g = s.stabilizer([]);
        assert_eq!(s.orbits(&g, &all).len(), 1);
        // Stabilizer of one triple: S3 × S9, orbits on the rest by |s ∩ t| ∈ {0, 1, 2}.
        let stab = s.stabilizer([0]);
        let rest = all.and_not(&Bits::singleton(0));
        let sizes: Vec<usize> = {
            let mut v: Vec<usize> = s.orbits(&stab, &rest).iter().map(|o| o.len()).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(sizes, vec![27, 84, 108]);
        for k in 0..s.positive_root_count() {
            let img = s.reflect_set(k, &[0, 1, 2]);
            let pairs = |v: &[usize]| -> Vec<Rational> { vec![s.pairing(v[0], v[1]), s.pairing(v[0], v[2]), s.pairing(v[1], v[2])] };
            let mut a = pairs(&[0, 1, 2]);
            let mut b = pairs(&img);
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
}
