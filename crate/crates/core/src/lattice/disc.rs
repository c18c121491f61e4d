//! Discriminant groups `L∨/L` with their quadratic forms.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{DualVector, Lattice};
use crate::enumeration;
use crate::linalg::smith_normal_form;
use crate::rational::{congruent_mod2, mod1, mod2};
use crate::Rational;

/// `L∨/L ≅ ⊕ ℤ/dᵢ`, with generator `i` represented by a dual vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscGroup {
    /// Nontrivial invariant factors, each dividing the next.
    pub invariant_factors: Vec<i64>,
    #[serde(with = "gens_serde")]
    pub generators: Vec<Vec<Rational>>,
    pub rank: usize,
    /// Rows of the inverse column transform used to read off class coordinates.
    #[serde(skip)]
    coord_rows: Vec<Vec<i64>>,
}

mod gens_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = g.iter().map(|r| r.iter().map(crate::rational::to_string).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::rational::parse(s).ok_or_else(|| serde::de::Error::custom("bad rational")))
                    .collect()
            })
            .collect()
    }
}

impl DiscGroup {
    pub fn order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> i64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Coordinates `(a₁, …)` with `0 ≤ aᵢ < dᵢ` of the class of `x`.
    pub fn class_coords(&self, x: &[Rational]) -> Vec<i64> {
        self.coord_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(row, &d)| {
                let s: Rational = row.iter().zip(x).map(|(&w, xi)| xi * w).sum();
                let a = s * d;
                debug_assert!(a.is_integer(), "vector is not in the dual lattice");
                a.to_integer().rem_euclid(d)
            })
            .collect()
    }

    /// The representative `Σ (aᵢ/dᵢ)·(dᵢ gᵢ)` with each generator coefficient in `[0, 1)`.
    pub fn element(&self, coords: &[i64]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.rank];
        for (g, (&a, &d)) in self.generators.iter().zip(coords.iter().zip(&self.invariant_factors)) {
            let a = a.rem_euclid(d);
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += gi * a;
            }
        }
        x
    }

    /// Each generator times its order lies in the lattice.
    pub fn generators_have_orders(&self) -> bool {
        self.generators
            .iter()
            .zip(&self.invariant_factors)
            .all(|(g, &d)| g.iter().all(|x| (x * d).is_integer()))
    }

    /// All coordinate tuples in lexicographic order.
    pub fn all_coords(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..d).map(move |a| {
                        let mut c = c.clone();
                        c.push(a);
                        c
                    })
                })
                .collect();
        }
        out
    }
}

/// Cokernel of the Gram matrix via Smith normal form.
pub fn discriminant_group(lattice: &Lattice) -> DiscGroup {
    let snf = smith_normal_form(&lattice.gram);
    let n = lattice.rank();
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    let mut coord_rows = Vec::new();
    for i in 0..n {
        let d = snf.diag[i];
        if d == 1 {
            continue;
        }
        factors.push(d);
        generators.push((0..n).map(|r| Rational::new(snf.right[r][i], d)).collect());
        coord_rows.push(snf.right_inv[i].clone());
    }
    DiscGroup { invariant_factors: factors, generators, rank: n, coord_rows }
}

/// An element of the discriminant group with its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscClass {
    /// Coordinates with respect to the generators of [`DiscGroup`].
    pub coords: Vec<i64>,
    /// Quadratic form value in `[0, 2)`.
    #[serde(with = "crate::rational")]
    pub q_value: Rational,
    /// Lexicographically minimal vector among those of maximal norm in the coset.
    pub coset_rep: DualVector,
}

impl DiscClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&a| a == 0)
    }

    /// Norm of the shortest vectors in the coset.
    pub fn min_norm(&self) -> Rational {
        self.coset_rep.norm
    }

    pub fn describe(&self) -> String {
        format!(
            "class {:?} (q = {} mod 2, shortest {})",
            self.coords,
            crate::rational::to_string(&self.q_value),
            crate::rational::to_string(&self.coset_rep.norm)
        )
    }
}

/// Builds the class with the given coordinates.
pub fn class_from_coords(lattice: &Lattice, group: &DiscGroup, coords: &[i64]) -> DiscClass {
    let coords: Vec<i64> = coords
        .iter()
        .zip(&group.invariant_factors)
        .map(|(a, d)| a.rem_euclid(*d))
        .collect();
    let offset = group.element(&coords);
    let (_, shortest) = enumeration::shortest_in_coset(lattice, &offset);
    let rep = shortest
        .into_iter()
        .min_by(|a, b| lex_cmp(&a.coords(), &b.coords()))
        .expect("every coset has a shortest vector");
    DiscClass { coords, q_value: mod2(&rep.norm), coset_rep: rep }
}

/// The class of a dual vector.
pub fn class_of(lattice: &Lattice, group: &DiscGroup, v: &DualVector) -> DiscClass {
    class_from_coords(lattice, group, &group.class_coords(&v.coords()))
}

fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    a.cmp(b)
}

/// Discriminant bilinear form `x·y mod 1` in `[0, 1)`.
pub fn bilinear(lattice: &Lattice, a: &DiscClass, b: &DiscClass) -> Rational {
    mod1(&lattice.pairing(&a.coset_rep, &b.coset_rep).expect("same lattice"))
}

/// How to choose among several classes of the requested square.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum ClassSelector {
    /// First class in the canonical order of [`find_classes`].
    #[default]
    Canonical,
    /// The `n`-th class in that order.
    Nth(usize),
    /// First class whose pairing with `partner` is congruent to `value` mod 1.
    PairedWith { partner: DiscClass, value: Rational },
    /// First nonzero class in that order.
    NonZero,
}

/// All classes `γ` with `γ² ≡ q mod 2ℤ`, ordered so that classes in which the
/// norm `q` itself is attained come first, then by coordinates.
pub fn find_classes(lattice: &Lattice, q: Rational) -> Vec<DiscClass> {
    let group = discriminant_group(lattice);
    let mut out: Vec<(bool, DiscClass)> = group
        .all_coords()
        .into_iter()
        .map(|c| class_from_coords(lattice, &group, &c))
        .filter(|c| congruent_mod2(&c.q_value, &q))
        .map(|c| {
            let attained = c.coset_rep.norm >= q
                && !enumeration::enumerate_in_coset(lattice, &c.coset_rep.coords(), q).is_empty();
            (attained, c)
        })
        .collect();
    out.sort_by(|(a, x), (b, y)| b.cmp(a).then_with(|| x.coords.cmp(&y.coords)));
    out.into_iter().map(|(_, c)| c).collect()
}

/// Deterministic choice of a class of square `q mod 2`; `None` if there is none.
pub fn find_class(lattice: &Lattice, q: Rational, selector: &ClassSelector) -> Option<DiscClass> {
    let all = find_classes(lattice, q);
    match selector {
        ClassSelector::Canonical => all.into_iter().next(),
        ClassSelector::Nth(k) => all.into_iter().nth(*k),
        ClassSelector::PairedWith { partner, value } => all
            .into_iter()
            .find(|c| mod1(&(bilinear(lattice, c, partner) - value)).is_zero()),
        ClassSelector::NonZero => all.into_iter().find(|c| !c.is_zero()),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn group_order_matches(lattice: &Lattice) -> bool {
        discriminant_group(lattice).order() == linalg::determinant(&lattice.gram).abs()
    }

    fn l(s: &str) -> Lattice {
        Lattice::parse(s).unwrap()
    }

    #[test]
    fn groups() {
        assert!(discriminant_group(&l("E8")).invariant_factors.is_empty());
        assert_eq!(discriminant_group(&l("A11")).invariant_factors, vec![12]);
        assert_eq!(discriminant_group(&l("D8")).invariant_factors, vec![2, 2]);
        assert_eq!(discriminant_group(&l("D9")).invariant_factors, vec![4]);
        assert_eq!(discriminant_group(&l("E7+A3")).invariant_factors, vec![2, 4]);
        for s in ["A1", "A2", "A3", "D4", "D5", "E6", "E7", "A1+D1", "E8+A2+D1", "A11", "D9+A2", "E7+A3"] {
            let lat = l(s);
            let g = discriminant_group(&lat);
            assert!(group_order_matches(&lat), "{s}");
            assert!(g.generators_have_orders(), "{s}");
            for gen in &g.generators {
                assert!(lat.dual_vector(gen).is_ok());
            }
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let lat = l("E7+A3");
        let g = discriminant_group(&lat);
        for c in g.all_coords() {
            assert_eq!(g.class_coords(&g.element(&c)), c);
        }
    }

    #[test]
    fn classes() {
        assert!(find_class(&l("D4"), Rational::new(-1, 4), &ClassSelector::Canonical).is_none());
        let lam = find_class(&l("A11"), Rational::new(-11, 12), &ClassSelector::Canonical).unwrap();
        assert_eq!(lam.coset_rep.norm, Rational::new(-11, 12));
        let zero = find_class(&l("E8"), Rational::zero(), &ClassSelector::Canonical).unwrap();
        assert!(zero.is_zero());
        assert!(zero.coset_rep.is_zero());
        let again = find_class(&l("A11"), Rational::new(-11, 12), &ClassSelector::Canonical).unwrap();
        assert_eq!(lam, again);
    }

    #[test]
    fn eta_lambda_pair_in_a11() {
        let lat = l("A11");
        let eta = find_class(&lat, Rational::new(-9, 4), &ClassSelector::Canonical).unwrap();
        assert_eq!(eta.coset_rep.norm, Rational::new(-9, 4));
        let sel = ClassSelector::PairedWith { partner: eta.clone(), value: Rational::new(-1, 4) };
        let lam = find_class(&lat, Rational::new(-11, 12), &sel).unwrap();
        assert_eq!(lam.coset_rep.norm, Rational::new(-11, 12));
        assert_eq!(bilinear(&lat, &eta, &lam), Rational::new(3, 4));
    }

    #[test]
    fn nonzero_selector() {
        let d8 = l("D8");
        let eta = find_class(&d8, Rational::from_integer(0), &ClassSelector::NonZero).unwrap();
        assert!(!eta.is_zero());
        assert!(find_class(&d8, Rational::from_integer(0), &ClassSelector::Canonical).unwrap().is_zero());
        assert_eq!(crate::enumeration::enumerate_in_coset(&d8, &eta.coset_rep.coords(), Rational::from_integer(-2)).len(), 128);
    }
}
