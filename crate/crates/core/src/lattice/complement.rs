//! Orthogonal complements inside the dual lattice and isometry testing of
//! small rational forms.

use num_traits::Zero;

use serde::{Deserialize, Serialize};

use super::{DualVector, Lattice};
use crate::enumeration::enumerate_in_coset;
use crate::linalg::{self, RatMatrix};
use crate::rational::lcm_denominators;
use crate::Rational;

/// `{x ∈ L∨ : x·v = 0 for all v}` with its induced rational Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Complement {
    pub rank: usize,
    pub basis: Vec<DualVector>,
    #[serde(with = "rat_matrix")]
    pub gram: RatMatrix,
}

mod rat_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(crate::rational::to_string).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatMatrix, D::Error> {
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

impl Complement {
    /// Integral Gram matrix if every entry is an integer.
    pub fn integral_gram(&self) -> Option<Vec<Vec<i64>>> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
            .collect()
    }
}

/// The dual vectors orthogonal to `vectors`, as a lattice with rational form.
///
/// A dual vector is `x = G⁻¹y` with `y ∈ ℤⁿ`, and `x·v = y·v`, so the
/// complement is `G⁻¹` applied to the saturated integer kernel of the rows `v`.
pub fn saturated_complement(lattice: &Lattice, vectors: &[DualVector]) -> Complement {
    let n = lattice.rank();
    let rows: Vec<Vec<i64>> = vectors.iter().map(|v| v.num.clone()).collect();
    let kernel = if rows.is_empty() { linalg::identity(n) } else { linalg::integer_kernel(&rows, n) };
    let inv = lattice.inverse();
    let basis: Vec<DualVector> = kernel
        .iter()
        .map(|y| {
            let x: Vec<Rational> = (0..n)
                .map(|i| (0..n).map(|j| inv[i][j] * y[j]).sum())
                .collect();
            lattice.dual_vector(&x).expect("G⁻¹y lies in the dual")
        })
        .collect();
    let gram = basis
        .iter()
        .map(|a| basis.iter().map(|b| lattice.pairing(a, b).expect("same lattice")).collect())
        .collect();
    Complement { rank: basis.len(), basis, gram }
}

/// Whether two negative-definite rational forms are isometric over ℤ.
///
/// Searches for images of the basis of `b` among the vectors of `a` with the
/// right norms and mutual pairings; the images form a basis of `a` exactly when
/// the determinants agree.
pub fn is_isometric(a: &RatMatrix, b: &RatMatrix) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let s = lcm_denominators(a.iter().flatten().chain(b.iter().flatten()));
    let scale = |m: &RatMatrix| -> Vec<Vec<i64>> {
        m.iter().map(|r| r.iter().map(|x| (x * s).to_integer()).collect()).collect()
    };
    let (ga, gb) = (scale(a), scale(b));
    if linalg::determinant(&ga) != linalg::determinant(&gb) {
        return false;
    }
    let labels = (0..ga.len()).map(|i| format!("b{i}")).collect();
    let la = Lattice { name: "scaled".into(), gram: ga, labels };
    if la.gram.iter().enumerate().any(|(i, r)| r[i] >= 0) || gb.iter().enumerate().any(|(i, r)| r[i] >= 0) {
        return false;
    }
    let zero = vec![Rational::zero(); la.rank()];
    let candidates: Vec<Vec<DualVector>> = (0..gb.len())
        .map(|i| {
            enumerate_in_coset(&la, &zero, Rational::from_integer(gb[i][i]))
                .into_iter()
                .flat_map(|v| [v.neg(), v])
                .collect()
        })
        .collect();
    fn extend(k: usize, chosen: &mut Vec<DualVector>, cand: &[Vec<DualVector>], la: &Lattice, gb: &[Vec<i64>]) -> bool {
        if k == gb.len() {
            return true;
        }
        for v in &cand[k] {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, w)| la.pairing(w, v).expect("same lattice") == Rational::from_integer(gb[j][k]));
            if ok {
                chosen.push(v.clone());
                if extend(k + 1, chosen, cand, la, gb) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(0, &mut Vec::new(), &candidates, &la, &gb)
}

/// Gram matrix of the dual `L∨` of a root lattice in the dual basis, scaled by `k`.
pub fn dual_gram_scaled(lattice: &Lattice, k: i64) -> RatMatrix {
    lattice
        .inverse()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x * k).collect())
        .collect()
}

pub fn is_negative_definite(gram: &RatMatrix) -> bool {
    (1..=gram.len()).all(|k| {
        let minor: RatMatrix = gram[..k].iter().map(|r| r[..k].iter().map(|x| -x).collect()).collect();
        let s = lcm_denominators(minor.iter().flatten());
        let m: Vec<Vec<i64>> = minor.iter().map(|r| r.iter().map(|x| (x * s).to_integer()).collect()).collect();
        linalg::determinant(&m).is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rank_span_has_trivial_complement() {
        let a2 = Lattice::parse("A2").unwrap();
        let vs = vec![a2.dual_vector(&[1.into(), 0.into()]).unwrap(), a2.dual_vector(&[0.into(), 1.into()]).unwrap()];
        assert_eq!(saturated_complement(&a2, &vs).rank, 0);
    }

    #[test]
    fn complement_of_a_root_in_a2() {
        // In A2 the dual vectors orthogonal to α1 are multiples of the fundamental weight ω2,
        // of square −2/3.
        let a2 = Lattice::parse("A2").unwrap();
        let root = a2.dual_vector(&[1.into(), 0.into()]).unwrap();
        let c = saturated_complement(&a2, &[root]);
        assert_eq!(c.rank, 1);
        assert_eq!(c.gram, vec![vec![Rational::new(-2, 3)]]);
    }

    #[test]
    fn isometry_recognition() {
        let a2 = Lattice::parse("A2").unwrap();
        let dual4 = dual_gram_scaled(&a2, 4);
        assert_eq!(dual4[0][0], Rational::new(-8, 3));
        // A different basis of the same lattice: (ω1, ω1 + ω2).
        let other = vec![
            vec![Rational::new(-8, 3), Rational::new(-4, 1)],
            vec![Rational::new(-4, 1), Rational::new(-8, 1)],
        ];
        assert!(is_isometric(&dual4, &other));
        assert!(!is_isometric(&dual4, &linalg::to_rational(&[vec![-8, 0], vec![0, -8]])));
        assert!(is_isometric(&linalg::to_rational(&[vec![-8]]), &linalg::to_rational(&Lattice::parse("A1(4)").unwrap().gram)));
        assert!(is_negative_definite(&dual4));
    }
}
