//! Negative-definite integral lattices, their dual vectors and discriminant groups.
//!
//! Gram conventions (all negated, so every root has square −2):
//!
//! * `A_n`: simple roots on a path, −2 on the diagonal and +1 between neighbours;
//! * `D_n` (n ≥ 4): path `α1 … α(n−1)` with `α_n` attached to `α(n−2)`;
//!   `D3 = A3`, `D2 = A1 ⊕ A1` and `D1 = [−4]`;
//! * `E6, E7, E8`: Bourbaki numbering, path `α1 α3 α4 … α_n` with `α2` on `α4`.

mod complement;
mod disc;

pub use complement::{dual_gram_scaled, is_isometric, is_negative_definite, saturated_complement, Complement};
pub use disc::{
    bilinear, class_from_coords, class_of, discriminant_group, find_class, find_classes, ClassSelector, DiscClass,
    DiscGroup,
};

pub use crate::linalg::{smith_normal_form, SnfResult};

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, IntMatrix, RatMatrix};
use crate::{Error, Rational, Result};

/// Family of a root lattice summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    A,
    D,
    E,
    /// Rank-one lattice `[entry]`.
    Scalar(i64),
}

/// An integral, symmetric, negative-definite Gram matrix with named basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    pub name: String,
    pub gram: IntMatrix,
    pub labels: Vec<String>,
}

impl Lattice {
    /// Validates symmetry and negative definiteness.
    pub fn new(name: impl Into<String>, gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        if labels.len() != n {
            return Err(Error::RankMismatch { expected: n, got: labels.len() });
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let neg: IntMatrix = gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        for k in 1..=n {
            let minor: IntMatrix = neg[..k].iter().map(|r| r[..k].to_vec()).collect();
            if linalg::determinant(&minor) <= 0 {
                return Err(Error::NotNegativeDefinite(k));
            }
        }
        Ok(Lattice { name: name.into(), gram, labels })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn determinant(&self) -> i64 {
        linalg::determinant(&self.gram)
    }

    pub fn inverse(&self) -> RatMatrix {
        linalg::rational_inverse(&self.gram).expect("definite lattice is nonsingular")
    }

    /// Multiplies the form by `k`.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::Invalid(format!("scale must be positive, got {k}")));
        }
        let gram = self.gram.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        Ok(Lattice { name: format!("{}({k})", self.name), gram, labels: self.labels.clone() })
    }

    /// `uᵀ G v` for rational coordinate vectors.
    pub fn form(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if self.gram[i][j] != 0 {
                    s += ui * vj * self.gram[i][j];
                }
            }
        }
        s
    }

    /// Exact pairing of two dual vectors.
    pub fn pairing(&self, u: &DualVector, v: &DualVector) -> Result<Rational> {
        for w in [u, v] {
            if w.num.len() != self.rank() {
                return Err(Error::RankMismatch { expected: self.rank(), got: w.num.len() });
            }
        }
        Ok(Rational::new(self.int_form(&u.num, &v.num), u.den * v.den))
    }

    fn int_form(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut s: i128 = 0;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                s += ui as i128 * vj as i128 * self.gram[i][j] as i128;
            }
        }
        i64::try_from(s).expect("pairing overflow")
    }

    /// Builds a dual vector from rational coordinates, checking `G x ∈ ℤⁿ`.
    pub fn dual_vector(&self, coords: &[Rational]) -> Result<DualVector> {
        if coords.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: coords.len() });
        }
        let den = crate::rational::lcm_denominators(coords);
        let num: Vec<i64> = coords.iter().map(|x| (x * den).to_integer()).collect();
        self.dual_from_parts(num, den)
    }

    pub fn dual_from_parts(&self, num: Vec<i64>, den: i64) -> Result<DualVector> {
        if num.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: num.len() });
        }
        if den <= 0 {
            return Err(Error::Invalid("denominator must be positive".into()));
        }
        let g = linalg::gcd_slice(&num).gcd(&den);
        let (num, den) = if g > 1 { (num.iter().map(|x| x / g).collect(), den / g) } else { (num, den) };
        for row in &self.gram {
            let s: i128 = row.iter().zip(&num).map(|(a, b)| *a as i128 * *b as i128).sum();
            if s % den as i128 != 0 {
                return Err(Error::NotInDual);
            }
        }
        let norm = Rational::new(self.int_form(&num, &num), den * den);
        Ok(DualVector { num, den, norm })
    }

    pub fn zero_vector(&self) -> DualVector {
        DualVector { num: vec![0; self.rank()], den: 1, norm: Rational::zero() }
    }

    /// Exponent of the discriminant group.
    pub fn exponent(&self) -> i64 {
        discriminant_group(self).exponent()
    }

    /// Reflection in a root `r` with `r² = −2`: `v ↦ v + (v·r) r`.
    pub fn reflect(&self, v: &DualVector, root: &DualVector) -> DualVector {
        let c = self.pairing(v, root).expect("same lattice");
        let coords: Vec<Rational> = v
            .coords()
            .iter()
            .zip(root.coords())
            .map(|(a, b)| a + c * b)
            .collect();
        self.dual_vector(&coords).expect("reflection preserves the dual")
    }

    /// Parses descriptions such as `A11`, `E7+A3`, `E8⊕A1⊕D1`, `A1(4)`, `2A1`, `[-4]`.
    pub fn parse(desc: &str) -> Result<Self> {
        let cleaned = desc.replace('⊕', "+").replace('−', "-").replace(' ', "");
        if cleaned.is_empty() {
            return Err(Error::LatticeSyntax(desc.into()));
        }
        let mut parts = Vec::new();
        for tok in cleaned.split('+') {
            let (mult, rest) = split_multiplicity(tok).ok_or_else(|| Error::LatticeSyntax(desc.into()))?;
            let part = parse_summand(rest).ok_or_else(|| Error::LatticeSyntax(desc.into()))??;
            for _ in 0..mult {
                parts.push(part.clone());
            }
        }
        let mut l = direct_sum(&parts)?;
        l.name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
        Ok(l)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn split_multiplicity(tok: &str) -> Option<(usize, &str)> {
    let digits = tok.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return Some((1, tok));
    }
    let m: usize = tok[..digits].parse().ok()?;
    (m > 0).then_some((m, &tok[digits..]))
}

fn parse_summand(tok: &str) -> Option<Result<Lattice>> {
    if let Some(inner) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let entry: i64 = inner.parse().ok()?;
        return Some(make_root_lattice(RootKind::Scalar(entry), 1, None));
    }
    let (body, scale) = match tok.find('(') {
        Some(i) => {
            let s = tok[i..].strip_prefix('(')?.strip_suffix(')')?;
            (&tok[..i], Some(s.parse::<i64>().ok()?))
        }
        None => (tok, None),
    };
    let mut chars = body.chars();
    let kind = match chars.next()?.to_ascii_uppercase() {
        'A' => RootKind::A,
        'D' => RootKind::D,
        'E' => RootKind::E,
        _ => return None,
    };
    let rank: usize = chars.as_str().parse().ok()?;
    Some(make_root_lattice(kind, rank, scale))
}

/// Standard negative-definite root lattice, optionally rescaled.
pub fn make_root_lattice(kind: RootKind, rank: usize, scale: Option<i64>) -> Result<Lattice> {
    let bad = |reason| Error::InvalidRootLattice {
        kind: format!("{kind:?}"),
        rank,
        reason,
    };
    if rank == 0 {
        return Err(bad("rank must be positive"));
    }
    let mut g = vec![vec![0i64; rank]; rank];
    let name;
    match kind {
        RootKind::A => {
            for i in 0..rank {
                g[i][i] = -2;
                if i + 1 < rank {
                    g[i][i + 1] = 1;
                    g[i + 1][i] = 1;
                }
            }
            name = format!("A{rank}");
        }
        RootKind::D => {
            match rank {
                1 => g[0][0] = -4,
                2 => {
                    g[0][0] = -2;
                    g[1][1] = -2;
                }
                _ => {
                    for i in 0..rank {
                        g[i][i] = -2;
                    }
                    for i in 0..rank - 2 {
                        g[i][i + 1] = 1;
                        g[i + 1][i] = 1;
                    }
                    g[rank - 3][rank - 1] = 1;
                    g[rank - 1][rank - 3] = 1;
                }
            }
            name = format!("D{rank}");
        }
        RootKind::E => {
            if !(6..=8).contains(&rank) {
                return Err(bad("E_n exists only for n = 6, 7, 8"));
            }
            for i in 0..rank {
                g[i][i] = -2;
            }
            // Bourbaki: 1-3, 3-4, 4-5, ..., and 2-4 (1-based).
            let mut link = |a: usize, b: usize| {
                g[a - 1][b - 1] = 1;
                g[b - 1][a - 1] = 1;
            };
            link(1, 3);
            link(2, 4);
            for i in 3..rank {
                link(i, i + 1);
            }
            name = format!("E{rank}");
        }
        RootKind::Scalar(entry) => {
            if rank != 1 {
                return Err(bad("a scalar lattice has rank one"));
            }
            if entry >= 0 {
                return Err(bad("the scalar entry must be negative"));
            }
            g[0][0] = entry;
            name = if entry == -4 { "D1".to_string() } else { format!("[{entry}]") };
        }
    }
    let labels = (1..=rank).map(|i| format!("{name}.{i}")).collect();
    let l = Lattice { name, gram: g, labels };
    match scale {
        Some(1) | None => Ok(l),
        Some(k) => l.scaled(k),
    }
}

/// Orthogonal direct sum; labels are prefixed by the summand position.
pub fn direct_sum(parts: &[Lattice]) -> Result<Lattice> {
    if parts.is_empty() {
        return Err(Error::Invalid("direct sum of no lattices".into()));
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let n: usize = parts.iter().map(Lattice::rank).sum();
    let mut gram = vec![vec![0; n]; n];
    let mut labels = Vec::with_capacity(n);
    let mut off = 0;
    for (k, p) in parts.iter().enumerate() {
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                gram[off + i][off + j] = p.gram[i][j];
            }
            labels.push(format!("{k}:{}", p.labels[i]));
        }
        off += p.rank();
    }
    let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
    Ok(Lattice { name, gram, labels })
}

/// A vector of the dual lattice: integer numerators over a positive common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualVector {
    pub num: Vec<i64>,
    pub den: i64,
    #[serde(with = "crate::rational")]
    pub norm: Rational,
}

impl DualVector {
    pub fn coords(&self) -> Vec<Rational> {
        self.num.iter().map(|&x| Rational::new(x, self.den)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> DualVector {
        DualVector { num: self.num.iter().map(|x| -x).collect(), den: self.den, norm: self.norm }
    }

    /// Sign-normalized coordinates and whether normalization flipped the sign.
    pub fn canonical_key(&self) -> (Vec<Rational>, bool) {
        let flip = self.num.iter().find(|&&x| x != 0).is_some_and(|x| x.is_negative());
        let c = self.coords();
        if flip {
            (c.into_iter().map(|x| -x).collect(), true)
        } else {
            (c, false)
        }
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords().iter().map(crate::rational::to_string).collect()
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(", "))
    }
}

/// Canonical order on dual vectors: sign-normalized coordinates, then the sign flag.
pub fn canonical_cmp(a: &DualVector, b: &DualVector) -> std::cmp::Ordering {
    a.canonical_key().cmp(&b.canonical_key())
}

/// `c² = C² − κ (C² + 2)²`: projected square of an exceptional component.
pub fn component_square(c_sq: i64, kappa: Rational) -> Rational {
    let t = Rational::from_integer(c_sq + 2);
    Rational::from_integer(c_sq) - kappa * t * t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn small_root_lattices() {
        assert_eq!(make_root_lattice(RootKind::A, 1, None).unwrap().gram, vec![vec![-2]]);
        let d1 = make_root_lattice(RootKind::Scalar(-4), 1, None).unwrap();
        assert_eq!(d1.gram, vec![vec![-4]]);
        assert_eq!(d1.name, "D1");
        assert_eq!(Lattice::parse("D1").unwrap().gram, vec![vec![-4]]);
        assert!(make_root_lattice(RootKind::E, 5, None).is_err());
        assert!(make_root_lattice(RootKind::A, 0, None).is_err());
    }

    #[test]
    fn determinants_by_cofactors() {
        let e8 = make_root_lattice(RootKind::E, 8, None).unwrap();
        assert_eq!(cofactor_det(&e8.gram).abs(), 1);
        let e7 = make_root_lattice(RootKind::E, 7, None).unwrap();
        let a3 = make_root_lattice(RootKind::A, 3, None).unwrap();
        assert_eq!(cofactor_det(&e7.gram).abs(), 2);
        assert_eq!(cofactor_det(&a3.gram).abs(), 4);
        let s = direct_sum(&[e7, a3]).unwrap();
        assert_eq!(s.rank(), 10);
        assert_eq!(s.determinant().abs(), 8);
        for (kind, n, det) in [(RootKind::E, 6, 3), (RootKind::D, 9, 4), (RootKind::D, 4, 4), (RootKind::A, 11, 12)] {
            let l = make_root_lattice(kind, n, None).unwrap();
            assert_eq!(cofactor_det(&l.gram).abs(), det, "{kind:?}{n}");
            assert_eq!(l.determinant().abs(), det);
        }
    }

    #[test]
    fn direct_sums() {
        let a1 = make_root_lattice(RootKind::A, 1, None).unwrap();
        assert_eq!(direct_sum(std::slice::from_ref(&a1)).unwrap(), a1);
        let l = Lattice::parse("A1+D1").unwrap();
        assert_eq!(l.gram, vec![vec![-2, 0], vec![0, -4]]);
        assert_eq!(Lattice::parse("E8⊕A1⊕D1").unwrap().rank(), 10);
        assert_eq!(Lattice::parse("2A1").unwrap().rank(), 2);
        assert_eq!(Lattice::parse("A1(4)").unwrap().gram, vec![vec![-8]]);
        assert!(Lattice::parse("Q3").is_err());
    }

    #[test]
    fn validation() {
        assert_eq!(
            Lattice::new("x", vec![vec![-2, 1], vec![0, -2]], vec!["a".into(), "b".into()]),
            Err(Error::NotSymmetric(1, 0))
        );
        assert_eq!(
            Lattice::new("x", vec![vec![-2, 3], vec![3, -2]], vec!["a".into(), "b".into()]),
            Err(Error::NotNegativeDefinite(2))
        );
    }

    #[test]
    fn component_squares() {
        for k in [Rational::new(-1, 3), Rational::new(-1, 2), Rational::from_integer(-1)] {
            assert_eq!(component_square(-2, k), Rational::from_integer(-2));
        }
        assert_eq!(component_square(-3, Rational::new(-1, 3)), Rational::new(-8, 3));
        assert_eq!(component_square(-4, Rational::new(-1, 2)), Rational::from_integer(-2));
    }

    #[test]
    fn dual_vectors() {
        let a1 = Lattice::parse("A1").unwrap();
        let v = a1.dual_vector(&[Rational::new(1, 2)]).unwrap();
        assert_eq!(v.norm, Rational::new(-1, 2));
        assert_eq!(a1.pairing(&v, &v).unwrap(), v.norm);
        assert_eq!(a1.dual_vector(&[Rational::new(1, 3)]), Err(Error::NotInDual));
        let root = a1.dual_vector(&[Rational::from_integer(1)]).unwrap();
        assert_eq!(a1.reflect(&root, &root), root.neg());
    }
}
