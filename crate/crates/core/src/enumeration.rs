//! Dual vectors of prescribed norm in a prescribed discriminant class.
//!
//! The positive form `−G` is decomposed exactly as
//! `Q(x) = Σᵢ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²`, and coordinates are fixed from the last
//! one down, each confined to an interval around its centre. The coset offset
//! only shifts the admissible integer range at every level. Interval arithmetic
//! uses `f64` with a safety margin; every candidate is re-checked exactly.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lattice::{canonical_cmp, DiscClass, DualVector, Lattice};
use crate::rational::{congruent_mod2, lcm_denominators};
use crate::{Error, Rational, Result};

const SLACK: f64 = 1e-7;

/// Input of [`enumerate_vectors`]: all `v ≡ cls` with `v² = q`.
#[derive(Debug, Clone)]
pub struct VecQuery<'a> {
    pub lattice: &'a Lattice,
    pub cls: &'a DiscClass,
    pub q: Rational,
}

struct Decomposition {
    diag: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

fn decompose(lattice: &Lattice) -> Decomposition {
    let n = lattice.rank();
    let mut q: Vec<Vec<Ratio<i128>>> = lattice
        .gram
        .iter()
        .map(|r| r.iter().map(|&x| Ratio::from_integer(-(x as i128))).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = q[k][i] * q[i][l];
                q[k][l] -= t;
            }
        }
    }
    let f = |x: &Ratio<i128>| x.to_f64().expect("finite");
    Decomposition {
        diag: (0..n).map(|i| f(&q[i][i])).collect(),
        mu: (0..n).map(|i| (0..n).map(|j| if j > i { f(&q[i][j]) } else { 0.0 }).collect()).collect(),
    }
}

/// Walks every `x ∈ offset + ℤⁿ` with `−x² ≤ bound` (up to the float margin) and
/// hands the integer numerators over `den` to `visit`.
fn walk(lattice: &Lattice, offset: &[Rational], bound: Rational, mut visit: impl FnMut(&[i64], i64)) {
    let n = lattice.rank();
    if n == 0 || bound.is_negative() {
        return;
    }
    let den = lcm_denominators(offset);
    let off_num: Vec<i64> = offset.iter().map(|x| (x * den).to_integer()).collect();
    let off: Vec<f64> = offset.iter().map(|x| x.to_f64().expect("finite")).collect();
    let dec = decompose(lattice);
    let t = bound.to_f64().expect("finite");
    let mut x = vec![0f64; n];
    let mut z = vec![0i64; n];
    let mut num = vec![0i64; n];

    struct Frame {
        hi: i64,
        cur: i64,
        center: f64,
        rem: f64,
    }

    let level_frame = |i: usize, x: &[f64], rem: f64| -> Frame {
        let center: f64 = -(i + 1..n).map(|j| dec.mu[i][j] * x[j]).sum::<f64>();
        let r = (rem.max(0.0) / dec.diag[i]).sqrt();
        let lo = (center - r - off[i] - SLACK).ceil() as i64;
        let hi = (center + r - off[i] + SLACK).floor() as i64;
        Frame { hi, cur: lo, center, rem }
    };

    let mut stack: Vec<Frame> = vec![level_frame(n - 1, &x, t)];
    while !stack.is_empty() {
        let i = n - stack.len();
        let top = stack.last_mut().expect("nonempty");
        if top.cur > top.hi {
            stack.pop();
            continue;
        }
        let zi = top.cur;
        top.cur += 1;
        let xi = off[i] + zi as f64;
        let d = xi - top.center;
        let rem = top.rem - dec.diag[i] * d * d;
        if rem < -SLACK {
            continue;
        }
        z[i] = zi;
        x[i] = xi;
        if i == 0 {
            for k in 0..n {
                num[k] = off_num[k] + z[k] * den;
            }
            visit(&num, den);
        } else {
            let f = level_frame(i - 1, &x, rem);
            stack.push(f);
        }
    }
}

fn exact_norm(lattice: &Lattice, num: &[i64], den: i64) -> Rational {
    let mut s: i128 = 0;
    for (i, &a) in num.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in num.iter().enumerate() {
            s += a as i128 * b as i128 * lattice.gram[i][j] as i128;
        }
    }
    let s = i64::try_from(s).expect("norm overflow");
    Rational::new(s, den * den)
}

fn collect(lattice: &Lattice, offset: &[Rational], bound: Rational, keep: impl Fn(&Rational) -> bool) -> Vec<DualVector> {
    let mut out = Vec::new();
    walk(lattice, offset, bound, |num, den| {
        let norm = exact_norm(lattice, num, den);
        if -norm <= bound && keep(&norm) {
            out.push(lattice.dual_from_parts(num.to_vec(), den).expect("coset of the dual"));
        }
    });
    out.sort_by(canonical_cmp);
    out
}

/// All `x ∈ offset + L` with `x² = q`, canonically ordered. `q` must be `≤ 0`.
pub fn enumerate_in_coset(lattice: &Lattice, offset: &[Rational], q: Rational) -> Vec<DualVector> {
    if q.is_positive() {
        return Vec::new();
    }
    collect(lattice, offset, -q, |norm| *norm == q)
}

/// All `x ∈ offset + L` with `x² ≥ −bound`, canonically ordered.
pub fn enumerate_ball(lattice: &Lattice, offset: &[Rational], bound: Rational) -> Vec<DualVector> {
    collect(lattice, offset, bound, |_| true)
}

/// The largest norm attained in the coset together with all vectors attaining it.
pub fn shortest_in_coset(lattice: &Lattice, offset: &[Rational]) -> (Rational, Vec<DualVector>) {
    let mut bound = Rational::from_integer(1);
    loop {
        let ball = enumerate_ball(lattice, offset, bound);
        if let Some(best) = ball.iter().map(|v| v.norm).max() {
            let v: Vec<DualVector> = ball.into_iter().filter(|v| v.norm == best).collect();
            return (best, v);
        }
        bound *= 2;
    }
}

/// Complete, duplicate-free, canonically ordered solution set of the query.
pub fn enumerate_vectors(query: &VecQuery<'_>) -> Result<Vec<DualVector>> {
    if query.q.is_positive() {
        return Err(Error::PositiveNorm(query.q));
    }
    if !congruent_mod2(&query.q, &query.cls.q_value) {
        log::warn!(
            "norm {} is not congruent to {} mod 2; the answer is empty",
            crate::rational::to_string(&query.q),
            query.cls.describe()
        );
        return Ok(Vec::new());
    }
    Ok(enumerate_in_coset(query.lattice, &query.cls.coset_rep.coords(), query.q))
}

/// Norm in `(−4, −2]` congruent to the class square.
pub fn plus_norm(cls: &DiscClass) -> Rational {
    let base = if cls.q_value.is_zero() { Rational::from_integer(2) } else { cls.q_value };
    base - 4
}

/// Norm in `(−2, 0]` congruent to the class square.
pub fn std_norm(cls: &DiscClass) -> Rational {
    if cls.q_value.is_zero() {
        Rational::zero()
    } else {
        cls.q_value - 2
    }
}

pub fn vec_plus(lattice: &Lattice, cls: &DiscClass) -> Vec<DualVector> {
    enumerate_in_coset(lattice, &cls.coset_rep.coords(), plus_norm(cls))
}

pub fn vec_std(lattice: &Lattice, cls: &DiscClass) -> Vec<DualVector> {
    enumerate_in_coset(lattice, &cls.coset_rep.coords(), std_norm(cls))
}

/// Exact pairing; fails on vectors of different rank.
pub fn pairing(lattice: &Lattice, u: &DualVector, v: &DualVector) -> Result<Rational> {
    lattice.pairing(u, v)
}

/// Multiset of pairings `u·v` over unordered pairs `u ≠ v` of `a ∪ b` with one
/// vector from each side (or both from `a` when `b` is `None`).
pub fn pairing_histogram(lattice: &Lattice, a: &[DualVector], b: Option<&[DualVector]>) -> BTreeMap<Rational, usize> {
    let mut h = BTreeMap::new();
    match b {
        None => {
            for (i, u) in a.iter().enumerate() {
                for v in &a[i + 1..] {
                    *h.entry(lattice.pairing(u, v).expect("same lattice")).or_insert(0) += 1;
                }
            }
        }
        Some(b) => {
            for u in a {
                for v in b {
                    *h.entry(lattice.pairing(u, v).expect("same lattice")).or_insert(0) += 1;
                }
            }
        }
    }
    h
}

/// Reference enumeration: brute force over the box `|xᵢ| ≤ sqrt(bound · (−G⁻¹)ᵢᵢ)` in the coset.
pub fn box_search(lat: &Lattice, offset: &[Rational], q: Rational) -> Vec<DualVector> {
    let inv = lat.inverse();
    let n = lat.rank();
    // |xᵢ| ≤ sqrt(−q · (−G⁻¹)ᵢᵢ); the loop below ranges over zᵢ = xᵢ − offsetᵢ.
    let radius: Vec<i64> = (0..n)
        .map(|i| {
            let r = (-q * -inv[i][i]).to_f64().expect("finite").sqrt();
            r.ceil() as i64 + offset[i].abs().ceil().to_integer() + 1
        })
        .collect();
    let mut out = Vec::new();
    let mut z = vec![0i64; n];
    fn rec(
        i: usize,
        z: &mut Vec<i64>,
        radius: &[i64],
        lat: &Lattice,
        offset: &[Rational],
        q: Rational,
        out: &mut Vec<DualVector>,
    ) {
        if i == z.len() {
            let coords: Vec<Rational> = offset.iter().zip(z.iter()).map(|(o, &k)| o + k).collect();
            let v = lat.dual_vector(&coords).expect("coset of the dual");
            if v.norm == q {
                out.push(v);
            }
            return;
        }
        for k in -radius[i]..=radius[i] {
            z[i] = k;
            rec(i + 1, z, radius, lat, offset, q, out);
        }
    }
    rec(0, &mut z, &radius, lat, offset, q, &mut out);
    out.sort_by(canonical_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{discriminant_group, find_class, ClassSelector};
    use crate::linalg;

    fn l(s: &str) -> Lattice {
        Lattice::parse(s).unwrap()
    }

    fn cls(lat: &Lattice, q: Rational) -> DiscClass {
        find_class(lat, q, &ClassSelector::Canonical).unwrap()
    }

    #[test]
    fn e8_roots() {
        let e8 = l("E8");
        let zero = cls(&e8, Rational::zero());
        let roots = vec_plus(&e8, &zero);
        assert_eq!(roots.len(), 240);
    }

    #[test]
    fn e8_roots_match_coordinate_model() {
        // Independent count in the even coordinate model: integer vectors of
        // norm 2 plus half-integer vectors (±1/2)^8 with an even number of minus signs.
        let mut model = 0usize;
        let mut x = [0i64; 8];
        fn rec(i: usize, x: &mut [i64; 8], count: &mut usize) {
            if i == 8 {
                let ss: i64 = x.iter().map(|v| v * v).sum();
                let all_odd = x.iter().all(|v| v % 2 != 0);
                let all_even = x.iter().all(|v| v % 2 == 0);
                let sum: i64 = x.iter().sum();
                // Doubled coordinates: norm 2 means sum of squares 8.
                if ss == 8 && (all_even || (all_odd && sum % 4 == 0)) {
                    *count += 1;
                }
                return;
            }
            for k in -2..=2 {
                x[i] = k;
                rec(i + 1, x, count);
            }
        }
        rec(0, &mut x, &mut model);
        assert_eq!(model, 240);
        let e8 = l("E8");
        assert_eq!(vec_plus(&e8, &cls(&e8, Rational::zero())).len(), model);
    }

    #[test]
    fn e6_roots_against_box_search() {
        let e6 = l("E6");
        let mut count = 0usize;
        let mut x = [0i64; 6];
        fn rec(i: usize, x: &mut [i64; 6], g: &[Vec<i64>], count: &mut usize) {
            if i == 6 {
                let mut s = 0;
                for a in 0..6 {
                    for b in 0..6 {
                        s += x[a] * x[b] * g[a][b];
                    }
                }
                if s == -2 {
                    *count += 1;
                }
                return;
            }
            for k in -3..=3 {
                x[i] = k;
                rec(i + 1, x, g, count);
            }
        }
        rec(0, &mut x, &e6.gram, &mut count);
        assert_eq!(count, 72);
        assert_eq!(vec_plus(&e6, &cls(&e6, Rational::zero())).len(), count);
    }

    #[test]
    fn a11_counts() {
        let a11 = l("A11");
        let lam = cls(&a11, Rational::new(-11, 12));
        assert_eq!(vec_std(&a11, &lam).len(), 12);
        let eta = cls(&a11, Rational::new(-9, 4));
        let v = vec_plus(&a11, &eta);
        assert_eq!(v.len(), 220);
        let h = pairing_histogram(&a11, &v, None);
        // η_s·η_t = 3/4 − |s ∩ t| for 3-subsets s ≠ t.
        let keys: Vec<Rational> = h.keys().copied().collect();
        assert_eq!(keys, vec![Rational::new(-5, 4), Rational::new(-1, 4), Rational::new(3, 4)]);
        assert_eq!(h[&Rational::new(3, 4)], 220 * 84 / 2);
    }

    #[test]
    fn irrational_single_line() {
        let lat = l("A1+D1");
        let b4 = lat.dual_vector(&[Rational::zero(), Rational::new(1, 4)]).unwrap();
        let g = discriminant_group(&lat);
        let eta = crate::lattice::class_of(&lat, &g, &b4);
        let q = VecQuery { lattice: &lat, cls: &eta, q: Rational::new(-9, 4) };
        let v = enumerate_vectors(&q).unwrap();
        // −3b/4 and ±a + b/4.
        assert_eq!(v.len(), 3);
        let lines: Vec<DualVector> = [1, -1]
            .iter()
            .map(|&s| lat.dual_vector(&[Rational::new(s, 2), Rational::new(1, 4)]).unwrap())
            .collect();
        let admissible = [Rational::new(-1, 4), Rational::new(3, 4)];
        let compatible: Vec<&DualVector> = v
            .iter()
            .filter(|x| lines.iter().all(|l| admissible.contains(&lat.pairing(x, l).unwrap())))
            .collect();
        assert_eq!(compatible.len(), 1);
        assert_eq!(compatible[0].coords(), vec![Rational::zero(), Rational::new(-3, 4)]);
    }

    #[test]
    fn errors_and_parity() {
        let a1 = l("A1");
        let zero = cls(&a1, Rational::zero());
        let q = VecQuery { lattice: &a1, cls: &zero, q: Rational::from_integer(2) };
        assert!(matches!(enumerate_vectors(&q), Err(Error::PositiveNorm(_))));
        let q = VecQuery { lattice: &a1, cls: &zero, q: Rational::new(-1, 2) };
        assert!(enumerate_vectors(&q).unwrap().is_empty());
        let q = VecQuery { lattice: &a1, cls: &zero, q: Rational::zero() };
        assert_eq!(enumerate_vectors(&q).unwrap().len(), 1);
    }

    #[test]
    fn small_rank_agrees_with_naive() {
        for s in ["A1", "A2", "A3", "D4", "A1+D1", "A2+A1", "A1(4)", "2A1", "A4", "[-3]+A2"] {
            let lat = l(s);
            let g = discriminant_group(&lat);
            for c in g.all_coords() {
                let off = g.element(&c);
                let qv = crate::rational::mod2(&lat.dual_vector(&off).unwrap().norm);
                for k in 0..3 {
                    let q = qv - 2 * (k + 1);
                    assert_eq!(enumerate_in_coset(&lat, &off, q), box_search(&lat, &off, q), "{s} {c:?} {q}");
                }
            }
        }
    }

    #[test]
    fn determinant_sanity() {
        assert_eq!(linalg::determinant(&l("D9").gram).abs(), 4);
    }
}
