//! Twelve-point configurations: each member of a line set is a triple of
//! indices, read as the collinearity relation `p_i + p_j + p_k = 0` among
//! twelve points of a plane cubic with its group law.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{nullspace_mod_p, nullspace_q, rank_q, rref_mod_p, rref_q, smith_normal_form, RatMatrix, SnfResult};
use crate::{Error, Rational, Result};

pub const POINTS: usize = 12;

const V19: &str = "
. . . . . . 1 1 1 . . . . . . 1 . . .
1 . . 1 . . . . . . 1 . 1 . . . 1 . .
. 1 . . 1 . . . . . . 1 . 1 . . 1 . .
. . 1 . . 1 . . . 1 . . . . 1 . 1 . .
. . . . . . . . . 1 1 1 . . . 1 . . .
1 . . . . 1 1 . . . . . . 1 . . . 1 .
. 1 . 1 . . . 1 . . . . . . 1 . . 1 .
. . 1 . 1 . . . 1 . . . 1 . . . . 1 .
. . . . . . . . . . . . 1 1 1 1 . . .
1 . . . 1 . . 1 . 1 . . . . . . . . 1
. 1 . . . 1 . . 1 . 1 . . . . . . . 1
. . 1 1 . . 1 . . . . 1 . . . . . . 1
";

const U_PRIME_16: &str = "
1 . . . 1 . . . . . . 1 . 1 . .
. 1 . . . 1 . . . . . . 1 . 1 .
. . 1 . . . 1 . . . . . . 1 . 1
. . . 1 1 . . 1 . . . . . . 1 .
1 . . . . 1 . . 1 . . . . . . 1
. 1 . . 1 . 1 . . 1 . . . . . .
. . 1 . . 1 . 1 . . 1 . . . . .
. . . 1 . . 1 . 1 . . 1 . . . .
1 . . . . . . 1 . 1 . . 1 . . .
. 1 . . . . . . 1 . 1 . . 1 . .
. . 1 . . . . . . 1 . 1 . . 1 .
. . . 1 . . . . . . 1 . 1 . . 1
";

const U_DOUBLE_PRIME_16: &str = "
1 1 . . 1 . . 1 . . . . . . . .
1 . . 1 . 1 . . . . . . . . . 1
1 . 1 . . . . . . 1 1 . . 1 . .
. 1 . . . 1 . . . 1 . . . . . .
. 1 . . . . 1 . 1 . 1 . . . . .
. . 1 . 1 . . . . . . . . . . 1
. . . . . 1 . . 1 . . . . 1 1 .
. . . 1 . . 1 . . . . 1 . 1 . .
. . . . . . . 1 . 1 . 1 . . 1 1
. . 1 . . . . . 1 . . 1 1 . . .
. . . 1 . . . 1 . . 1 . 1 . . .
. . . . 1 . 1 . . . . . 1 . 1 .
";

/// Named configurations with a built-in incidence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Builtin {
    V16,
    V17,
    V19,
    UPrime16,
    UDoublePrime16,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::V16, Builtin::V17, Builtin::V19, Builtin::UPrime16, Builtin::UDoublePrime16];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::V16 => "V16",
            Builtin::V17 => "V17",
            Builtin::V19 => "V19",
            Builtin::UPrime16 => "Uprime16",
            Builtin::UDoublePrime16 => "Udoubleprime16",
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| !matches!(c, '_' | '-' | ' ')).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "v16" => Ok(Builtin::V16),
            "v17" => Ok(Builtin::V17),
            "v19" => Ok(Builtin::V19),
            "uprime16" | "u'16" | "u′16" => Ok(Builtin::UPrime16),
            "udoubleprime16" | "u''16" | "u″16" => Ok(Builtin::UDoublePrime16),
            _ => Err(Error::UnknownConfig(s.to_string())),
        }
    }
}

/// Twelve rows, one column per member; each column has three ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceMatrix {
    pub name: String,
    /// Sorted zero-based row indices of each column.
    pub columns: Vec<[usize; 3]>,
}

impl IncidenceMatrix {
    pub fn new(name: impl Into<String>, columns: Vec<[usize; 3]>) -> Result<Self> {
        let m = IncidenceMatrix { name: name.into(), columns };
        m.validate()?;
        Ok(m)
    }

    /// Parses rows of `1` and `.` separated by whitespace.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(|t| t == "1").collect())
            .collect();
        if rows.len() != POINTS || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(Error::Invalid(format!("{name}: expected 12 rows of equal length")));
        }
        let mut columns = Vec::new();
        for c in 0..rows[0].len() {
            let ones: Vec<usize> = (0..POINTS).filter(|&r| rows[r][c]).collect();
            let triple: [usize; 3] =
                ones.try_into().map_err(|_| Error::Invalid(format!("{name}: column {c} does not have three ones")))?;
            columns.push(triple);
        }
        Self::new(name, columns)
    }

    fn validate(&self) -> Result<()> {
        for (k, c) in self.columns.iter().enumerate() {
            if !(c[0] < c[1] && c[1] < c[2] && c[2] < POINTS) {
                return Err(Error::Invalid(format!("{}: column {k} is not a 3-subset", self.name)));
            }
        }
        for (a, x) in self.columns.iter().enumerate() {
            for (b, y) in self.columns.iter().enumerate().skip(a + 1) {
                if x.iter().filter(|i| y.contains(i)).count() > 1 {
                    return Err(Error::Invalid(format!("{}: columns {a} and {b} share two rows", self.name)));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// 0/1 rows, one per point.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..POINTS).map(|r| self.columns.iter().map(|c| u8::from(c.contains(&r))).collect()).collect()
    }

    /// Points as rows of `1`/`.`, the layout of [`IncidenceMatrix::parse`].
    pub fn render(&self) -> String {
        self.rows()
            .iter()
            .map(|r| r.iter().map(|&x| if x == 1 { "1" } else { "." }).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Graph on the columns with an edge for disjoint columns.
    pub fn disjointness_graph(&self) -> crate::graph::Graph {
        crate::graph::Graph::from_fn(self.len(), |a, b| self.columns[a].iter().all(|i| !self.columns[b].contains(i)))
    }

    pub fn system(&self) -> CollinearitySystem {
        CollinearitySystem {
            name: self.name.clone(),
            matrix: self
                .columns
                .iter()
                .map(|c| (0..POINTS).map(|i| i64::from(c.contains(&i))).collect())
                .collect(),
        }
    }
}

/// The incidence matrix of a built-in configuration.
pub fn builtin_config(which: Builtin) -> IncidenceMatrix {
    let full = |name: &str, text: &str| IncidenceMatrix::parse(name, text).expect("built-in fixture is valid");
    match which {
        Builtin::V19 => full("V19", V19),
        Builtin::V16 | Builtin::V17 => {
            let mut m = full(which.name(), V19);
            m.columns.truncate(if which == Builtin::V16 { 16 } else { 17 });
            m
        }
        Builtin::UPrime16 => full("Uprime16", U_PRIME_16),
        Builtin::UDoublePrime16 => full("Udoubleprime16", U_DOUBLE_PRIME_16),
    }
}

/// One relation `p_i + p_j + p_k = 0` per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollinearitySystem {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
}

impl CollinearitySystem {
    /// Rebuilds the incidence matrix; fails unless every row has three ones.
    pub fn incidence(&self) -> Result<IncidenceMatrix> {
        let columns = self
            .matrix
            .iter()
            .map(|row| {
                let ones: Vec<usize> = (0..POINTS).filter(|&i| row[i] == 1).collect();
                if row.iter().any(|&x| x != 0 && x != 1) || ones.len() != 3 {
                    return Err(Error::Invalid(format!("{}: relation is not a triple", self.name)));
                }
                Ok([ones[0], ones[1], ones[2]])
            })
            .collect::<Result<Vec<_>>>()?;
        IncidenceMatrix::new(self.name.clone(), columns)
    }

    fn snf(&self) -> Option<SnfResult> {
        (!self.matrix.is_empty()).then(|| smith_normal_form(&self.matrix))
    }
}

/// Kernel basis over 𝔽_p in reduced echelon form.
pub fn kernel_mod_p(system: &CollinearitySystem, p: i64) -> Vec<Vec<i64>> {
    let basis = if system.matrix.is_empty() {
        (0..POINTS).map(|i| (0..POINTS).map(|j| i64::from(i == j)).collect()).collect()
    } else {
        nullspace_mod_p(&system.matrix, POINTS, p)
    };
    let (r, _) = rref_mod_p(&basis, p);
    r
}

/// Kernel basis over ℚ in reduced echelon form.
pub fn kernel_q(system: &CollinearitySystem) -> RatMatrix {
    let basis = if system.matrix.is_empty() {
        (0..POINTS).map(|i| (0..POINTS).map(|j| Rational::from_integer(i64::from(i == j))).collect()).collect()
    } else {
        nullspace_q(&system.matrix, POINTS)
    };
    rref_q(&basis).0
}

/// Whether two families of vectors span the same space over ℚ.
pub fn same_span_q(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let to_q = |m: &[Vec<i64>]| -> RatMatrix { m.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect() };
    rref_q(&to_q(a)).0 == rref_q(&to_q(b)).0
}

/// Whether two families of vectors span the same space over 𝔽_p.
pub fn same_span_mod_p(a: &[Vec<i64>], b: &[Vec<i64>], p: i64) -> bool {
    rref_mod_p(a, p).0 == rref_mod_p(b, p).0
}

/// Indicator of the block `I_n`, with `I_0 = {1..4}`, `I_1 = {5..8}`, `I_2 = {9..12}`.
pub fn block_vector(n: usize) -> Vec<i64> {
    (0..POINTS).map(|i| i64::from(i / 4 == n)).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfAnalysis {
    pub relations: usize,
    /// Rank over ℚ in the twelve unknowns.
    pub rank: usize,
    /// Rank on the hyperplane `Σ p_i = 0`.
    pub rank_on_sum_zero: usize,
    /// Rank of the span of the members as vectors `1_s − 𝟙/4`.
    pub span_rank: usize,
    pub invariant_factors: Vec<i64>,
    pub kernel_q: Vec<Vec<String>>,
    pub kernel_mod_2: Vec<Vec<i64>>,
    pub kernel_mod_3: Vec<Vec<i64>>,
}

pub fn snf_analysis(system: &CollinearitySystem) -> SnfAnalysis {
    let snf = system.snf();
    let rank = snf.as_ref().map_or(0, |s| s.rank);
    let kq = kernel_q(system);
    let ones = vec![Rational::from_integer(1); POINTS];
    let inside = kq.iter().filter(|v| v.iter().zip(&ones).map(|(a, b)| a * b).sum::<Rational>() == Rational::from_integer(0)).count();
    let kernel_in_hyperplane = if inside == kq.len() { kq.len() } else { kq.len() - 1 };
    let shifted: Vec<Vec<i64>> = system.matrix.iter().map(|r| r.iter().map(|&x| 4 * x - 1).collect()).collect();
    SnfAnalysis {
        relations: system.matrix.len(),
        rank,
        rank_on_sum_zero: POINTS - 1 - kernel_in_hyperplane,
        span_rank: if shifted.is_empty() { 0 } else { rank_q(&shifted) },
        invariant_factors: snf.map(|s| s.invariant_factors().to_vec()).unwrap_or_default(),
        kernel_q: kq.iter().map(|v| v.iter().map(crate::rational::to_string).collect()).collect(),
        kernel_mod_2: kernel_mod_p(system, 2),
        kernel_mod_3: kernel_mod_p(system, 3),
    }
}

/// Whether `Σ p_i = 0` is a rational consequence of the relations.
pub fn sum_relation_check(system: &CollinearitySystem) -> bool {
    if system.matrix.is_empty() {
        return false;
    }
    let mut extended = system.matrix.clone();
    extended.push(vec![1; POINTS]);
    rank_q(&extended) == rank_q(&system.matrix)
}

/// Abelian group `(ℝ/ℤ)^circle × ℝ^line × ℤ/finite` carrying the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupForm {
    pub circle: u8,
    pub line: u8,
    pub finite: u8,
}

impl GroupForm {
    pub const TORUS: GroupForm = GroupForm { circle: 2, line: 0, finite: 1 };
    pub const MULTIPLICATIVE: GroupForm = GroupForm { circle: 1, line: 1, finite: 1 };
    pub const ADDITIVE: GroupForm = GroupForm { circle: 0, line: 2, finite: 1 };

    /// The seven forms, keyed by the singular point of the corank-3 family.
    pub fn all() -> [(&'static str, GroupForm); 7] {
        let with = |g: GroupForm, finite: u8| GroupForm { finite, ..g };
        [
            ("P8", Self::TORUS),
            ("P9", Self::MULTIPLICATIVE),
            ("Q10", Self::ADDITIVE),
            ("T_{3,4,4}", with(Self::MULTIPLICATIVE, 2)),
            ("S11", with(Self::ADDITIVE, 2)),
            ("T_{4,4,4}", with(Self::MULTIPLICATIVE, 3)),
            ("U12", with(Self::ADDITIVE, 3)),
        ]
    }

    pub fn is_torus(self) -> bool {
        self == Self::TORUS
    }
}

impl fmt::Display for GroupForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.circle {
            0 => {}
            1 => parts.push("R/Z".to_string()),
            k => parts.push(format!("(R/Z)^{k}")),
        }
        match self.line {
            0 => {}
            1 => parts.push("R".to_string()),
            k => parts.push(format!("R^{k}")),
        }
        if self.finite > 1 {
            parts.push(format!("Z/{}", self.finite));
        }
        f.write_str(&parts.join(" x "))
    }
}

impl FromStr for GroupForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace([' ', '_', '{', '}'], "");
        let alias = match key.as_str() {
            "torus" | "smooth" => return Ok(Self::TORUS),
            "gm" | "multiplicative" | "nodal" => return Ok(Self::MULTIPLICATIVE),
            "ga" | "additive" | "cuspidal" => return Ok(Self::ADDITIVE),
            "gm-z2" | "gmxz2" => "t3,4,4",
            "ga-z2" | "gaxz2" => "s11",
            "gm-z3" | "gmxz3" => "t4,4,4",
            "ga-z3" | "gaxz3" => "u12",
            k => k,
        };
        Self::all()
            .into_iter()
            .find(|(label, _)| label.to_ascii_lowercase().replace(['_', '{', '}'], "") == alias)
            .map(|(_, g)| g)
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ImpossibleDistinct,
    Possible,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityReport {
    pub config: String,
    pub group: String,
    pub verdict: Verdict,
    /// The deduction steps, in order.
    pub rules: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<TorsionSolution>,
}

/// Order of `x` in `⊕ ℤ/d_i`.
fn order_in(diag: &[i64], y: &[i64]) -> i64 {
    diag.iter()
        .zip(y)
        .fold(1, |acc, (&d, &v)| num_integer::lcm(acc, d / num_integer::gcd(d, v.rem_euclid(d)).max(1)))
}

/// Classes of points whose coordinates agree in every real solution.
fn real_classes(system: &CollinearitySystem) -> Vec<Vec<usize>> {
    let kq = kernel_q(system);
    let mut classes: Vec<(Vec<Rational>, Vec<usize>)> = Vec::new();
    for i in 0..POINTS {
        let row: Vec<Rational> = kq.iter().map(|v| v[i]).collect();
        match classes.iter_mut().find(|(r, _)| *r == row) {
            Some((_, c)) => c.push(i),
            None => classes.push((row, vec![i])),
        }
    }
    classes.into_iter().map(|(_, c)| c).collect()
}

/// Largest order of the differences `e_i − e_j` within a class, in the
/// torsion of `ℤ^12 / rows(M)`.
fn torsion_exponent(snf: &SnfResult, class: &[usize]) -> i64 {
    let diag = snf.invariant_factors();
    let first = class[0];
    class[1..].iter().fold(1, |acc, &i| {
        let y: Vec<i64> = (0..diag.len()).map(|k| snf.right[i][k] - snf.right[first][k]).collect();
        num_integer::lcm(acc, order_in(diag, &y))
    })
}

/// Mechanical deduction of whether twelve pairwise distinct points exist.
pub fn realizability_verdict(system: &CollinearitySystem, group: GroupForm, max_modulus: u64) -> RealizabilityReport {
    let mut rules = Vec::new();
    let analysis = snf_analysis(system);
    let report = |verdict, rules, solution| RealizabilityReport {
        config: system.name.clone(),
        group: group.to_string(),
        verdict,
        rules,
        solution,
    };
    if group.finite > 1 && analysis.span_rank == POINTS - 1 {
        rules.push(format!(
            "members span a space of rank {}: the cubic is irreducible, so no component group Z/{}",
            analysis.span_rank, group.finite
        ));
        return report(Verdict::ImpossibleDistinct, rules, None);
    }
    if let Some(snf) = system.snf() {
        let kernels: Vec<(u8, Vec<Vec<i64>>)> = match group.finite {
            f if f > 1 => vec![(f, kernel_mod_p(system, f as i64))],
            _ => Vec::new(),
        };
        for class in real_classes(system).into_iter().filter(|c| c.len() > 1) {
            let exponent = torsion_exponent(&snf, &class);
            let mut bound = (exponent as u64).pow(group.circle as u32);
            for (f, kernel) in &kernels {
                let constant = kernel.iter().all(|v| class.iter().all(|&i| v[i] == v[class[0]]));
                bound *= if constant { 1 } else { *f as u64 };
            }
            if bound < class.len() as u64 {
                let names: Vec<String> = class.iter().map(|i| (i + 1).to_string()).collect();
                rules.push(format!(
                    "points {{{}}} agree in every real solution and differ by torsion of exponent {exponent}: at most {bound} distinct values for {} points",
                    names.join(","),
                    class.len()
                ));
                return report(Verdict::ImpossibleDistinct, rules, None);
            }
        }
        rules.push("no class of points is forced to collide".to_string());
    }
    if group.circle > 0 {
        for n in 2..=max_modulus {
            if let Some(sol) = torsion_solution_search(system, n, group.circle as usize) {
                rules.push(format!("distinct solution in (Z/{n})^{} inside the circle factors", group.circle));
                return report(Verdict::Possible, rules, Some(sol));
            }
        }
        rules.push(format!("no distinct torsion solution with modulus at most {max_modulus}"));
    }
    report(Verdict::Undetermined, rules, None)
}

/// Twelve points of `(ℤ/N)^dim` satisfying the relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSolution {
    pub modulus: u64,
    pub points: Vec<Vec<u64>>,
}

impl TorsionSolution {
    pub fn satisfies(&self, system: &CollinearitySystem) -> bool {
        let n = self.modulus as i64;
        let dim = self.points.first().map_or(0, Vec::len);
        (0..dim).all(|c| {
            system
                .matrix
                .iter()
                .all(|row| row.iter().zip(&self.points).map(|(a, p)| a * p[c] as i64).sum::<i64>().rem_euclid(n) == 0)
        })
    }

    pub fn distinct(&self) -> bool {
        self.points.iter().collect::<BTreeSet<_>>().len() == self.points.len()
    }
}

/// All solutions of `M p ≡ 0 (mod N)` in one coordinate, or `None` past `limit`.
fn kernel_mod_n(snf: &SnfResult, n: i64, limit: usize) -> Option<Vec<Vec<i64>>> {
    let diag = snf.invariant_factors();
    let steps: Vec<(i64, i64)> = (0..POINTS)
        .map(|k| match diag.get(k) {
            Some(&d) => {
                let g = num_integer::gcd(n, d);
                (n / g, g)
            }
            None => (1, n),
        })
        .collect();
    let total = steps.iter().try_fold(1usize, |acc, &(_, c)| acc.checked_mul(c as usize))?;
    if total > limit {
        return None;
    }
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0i64; POINTS];
    loop {
        let q: Vec<i64> = idx.iter().zip(&steps).map(|(i, (s, _))| i * s).collect();
        let p: Vec<i64> = (0..POINTS).map(|r| (0..POINTS).map(|k| snf.right[r][k] * q[k]).sum::<i64>().rem_euclid(n)).collect();
        out.push(p);
        let mut k = 0;
        loop {
            if k == POINTS {
                return Some(out);
            }
            idx[k] += 1;
            if idx[k] < steps[k].1 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

const KERNEL_LIMIT: usize = 1 << 16;

/// A solution in `(ℤ/N)^dim` with twelve pairwise distinct points, searched
/// coordinate by coordinate over the kernel of `M mod N`.
pub fn torsion_solution_search(system: &CollinearitySystem, modulus: u64, dim: usize) -> Option<TorsionSolution> {
    if modulus < 2 || dim == 0 || (modulus as usize).checked_pow(dim as u32).is_none_or(|c| c < POINTS) {
        return None;
    }
    let n = modulus as i64;
    let kernel = match system.snf() {
        Some(snf) => kernel_mod_n(&snf, n, KERNEL_LIMIT)?,
        None => return None,
    };
    fn extend(kernel: &[Vec<i64>], chosen: &mut Vec<usize>, dim: usize) -> bool {
        let classes = |chosen: &[usize]| -> usize {
            (0..POINTS).map(|i| chosen.iter().map(|&c| kernel[c][i]).collect::<Vec<_>>()).collect::<BTreeSet<_>>().len()
        };
        if chosen.len() == dim {
            return classes(chosen) == POINTS;
        }
        for c in 0..kernel.len() {
            chosen.push(c);
            if extend(kernel, chosen, dim) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if !extend(&kernel, &mut chosen, dim) {
        return None;
    }
    let points = (0..POINTS).map(|i| chosen.iter().map(|&c| kernel[c][i] as u64).collect()).collect();
    Some(TorsionSolution { modulus, points })
}

/// Smallest modulus in `2..=max` with a distinct solution.
pub fn modulus_sweep(system: &CollinearitySystem, max: u64, dim: usize) -> Option<TorsionSolution> {
    (2..=max).find_map(|n| torsion_solution_search(system, n, dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_gq31;

    fn sys(b: Builtin) -> CollinearitySystem {
        builtin_config(b).system()
    }

    #[test]
    fn fixtures() {
        let sizes: Vec<usize> = Builtin::ALL.iter().map(|&b| builtin_config(b).len()).collect();
        assert_eq!(sizes, vec![16, 17, 19, 16, 16]);
        for b in Builtin::ALL {
            let m = builtin_config(b);
            assert_eq!(m.system().incidence().unwrap(), m);
            assert_eq!(IncidenceMatrix::parse(b.name(), &m.render()).unwrap(), m);
        }
        assert!(is_gq31(&builtin_config(Builtin::V16).disjointness_graph()));
        assert!(!is_gq31(&builtin_config(Builtin::UPrime16).disjointness_graph()));
    }

    #[test]
    fn rejects_bad_columns() {
        let bad = "1 1\n1 1\n1 .\n. .\n. .\n. .\n. .\n. .\n. .\n. .\n. .\n. .";
        assert!(IncidenceMatrix::parse("bad", bad).is_err());
    }

    #[test]
    fn ranks_and_kernels() {
        let v19 = snf_analysis(&sys(Builtin::V19));
        assert_eq!((v19.rank, v19.rank_on_sum_zero, v19.span_rank), (12, 11, 11));
        assert!(v19.invariant_factors.iter().all(|d| 6 % d == 0));

        let s17 = sys(Builtin::V17);
        let v17 = snf_analysis(&s17);
        assert_eq!(v17.rank, 11);
        let u = sub(&block_vector(1), &block_vector(2));
        let kq: Vec<Vec<i64>> = nullspace_q(&s17.matrix, POINTS).iter().map(|v| crate::linalg::primitive_integer(v)).collect();
        assert!(same_span_q(&kq, &[u.clone()]));
        let k3 = kernel_mod_p(&s17, 3);
        assert!(same_span_mod_p(&k3, &[u.clone(), sub(&block_vector(0), &block_vector(1))], 3));

        let s16 = sys(Builtin::V16);
        let v16 = snf_analysis(&s16);
        assert_eq!(v16.rank, 10);
        assert!(v16.invariant_factors.iter().all(|d| 2 % d == 0));
        let kq: Vec<Vec<i64>> = nullspace_q(&s16.matrix, POINTS).iter().map(|v| crate::linalg::primitive_integer(v)).collect();
        assert!(same_span_q(&kq, &[u, sub(&block_vector(0), &block_vector(1))]));

        for b in [Builtin::UPrime16, Builtin::UDoublePrime16] {
            assert_eq!(snf_analysis(&sys(b)).rank_on_sum_zero, 11);
        }
        for b in Builtin::ALL {
            let a = snf_analysis(&sys(b));
            assert_eq!(a.rank + a.kernel_q.len(), POINTS);
        }
    }

    #[test]
    fn sum_relation() {
        for b in Builtin::ALL {
            assert!(sum_relation_check(&sys(b)), "{b:?}");
        }
        assert!(!sum_relation_check(&CollinearitySystem { name: "empty".into(), matrix: vec![] }));
    }

    #[test]
    fn v19_verdicts() {
        let s = sys(Builtin::V19);
        for (label, g) in GroupForm::all() {
            let r = realizability_verdict(&s, g, 60);
            if g.is_torus() {
                assert_eq!(r.verdict, Verdict::Possible, "{label}");
                let sol = r.solution.unwrap();
                assert!(sol.satisfies(&s) && sol.distinct());
            } else {
                assert_eq!(r.verdict, Verdict::ImpossibleDistinct, "{label}: {:?}", r.rules);
            }
        }
        assert!(torsion_solution_search(&s, 2, 2).is_none());
    }

    #[test]
    fn u_prime_has_circle_solution() {
        let s = sys(Builtin::UPrime16);
        let sol = modulus_sweep(&s, 60, 1).expect("solution on the circle");
        assert!(sol.satisfies(&s) && sol.distinct());
        let sum: u64 = sol.points.iter().map(|p| p[0]).sum();
        assert_eq!(sum % sol.modulus, 0);
    }

    #[test]
    fn group_forms_parse() {
        assert_eq!("torus".parse::<GroupForm>().unwrap(), GroupForm::TORUS);
        assert_eq!("Gm".parse::<GroupForm>().unwrap(), GroupForm::MULTIPLICATIVE);
        assert_eq!("S11".parse::<GroupForm>().unwrap().finite, 2);
        assert!("G2".parse::<GroupForm>().is_err());
    }
}
