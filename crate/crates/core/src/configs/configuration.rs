//! A line configuration: the images of the lines as dual vectors.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::system::ConfigSystem;
use crate::graph::Graph;
use crate::lattice::{discriminant_group, DiscClass, DualVector, Lattice};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineConfiguration {
    pub ambient: Lattice,
    /// Images of the `(−2)`-lines.
    pub eta_vectors: Vec<DualVector>,
    /// Images of the `(−1)`-lines.
    pub lambda_vectors: Vec<DualVector>,
    #[serde(with = "crate::rational")]
    pub q0: Rational,
    #[serde(with = "crate::rational::opt")]
    pub q1: Option<Rational>,
}

impl LineConfiguration {
    /// The members `set` of a search system with all of its `λ`-vectors.
    pub fn from_set(system: &ConfigSystem, set: &[usize], q1: Option<Rational>) -> Self {
        LineConfiguration {
            ambient: system.lattice.clone(),
            eta_vectors: set.iter().map(|&i| system.vectors[i].clone()).collect(),
            lambda_vectors: system.lambda.clone(),
            q0: system.q0,
            q1,
        }
    }

    fn pairing(&self, a: &DualVector, b: &DualVector) -> Rational {
        self.ambient.pairing(a, b).expect("vectors of the ambient lattice")
    }

    /// Checks norms, classes, distinctness and the pairing condition.
    pub fn validate(&self, eta: &DiscClass, lambda: Option<&DiscClass>) -> Result<()> {
        let group = discriminant_group(&self.ambient);
        let mut seen = HashSet::new();
        for v in self.eta_vectors.iter().chain(&self.lambda_vectors) {
            if !seen.insert(v) {
                return Err(Error::Invalid(format!("vector {v} occurs twice")));
            }
        }
        for v in &self.eta_vectors {
            if self.pairing(v, v) != self.q0 {
                return Err(Error::Invalid(format!("{v} does not have norm {}", self.q0)));
            }
            if group.class_coords(&v.coords()) != eta.coords {
                return Err(Error::Invalid(format!("{v} is not in the eta class")));
            }
        }
        if let Some(q1) = self.q1 {
            for v in &self.lambda_vectors {
                if self.pairing(v, v) != q1 {
                    return Err(Error::Invalid(format!("{v} does not have norm {q1}")));
                }
                if lambda.is_some_and(|c| group.class_coords(&v.coords()) != c.coords) {
                    return Err(Error::Invalid(format!("{v} is not in the lambda class")));
                }
            }
        }
        let (lo, hi) = (self.q0 + 2, self.q0 + 3);
        for (i, u) in self.eta_vectors.iter().enumerate() {
            for v in &self.eta_vectors[i + 1..] {
                let p = self.pairing(u, v);
                if p != lo && p != hi {
                    return Err(Error::Invalid(format!("{u} and {v} pair to {p}")));
                }
            }
        }
        Ok(())
    }

    /// Graph on the `η`-vectors with an edge at pairing `q0 + 3`.
    pub fn adjacency_graph(&self) -> Graph {
        let hi = self.q0 + 3;
        Graph::from_fn(self.eta_vectors.len(), |a, b| self.pairing(&self.eta_vectors[a], &self.eta_vectors[b]) == hi)
    }

    /// The adjacency graph with the `λ`-vectors appended, joined to the
    /// `η`-vectors they pair with at `q0 + 3`.
    pub fn total_graph(&self) -> Graph {
        let hi = self.q0 + 3;
        let n = self.eta_vectors.len();
        let all: Vec<&DualVector> = self.eta_vectors.iter().chain(&self.lambda_vectors).collect();
        Graph::from_fn(all.len(), |a, b| (a < n || b < n) && self.pairing(all[a], all[b]) == hi)
    }

    /// Graphviz rendering of the total graph; `(−1)`-lines are labelled `k`.
    pub fn to_dot(&self, name: &str) -> String {
        let labels: Vec<String> = (0..self.eta_vectors.len())
            .map(|i| format!("l{i}"))
            .chain((0..self.lambda_vectors.len()).map(|i| format!("k{i}")))
            .collect();
        self.total_graph().to_dot(name, Some(&labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::system::tests::a11_system_with_lambda;
    use crate::lattice::{find_class, ClassSelector};

    #[test]
    fn validates_and_rejects() {
        let sys = a11_system_with_lambda();
        let eta = find_class(&sys.lattice, Rational::new(-1, 4), &ClassSelector::Canonical).unwrap();
        let set: Vec<usize> = (0..sys.len()).filter(|&j| sys.compatible(0, j)).take(1).chain([0]).collect();
        let q1 = Some(Rational::new(-11, 12));
        let ok = LineConfiguration::from_set(&sys, &set, q1);
        ok.validate(&eta, None).unwrap();
        assert_eq!(ok.adjacency_graph().order(), 2);
        let bad_pair = (1..sys.len()).find(|&j| !sys.compatible(0, j)).unwrap();
        assert!(LineConfiguration::from_set(&sys, &[0, bad_pair], q1).validate(&eta, None).is_err());
        assert!(LineConfiguration::from_set(&sys, &[0, 0], q1).validate(&eta, None).is_err());
        let dot = ok.to_dot("pair");
        assert!(dot.contains("k11") && dot.starts_with("graph"));
        // Each triple meets three of the twelve (-1)-lines.
        let total = LineConfiguration::from_set(&sys, &[0], q1).total_graph();
        assert_eq!(total.degree(0), 3);
    }
}
