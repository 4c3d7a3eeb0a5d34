//! Enumeration of vertex classes for small orders and dimensions.
//!
//! [`algorithm1`] runs the certification steps over any [`SupportSource`].
//! The specialized searches in [`omega34`] and [`omega43`] build candidate
//! supports plane by plane and prune with line conditions, support-size
//! budgets and incremental rank.

pub mod catalog;
mod geometry;
pub mod generic;
pub mod omega34;
pub mod omega43;
pub mod query;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::equivalence::{canonicalize, has_symmetric_representative};
use crate::scalar::Rational;
use crate::stochastic::{denominator_lcm, permanent, support};
use crate::tensor::Tensor;
use crate::vertexcert::certify;

pub use catalog::PlaneCatalog;
pub use generic::{algorithm1, Algorithm1Report, Exhaustive, HyperplaneStack, SupportSource};
pub use omega34::{enumerate_omega_3_4, Claims, Omega34Options};
pub use omega43::{enumerate_omega_4_3, Omega43Options};

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("enumeration of order {order}, dimension {dim} is not supported")]
    Unsupported { order: usize, dim: usize },
    #[error("checkpoint {path}: {source}")]
    Checkpoint {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt checkpoint {path}: {reason}")]
    CorruptCheckpoint { path: String, reason: String },
}

/// A vertex class: canonical representative plus its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedVertex {
    pub tensor: Tensor<Rational>,
    pub support_size: usize,
    pub permanent: Rational,
    pub delta: BigInt,
    pub symmetric: bool,
    pub automorphisms: usize,
}

impl ClassifiedVertex {
    /// Canonicalizes `t` and computes every field from it.
    pub fn classify(t: &Tensor<Rational>) -> Self {
        let canon = canonicalize(t);
        ClassifiedVertex {
            support_size: support(&canon.tensor).len(),
            permanent: permanent(&canon.tensor),
            delta: denominator_lcm(&canon.tensor),
            symmetric: has_symmetric_representative(&canon.tensor),
            automorphisms: canon.automorphisms,
            tensor: canon.tensor,
        }
    }

    /// Recomputes every field, and checks the tensor is canonical and a
    /// certified vertex.
    pub fn verify(&self) -> bool {
        let fresh = ClassifiedVertex::classify(&self.tensor);
        fresh == *self && certify(&support(&self.tensor)).tensor.as_ref() == Some(&self.tensor)
    }

    /// Archive order: support size, then canonical entries.
    pub fn sort_key(&self) -> (usize, &[Rational]) {
        (self.support_size, self.tensor.entries())
    }
}

/// Vertex classes keyed by canonical form.
#[derive(Clone, Debug, Default)]
pub struct VertexSet {
    classes: BTreeMap<Vec<Rational>, ClassifiedVertex>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the class of `t`; returns whether it was new.
    pub fn insert(&mut self, t: &Tensor<Rational>) -> bool {
        let canon = canonicalize(t);
        if self.classes.contains_key(canon.tensor.entries()) {
            return false;
        }
        let v = ClassifiedVertex::classify(&canon.tensor);
        self.classes.insert(v.tensor.entries().to_vec(), v);
        true
    }

    pub fn insert_classified(&mut self, v: ClassifiedVertex) -> bool {
        let key = v.tensor.entries().to_vec();
        if self.classes.contains_key(&key) {
            return false;
        }
        self.classes.insert(key, v);
        true
    }

    pub fn merge(&mut self, other: VertexSet) {
        for (k, v) in other.classes {
            self.classes.entry(k).or_insert(v);
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, t: &Tensor<Rational>) -> bool {
        self.classes.contains_key(canonicalize(t).tensor.entries())
    }

    /// Classes in archive order.
    pub fn sorted(&self) -> Vec<ClassifiedVertex> {
        let mut v: Vec<ClassifiedVertex> = self.classes.values().cloned().collect();
        v.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        v
    }
}

impl FromIterator<ClassifiedVertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = ClassifiedVertex>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert_classified(v);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Key {
    SupportSize,
    DenominatorLcm,
}

/// Histogram of classes by `key`.
pub fn distribution<'a>(vs: impl IntoIterator<Item = &'a ClassifiedVertex>, key: Key) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for v in vs {
        let k = match key {
            Key::SupportSize => v.support_size as u64,
            Key::DenominatorLcm => u64::try_from(&v.delta).expect("denominator fits in u64"),
        };
        *h.entry(k).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::EquivalenceTransform;
    use crate::known::{cayley_permutation, v};

    #[test]
    fn classify_v() {
        let c = ClassifiedVertex::classify(&v());
        assert_eq!(c.support_size, 17);
        assert_eq!(c.delta, BigInt::from(2));
        assert!(c.verify());
    }

    #[test]
    fn set_dedups_orbits() {
        let mut s = VertexSet::new();
        assert!(s.insert(&v()));
        let g = EquivalenceTransform::new(vec![2, 0, 1], vec![vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0]]).unwrap();
        assert!(!s.insert(&g.apply(&v()).unwrap()));
        assert!(s.insert(&cayley_permutation(3, 3)));
        let h = distribution(&s.sorted(), Key::SupportSize);
        assert_eq!(h, BTreeMap::from([(9, 1), (17, 1)]));
        assert!(distribution(&VertexSet::new().sorted(), Key::DenominatorLcm).is_empty());
    }
}
