//! Which (0,1) patterns are supports of polystochastic tensors.
//!
//! A polystochastic tensor is a convex combination of vertices, so its
//! support is a union of vertex supports; conversely any union is the
//! support of the average of those vertices. Given every vertex class, a
//! pattern qualifies iff each of its cells lies in some vertex support
//! contained in it.

use std::collections::BTreeSet;

use crate::equivalence::EquivalenceTransform;
use crate::scalar::Rational;
use crate::stochastic::{support, SupportSet};
use crate::tensor::{all_indices, cell_count, offset_of, Tensor};

use super::generic::mask_of;
use super::EnumerateError;

/// Supports of every vertex of one polytope, as bitmasks.
#[derive(Clone, Debug)]
pub struct SupportQuery {
    dim: usize,
    order: usize,
    vertex_supports: Vec<u128>,
}

impl SupportQuery {
    /// Expands class representatives into their full orbits.
    pub fn from_classes<'a>(
        dim: usize,
        order: usize,
        classes: impl IntoIterator<Item = &'a Tensor<Rational>>,
    ) -> Result<Self, EnumerateError> {
        let cells = match cell_count(dim, order) {
            Some(c) if c <= 128 => c,
            _ => return Err(EnumerateError::Unsupported { order, dim }),
        };
        let perms: Vec<Vec<usize>> = EquivalenceTransform::all(dim, order)
            .map(|g| {
                let mut p = vec![0; cells];
                for (o, alpha) in all_indices(dim, order).enumerate() {
                    p[o] = offset_of(&g.map_index(&alpha), order);
                }
                p
            })
            .collect();
        let mut all = BTreeSet::new();
        for t in classes {
            let s = mask_of(&support(t));
            for p in &perms {
                all.insert(permute_mask(s, p));
            }
        }
        Ok(SupportQuery {
            dim,
            order,
            vertex_supports: all.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of distinct vertex supports (one per vertex).
    pub fn len(&self) -> usize {
        self.vertex_supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_supports.is_empty()
    }

    pub fn vertex_supports(&self) -> &[u128] {
        &self.vertex_supports
    }

    /// Whether `mask` is the support of some polystochastic tensor.
    pub fn admits(&self, mask: u128) -> bool {
        let covered = self
            .vertex_supports
            .iter()
            .filter(|&&v| v & mask == v)
            .fold(0u128, |acc, &v| acc | v);
        mask != 0 && covered == mask
    }

    pub fn admits_support(&self, s: &SupportSet) -> bool {
        s.dim() == self.dim && s.order() == self.order && self.admits(mask_of(s))
    }
}

/// Image of a cell mask under a cell permutation.
pub fn permute_mask(mask: u128, perm: &[usize]) -> u128 {
    let mut out = 0u128;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out |= 1 << perm[b];
        m &= m - 1;
    }
    out
}
