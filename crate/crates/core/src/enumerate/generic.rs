//! Certification over arbitrary candidate generators.

use std::collections::BTreeSet;

use crate::equivalence::EquivalenceTransform;
use crate::stochastic::{check_c0_c1, support, SupportSet};
use crate::tensor::cell_count;
use crate::vertexcert::{certify, support_bound};

use super::catalog::PlaneCatalog;
use super::{EnumerateError, VertexSet};

/// Largest cell count for which [`Exhaustive`] lists every subset.
pub const MAX_EXHAUSTIVE_CELLS: usize = 20;

/// A generator of candidate supports of one shape.
pub trait SupportSource {
    fn dim(&self) -> usize;
    fn order(&self) -> usize;
    fn for_each(&self, f: &mut dyn FnMut(SupportSet));
}

/// Every nonempty subset of the index set.
#[derive(Clone, Debug)]
pub struct Exhaustive {
    dim: usize,
    order: usize,
}

impl Exhaustive {
    pub fn new(dim: usize, order: usize) -> Result<Self, EnumerateError> {
        match cell_count(dim, order) {
            Some(c) if c <= MAX_EXHAUSTIVE_CELLS => Ok(Exhaustive { dim, order }),
            _ => Err(EnumerateError::Unsupported { order, dim }),
        }
    }
}

impl SupportSource for Exhaustive {
    fn dim(&self) -> usize {
        self.dim
    }

    fn order(&self) -> usize {
        self.order
    }

    fn for_each(&self, f: &mut dyn FnMut(SupportSet)) {
        let cells = self.order.pow(self.dim as u32);
        for mask in 1u128..1 << cells {
            f(SupportSet::from_mask(self.dim, self.order, mask));
        }
    }
}

/// Stacks of `n` hyperplane supports along the first axis, each drawn from
/// a list of supports of dimension `d - 1`. With the list of all
/// polystochastic supports this reaches every polystochastic support, since
/// hyperplanes of a polystochastic tensor are polystochastic. Stacks larger
/// than the support bound are skipped.
#[derive(Clone, Debug)]
pub struct HyperplaneStack {
    dim: usize,
    order: usize,
    hyperplanes: Vec<u128>,
}

impl HyperplaneStack {
    pub fn new(dim: usize, order: usize, hyperplanes: Vec<u128>) -> Result<Self, EnumerateError> {
        match cell_count(dim, order) {
            Some(c) if dim >= 2 && c <= 128 => Ok(HyperplaneStack {
                dim,
                order,
                hyperplanes,
            }),
            _ => Err(EnumerateError::Unsupported { order, dim }),
        }
    }

    /// Stacks of all polystochastic hyperplane supports.
    pub fn polystochastic(dim: usize, order: usize) -> Result<Self, EnumerateError> {
        let unsupported = EnumerateError::Unsupported { order, dim };
        if dim < 2 {
            return Err(unsupported);
        }
        let hyperplanes = polystochastic_supports(dim - 1, order).map_err(|_| unsupported)?;
        Self::new(dim, order, hyperplanes)
    }

    fn descend(&self, level: usize, acc: u128, size: usize, bound: usize, f: &mut dyn FnMut(SupportSet)) {
        if level == self.order {
            f(SupportSet::from_mask(self.dim, self.order, acc));
            return;
        }
        let shift = level * self.order.pow(self.dim as u32 - 1);
        for &h in &self.hyperplanes {
            let s = size + h.count_ones() as usize;
            if s <= bound {
                self.descend(level + 1, acc | h << shift, s, bound, f);
            }
        }
    }
}

impl SupportSource for HyperplaneStack {
    fn dim(&self) -> usize {
        self.dim
    }

    fn order(&self) -> usize {
        self.order
    }

    fn for_each(&self, f: &mut dyn FnMut(SupportSet)) {
        let bound = support_bound(self.dim, self.order);
        self.descend(0, 0, 0, bound, f);
    }
}

/// Masks of every support of a polystochastic tensor of the given shape.
///
/// Dimension 1 admits any nonempty set and dimension 2 the total-support
/// patterns. Higher dimensions are only available for order 2, as unions
/// of vertex supports found recursively.
pub fn polystochastic_supports(dim: usize, order: usize) -> Result<Vec<u128>, EnumerateError> {
    let unsupported = Err(EnumerateError::Unsupported { order, dim });
    match dim {
        0 => unsupported,
        1 if order <= 16 => Ok((1u128..1 << order).collect()),
        2 => {
            let cat = PlaneCatalog::total_support(order)?;
            Ok(cat.patterns().iter().map(|&p| u128::from(p)).collect())
        }
        _ if order == 2 && dim <= 6 => {
            let vertices = algorithm1(&HyperplaneStack::polystochastic(dim, order)?).vertices;
            let mut orbit_supports = BTreeSet::new();
            for class in vertices.sorted() {
                for g in EquivalenceTransform::all(dim, order) {
                    let image = g.apply(&class.tensor).expect("shapes agree");
                    orbit_supports.insert(mask_of(&support(&image)));
                }
            }
            Ok(union_closure(&orbit_supports))
        }
        _ => unsupported,
    }
}

/// Bitmask of a support with at most 128 cells.
pub fn mask_of(s: &SupportSet) -> u128 {
    s.offsets().iter().fold(0u128, |m, &o| m | 1 << o)
}

/// All nonempty unions of the given sets.
pub fn union_closure(sets: &BTreeSet<u128>) -> Vec<u128> {
    let mut closure: BTreeSet<u128> = BTreeSet::new();
    for &s in sets {
        let grown: Vec<u128> = closure.iter().map(|&c| c | s).collect();
        closure.insert(s);
        closure.extend(grown);
    }
    closure.into_iter().collect()
}

/// Counters and classes from one run of [`algorithm1`].
#[derive(Clone, Debug, Default)]
pub struct Algorithm1Report {
    pub vertices: VertexSet,
    /// Supports received from the source.
    pub candidates: u64,
    /// Outside the size window or failing (C0)/(C1); never certified.
    pub rejected: u64,
    /// Certified and found not to be vertices.
    pub refuted: u64,
}

/// Runs rank check, solve and positivity on every admissible candidate and
/// collects the distinct vertex classes.
pub fn algorithm1(source: &dyn SupportSource) -> Algorithm1Report {
    let (d, n) = (source.dim(), source.order());
    let low = n.pow(d as u32 - 1);
    let high = support_bound(d, n);
    let mut report = Algorithm1Report::default();
    source.for_each(&mut |s| {
        report.candidates += 1;
        if s.len() < low || s.len() > high || !check_c0_c1(&s) {
            report.rejected += 1;
            return;
        }
        match certify(&s).tensor {
            Some(t) => {
                report.vertices.insert(&t);
            }
            None => report.refuted += 1,
        }
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known::v;
    use crate::stochastic::is_permutation_tensor;

    #[test]
    fn matrices_order3() {
        let r = algorithm1(&Exhaustive::new(2, 3).unwrap());
        assert_eq!(r.candidates, 511);
        assert_eq!(r.vertices.len(), 1);
        assert!(r.vertices.sorted().iter().all(|c| is_permutation_tensor(&c.tensor)));
        let stacked = algorithm1(&HyperplaneStack::polystochastic(2, 3).unwrap());
        assert_eq!(stacked.vertices.sorted(), r.vertices.sorted());
    }

    #[test]
    fn order2_cubes_by_both_sources() {
        let a = algorithm1(&Exhaustive::new(3, 2).unwrap());
        let b = algorithm1(&HyperplaneStack::polystochastic(3, 2).unwrap());
        assert_eq!(a.vertices.sorted(), b.vertices.sorted());
        assert_eq!(a.vertices.len(), 1);
        assert_eq!(polystochastic_supports(3, 2).unwrap().len(), 3);
    }

    #[test]
    fn order3_cubes() {
        let r = algorithm1(&HyperplaneStack::polystochastic(3, 3).unwrap());
        assert_eq!(r.vertices.len(), 2);
        assert!(r.vertices.contains(&v()));
    }

    #[test]
    fn exhaustive_limits() {
        assert!(Exhaustive::new(3, 3).is_err());
        assert!(HyperplaneStack::polystochastic(4, 3).is_err());
    }
}
