//! Catalogs of 2-dimensional plane supports.
//!
//! A pattern is an `n x n` (0,1) matrix stored as a bitmask, bit `r*n + c`
//! for cell `(r, c)`, which matches the row-major offset of the cell.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::scalar::Rational;
use crate::tensor::Tensor;

use super::EnumerateError;

/// Largest order whose patterns are listed exhaustively (`2^(n^2)` masks).
pub const MAX_CATALOG_ORDER: usize = 4;

/// Masks of the `n!` permutation matrices of order `n`.
pub fn matchings(order: usize) -> Vec<u32> {
    (0..order)
        .permutations(order)
        .map(|p| p.iter().enumerate().fold(0u32, |m, (r, &c)| m | 1 << (r * order + c)))
        .collect()
}

/// Total support via matchings: every cell lies on a permutation matrix
/// contained in the pattern. Agrees with
/// [`crate::stochastic::total_support_2d`], which works from permanents of
/// minors.
pub fn has_total_support(mask: u32, matchings: &[u32]) -> bool {
    let covered = matchings
        .iter()
        .filter(|&&m| m & mask == m)
        .fold(0u32, |acc, &m| acc | m);
    mask != 0 && covered == mask
}

/// Image of a pattern under row permutation `rows`, column permutation
/// `cols` and optional transposition: cell `(r, c)` moves to
/// `(rows[r], cols[c])`, then is transposed.
pub fn transform_pattern(mask: u32, order: usize, rows: &[usize], cols: &[usize], transpose: bool) -> u32 {
    let mut out = 0u32;
    for r in 0..order {
        for c in 0..order {
            if mask >> (r * order + c) & 1 == 1 {
                let (r2, c2) = (rows[r], cols[c]);
                let (r2, c2) = if transpose { (c2, r2) } else { (r2, c2) };
                out |= 1 << (r2 * order + c2);
            }
        }
    }
    out
}

/// All images of a pattern under row and column permutations and
/// transposition (with repetition).
pub fn pattern_images(mask: u32, order: usize) -> Vec<u32> {
    let perms: Vec<Vec<usize>> = (0..order).permutations(order).collect();
    let mut out = Vec::with_capacity(perms.len() * perms.len() * 2);
    for rows in &perms {
        for cols in &perms {
            for t in [false, true] {
                out.push(transform_pattern(mask, order, rows, cols, t));
            }
        }
    }
    out
}

/// Least mask in the orbit of `mask`.
pub fn pattern_class(mask: u32, order: usize) -> u32 {
    pattern_images(mask, order).into_iter().min().expect("nonempty group")
}

/// Pattern as a (0,1) rational matrix.
pub fn pattern_tensor(mask: u32, order: usize) -> Tensor<Rational> {
    Tensor::from_fn(2, order, |c| {
        if mask >> (c[0] * order + c[1]) & 1 == 1 {
            Rational::from_integer(1.into())
        } else {
            Rational::from_integer(0.into())
        }
    })
}

/// Pattern from rows of 0/1 values.
pub fn pattern_from_rows(rows: &[&[u8]]) -> u32 {
    let n = rows.len();
    let mut mask = 0u32;
    for (r, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "pattern must be square");
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                mask |= 1 << (r * n + c);
            }
        }
    }
    mask
}

/// An equivalence class of plane patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternClass {
    pub representative: u32,
    pub size: u32,
    pub members: Vec<u32>,
}

/// Every (0,1) pattern of order `n` with total support.
#[derive(Clone, Debug)]
pub struct PlaneCatalog {
    order: usize,
    patterns: Vec<u32>,
}

impl PlaneCatalog {
    pub fn total_support(order: usize) -> Result<Self, EnumerateError> {
        if order == 0 || order > MAX_CATALOG_ORDER {
            return Err(EnumerateError::Unsupported {
                order,
                dim: 2,
            });
        }
        let m = matchings(order);
        let patterns = (1u32..1 << (order * order))
            .filter(|&mask| has_total_support(mask, &m))
            .collect();
        Ok(PlaneCatalog { order, patterns })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Patterns in increasing mask order.
    pub fn patterns(&self) -> &[u32] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.patterns.binary_search(&mask).is_ok()
    }

    /// Classes ordered by support size, then representative.
    pub fn classes(&self) -> Vec<PatternClass> {
        let mut by_rep: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for &p in &self.patterns {
            let rep = pattern_class(p, self.order);
            by_rep.entry((rep.count_ones(), rep)).or_default().push(p);
        }
        by_rep
            .into_iter()
            .map(|((_, representative), members)| PatternClass {
                representative,
                size: members.len() as u32,
                members,
            })
            .collect()
    }

    /// Members of the class of `mask`.
    pub fn orbit(&self, mask: u32) -> Vec<u32> {
        let mut v = pattern_images(mask, self.order);
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// The six order-3 plane types used in the 4-dimensional search, in the
/// order: permutation, one plus a 2x2 block, 6-cycle, two zeros, one zero,
/// all ones.
pub fn planes_order3() -> [u32; 6] {
    [
        pattern_from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        pattern_from_rows(&[&[1, 0, 0], &[0, 1, 1], &[0, 1, 1]]),
        pattern_from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
        pattern_from_rows(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 1]]),
        pattern_from_rows(&[&[0, 1, 1], &[1, 1, 1], &[1, 1, 1]]),
        pattern_from_rows(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]),
    ]
}

/// The nine order-4 first planes of the 3-dimensional search: one per class
/// of total-support patterns with at most nine ones.
pub fn first_planes_order4() -> [u32; 9] {
    [
        pattern_from_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        pattern_from_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 1]]),
        pattern_from_rows(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[0, 1, 0, 1]]),
        pattern_from_rows(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[0, 1, 1, 1]]),
        pattern_from_rows(&[&[1, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 1]]),
        pattern_from_rows(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]),
        pattern_from_rows(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 1, 1, 1], &[0, 1, 1, 1]]),
        pattern_from_rows(&[&[0, 1, 1, 1], &[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]),
        pattern_from_rows(&[&[1, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1], &[1, 1, 0, 0]]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::total_support_2d;

    #[test]
    fn matchings_agree_with_permanent_minors() {
        for n in 1..=3 {
            let m = matchings(n);
            for mask in 0u32..1 << (n * n) {
                let by_perm = total_support_2d(&pattern_tensor(mask, n)).unwrap_or(false);
                assert_eq!(has_total_support(mask, &m), by_perm, "n={n} mask={mask:b}");
            }
        }
    }

    #[test]
    fn order3_catalog() {
        let cat = PlaneCatalog::total_support(3).unwrap();
        assert_eq!(cat.len(), 49);
        let sizes: Vec<u32> = planes_order3()
            .iter()
            .map(|&p| {
                assert!(cat.contains(p));
                cat.orbit(p).len() as u32
            })
            .collect();
        assert_eq!(sizes, vec![6, 9, 6, 18, 9, 1]);
        assert_eq!(cat.classes().len(), 6);
    }

    #[test]
    fn order4_catalog() {
        let cat = PlaneCatalog::total_support(4).unwrap();
        assert_eq!(cat.len(), 7443);
        let small: Vec<u32> = cat
            .classes()
            .into_iter()
            .filter(|c| c.representative.count_ones() <= 9)
            .map(|c| c.representative)
            .collect();
        let mut printed: Vec<u32> = first_planes_order4().iter().map(|&p| pattern_class(p, 4)).collect();
        printed.sort_by_key(|&p| (p.count_ones(), p));
        assert_eq!(small, printed);
    }
}
