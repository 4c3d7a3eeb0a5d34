//! Supports, polystochasticity, permanents and the support conditions used
//! to filter vertex candidates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::scalar::{Rational, Scalar};
use crate::tensor::{cell_count, coords_of, offset_of, Index, Lines, Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StochasticError {
    #[error("expected a 2-dimensional tensor, got dimension {0}")]
    NotTwoDimensional(usize),
    #[error("expected a (0,1)-tensor")]
    NotZeroOne,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("diagonal needs {expected} indices, got {got}")]
    DiagonalSize { expected: usize, got: usize },
    #[error("indices of a diagonal share a hyperplane along axis {0}")]
    SharedHyperplane(usize),
}

/// Set of indices of `I_n^d`, kept sorted by row-major offset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportSet {
    dim: usize,
    order: usize,
    members: Vec<usize>,
}

impl SupportSet {
    /// From cell offsets in any order; duplicates are dropped.
    pub fn from_offsets(dim: usize, order: usize, mut offsets: Vec<usize>) -> Result<Self, TensorError> {
        let total = cell_count(dim, order).ok_or(TensorError::TooLarge { dim, order })?;
        offsets.sort_unstable();
        offsets.dedup();
        if let Some(&bad) = offsets.last().filter(|&&o| o >= total) {
            return Err(TensorError::CoordinateOutOfRange {
                value: bad,
                order: total,
            });
        }
        Ok(SupportSet {
            dim,
            order,
            members: offsets,
        })
    }

    pub fn from_indices(dim: usize, order: usize, indices: &[Index]) -> Result<Self, TensorError> {
        let mut offsets = Vec::with_capacity(indices.len());
        for idx in indices {
            if idx.dim() != dim {
                return Err(TensorError::DimensionMismatch(dim, idx.dim()));
            }
            if let Some(&value) = idx.coords().iter().find(|&&c| c >= order) {
                return Err(TensorError::CoordinateOutOfRange { value, order });
            }
            offsets.push(offset_of(idx.coords(), order));
        }
        Self::from_offsets(dim, order, offsets)
    }

    /// Bit `i` of `mask` marks offset `i`.
    pub fn from_mask(dim: usize, order: usize, mask: u128) -> Self {
        let members = (0..128).filter(|&i| mask >> i & 1 == 1).collect();
        SupportSet {
            dim,
            order,
            members,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `N`, the number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.members
    }

    pub fn indices(&self) -> Vec<Index> {
        self.members
            .iter()
            .map(|&o| Index(coords_of(o, self.dim, self.order)))
            .collect()
    }

    pub fn contains(&self, offset: usize) -> bool {
        self.members.binary_search(&offset).is_ok()
    }

    /// Position of `offset` in the member numbering.
    pub fn position(&self, offset: usize) -> Option<usize> {
        self.members.binary_search(&offset).ok()
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        let mut all = self.members.clone();
        all.extend_from_slice(&other.members);
        all.sort_unstable();
        all.dedup();
        SupportSet {
            dim: self.dim,
            order: self.order,
            members: all,
        }
    }

    /// Indicator tensor: one on members, zero elsewhere.
    pub fn indicator<T: Scalar>(&self) -> Tensor<T> {
        let mut t = Tensor::zeros(self.dim, self.order);
        for &o in &self.members {
            let coords = t.coords(o);
            t.set(&coords, T::one());
        }
        t
    }

    /// Tensor with `values[j]` on the `j`-th member.
    pub fn scatter<T: Scalar>(&self, values: &[T]) -> Tensor<T> {
        assert_eq!(values.len(), self.members.len());
        let mut t = Tensor::zeros(self.dim, self.order);
        for (&o, v) in self.members.iter().zip(values) {
            let coords = t.coords(o);
            t.set(&coords, v.clone());
        }
        t
    }
}

/// `n` indices pairwise sharing no hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonal {
    indices: Vec<Index>,
}

impl Diagonal {
    pub fn new(order: usize, indices: Vec<Index>) -> Result<Self, StochasticError> {
        if indices.len() != order {
            return Err(StochasticError::DiagonalSize {
                expected: order,
                got: indices.len(),
            });
        }
        let dim = indices.first().map_or(0, Index::dim);
        for axis in 0..dim {
            let mut seen = vec![false; order];
            for idx in &indices {
                let c = *idx.coords().get(axis).ok_or(TensorError::DimensionMismatch(dim, idx.dim()))?;
                if c >= order {
                    return Err(TensorError::CoordinateOutOfRange { value: c, order }.into());
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(StochasticError::SharedHyperplane(axis));
                }
            }
        }
        Ok(Diagonal { indices })
    }

    pub fn indices(&self) -> &[Index] {
        &self.indices
    }

    pub fn weight<T: Scalar>(&self, t: &Tensor<T>) -> T {
        self.indices
            .iter()
            .fold(T::one(), |acc, idx| acc * t.get(idx.coords()).clone())
    }
}

/// Nonnegative with every line summing to exactly one.
pub fn is_polystochastic<T: Scalar>(t: &Tensor<T>) -> bool {
    let zero = T::zero();
    if t.entries().iter().any(|v| *v < zero) {
        return false;
    }
    let one = T::one();
    t.line_sums().iter().all(|s| *s == one)
}

/// Polystochastic with every entry 0 or 1.
pub fn is_permutation_tensor<T: Scalar>(t: &Tensor<T>) -> bool {
    t.entries().iter().all(|v| v.is_zero() || v.is_one()) && is_polystochastic(t)
}

pub fn support<T: Scalar>(t: &Tensor<T>) -> SupportSet {
    SupportSet {
        dim: t.dim(),
        order: t.order(),
        members: t.nonzero_offsets(),
    }
}

/// Sum over diagonals of entry products.
///
/// A diagonal is fixed by the coordinates its member with first coordinate
/// `i` takes on the remaining axes, for each `i`; these form `d-1`
/// permutations of `0..n`. The search fills them level by level and cuts a
/// branch as soon as it hits a zero entry.
pub fn permanent<T: Scalar>(t: &Tensor<T>) -> T {
    let n = t.order();
    let d = t.dim();
    if d == 0 || n == 0 {
        return T::one();
    }
    if d == 1 {
        return t.entries().iter().fold(T::zero(), |a, b| a + b.clone());
    }
    let strides: Vec<usize> = (0..d).map(|a| n.pow((d - 1 - a) as u32)).collect();
    let mut used = vec![0u64; d];
    let mut total = T::zero();
    permanent_level(t, &strides, 0, 1, 0, T::one(), &mut used, &mut total);
    total
}

#[allow(clippy::too_many_arguments)]
fn permanent_level<T: Scalar>(
    t: &Tensor<T>,
    strides: &[usize],
    level: usize,
    axis: usize,
    offset: usize,
    product: T,
    used: &mut [u64],
    total: &mut T,
) {
    let n = t.order();
    let d = strides.len();
    if level == n {
        *total = total.clone() + product;
        return;
    }
    if axis == d {
        let value = t.at(offset + level * strides[0]);
        if value.is_zero() {
            return;
        }
        let next = product * value.clone();
        permanent_level(t, strides, level + 1, 1, 0, next, used, total);
        return;
    }
    for c in 0..n {
        if used[axis] >> c & 1 == 1 {
            continue;
        }
        used[axis] |= 1 << c;
        permanent_level(
            t,
            strides,
            level,
            axis + 1,
            offset + c * strides[axis],
            product.clone(),
            used,
            total,
        );
        used[axis] &= !(1 << c);
    }
}

/// Whether a 2-dimensional (0,1) pattern is the support of a doubly
/// stochastic matrix: it must be nonzero and every 1 must have a minor of
/// positive permanent.
pub fn total_support_2d<T: Scalar>(t: &Tensor<T>) -> Result<bool, StochasticError> {
    if t.dim() != 2 {
        return Err(StochasticError::NotTwoDimensional(t.dim()));
    }
    if !t.entries().iter().all(|v| v.is_zero() || v.is_one()) {
        return Err(StochasticError::NotZeroOne);
    }
    let ones = t.nonzero_offsets();
    if ones.is_empty() {
        return Ok(false);
    }
    if t.order() == 1 {
        return Ok(true);
    }
    for off in ones {
        let minor = t.delete_hyperplanes(&Index(t.coords(off)))?;
        if permanent(&minor).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least `Δ >= 1` with `Δ·t` integral.
pub fn denominator_lcm(t: &Tensor<Rational>) -> BigInt {
    t.entries()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Support conditions (C0) and (C1): every line meets `s`, and whenever a
/// line meets `s` in a single index, every line through that index meets
/// `s` only there.
pub fn check_c0_c1(s: &SupportSet) -> bool {
    let lines = Lines::new(s.dim(), s.order());
    let mut member = vec![false; cell_count(s.dim(), s.order()).expect("checked at construction")];
    for &o in s.offsets() {
        member[o] = true;
    }
    let counts: Vec<usize> = lines
        .iter()
        .map(|cells| cells.iter().filter(|&&c| member[c]).count())
        .collect();
    if counts.contains(&0) {
        return false;
    }
    for (id, cells) in lines.iter().enumerate() {
        if counts[id] != 1 {
            continue;
        }
        let alpha = *cells.iter().find(|&&c| member[c]).expect("count is one");
        if lines.through(alpha).iter().any(|&other| counts[other] != 1) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn perm_matrix(p: &[usize]) -> Tensor<Rational> {
        Tensor::from_fn(2, p.len(), |c| int(i64::from(p[c[0]] == c[1])))
    }

    #[test]
    fn two_dim_permanent_matches_expansion() {
        let t = Tensor::new(2, 2, vec![int(1), int(2), int(3), int(4)]).unwrap();
        assert_eq!(permanent(&t), int(10));
        let ones = Tensor::from_fn(2, 4, |_| 1i64);
        assert_eq!(permanent(&ones), 24);
    }

    #[test]
    fn zero_permanent_cayley_table() {
        // Z2 Cayley table as a 3-dimensional permutation of order 2
        let t = Tensor::from_fn(3, 2, |c| i64::from((c[0] + c[1]) % 2 == c[2]));
        assert!(is_permutation_tensor(&t));
        assert_eq!(permanent(&t), 0);
    }

    #[test]
    fn polystochastic_predicates() {
        assert!(is_polystochastic(&Tensor::<Rational>::uniform(3, 3)));
        assert!(is_permutation_tensor(&perm_matrix(&[0, 1, 2])));
        let mut bad = Tensor::<Rational>::uniform(2, 2);
        bad.set(&[0, 0], ratio(1, 3));
        assert!(!is_polystochastic(&bad));
        let neg = Tensor::new(2, 2, vec![int(2), int(-1), int(-1), int(2)]).unwrap();
        assert!(!is_polystochastic(&neg));
    }

    #[test]
    fn total_support_examples() {
        let all = Tensor::from_fn(2, 3, |_| 1i64);
        assert!(total_support_2d(&all).unwrap());
        let mut id = Tensor::from_fn(2, 3, |c| i64::from(c[0] == c[1]));
        assert!(total_support_2d(&id).unwrap());
        id.set(&[0, 1], 1);
        assert!(!total_support_2d(&id).unwrap());
        assert!(!total_support_2d(&Tensor::<i64>::zeros(2, 3)).unwrap());
        assert!(total_support_2d(&Tensor::from_fn(3, 2, |_| 1i64)).is_err());
        assert!(total_support_2d(&Tensor::from_fn(2, 2, |_| 2i64)).is_err());
    }

    #[test]
    fn c0_c1() {
        let id = support(&perm_matrix(&[0, 1, 2]));
        assert!(check_c0_c1(&id));
        let mut offs = id.offsets().to_vec();
        offs.push(1);
        // column 0 meets the support only at (0,0), but row 0 now meets it twice
        let s = SupportSet::from_offsets(2, 3, offs).unwrap();
        assert!(!check_c0_c1(&s));
        let s = SupportSet::from_offsets(2, 3, vec![0, 4]).unwrap();
        assert!(!check_c0_c1(&s));
    }

    #[test]
    fn lcm_and_support() {
        let t = Tensor::new(2, 2, vec![ratio(1, 2), ratio(1, 2), ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(denominator_lcm(&t), BigInt::from(6));
        assert_eq!(support(&Tensor::<Rational>::zeros(2, 3)).len(), 0);
    }

    #[test]
    fn diagonal_validation() {
        let d = Diagonal::new(2, vec![Index(vec![0, 1]), Index(vec![1, 0])]).unwrap();
        assert_eq!(d.weight(&perm_matrix(&[1, 0])), int(1));
        assert!(Diagonal::new(2, vec![Index(vec![0, 1]), Index(vec![1, 1])]).is_err());
        assert!(Diagonal::new(2, vec![Index(vec![0, 1])]).is_err());
    }
}
