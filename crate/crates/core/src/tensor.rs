//! Dense `d`-dimensional tensors of order `n`.
//!
//! Entries are stored row-major with axis 0 most significant, so the offset
//! of index `(a_0, ..., a_{d-1})` is `sum a_i * n^(d-1-i)`. Axes are numbered
//! from 0 in code and in files; mathematical prose numbers them from 1.

use std::fmt;

use thiserror::Error;

use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("expected {expected} entries for dimension {dim} and order {order}, got {got}")]
    LengthMismatch {
        dim: usize,
        order: usize,
        expected: usize,
        got: usize,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("coordinate {value} out of range for order {order}")]
    CoordinateOutOfRange { value: usize, order: usize },
    #[error("axis {0} fixed twice in plane specification")]
    RepeatedAxis(usize),
    #[error("cannot delete hyperplanes from a tensor of order {0}")]
    OrderTooSmall(usize),
    #[error("tensor of dimension {dim} and order {order} is too large")]
    TooLarge { dim: usize, order: usize },
}

/// `n^d`, or `None` on overflow.
pub fn cell_count(dim: usize, order: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..dim {
        acc = acc.checked_mul(order)?;
    }
    Some(acc)
}

/// A multi-index `α ∈ I_n^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index(pub Vec<usize>);

impl Index {
    pub fn new(coords: Vec<usize>) -> Self {
        Index(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Index(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// Number of coordinates equal to `value` (the `|α|_v` counts).
    pub fn count(&self, value: usize) -> usize {
        self.0.iter().filter(|&&c| c == value).count()
    }

    /// Hamming distance: number of positions in which the indices differ.
    pub fn hamming(&self, other: &Index) -> Result<usize, TensorError> {
        if self.dim() != other.dim() {
            return Err(TensorError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    fn check(&self, dim: usize, order: usize) -> Result<(), TensorError> {
        if self.dim() != dim {
            return Err(TensorError::DimensionMismatch(dim, self.dim()));
        }
        match self.0.iter().find(|&&c| c >= order) {
            Some(&value) => Err(TensorError::CoordinateOutOfRange { value, order }),
            None => Ok(()),
        }
    }
}

impl From<Vec<usize>> for Index {
    fn from(v: Vec<usize>) -> Self {
        Index(v)
    }
}

impl From<&[usize]> for Index {
    fn from(v: &[usize]) -> Self {
        Index(v.to_vec())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Offset of `coords` in a row-major tensor of order `order`.
pub fn offset_of(coords: &[usize], order: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * order + c)
}

/// Inverse of [`offset_of`].
pub fn coords_of(mut offset: usize, dim: usize, order: usize) -> Vec<usize> {
    let mut coords = vec![0; dim];
    for slot in coords.iter_mut().rev() {
        *slot = offset % order;
        offset /= order;
    }
    coords
}

/// All `n^d` indices in row-major order.
pub fn all_indices(dim: usize, order: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = cell_count(dim, order).expect("index set too large");
    (0..total).map(move |off| coords_of(off, dim, order))
}

/// A plane: some axes fixed to given coordinates, the rest free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSpec {
    fixed: Vec<Option<usize>>,
}

impl PlaneSpec {
    pub fn new(dim: usize, order: usize, fixed: &[(usize, usize)]) -> Result<Self, TensorError> {
        let mut slots = vec![None; dim];
        for &(axis, value) in fixed {
            if axis >= dim {
                return Err(TensorError::AxisOutOfRange { axis, dim });
            }
            if value >= order {
                return Err(TensorError::CoordinateOutOfRange { value, order });
            }
            if slots[axis].replace(value).is_some() {
                return Err(TensorError::RepeatedAxis(axis));
            }
        }
        Ok(PlaneSpec { fixed: slots })
    }

    pub fn fixed(&self) -> &[Option<usize>] {
        &self.fixed
    }

    /// Free axes in ascending order; their count is the plane's dimension.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.fixed.len()).filter(|&a| self.fixed[a].is_none()).collect()
    }

    /// Offsets of the plane's cells, ordered row-major over the free axes.
    pub fn offsets(&self, order: usize) -> Vec<usize> {
        let free = self.free_axes();
        let mut base: Vec<usize> = self.fixed.iter().map(|v| v.unwrap_or(0)).collect();
        let count = cell_count(free.len(), order).expect("plane too large");
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let local = coords_of(k, free.len(), order);
            for (slot, &axis) in free.iter().enumerate() {
                base[axis] = local[slot];
            }
            out.push(offset_of(&base, order));
        }
        out
    }
}

/// The lines of `I_n^d` in the fixed order used for incidence rows: grouped
/// by free axis (ascending), and within an axis by the base index (free
/// coordinate set to 0) in row-major order.
#[derive(Clone, Debug)]
pub struct Lines {
    dim: usize,
    order: usize,
    cells: Vec<Vec<usize>>,
    through: Vec<Vec<usize>>,
}

impl Lines {
    pub fn new(dim: usize, order: usize) -> Self {
        assert!(dim >= 1 && order >= 1, "lines need d >= 1 and n >= 1");
        let total = cell_count(dim, order).expect("index set too large");
        let per_axis = total / order;
        let mut cells = Vec::with_capacity(dim * per_axis);
        let mut through = vec![Vec::with_capacity(dim); total];
        for axis in 0..dim {
            let stride = order.pow((dim - 1 - axis) as u32);
            for off in 0..total {
                if !(off / stride).is_multiple_of(order) {
                    continue;
                }
                let id = cells.len();
                let line: Vec<usize> = (0..order).map(|c| off + c * stride).collect();
                for &cell in &line {
                    through[cell].push(id);
                }
                cells.push(line);
            }
        }
        Lines {
            dim,
            order,
            cells,
            through,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `d * n^(d-1)`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell offsets of line `id`, free coordinate ascending.
    pub fn cells(&self, id: usize) -> &[usize] {
        &self.cells[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.iter().map(|c| c.as_slice())
    }

    /// Ids of the `d` lines through a cell, indexed by free axis.
    pub fn through(&self, cell: usize) -> &[usize] {
        &self.through[cell]
    }

    /// Free axis of line `id`.
    pub fn axis(&self, id: usize) -> usize {
        id / (self.cells.len() / self.dim)
    }
}

/// Dense tensor of dimension `d` and order `n`, generic over the entry type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor<T = Rational> {
    dim: usize,
    order: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn new(dim: usize, order: usize, entries: Vec<T>) -> Result<Self, TensorError> {
        let expected = cell_count(dim, order).ok_or(TensorError::TooLarge { dim, order })?;
        if entries.len() != expected {
            return Err(TensorError::LengthMismatch {
                dim,
                order,
                expected,
                got: entries.len(),
            });
        }
        Ok(Tensor {
            dim,
            order,
            entries,
        })
    }

    pub fn from_fn(dim: usize, order: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let entries = all_indices(dim, order).map(|c| f(&c)).collect();
        Tensor {
            dim,
            order,
            entries,
        }
    }

    pub fn zeros(dim: usize, order: usize) -> Self {
        let total = cell_count(dim, order).expect("tensor too large");
        Tensor {
            dim,
            order,
            entries: vec![T::zero(); total],
        }
    }

    /// Every entry `1/n`.
    pub fn uniform(dim: usize, order: usize) -> Self {
        let mut n = T::zero();
        for _ in 0..order {
            n = n + T::one();
        }
        let value = T::one() / n;
        let total = cell_count(dim, order).expect("tensor too large");
        Tensor {
            dim,
            order,
            entries: vec![value; total],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn offset(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dim);
        offset_of(coords, self.order)
    }

    pub fn coords(&self, offset: usize) -> Vec<usize> {
        coords_of(offset, self.dim, self.order)
    }

    /// Entry at `coords`; panics when out of range.
    pub fn get(&self, coords: &[usize]) -> &T {
        &self.entries[self.offset(coords)]
    }

    pub fn try_get(&self, index: &Index) -> Result<&T, TensorError> {
        index.check(self.dim, self.order)?;
        Ok(self.get(index.coords()))
    }

    pub fn at(&self, offset: usize) -> &T {
        &self.entries[offset]
    }

    pub fn set(&mut self, coords: &[usize], value: T) {
        let off = self.offset(coords);
        self.entries[off] = value;
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Tensor<U> {
        Tensor {
            dim: self.dim,
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        all_indices(self.dim, self.order)
    }

    /// The `n` indices agreeing with `base` off `free_axis`.
    pub fn line_indices(&self, free_axis: usize, base: &Index) -> Result<Vec<Index>, TensorError> {
        if free_axis >= self.dim {
            return Err(TensorError::AxisOutOfRange {
                axis: free_axis,
                dim: self.dim,
            });
        }
        base.check(self.dim, self.order)?;
        Ok((0..self.order)
            .map(|c| {
                let mut coords = base.0.clone();
                coords[free_axis] = c;
                Index(coords)
            })
            .collect())
    }

    /// Sums of every line, in [`Lines`] order.
    pub fn line_sums(&self) -> Vec<T> {
        let lines = Lines::new(self.dim, self.order);
        lines
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .fold(T::zero(), |acc, &c| acc + self.entries[c].clone())
            })
            .collect()
    }

    /// The plane described by `spec`, free axes in ascending original order.
    pub fn plane(&self, spec: &PlaneSpec) -> Result<Tensor<T>, TensorError> {
        if spec.fixed().len() != self.dim {
            return Err(TensorError::DimensionMismatch(self.dim, spec.fixed().len()));
        }
        if let Some(&value) = spec.fixed().iter().flatten().find(|&&v| v >= self.order) {
            return Err(TensorError::CoordinateOutOfRange {
                value,
                order: self.order,
            });
        }
        let entries = spec
            .offsets(self.order)
            .into_iter()
            .map(|off| self.entries[off].clone())
            .collect();
        Ok(Tensor {
            dim: spec.free_axes().len(),
            order: self.order,
            entries,
        })
    }

    /// Hyperplane with `axis` fixed to `value`.
    pub fn hyperplane(&self, axis: usize, value: usize) -> Result<Tensor<T>, TensorError> {
        self.plane(&PlaneSpec::new(self.dim, self.order, &[(axis, value)])?)
    }

    /// The order `n-1` tensor obtained by deleting every hyperplane through
    /// `index`; keeps exactly the indices differing from it in every position.
    pub fn delete_hyperplanes(&self, index: &Index) -> Result<Tensor<T>, TensorError> {
        if self.order < 2 {
            return Err(TensorError::OrderTooSmall(self.order));
        }
        index.check(self.dim, self.order)?;
        let sub = self.order - 1;
        Ok(Tensor::from_fn(self.dim, sub, |local| {
            let coords: Vec<usize> = local
                .iter()
                .zip(index.coords())
                .map(|(&c, &skip)| if c >= skip { c + 1 } else { c })
                .collect();
            self.get(&coords).clone()
        }))
    }

    /// Tensor with axes reordered: result axis `j` is source axis `perm[j]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Tensor<T> {
        assert_eq!(perm.len(), self.dim);
        Tensor::from_fn(self.dim, self.order, |coords| {
            let mut src = vec![0; self.dim];
            for (j, &axis) in perm.iter().enumerate() {
                src[axis] = coords[j];
            }
            self.get(&src).clone()
        })
    }

    /// Invariant under every permutation of the axes. Adjacent
    /// transpositions generate the symmetric group, so only those are tested.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim.saturating_sub(1)).all(|k| {
            let stride = self.order.pow((self.dim - 2 - k) as u32);
            self.entries.iter().enumerate().all(|(off, v)| {
                let hi = (off / (stride * self.order)) % self.order;
                let lo = (off / stride) % self.order;
                if hi <= lo {
                    return true;
                }
                let swapped = off - hi * stride * self.order - lo * stride
                    + lo * stride * self.order
                    + hi * stride;
                *v == self.entries[swapped]
            })
        })
    }

    /// Offsets of nonzero entries, ascending.
    pub fn nonzero_offsets(&self) -> Vec<usize> {
        let zero = T::zero();
        (0..self.entries.len())
            .filter(|&i| self.entries[i] != zero)
            .collect()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Tensor<T> {
    /// Rows of `n` entries; a blank line separates consecutive 2-dimensional planes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order;
        for (row, chunk) in self.entries.chunks(n.max(1)).enumerate() {
            if row > 0 && self.dim > 2 && row % n == 0 {
                writeln!(f)?;
            }
            let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn identity(n: usize) -> Tensor<i64> {
        Tensor::from_fn(2, n, |c| i64::from(c[0] == c[1]))
    }

    #[test]
    fn construction_checks_length() {
        let t = Tensor::new(2, 2, vec![int(1), int(0), int(0), int(1)]).unwrap();
        assert_eq!(t.get(&[1, 1]), &int(1));
        assert_eq!(t.get(&[0, 1]), &int(0));
        assert!(matches!(
            Tensor::new(2, 2, vec![int(1)]),
            Err(TensorError::LengthMismatch { expected: 4, .. })
        ));
    }

    #[test]
    fn row_major_axis_zero_most_significant() {
        let t = Tensor::from_fn(3, 3, |c| (c[0] * 100 + c[1] * 10 + c[2]) as i64);
        assert_eq!(t.entries()[0], 0);
        assert_eq!(t.entries()[1], 1);
        assert_eq!(t.entries()[3], 10);
        assert_eq!(t.entries()[9], 100);
        assert_eq!(t.coords(14), vec![1, 1, 2]);
    }

    #[test]
    fn hamming_distances() {
        let h = |a: &[usize], b: &[usize]| Index::from(a).hamming(&Index::from(b)).unwrap();
        assert_eq!(h(&[0, 0, 0, 0], &[0, 0, 0, 0]), 0);
        assert_eq!(h(&[0, 0, 0, 0], &[1, 1, 1, 0]), 3);
        assert_eq!(h(&[0, 1, 2], &[2, 1, 0]), 2);
        assert!(Index::from(&[0, 1][..]).hamming(&Index::from(&[0][..])).is_err());
    }

    #[test]
    fn line_indices_and_counts() {
        let t = Tensor::<i64>::zeros(2, 3);
        let line = t.line_indices(1, &Index(vec![1, 0])).unwrap();
        assert_eq!(line, vec![Index(vec![1, 0]), Index(vec![1, 1]), Index(vec![1, 2])]);
        assert!(t.line_indices(2, &Index(vec![0, 0])).is_err());
        assert_eq!(Lines::new(4, 3).len(), 108);
        assert_eq!(Lines::new(3, 4).len(), 48);
    }

    #[test]
    fn every_cell_lies_on_d_lines() {
        for (d, n) in [(2, 3), (3, 3), (4, 3), (3, 4), (5, 2)] {
            let lines = Lines::new(d, n);
            let mut hits = vec![0; n.pow(d as u32)];
            for cells in lines.iter() {
                assert_eq!(cells.len(), n);
                for &c in cells {
                    hits[c] += 1;
                }
            }
            assert!(hits.iter().all(|&h| h == d));
            for cell in 0..hits.len() {
                let axes: Vec<usize> = lines.through(cell).iter().map(|&l| lines.axis(l)).collect();
                assert_eq!(axes, (0..d).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn plane_extraction() {
        let id = identity(3);
        let row = id.plane(&PlaneSpec::new(2, 3, &[(0, 0)]).unwrap()).unwrap();
        assert_eq!(row.entries(), &[1, 0, 0]);
        let col = id.hyperplane(1, 2).unwrap();
        assert_eq!(col.entries(), &[0, 0, 1]);
        let t = Tensor::from_fn(3, 2, |c| (c[0] * 4 + c[1] * 2 + c[2]) as i64);
        let p = t.plane(&PlaneSpec::new(3, 2, &[(1, 1)]).unwrap()).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.entries(), &[2, 3, 6, 7]);
        assert!(PlaneSpec::new(2, 3, &[(0, 0), (0, 1)]).is_err());
        assert!(PlaneSpec::new(2, 3, &[(2, 0)]).is_err());
    }

    #[test]
    fn deleting_hyperplanes_restricts() {
        let id = identity(3);
        let sub = id.delete_hyperplanes(&Index(vec![0, 0])).unwrap();
        assert_eq!(sub, identity(2));
        let t = Tensor::from_fn(4, 3, |c| offset_of(c, 3) as i64);
        let sub = t.delete_hyperplanes(&Index(vec![2, 2, 2, 2])).unwrap();
        assert_eq!(sub.order(), 2);
        assert_eq!(sub.len(), 16);
        let sub0 = t.delete_hyperplanes(&Index(vec![0, 0, 0, 0])).unwrap();
        for local in all_indices(4, 2) {
            let coords: Vec<usize> = local.iter().map(|c| c + 1).collect();
            assert_eq!(sub0.get(&local), t.get(&coords));
        }
        assert!(Tensor::<i64>::zeros(2, 1).delete_hyperplanes(&Index(vec![0, 0])).is_err());
    }

    #[test]
    fn symmetry() {
        let sym = Tensor::from_fn(3, 3, |c| c.iter().sum::<usize>() as i64);
        assert!(sym.is_symmetric());
        let skew = Tensor::from_fn(3, 3, |c| c[0] as i64);
        assert!(!skew.is_symmetric());
        assert!(Tensor::from_fn(1, 4, |c| c[0] as i64).is_symmetric());
    }

    #[test]
    fn uniform_tensor() {
        let u = Tensor::<Rational>::uniform(3, 3);
        assert!(u.entries().iter().all(|v| *v == ratio(1, 3)));
    }
}
