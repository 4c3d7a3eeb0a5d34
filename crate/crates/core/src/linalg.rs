//! Exact linear algebra over fields and the integers.
//!
//! [`Matrix`] does Gauss–Jordan elimination over any exact [`Field`], taking
//! the first nonzero entry of each column as pivot. [`IncrementalRank`] keeps
//! a fraction-free integer echelon basis of a growing column set; it is what
//! the searches use to reject partial supports whose incidence columns have
//! become dependent, with cheap rollback to earlier checkpoints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{Field, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    LengthMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("vector of length {got} does not match dimension {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("rank {rank} is less than the {cols} columns; solution not unique")]
    RankDeficient { rank: usize, cols: usize },
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::LengthMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let count = rows.len();
        let mut entries = Vec::with_capacity(count * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRows {
                    row: i,
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: count,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::VectorLength {
                expected: self.cols,
                got: x.len(),
            });
        }
        let zero = T::zero();
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| **a != zero)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    fn to_row_vecs(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.cols.max(1)).map(<[T]>::to_vec).take(self.rows).collect()
    }
}

/// Reduced row echelon form plus the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan on `rows`, pivoting only within the first `pivot_cols`
/// columns. Later columns (an augmented right-hand side) are carried along.
fn gauss_jordan<T: Field>(rows: &mut [Vec<T>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let width = rows.first().map_or(0, Vec::len);
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for v in rows[r][c..width].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let factor = other[c].clone();
            for k in c..width {
                if !pivot_row[k].is_zero() {
                    other[k] = other[k].clone() - factor.clone() * pivot_row[k].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl<T: Field> Matrix<T> {
    pub fn echelon(&self) -> Echelon<T> {
        let mut rows = self.to_row_vecs();
        let pivots = gauss_jordan(&mut rows, self.cols);
        rows.truncate(pivots.len());
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// The unique `x` with `self * x = b`, or `None` if the system is
    /// inconsistent. Errors when the columns are dependent.
    pub fn solve_consistent(&self, b: &[T]) -> Result<Option<Vec<T>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::VectorLength {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut rows: Vec<Vec<T>> = self
            .to_row_vecs()
            .into_iter()
            .zip(b)
            .map(|(mut row, rhs)| {
                row.push(rhs.clone());
                row
            })
            .collect();
        let pivots = gauss_jordan(&mut rows, self.cols);
        if pivots.len() < self.cols {
            return Err(LinalgError::RankDeficient {
                rank: pivots.len(),
                cols: self.cols,
            });
        }
        if rows[pivots.len()..].iter().any(|row| !row[self.cols].is_zero()) {
            return Ok(None);
        }
        Ok(Some(
            rows[..self.cols].iter().map(|row| row[self.cols].clone()).collect(),
        ))
    }
}

#[derive(Clone, Debug)]
enum Basis {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

/// Outcome of adding a vector to an [`IncrementalRank`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Push {
    Independent,
    /// The vector reduced to zero on the main coordinates. The payload is
    /// the remainder on the tag coordinates: the coefficients of a vanishing
    /// combination of the tagged vectors pushed so far (including this one).
    Dependent(Vec<BigInt>),
}

/// Integer echelon basis of a growing vector set, supporting checkpoint and
/// rollback.
///
/// Each pushed vector is reduced against the stored basis by fraction-free
/// elimination (`v <- b_p * v - v_p * b`, divided by its content whenever
/// the pivot is not a unit). A nonzero remainder joins the basis.
/// Arithmetic is done in `i64` and switches permanently to `BigInt` on the
/// first overflow.
///
/// Vectors may carry extra tag coordinates that ride along but never hold a
/// pivot. Tagging vector `j` with the unit vector `e_j` makes a dependent
/// remainder spell out the linear relation that caused it.
#[derive(Clone, Debug)]
pub struct IncrementalRank {
    len: usize,
    tags: usize,
    pivots: Vec<usize>,
    basis: Basis,
}

trait Entry: Clone + Zero {
    fn from_i64(v: i64) -> Self;
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd_with(&self, other: &Self) -> Self;
    fn div_exact(&self, g: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn negate(&self) -> Self;
    fn is_unit(&self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> i64 {
        v
    }
    fn mul_sub(a: &i64, x: &i64, b: &i64, y: &i64) -> Option<i64> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd_with(&self, other: &i64) -> i64 {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, g: &i64) -> i64 {
        self / g
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negate(&self) -> i64 {
        -self
    }
    fn is_unit(&self) -> bool {
        *self == 1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn mul_sub(a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(a * x - b * y)
    }
    fn gcd_with(&self, other: &BigInt) -> BigInt {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, g: &BigInt) -> BigInt {
        self / g
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negate(&self) -> BigInt {
        -self
    }
    fn is_unit(&self) -> bool {
        self.is_one()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Divide `v` by the gcd of its entries, sign chosen so the first nonzero
/// entry is positive.
fn normalize<E: Entry>(v: &mut [E]) {
    let mut g = E::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd_with(x);
            if g.is_unit() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(Entry::is_negative) {
        g = g.negate();
    }
    if !g.is_unit() {
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.div_exact(&g);
            }
        }
    }
}

/// Reduce `v` against `basis`; `None` on overflow.
fn reduce<E: Entry>(basis: &[Vec<E>], pivots: &[usize], mut v: Vec<E>) -> Option<Vec<E>> {
    for (b, &p) in basis.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let bp = b[p].clone();
        let vp = v[p].clone();
        if bp.is_unit() {
            for k in 0..v.len() {
                if !b[k].is_zero() {
                    v[k] = E::mul_sub(&v[k], &bp, &vp, &b[k])?;
                }
            }
        } else {
            for k in 0..v.len() {
                v[k] = E::mul_sub(&v[k], &bp, &vp, &b[k])?;
            }
            normalize(&mut v);
        }
    }
    normalize(&mut v);
    Some(v)
}

fn insert<E: Entry>(
    basis: &mut Vec<Vec<E>>,
    pivots: &mut Vec<usize>,
    len: usize,
    r: Vec<E>,
) -> Push {
    match r[..len].iter().position(|x| !x.is_zero()) {
        Some(p) => {
            basis.push(r);
            pivots.push(p);
            Push::Independent
        }
        None => Push::Dependent(r[len..].iter().map(Entry::to_big).collect()),
    }
}

fn widen<E: Entry>(v: &[i64], len: usize, tags: usize, tag: Option<usize>) -> Vec<E> {
    let mut out: Vec<E> = v.iter().map(|&x| E::from_i64(x)).collect();
    out.resize(len + tags, E::zero());
    if let Some(t) = tag {
        out[len + t] = E::from_i64(1);
    }
    out
}

impl IncrementalRank {
    /// Empty basis for vectors of length `len`.
    pub fn new(len: usize) -> Self {
        Self::with_tags(len, 0)
    }

    /// Empty basis for vectors of length `len` carrying `tags` tag slots.
    pub fn with_tags(len: usize, tags: usize) -> Self {
        IncrementalRank {
            len,
            tags,
            pivots: Vec::new(),
            basis: Basis::Small(Vec::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `v` with tag slot `tag` set to one. Dependent vectors leave the
    /// basis unchanged.
    pub fn push_tagged(&mut self, v: &[i64], tag: Option<usize>) -> Push {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        assert!(tag.is_none_or(|t| t < self.tags), "tag out of range");
        if let Basis::Small(basis) = &mut self.basis {
            if let Some(r) = reduce(basis, &self.pivots, widen(v, self.len, self.tags, tag)) {
                return insert(basis, &mut self.pivots, self.len, r);
            }
            let big = basis
                .iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            self.basis = Basis::Big(big);
        }
        let Basis::Big(basis) = &mut self.basis else {
            unreachable!("small basis handled above")
        };
        let v = widen(v, self.len, self.tags, tag);
        let r = reduce(basis, &self.pivots, v).expect("bigint arithmetic cannot overflow");
        insert(basis, &mut self.pivots, self.len, r)
    }

    /// Adds `v`; returns whether it was independent of the current basis.
    pub fn push(&mut self, v: &[i64]) -> bool {
        self.push_tagged(v, None) == Push::Independent
    }

    /// Adds the 0/1 vector with ones at `rows`.
    pub fn push_indicator(&mut self, rows: &[usize]) -> bool {
        let mut v = vec![0i64; self.len];
        for &r in rows {
            v[r] = 1;
        }
        self.push(&v)
    }

    /// Marker for the current state, to pass to [`IncrementalRank::rollback`].
    pub fn checkpoint(&self) -> usize {
        self.pivots.len()
    }

    /// Forget every vector added after `mark`.
    pub fn rollback(&mut self, mark: usize) {
        self.pivots.truncate(mark);
        match &mut self.basis {
            Basis::Small(b) => b.truncate(mark),
            Basis::Big(b) => b.truncate(mark),
        }
    }

    #[cfg(test)]
    fn is_big(&self) -> bool {
        matches!(self.basis, Basis::Big(_))
    }
}

/// Rank of an integer matrix given by its columns, by fraction-free
/// elimination. Independent of the field routine on [`Matrix`].
pub fn integer_rank(columns: &[Vec<i64>]) -> usize {
    let Some(first) = columns.first() else {
        return 0;
    };
    let mut inc = IncrementalRank::new(first.len());
    for c in columns {
        inc.push(c);
    }
    inc.rank()
}

/// A nonzero integer vector `x` with `sum_j x_j * columns[j] = 0`, if the
/// columns are dependent.
pub fn integer_kernel_vector(len: usize, columns: &[Vec<i64>]) -> Option<Vec<BigInt>> {
    let mut inc = IncrementalRank::with_tags(len, columns.len());
    for (j, c) in columns.iter().enumerate() {
        if let Push::Dependent(rel) = inc.push_tagged(c, Some(j)) {
            return Some(rel);
        }
    }
    None
}

/// Unique rational solution of `sum_j x_j * columns[j] = b` by fraction-free
/// elimination; `None` if inconsistent, an error if the columns are dependent.
pub fn integer_solve(
    len: usize,
    columns: &[Vec<i64>],
    b: &[i64],
) -> Result<Option<Vec<Rational>>, LinalgError> {
    if b.len() != len {
        return Err(LinalgError::VectorLength {
            expected: len,
            got: b.len(),
        });
    }
    let m = columns.len();
    let mut inc = IncrementalRank::with_tags(len, m + 1);
    for (j, c) in columns.iter().enumerate() {
        if c.len() != len {
            return Err(LinalgError::VectorLength {
                expected: len,
                got: c.len(),
            });
        }
        if inc.push_tagged(c, Some(j)) != Push::Independent {
            return Err(LinalgError::RankDeficient {
                rank: inc.rank(),
                cols: m,
            });
        }
    }
    match inc.push_tagged(b, Some(m)) {
        Push::Independent => Ok(None),
        Push::Dependent(rel) => {
            // rel[m] * b + sum_j rel[j] * c_j = 0
            let denom = -rel[m].clone();
            Ok(Some(
                rel[..m]
                    .iter()
                    .map(|r| Rational::new(r.clone(), denom.clone()))
                    .collect(),
            ))
        }
    }
}
