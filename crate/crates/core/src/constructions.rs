//! Constructions that produce vertices from smaller ones.
//!
//! Every construction re-certifies its output. A [`ConstructionReport`]
//! keeps the predicted support size next to the certified verdict, so a
//! wrong prediction shows up as data rather than a panic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{ratio, Rational};
use crate::stochastic::{is_permutation_tensor, is_polystochastic, support};
use crate::tensor::{all_indices, Index, Tensor, TensorError};
use crate::vertexcert::{certify, VertexCertificate};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("dimensions differ: {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("orders differ: {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("{0} is not a multidimensional permutation")]
    NotPermutation(&'static str),
    #[error("{0} is not a certified vertex")]
    NotVertex(String),
    #[error("block for {0} is missing")]
    MissingBlock(Index),
    #[error("block for {0} is outside the support")]
    ExtraBlock(Index),
    #[error("dimension {0} is below the minimum {1}")]
    DimensionTooSmall(usize, usize),
    #[error("case analysis matched {matches} cases at counts {counts:?}")]
    CaseAnalysis { counts: [usize; 3], matches: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Which construction produced a tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Kronecker { dim: usize, outer: usize, inner: usize },
    Blocks { dim: usize, outer: usize, inner: usize },
    Dot { left_dim: usize, right_dim: usize, order: usize },
    Symmetric { dim: usize },
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Kronecker { dim, outer, inner } => {
                write!(f, "kronecker d={dim} n={outer}x{inner}")
            }
            Construction::Blocks { dim, outer, inner } => write!(f, "blocks d={dim} n={outer}x{inner}"),
            Construction::Dot {
                left_dim,
                right_dim,
                order,
            } => write!(f, "dot d={left_dim}+{right_dim}-2 n={order}"),
            Construction::Symmetric { dim } => write!(f, "construction1 d={dim}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub construction: Construction,
    pub tensor: Tensor<Rational>,
    /// Support size predicted by counting blocks or cases.
    pub claimed_support: usize,
    /// Support size of `tensor`.
    pub support_size: usize,
    /// Whether the construction predicts a vertex.
    pub predicted_vertex: bool,
    pub certified: VertexCertificate,
}

impl ConstructionReport {
    fn new(construction: Construction, tensor: Tensor<Rational>, claimed: usize, predicted: bool) -> Self {
        let s = support(&tensor);
        let certified = certify(&s);
        ConstructionReport {
            construction,
            claimed_support: claimed,
            support_size: s.len(),
            predicted_vertex: predicted,
            certified,
            tensor,
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.certified.is_vertex()
    }

    /// Prediction and certificate agree, and so do the support sizes.
    pub fn consistent(&self) -> bool {
        self.predicted_vertex == self.is_vertex() && self.claimed_support == self.support_size
    }
}

fn same_dim(a: &Tensor<Rational>, b: &Tensor<Rational>) -> Result<(), ConstructionError> {
    if a.dim() != b.dim() {
        return Err(ConstructionError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

fn require_vertex(t: &Tensor<Rational>, what: &str) -> Result<(), ConstructionError> {
    match certify(&support(t)).tensor {
        Some(x) if x == *t => Ok(()),
        _ => Err(ConstructionError::NotVertex(what.to_string())),
    }
}

/// Entry `(alpha_i * n2 + beta_i)_i` is `a[alpha] * b[beta]`.
pub fn kronecker(a: &Tensor<Rational>, b: &Tensor<Rational>) -> Result<Tensor<Rational>, ConstructionError> {
    same_dim(a, b)?;
    let n2 = b.order();
    let n = a.order() * n2;
    let mut outer = vec![0; a.dim()];
    let mut inner = vec![0; a.dim()];
    Ok(Tensor::from_fn(a.dim(), n, |g| {
        for (i, &x) in g.iter().enumerate() {
            outer[i] = x / n2;
            inner[i] = x % n2;
        }
        a.get(&outer) * b.get(&inner)
    }))
}

/// Kronecker product of a permutation and a vertex, certified.
///
/// The product consists of `n1^(d-1)` copies of `b`, one per one of `a`,
/// so the predicted support size is `n1^(d-1) * N(b)`.
pub fn kronecker_vertex(a: &Tensor<Rational>, b: &Tensor<Rational>) -> Result<ConstructionReport, ConstructionError> {
    same_dim(a, b)?;
    if !is_permutation_tensor(a) {
        return Err(ConstructionError::NotPermutation("left factor"));
    }
    require_vertex(b, "right factor")?;
    let claimed = a.order().pow(a.dim() as u32 - 1) * support(b).len();
    let c = kronecker(a, b)?;
    let kind = Construction::Kronecker {
        dim: a.dim(),
        outer: a.order(),
        inner: b.order(),
    };
    Ok(ConstructionReport::new(kind, c, claimed, true))
}

/// Kronecker-like product where the block at each one of `a` is chosen
/// separately. Keys are the support indices of `a`; every block must be a
/// certified vertex of the same shape.
pub fn block_substitution(
    a: &Tensor<Rational>,
    blocks: &BTreeMap<Index, Tensor<Rational>>,
) -> Result<ConstructionReport, ConstructionError> {
    if !is_permutation_tensor(a) {
        return Err(ConstructionError::NotPermutation("block pattern"));
    }
    let ones: Vec<Index> = support(a).indices();
    for key in blocks.keys() {
        if !ones.contains(key) {
            return Err(ConstructionError::ExtraBlock(key.clone()));
        }
    }
    let mut inner_order = None;
    for key in &ones {
        let b = blocks.get(key).ok_or_else(|| ConstructionError::MissingBlock(key.clone()))?;
        same_dim(a, b)?;
        match inner_order {
            None => inner_order = Some(b.order()),
            Some(n) if n != b.order() => return Err(ConstructionError::OrderMismatch(n, b.order())),
            Some(_) => {}
        }
        require_vertex(b, &format!("block {key}"))?;
    }
    let n2 = inner_order.expect("a permutation has ones");
    let d = a.dim();
    let mut c = Tensor::zeros(d, a.order() * n2);
    let mut claimed = 0;
    for key in &ones {
        let b = &blocks[key];
        claimed += support(b).len();
        for beta in all_indices(d, n2) {
            let g: Vec<usize> = key.coords().iter().zip(&beta).map(|(&x, &y)| x * n2 + y).collect();
            c.set(&g, b.get(&beta).clone());
        }
    }
    let kind = Construction::Blocks {
        dim: d,
        outer: a.order(),
        inner: n2,
    };
    Ok(ConstructionReport::new(kind, c, claimed, true))
}

/// Contracts the last axis of `a` with the first axis of `b`.
pub fn dot_product(a: &Tensor<Rational>, b: &Tensor<Rational>) -> Result<Tensor<Rational>, ConstructionError> {
    if a.order() != b.order() {
        return Err(ConstructionError::OrderMismatch(a.order(), b.order()));
    }
    let n = a.order();
    let (d1, d2) = (a.dim(), b.dim());
    if d1 + d2 < 3 {
        return Err(ConstructionError::DimensionTooSmall(d1 + d2 - 2, 1));
    }
    let mut left = vec![0; d1];
    let mut right = vec![0; d2];
    Ok(Tensor::from_fn(d1 + d2 - 2, n, |g| {
        left[..d1 - 1].copy_from_slice(&g[..d1 - 1]);
        right[1..].copy_from_slice(&g[d1 - 1..]);
        let mut sum = Rational::zero();
        for i in 0..n {
            left[d1 - 1] = i;
            right[0] = i;
            let x = a.get(&left);
            if !x.is_zero() {
                sum += x * b.get(&right);
            }
        }
        sum
    }))
}

/// Dot product of a permutation and a vertex, certified. Predicted support
/// size `n^(d1-2) * N(b)`.
pub fn dot_vertex(a: &Tensor<Rational>, b: &Tensor<Rational>) -> Result<ConstructionReport, ConstructionError> {
    if !is_permutation_tensor(a) {
        return Err(ConstructionError::NotPermutation("left factor"));
    }
    require_vertex(b, "right factor")?;
    let c = dot_product(a, b)?;
    let claimed = a.order().pow(a.dim() as u32 - 2) * support(b).len();
    let kind = Construction::Dot {
        left_dim: a.dim(),
        right_dim: b.dim(),
        order: a.order(),
    };
    Ok(ConstructionReport::new(kind, c, claimed, true))
}

/// The zero-sum tensor of order `n` that agrees with `sub` off the
/// hyperplanes through `anchor`.
///
/// `sub` has order `n - 1`; its coordinate `c` on axis `i` stands for `c`
/// if `c < anchor[i]` and `c + 1` otherwise. Cells are filled in order of
/// how many coordinates they share with the anchor: such a cell is minus
/// the sum of the other cells on its line along a shared axis, all of
/// which share one coordinate fewer.
pub fn zero_sum_extend(
    sub: &Tensor<Rational>,
    anchor: &Index,
    dim: usize,
    order: usize,
) -> Result<Tensor<Rational>, ConstructionError> {
    if sub.dim() != dim || anchor.dim() != dim {
        return Err(ConstructionError::DimensionMismatch(sub.dim(), dim));
    }
    if order < 2 || sub.order() != order - 1 {
        return Err(ConstructionError::OrderMismatch(sub.order(), order.saturating_sub(1)));
    }
    if let Some(&c) = anchor.coords().iter().find(|&&c| c >= order) {
        return Err(TensorError::CoordinateOutOfRange { value: c, order }.into());
    }
    let beta = anchor.coords();
    let mut by_shared: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for alpha in all_indices(dim, order) {
        let k = alpha.iter().zip(beta).filter(|(a, b)| a == b).count();
        by_shared[k].push(alpha);
    }
    let mut out = Tensor::zeros(dim, order);
    for alpha in &by_shared[0] {
        let local: Vec<usize> = alpha.iter().zip(beta).map(|(&a, &b)| if a < b { a } else { a - 1 }).collect();
        out.set(alpha, sub.get(&local).clone());
    }
    for group in &by_shared[1..] {
        for alpha in group {
            let axis = (0..dim).find(|&i| alpha[i] == beta[i]).expect("shares a coordinate");
            let mut other = alpha.clone();
            let mut sum = Rational::zero();
            for v in (0..order).filter(|&v| v != beta[axis]) {
                other[axis] = v;
                sum += out.get(&other);
            }
            out.set(alpha, -sum);
        }
    }
    Ok(out)
}

/// The symmetric order-3 construction: the entry depends only on the
/// counts of zeros, ones and twos in the index and on the parity of `d`.
/// Returns every case value that applies; exactly one should.
pub fn construction1_cases(dim: usize, counts: [usize; 3]) -> Vec<Rational> {
    let [c0, c1, c2] = counts;
    let even = |x: usize| x.is_multiple_of(2);
    let odd = |x: usize| x % 2 == 1;
    let third = ratio(1, 3);
    let two_thirds = ratio(2, 3);
    let zero = Rational::zero();
    let mut hits = Vec::new();
    let mut case = |cond: bool, v: &Rational| {
        if cond {
            hits.push(v.clone());
        }
    };
    case(c0 != 0 && c1 != 0 && c2 != 0, &third);
    if even(dim) {
        case(c0 == 0 && even(c1) && even(c2) && c1 != dim && c2 != dim, &zero);
        case(c0 == 0 && odd(c1) && odd(c2), &two_thirds);
        case(c1 == 0 && even(c0) && even(c2) && c0 != dim && c2 != dim, &two_thirds);
        case(c1 == 0 && odd(c0) && odd(c2), &zero);
        case(c2 == 0 && even(c0) && even(c1) && c0 != dim && c1 != dim, &two_thirds);
        case(c2 == 0 && odd(c0) && odd(c1), &zero);
        case(c1 == dim || c2 == dim, &third);
        case(c0 == dim, &Rational::one());
    } else {
        case(c0 == 0 && c1 != dim && odd(c1) && even(c2), &zero);
        case(c0 == 0 && even(c1) && c2 != dim && odd(c2), &two_thirds);
        case(c1 == 0 && c0 != dim && odd(c0) && even(c2), &two_thirds);
        case(c1 == 0 && even(c0) && c2 != dim && odd(c2), &zero);
        case(c2 == 0 && c0 != dim && odd(c0) && even(c1), &zero);
        case(c2 == 0 && even(c0) && c1 != dim && odd(c1), &two_thirds);
        case(c0 == dim || c1 == dim || c2 == dim, &third);
    }
    hits
}

/// Support size `3^d - 3 * 2^(d-1) + 2` for even `d`, `+ 3` for odd `d`.
pub fn construction1_support(dim: usize) -> usize {
    let d = dim as u32;
    3usize.pow(d) - 3 * 2usize.pow(d - 1) + if dim.is_multiple_of(2) { 2 } else { 3 }
}

/// The tensor of the symmetric construction, after checking that every
/// count triple falls into exactly one case.
pub fn construction1_tensor(dim: usize) -> Result<Tensor<Rational>, ConstructionError> {
    if dim < 2 {
        return Err(ConstructionError::DimensionTooSmall(dim, 2));
    }
    let mut table = BTreeMap::new();
    for c0 in 0..=dim {
        for c1 in 0..=dim - c0 {
            let counts = [c0, c1, dim - c0 - c1];
            let hits = construction1_cases(dim, counts);
            if hits.len() != 1 {
                return Err(ConstructionError::CaseAnalysis {
                    counts,
                    matches: hits.len(),
                });
            }
            table.insert(counts, hits.into_iter().next().expect("one hit"));
        }
    }
    Ok(Tensor::from_fn(dim, 3, |alpha| {
        let mut counts = [0; 3];
        for &x in alpha {
            counts[x] += 1;
        }
        table[&counts].clone()
    }))
}

/// The symmetric construction, certified. Predicted to be a vertex for
/// `d >= 4`.
pub fn construction1(dim: usize) -> Result<ConstructionReport, ConstructionError> {
    let t = construction1_tensor(dim)?;
    debug_assert!(t.is_symmetric() && is_polystochastic(&t));
    Ok(ConstructionReport::new(
        Construction::Symmetric { dim },
        t,
        construction1_support(dim),
        dim >= 4,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known::{cayley_permutation, identity, permutation_matrix, v};
    use crate::scalar::int;
    use crate::vertexcert::CornerSystem;

    #[test]
    fn kronecker_of_identities() {
        let c = kronecker(&identity(2), &identity(3)).unwrap();
        assert_eq!(c, identity(6));
        let one = Tensor::from_fn(3, 1, |_| int(1));
        assert_eq!(kronecker(&one, &v()).unwrap(), v());
    }

    #[test]
    fn kronecker_with_v() {
        let r = kronecker_vertex(&cayley_permutation(3, 2), &v()).unwrap();
        assert_eq!(r.support_size, 4 * 17);
        assert!(r.is_vertex());
        assert!(r.consistent());
    }

    #[test]
    fn dot_with_permutation_matrix_permutes_hyperplanes() {
        let p = permutation_matrix(&[2, 0, 1]);
        let c = dot_product(&p, &v()).unwrap();
        for i in 0..3 {
            assert_eq!(c.hyperplane(0, i).unwrap(), v().hyperplane(0, [2, 0, 1][i]).unwrap());
        }
        let r = dot_vertex(&p, &v()).unwrap();
        assert_eq!(r.support_size, 17);
        assert!(r.consistent());
    }

    #[test]
    fn dot_of_matrices() {
        let a = Tensor::new(2, 2, vec![int(1), int(2), int(3), int(4)]).unwrap();
        let b = Tensor::new(2, 2, vec![int(5), int(6), int(7), int(8)]).unwrap();
        let c = dot_product(&a, &b).unwrap();
        assert_eq!(c.entries(), &[int(19), int(22), int(43), int(50)]);
    }

    #[test]
    fn blocks_equal_kronecker() {
        let a = cayley_permutation(3, 2);
        let blocks: BTreeMap<Index, Tensor<Rational>> = support(&a).indices().into_iter().map(|i| (i, v())).collect();
        let r = block_substitution(&a, &blocks).unwrap();
        assert_eq!(r.tensor, kronecker(&a, &v()).unwrap());
        let mut missing = blocks.clone();
        missing.pop_first();
        assert!(matches!(block_substitution(&a, &missing), Err(ConstructionError::MissingBlock(_))));
        let mut bad = blocks;
        let key = bad.keys().next().unwrap().clone();
        bad.insert(key, Tensor::uniform(3, 3));
        assert!(matches!(block_substitution(&a, &bad), Err(ConstructionError::NotVertex(_))));
    }

    #[test]
    fn zero_sum_extend_matches_corner_formula() {
        let sub = Tensor::from_fn(3, 2, |c| int((c[0] * 4 + c[1] * 2 + c[2]) as i64 - 3));
        for anchor in [vec![0, 0, 0], vec![2, 1, 0]] {
            let anchor = Index::new(anchor);
            let full = zero_sum_extend(&sub, &anchor, 3, 3).unwrap();
            assert!(full.line_sums().iter().all(Zero::is_zero));
            assert_eq!(full.delete_hyperplanes(&anchor).unwrap(), sub);
            let system = CornerSystem::new(3, 3, &anchor).unwrap();
            for cell in 0..27 {
                let (sign, unknowns) = system.expansion(cell);
                let sum: Rational = unknowns
                    .iter()
                    .map(|&j| full.at(system.cell_of_unknown(j)).clone())
                    .sum();
                assert_eq!(full.at(cell), &(sum * int(sign)));
            }
        }
    }

    #[test]
    fn checkerboard() {
        let sub = Tensor::new(2, 1, vec![int(5)]).unwrap();
        let t = zero_sum_extend(&sub, &Index::new(vec![0, 0]), 2, 2).unwrap();
        assert_eq!(t.entries(), &[int(5), int(-5), int(-5), int(5)]);
    }

    #[test]
    fn construction1_small() {
        let r = construction1(2).unwrap();
        let expected = Tensor::new(
            2,
            3,
            vec![
                int(1),
                int(0),
                int(0),
                int(0),
                ratio(1, 3),
                ratio(2, 3),
                int(0),
                ratio(2, 3),
                ratio(1, 3),
            ],
        )
        .unwrap();
        assert_eq!(r.tensor, expected);
        assert!(!r.is_vertex());
        assert!(r.consistent());
        let r = construction1(4).unwrap();
        assert_eq!(r.support_size, 59);
        assert!(r.is_vertex());
    }

    #[test]
    fn case_analysis_is_exhaustive() {
        for d in 2..=12 {
            assert!(construction1_tensor(d).is_ok(), "d={d}");
        }
        assert!(construction1_tensor(1).is_err());
    }
}
