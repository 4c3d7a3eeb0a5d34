//! Deciding whether a support is the support of a vertex.
//!
//! A set `S ⊆ I_n^d` carries a vertex iff the incidence matrix `L` of lines
//! against members of `S` has full column rank and `Lx = 1` has a strictly
//! positive solution. Two independent routes decide this:
//!
//! * [`Route::Incidence`] eliminates `L` itself over the rationals.
//! * [`Route::Corner`] uses that a zero-sum tensor is fixed by its values on
//!   the order `n-1` subtensor avoiding every hyperplane through an anchor
//!   `β`: with `k` the number of positions where `α` agrees with `β`,
//!   `a_α = (-1)^k Σ a_γ` over the `γ` of that subtensor that agree with `α`
//!   wherever `α` differs from `β`. Requiring the entries outside `S` to
//!   vanish gives a system in `(n-1)^d` unknowns, solved by fraction-free
//!   integer elimination. It stays small when `S` is large, which is where
//!   `L` gets big.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{integer_kernel_vector, integer_solve, LinalgError, Matrix};
use crate::scalar::{int, Rational};
use crate::stochastic::{check_c0_c1, is_polystochastic, support, SupportSet};
use crate::tensor::{cell_count, coords_of, offset_of, Index, Lines, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("support is empty")]
    EmptySupport,
    #[error("tensor is not polystochastic")]
    NotPolystochastic,
    #[error("anchor {0} does not fit the support's index set")]
    BadAnchor(Index),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `n^d - (n-1)^d`, the largest support a vertex can have.
pub fn support_bound(dim: usize, order: usize) -> usize {
    let all = cell_count(dim, order).expect("index set too large");
    let inner = cell_count(dim, order.saturating_sub(1)).expect("index set too large");
    all - inner
}

/// Lines-by-members 0/1 matrix. Rows follow [`Lines`] order (free axis
/// ascending, then base index row-major); columns follow the support order.
#[derive(Clone, Debug)]
pub struct IncidenceMatrix {
    support: SupportSet,
    matrix: Matrix<Rational>,
}

impl IncidenceMatrix {
    pub fn build(s: &SupportSet) -> Result<Self, CertError> {
        if s.is_empty() {
            return Err(CertError::EmptySupport);
        }
        let lines = Lines::new(s.dim(), s.order());
        let mut matrix = Matrix::zeros(lines.len(), s.len());
        for (j, &cell) in s.offsets().iter().enumerate() {
            for &line in lines.through(cell) {
                matrix.set(line, j, Rational::one());
            }
        }
        Ok(IncidenceMatrix {
            support: s.clone(),
            matrix,
        })
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

pub fn build_incidence(s: &SupportSet) -> Result<IncidenceMatrix, CertError> {
    IncidenceMatrix::build(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Vertex,
    RankDeficient,
    Infeasible,
    NotStrictlyPositive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Incidence,
    Corner,
}

/// Why a verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Solved,
    /// Larger than `n^d - (n-1)^d`; refuted without elimination.
    ExceedsBound { size: usize, bound: usize },
    /// Fails (C0) or (C1); refuted without elimination.
    LineConditions,
    DependentColumns,
    Inconsistent,
    /// The unique solution is not positive at this member position.
    NonPositive { member: usize },
}

/// Outcome of certifying a support.
///
/// `tensor` is present iff the verdict is [`Verdict::Vertex`]. `witness`
/// holds a kernel vector (values on the support members of a nonzero
/// zero-sum tensor) for [`Verdict::RankDeficient`] and the offending unique
/// solution for [`Verdict::NotStrictlyPositive`].
#[derive(Clone, Debug)]
pub struct VertexCertificate {
    pub verdict: Verdict,
    pub reason: Reason,
    pub route: Option<Route>,
    pub support: SupportSet,
    pub tensor: Option<Tensor<Rational>>,
    pub witness: Option<Vec<Rational>>,
}

impl VertexCertificate {
    pub fn is_vertex(&self) -> bool {
        self.verdict == Verdict::Vertex
    }

    /// The witness spread back onto the full index set.
    pub fn witness_tensor(&self) -> Option<Tensor<Rational>> {
        self.witness.as_ref().map(|w| self.support.scatter(w))
    }

    fn refuted(s: &SupportSet, verdict: Verdict, reason: Reason, route: Option<Route>) -> Self {
        VertexCertificate {
            verdict,
            reason,
            route,
            support: s.clone(),
            tensor: None,
            witness: None,
        }
    }
}

/// Result of certifying a generic incidence system `Lx = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceOutcome {
    pub verdict: Verdict,
    pub reason: Reason,
    /// The unique solution when the columns are independent and it exists.
    pub solution: Option<Vec<Rational>>,
    /// A kernel vector when the columns are dependent.
    pub kernel: Option<Vec<Rational>>,
}

/// Decide whether `l` (any 0/1 incidence matrix, e.g. of a hypergraph) has
/// independent columns and a strictly positive solution of `lx = 1`.
pub fn certify_incidence(l: &Matrix<Rational>) -> IncidenceOutcome {
    if let Some(v) = l.kernel_basis().into_iter().next() {
        return IncidenceOutcome {
            verdict: Verdict::RankDeficient,
            reason: Reason::DependentColumns,
            solution: None,
            kernel: Some(v),
        };
    }
    let ones = vec![Rational::one(); l.rows()];
    let x = l
        .solve_consistent(&ones)
        .expect("columns are independent once the kernel is trivial");
    let Some(x) = x else {
        return IncidenceOutcome {
            verdict: Verdict::Infeasible,
            reason: Reason::Inconsistent,
            solution: None,
            kernel: None,
        };
    };
    let (verdict, reason) = match x.iter().position(|v| !v.is_positive()) {
        Some(member) => (Verdict::NotStrictlyPositive, Reason::NonPositive { member }),
        None => (Verdict::Vertex, Reason::Solved),
    };
    IncidenceOutcome {
        verdict,
        reason,
        solution: Some(x),
        kernel: None,
    }
}

/// Coordinates of the zero-sum recovery from the subtensor avoiding an anchor.
#[derive(Clone, Debug)]
pub struct CornerSystem {
    dim: usize,
    order: usize,
    anchor: Vec<usize>,
}

impl CornerSystem {
    pub fn new(dim: usize, order: usize, anchor: &Index) -> Result<Self, CertError> {
        if order < 2 || anchor.dim() != dim || anchor.coords().iter().any(|&c| c >= order) {
            return Err(CertError::BadAnchor(anchor.clone()));
        }
        Ok(CornerSystem {
            dim,
            order,
            anchor: anchor.coords().to_vec(),
        })
    }

    /// Anchor `(n-1, ..., n-1)`.
    pub fn standard(dim: usize, order: usize) -> Result<Self, CertError> {
        Self::new(dim, order, &Index(vec![order.saturating_sub(1); dim]))
    }

    /// `(n-1)^d`, the number of free values.
    pub fn unknowns(&self) -> usize {
        cell_count(self.dim, self.order - 1).expect("index set too large")
    }

    /// Offset in `I_n^d` of unknown `j`.
    pub fn cell_of_unknown(&self, j: usize) -> usize {
        let local = coords_of(j, self.dim, self.order - 1);
        let coords: Vec<usize> = local
            .iter()
            .zip(&self.anchor)
            .map(|(&c, &b)| if c >= b { c + 1 } else { c })
            .collect();
        offset_of(&coords, self.order)
    }

    /// Sign and unknowns in the expansion of the entry at `cell`.
    pub fn expansion(&self, cell: usize) -> (i64, Vec<usize>) {
        let alpha = coords_of(cell, self.dim, self.order);
        let m = self.order - 1;
        let mut fixed = vec![None; self.dim];
        let mut k = 0;
        for i in 0..self.dim {
            if alpha[i] == self.anchor[i] {
                k += 1;
            } else {
                let c = alpha[i];
                fixed[i] = Some(if c > self.anchor[i] { c - 1 } else { c });
            }
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let count = m.pow(k as u32);
        let mut out = Vec::with_capacity(count);
        let mut local = vec![0usize; self.dim];
        for mut r in 0..count {
            for i in (0..self.dim).rev() {
                local[i] = match fixed[i] {
                    Some(c) => c,
                    None => {
                        let c = r % m;
                        r /= m;
                        c
                    }
                };
            }
            out.push(offset_of(&local, m));
        }
        (sign, out)
    }

    /// Columns of the constraint system `entry(α) = 0` for `α ∉ S`.
    fn constraint_columns(&self, s: &SupportSet) -> Vec<Vec<i64>> {
        let total = cell_count(self.dim, self.order).expect("index set too large");
        let outside: Vec<usize> = (0..total).filter(|&c| !s.contains(c)).collect();
        let mut columns = vec![vec![0i64; outside.len()]; self.unknowns()];
        for (row, &cell) in outside.iter().enumerate() {
            let (sign, unknowns) = self.expansion(cell);
            for j in unknowns {
                columns[j][row] += sign;
            }
        }
        columns
    }

    /// Values of the zero-sum tensor with unknowns `w` at each member of `s`.
    fn evaluate(&self, s: &SupportSet, w: &[BigInt]) -> Vec<BigInt> {
        s.offsets()
            .iter()
            .map(|&cell| {
                let (sign, unknowns) = self.expansion(cell);
                let sum: BigInt = unknowns.iter().map(|&j| &w[j]).sum();
                sum * sign
            })
            .collect()
    }

    /// A nonzero zero-sum tensor supported inside `s`, as values on members.
    pub fn zero_sum_in(&self, s: &SupportSet) -> Option<Vec<Rational>> {
        let columns = self.constraint_columns(s);
        let rows = columns.first().map_or(0, Vec::len);
        let w = integer_kernel_vector(rows, &columns)?;
        Some(
            self.evaluate(s, &w)
                .into_iter()
                .map(Rational::from_integer)
                .collect(),
        )
    }
}

/// Certify with the route chosen by size: the incidence route while the
/// incidence matrix is small, the corner route otherwise.
pub fn certify(s: &SupportSet) -> VertexCertificate {
    let rows = s.dim() * s.order().pow(s.dim().saturating_sub(1) as u32);
    let route = if rows * s.len() <= 50_000 {
        Route::Incidence
    } else {
        Route::Corner
    };
    certify_with(s, route)
}

pub fn certify_with(s: &SupportSet, route: Route) -> VertexCertificate {
    let bound = support_bound(s.dim(), s.order());
    if s.len() > bound {
        let mut cert = VertexCertificate::refuted(
            s,
            Verdict::RankDeficient,
            Reason::ExceedsBound {
                size: s.len(),
                bound,
            },
            None,
        );
        cert.witness = find_zero_sum(s).map(|w| w.values_on(s));
        return cert;
    }
    if !check_c0_c1(s) {
        return VertexCertificate::refuted(s, Verdict::Infeasible, Reason::LineConditions, None);
    }
    match route {
        Route::Incidence => certify_by_incidence(s),
        Route::Corner => certify_by_corner(s),
    }
}

fn certify_by_incidence(s: &SupportSet) -> VertexCertificate {
    let l = IncidenceMatrix::build(s).expect("C0 rules out an empty support");
    let outcome = certify_incidence(l.matrix());
    let mut cert = VertexCertificate::refuted(s, outcome.verdict, outcome.reason, Some(Route::Incidence));
    match outcome.verdict {
        Verdict::Vertex => cert.tensor = outcome.solution.map(|x| s.scatter(&x)),
        Verdict::RankDeficient => cert.witness = outcome.kernel,
        Verdict::NotStrictlyPositive => cert.witness = outcome.solution,
        Verdict::Infeasible => {}
    }
    cert
}

fn certify_by_corner(s: &SupportSet) -> VertexCertificate {
    let system = CornerSystem::standard(s.dim(), s.order()).expect("order >= 2 after C0");
    let route = Some(Route::Corner);
    if let Some(w) = system.zero_sum_in(s) {
        let mut cert = VertexCertificate::refuted(s, Verdict::RankDeficient, Reason::DependentColumns, route);
        cert.witness = Some(w);
        return cert;
    }
    // Entries are 1/n plus a zero-sum correction; scaling the correction by
    // n turns "vanish outside S" into C w = -1.
    let columns = system.constraint_columns(s);
    let rows = columns.first().map_or(0, Vec::len);
    let rhs = vec![-1i64; rows];
    let w = match integer_solve(rows, &columns, &rhs) {
        Ok(Some(w)) => w,
        Ok(None) => return VertexCertificate::refuted(s, Verdict::Infeasible, Reason::Inconsistent, route),
        Err(e) => unreachable!("trivial kernel checked above: {e}"),
    };
    let n = int(s.order() as i64);
    let x: Vec<Rational> = s
        .offsets()
        .iter()
        .map(|&cell| {
            let (sign, unknowns) = system.expansion(cell);
            let sum: Rational = unknowns.iter().map(|&j| w[j].clone()).sum();
            (Rational::one() + sum * int(sign)) / n.clone()
        })
        .collect();
    if let Some(member) = x.iter().position(|v| !v.is_positive()) {
        let mut cert = VertexCertificate::refuted(
            s,
            Verdict::NotStrictlyPositive,
            Reason::NonPositive { member },
            route,
        );
        cert.witness = Some(x);
        return cert;
    }
    let tensor = s.scatter(&x);
    debug_assert!(is_polystochastic(&tensor));
    VertexCertificate {
        verdict: Verdict::Vertex,
        reason: Reason::Solved,
        route,
        support: s.clone(),
        tensor: Some(tensor),
        witness: None,
    }
}

/// Nonzero tensor with every line summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSumWitness {
    tensor: Tensor<Rational>,
}

impl ZeroSumWitness {
    /// Checks the line sums and that some entry is nonzero.
    pub fn new(tensor: Tensor<Rational>) -> Option<Self> {
        let nonzero = tensor.entries().iter().any(|v| !v.is_zero());
        let balanced = tensor.line_sums().iter().all(Zero::is_zero);
        (nonzero && balanced).then_some(ZeroSumWitness { tensor })
    }

    pub fn tensor(&self) -> &Tensor<Rational> {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor<Rational> {
        self.tensor
    }

    /// Values at the members of `s`, in support order.
    pub fn values_on(&self, s: &SupportSet) -> Vec<Rational> {
        s.offsets().iter().map(|&o| self.tensor.at(o).clone()).collect()
    }
}

/// A zero-sum tensor supported inside `s`, found through the corner system.
pub fn find_zero_sum(s: &SupportSet) -> Option<ZeroSumWitness> {
    if s.order() < 2 {
        // order 1: the single cell is its own line
        return None;
    }
    let system = CornerSystem::standard(s.dim(), s.order()).expect("order >= 2");
    let values = system.zero_sum_in(s)?;
    let w = ZeroSumWitness::new(s.scatter(&values));
    debug_assert!(w.is_some(), "corner recovery yields a zero-sum tensor");
    w
}

/// Sufficient test: in some direction, `n-1` of the `n` parallel hyperplanes
/// are themselves vertices one dimension down. `false` is inconclusive.
pub fn vertex_by_hyperplanes(t: &Tensor<Rational>) -> Result<bool, CertError> {
    if !is_polystochastic(t) {
        return Err(CertError::NotPolystochastic);
    }
    let n = t.order();
    if t.dim() < 2 {
        return Ok(support(t).len() == 1);
    }
    for axis in 0..t.dim() {
        let mut vertices = 0;
        for value in 0..n {
            let h = t.hyperplane(axis, value).expect("axis and value in range");
            if certify(&support(&h)).is_vertex() {
                vertices += 1;
            }
        }
        if vertices + 1 >= n {
            return Ok(true);
        }
    }
    Ok(false)
}
