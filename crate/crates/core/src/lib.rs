//! Vertices of Birkhoff polytopes of polystochastic tensors.
//!
//! A `d`-dimensional tensor of order `n` is polystochastic when it is
//! nonnegative and every line sums to one. This crate certifies which such
//! tensors are vertices of the polytope they live in, enumerates vertex
//! classes for small `(n, d)`, and builds vertices from products and
//! symmetric constructions. All certification runs in exact rational
//! arithmetic.
//!
//! The tensor and matrix types are generic over their scalar. Structural
//! operations accept any [`Scalar`]; linear algebra requires an exact
//! [`Field`]. The crate-root aliases pick the rational instantiation used
//! everywhere certification is involved.

pub mod constructions;
pub mod enumerate;
pub mod equivalence;
pub mod io;
pub mod known;
pub mod linalg;
pub mod scalar;
pub mod stochastic;
pub mod tensor;
pub mod vertexcert;

pub use equivalence::{are_equivalent, automorphism_order, canonical_form, EquivalenceTransform};
pub use linalg::Matrix;
pub use scalar::{Field, Rational, Scalar};
pub use stochastic::{is_polystochastic, permanent, support, SupportSet};
pub use tensor::{Index, PlaneSpec, Tensor};
pub use vertexcert::{certify, Verdict, VertexCertificate};

/// Exact tensor: the carrier for polystochastic tensors and zero-sum witnesses.
pub type ExactTensor = Tensor<Rational>;

/// Floating-point tensor, for display and interop; never certified.
pub type FloatTensor = Tensor<f64>;

/// Exact matrix used for incidence systems.
pub type RationalMatrix = Matrix<Rational>;
