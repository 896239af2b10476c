//! Exact effective-resistance toolkit for straight and bent linear 2-trees.
//!
//! The crate computes resistance distances three independent ways and checks
//! that they agree exactly:
//!
//! * [`engine::reduce_straight`] runs the Δ–Y / series / parallel reduction
//!   schedule on a straight linear 2-tree and records every step in a
//!   [`ReductionTrace`].
//! * [`engine::resistance_det`] takes a ratio of Laplacian minors computed
//!   with fraction-free (Bareiss) elimination.
//! * [`closed_form`] evaluates the Fibonacci/Lucas formulas directly.
//!
//! Graph containers, the Laplacian and the reduction engine are generic over
//! [`Scalar`], so the same code runs on exact rationals and on `f64`. The
//! aliases below pin the common instantiations.

pub mod closed_form;
pub mod conjecture;
pub mod engine;
mod error;
pub mod fibonacci;
pub mod graph;
pub mod identities;
pub mod io;
pub mod ranking;
mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use engine::{Method, ReductionTrace, ResistanceReport, StepKind, TraceStep};
pub use graph::{Edge, LaplacianMatrix, Vertex, WeightedGraph};

/// Arbitrary-precision integer.
pub type BigInt = num_bigint::BigInt;

/// Normalized ratio of two arbitrary-precision integers; the value type for
/// every exact resistance.
pub type Rational = num_rational::BigRational;

/// Graph with exact rational resistances.
pub type ExactGraph = WeightedGraph<Rational>;

/// Graph with double-precision resistances.
pub type FloatGraph = WeightedGraph<f64>;

/// Reduction trace over exact rationals.
pub type ExactTrace = ReductionTrace<Rational>;

/// Exact resistance report.
pub type ExactReport = ResistanceReport<Rational>;

/// Build an exact rational from a numerator/denominator pair of machine ints.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
