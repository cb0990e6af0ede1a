//! Exact interpretation of file contents: rationals, homogeneous
//! coordinates, incidences, quadratic extensions and polynomials.
//!
//! This is the only layer that parses scalar tokens.

mod geometry;
mod polynomial;
mod quad;
mod rational;

use thiserror::Error;

use crate::codec::DenseError;
use crate::model::ModelError;

pub use geometry::{
    check_counts, check_triangulation, dehomogenize, incidence_check, pairing, parse_row,
    HomPoint, IncidenceReport, IneqVector,
};
pub use polynomial::{decode_polynomial, render_polynomial, Polynomial, Term};
pub use quad::{quad_approx, quad_from_tuple, quad_sign, QuadExt};
pub use rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("{0:?} is not a rational number")]
    Parse(String),
    #[error("{0:?} has a zero denominator")]
    ZeroDenominator(String),
    #[error("point has homogenizing coordinate 0")]
    PointAtInfinity,
    #[error("lengths differ: {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("radicand {0} is negative")]
    NegativeRadicand(Rational),
    #[error("unexpected shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dense(#[from] DenseError),
}
