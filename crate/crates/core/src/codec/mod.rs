//! Conversion between [`XmlTree`](crate::infoset::XmlTree) and
//! [`Document`](crate::model::Document), dense/sparse helpers and JSON export.
//!
//! Scalars stay strings all the way through; nothing here parses numbers.

mod decode;
mod dense;
mod encode;
mod json;

use thiserror::Error;

use crate::model::ModelError;
use crate::schema::{SchemaInternalError, Violation};

pub use decode::{decode, DecodeOptions};
pub use dense::{
    densify_matrix, densify_vector, sparsify_vector, tokenize_dense, DenseError, DenseMatrix,
    DenseVector,
};
pub use encode::encode;
pub use json::{to_json, to_json_value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("schema violation: {}", first_violation(.0))]
    SchemaViolation(Vec<Violation>),
    #[error(transparent)]
    Model(#[from] ModelError),
    /// Only reachable with validation turned off.
    #[error("unexpected structure at <{element}>: {message}")]
    Structure { element: String, message: String },
    #[error(transparent)]
    Schema(#[from] SchemaInternalError),
}

fn first_violation(vs: &[Violation]) -> String {
    vs.first().map(ToString::to_string).unwrap_or_default()
}
