//! Reading, validating, canonically writing and interpreting polymake XML
//! data files.
//!
//! The layers build on each other: [`infoset`] turns bytes into an element
//! tree, [`schema`] checks the tree against the data-file grammar,
//! [`codec`] maps it to the typed [`model`], and [`semantics`] evaluates the
//! mathematical content with exact arithmetic.

pub mod codec;
pub mod infoset;
pub mod model;
pub mod schema;
pub mod semantics;

pub use codec::{decode, encode, to_json, DecodeError, DecodeOptions};
pub use infoset::{read_document, write_document, WellFormednessError, XmlElement, XmlTree};
pub use model::{Document, ModelError, ObjectNode, Property, Value};
pub use schema::{polymake_schema, validate, ValidationReport, Violation, POLYMAKE_NAMESPACE};
pub use semantics::{QuadExt, Rational, SemanticsError};
