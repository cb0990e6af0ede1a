//! Inputs shared by the benchmarks.

use pmxml_core::model::{Body, Document, Matrix, ObjectNode, Property, SparseEntry, Value, Vector};

pub const SQUARE_XML: &str = include_str!("../../testkit/fixtures/square.xml");
pub const POLYNOMIAL_XML: &str = include_str!("../../testkit/fixtures/polynomial.xml");

/// The unit cube of dimension `d`: `2^d` dense vertex rows and `2d` sparse
/// facet rows, in homogeneous coordinates.
pub fn cube(d: usize) -> Document {
    let vertices = (0..1u64 << d)
        .map(|bits| {
            let coords: Vec<&str> = (0..d)
                .map(|i| if bits >> i & 1 == 1 { "1" } else { "0" })
                .collect();
            Vector::Dense(format!("1 {}", coords.join(" ")))
        })
        .collect();
    let facets = (0..d as u64)
        .flat_map(|i| {
            let lower = vec![SparseEntry::new(i + 1, "1")];
            let upper = vec![SparseEntry::new(0, "1"), SparseEntry::new(i + 1, "-1")];
            [lower, upper]
        })
        .map(|entries| Vector::Sparse { dim: None, entries })
        .collect();
    let cols = Some(d as u64 + 1);
    let mut obj = ObjectNode {
        name: Some(format!("cube{d}")),
        ..ObjectNode::default()
    };
    obj.properties = vec![
        Property::value("VERTICES", Value::Matrix(Matrix::Dense { cols, rows: vertices })),
        Property::value("FACETS", Value::Matrix(Matrix::Dense { cols, rows: facets })),
        Property::scalar("N_VERTICES", (1u64 << d).to_string()),
        Property::scalar("N_FACETS", (2 * d).to_string()),
    ];
    Document {
        type_name: "polytope::Polytope<Rational>".into(),
        version: Some("3.0".into()),
        tm: None,
        pis: Vec::new(),
        body: Body::Object(obj),
    }
}
