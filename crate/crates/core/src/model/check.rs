use std::collections::HashSet;

use super::{
    collect_ids, AttachmentPayload, Body, Document, Matrix, ModelError, ObjectNode, PropertyData,
    PropertyPayload, SparseEntry, SparseRow, Tuple, TupleItem, TupleItems, Value, Vector,
};

const SIMPLE_NAME: &str = "[a-zA-Z][a-zA-Z_0-9]*";
const QUALIFIED_TYPE: &str = "[a-zA-Z][a-zA-Z_0-9]*::.*";
const VERSION: &str = r"[\d.]+";
const HEX: &str = "hexBinary";

pub(crate) fn is_simple_name(s: &str) -> bool {
    let mut bytes = s.bytes();
    bytes.next().is_some_and(|b| b.is_ascii_alphabetic())
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn is_qualified_type(s: &str) -> bool {
    s.split_once("::")
        .is_some_and(|(head, tail)| is_simple_name(head) && !tail.contains(['\n', '\r']))
}

fn is_version(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit() || b == b'.')
}

fn is_hex(s: &str) -> bool {
    s.len().is_multiple_of(2) && s.bytes().all(|b| b.is_ascii_hexdigit())
}

fn bad(what: &'static str, value: &str, pattern: &'static str) -> ModelError {
    ModelError::BadName {
        what,
        value: value.to_owned(),
        pattern,
    }
}

/// Checks every invariant of the model on `doc`.
pub fn check_document(doc: &Document) -> Result<(), ModelError> {
    if matches!(doc.body, Body::Object(_)) && !is_qualified_type(&doc.type_name) {
        return Err(bad("object type", &doc.type_name, QUALIFIED_TYPE));
    }
    if let Some(v) = &doc.version {
        if !is_version(v) {
            return Err(bad("version", v, VERSION));
        }
    }
    if let Some(tm) = &doc.tm {
        if !is_hex(tm) {
            return Err(bad("tm", tm, HEX));
        }
    }
    match &doc.body {
        Body::Object(obj) => {
            if obj.type_name.is_some() {
                return Err(ModelError::TopObjectType);
            }
            check_object(obj)
        }
        Body::Data(data) => check_data(&data.data),
    }
}

fn check_object(obj: &ObjectNode) -> Result<(), ModelError> {
    for p in &obj.properties {
        if !is_simple_name(&p.name) {
            return Err(bad("property name", &p.name, SIMPLE_NAME));
        }
        match &p.payload {
            PropertyPayload::Undefined | PropertyPayload::Text(_) => {}
            PropertyPayload::Data { data, .. } => check_data(data)?,
            PropertyPayload::Subobjects(objs) => {
                if objs.is_empty() {
                    return Err(ModelError::EmptyContainer("subobject list"));
                }
                objs.iter().try_for_each(check_object)?;
            }
        }
    }
    let mut names = HashSet::new();
    for a in &obj.attachments {
        if !is_simple_name(&a.name) {
            return Err(bad("attachment name", &a.name, SIMPLE_NAME));
        }
        if !names.insert(a.name.as_str()) {
            return Err(ModelError::DuplicateAttachmentName(a.name.clone()));
        }
        if let AttachmentPayload::Complex { value, .. } = &a.payload {
            if matches!(value, Value::Ref(_)) {
                return Err(ModelError::ReferenceInAttachment);
            }
            check_value(value)?;
        }
    }
    Ok(())
}

fn check_data(data: &PropertyData) -> Result<(), ModelError> {
    match data {
        PropertyData::Scalar(_) => Ok(()),
        PropertyData::Value(v) => check_value(v),
        PropertyData::ObjectArray(objs) => {
            if objs.is_empty() {
                return Err(ModelError::EmptyContainer("object array"));
            }
            objs.iter().try_for_each(check_object)
        }
    }
}

/// Structural invariants of one value tree, including id uniqueness.
pub(crate) fn check_value(v: &Value) -> Result<(), ModelError> {
    collect_ids(v)?;
    match v {
        Value::Vector(vec) => check_vector(vec),
        Value::Matrix(m) => check_matrix(m),
        Value::Tuple(t) => check_tuple(t),
        Value::Ref(_) => Ok(()),
    }
}

fn check_increasing(indices: impl Iterator<Item = u64>, dim: Option<u64>) -> Result<(), ModelError> {
    let mut previous: Option<u64> = None;
    for index in indices {
        if let Some(prev) = previous {
            if index == prev {
                return Err(ModelError::DuplicateIndex { index });
            }
            if index < prev {
                return Err(ModelError::UnsortedIndex {
                    previous: prev,
                    index,
                });
            }
        }
        if let Some(dim) = dim {
            if index >= dim {
                return Err(ModelError::IndexOutOfRange { index, dim });
            }
        }
        previous = Some(index);
    }
    Ok(())
}

pub(crate) fn check_sparse_entries(entries: &[SparseEntry], dim: Option<u64>) -> Result<(), ModelError> {
    check_increasing(entries.iter().map(|e| e.index), dim)
}

fn check_vector(v: &Vector) -> Result<(), ModelError> {
    match v {
        Vector::Dense(_) => Ok(()),
        Vector::Sparse { dim, entries } => {
            if dim.is_none() && entries.is_empty() {
                return Err(ModelError::AmbiguousEmptyVector);
            }
            check_sparse_entries(entries, *dim)
        }
        Vector::Tuples { entries, .. } => {
            if entries.is_empty() {
                return Err(ModelError::EmptyContainer("tuple vector"));
            }
            entries.iter().try_for_each(|e| check_tuple(&e.tuple))
        }
    }
}

fn check_matrix(m: &Matrix) -> Result<(), ModelError> {
    match m {
        Matrix::Dense { cols, rows } => {
            rows.iter().try_for_each(check_vector)?;
            if let Some(cols) = *cols {
                check_columns(cols, rows)?;
            }
            Ok(())
        }
        Matrix::Sparse { dim, rows } => {
            check_increasing(rows.iter().map(|r: &SparseRow| r.index), Some(*dim))?;
            rows.iter().try_for_each(|r| check_vector(&r.row))
        }
        Matrix::Nested(ms) => {
            if ms.is_empty() {
                return Err(ModelError::EmptyContainer("matrix of matrices"));
            }
            ms.iter().try_for_each(check_matrix)
        }
        Matrix::Tuples(ts) => {
            if ts.is_empty() {
                return Err(ModelError::EmptyContainer("matrix of tuples"));
            }
            ts.iter().try_for_each(check_tuple)
        }
    }
}

/// With an explicit column count, uniform dense rows must agree with it and
/// sparse rows must fit inside it.
fn check_columns(cols: u64, rows: &[Vector]) -> Result<(), ModelError> {
    let dense_widths: Vec<u64> = rows
        .iter()
        .filter_map(|r| match r {
            Vector::Dense(raw) => Some(raw.split_ascii_whitespace().count() as u64),
            _ => None,
        })
        .collect();
    if let Some(&first) = dense_widths.first() {
        let uniform = dense_widths.iter().all(|&w| w == first);
        if uniform && dense_widths.len() == rows.len() && first != cols {
            return Err(ModelError::ColumnMismatch { cols, found: first });
        }
    }
    for row in rows {
        if let Vector::Sparse { dim, entries } = row {
            if let Some(d) = *dim {
                if d != cols {
                    return Err(ModelError::ColumnMismatch { cols, found: d });
                }
            }
            check_sparse_entries(entries, Some(cols))?;
        }
    }
    Ok(())
}

fn check_tuple(t: &Tuple) -> Result<(), ModelError> {
    match &t.items {
        TupleItems::Text(_) => Ok(()),
        TupleItems::Items(items) => {
            if items.is_empty() {
                return Err(ModelError::EmptyContainer("tuple item list"));
            }
            for item in items {
                match item {
                    TupleItem::Vector(v) => check_vector(v)?,
                    TupleItem::Matrix(m) => check_matrix(m)?,
                    TupleItem::Tuple(t) => check_tuple(t)?,
                    TupleItem::Ref(_) | TupleItem::Element(_) => {}
                }
            }
            Ok(())
        }
    }
}
