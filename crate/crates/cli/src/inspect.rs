use std::fmt::Write;

use pmxml_core::model::{
    AttachmentPayload, Body, Document, Matrix, ObjectNode, PropertyData, PropertyPayload, Tuple,
    TupleItems, Value, Vector,
};

pub fn summary(doc: &Document) -> String {
    let mut out = String::new();
    match &doc.body {
        Body::Object(obj) => {
            let _ = writeln!(out, "type: {}", doc.type_name);
            if let Some(v) = &doc.version {
                let _ = writeln!(out, "version: {v}");
            }
            object(&mut out, obj, 0);
        }
        Body::Data(data) => {
            let _ = writeln!(out, "data: {}; {}", doc.type_name, payload_data(&data.data));
            if let Some(v) = &doc.version {
                let _ = writeln!(out, "version: {v}");
            }
        }
    }
    out
}

fn object(out: &mut String, obj: &ObjectNode, indent: usize) {
    let pad = "  ".repeat(indent);
    if let Some(n) = &obj.name {
        let _ = writeln!(out, "{pad}name: {n}");
    }
    if let Some(d) = &obj.description {
        let _ = writeln!(out, "{pad}description: {}", d.trim());
    }
    let _ = writeln!(out, "{pad}properties: {}", obj.properties.len());
    for p in &obj.properties {
        let _ = writeln!(out, "{pad}  {}: {}", p.name, payload(&p.payload));
    }
    if !obj.attachments.is_empty() {
        let _ = writeln!(out, "{pad}attachments: {}", obj.attachments.len());
        for a in &obj.attachments {
            let shape = match &a.payload {
                AttachmentPayload::Scalar { text, .. } => format!("scalar {}", abbreviate(text)),
                AttachmentPayload::Complex { value: v, .. } => value(v),
                AttachmentPayload::Text(t) => format!("text ({} chars)", t.chars().count()),
            };
            let _ = writeln!(out, "{pad}  {}: {shape}", a.name);
        }
    }
}

fn plural(n: usize, word: &str) -> String {
    match (n, word.strip_suffix('y')) {
        (1, _) => format!("{n} {word}"),
        (_, Some(stem)) => format!("{n} {stem}ies"),
        (_, None) => format!("{n} {word}s"),
    }
}

fn abbreviate(s: &str) -> String {
    let s = s.trim();
    if s.chars().count() > 40 {
        format!("{}…", s.chars().take(40).collect::<String>())
    } else {
        s.to_owned()
    }
}

fn payload(p: &PropertyPayload) -> String {
    match p {
        PropertyPayload::Undefined => "undefined".into(),
        PropertyPayload::Data { data, .. } => payload_data(data),
        PropertyPayload::Text(t) => format!("text ({} chars)", t.chars().count()),
        PropertyPayload::Subobjects(objs) => plural(objs.len(), "subobject"),
    }
}

fn payload_data(d: &PropertyData) -> String {
    match d {
        PropertyData::Scalar(s) => format!("scalar {}", abbreviate(s)),
        PropertyData::Value(v) => value(v),
        PropertyData::ObjectArray(objs) => format!("array of {}", plural(objs.len(), "object")),
    }
}

fn value(v: &Value) -> String {
    match v {
        Value::Vector(v) => vector(v),
        Value::Matrix(m) => matrix(m),
        Value::Tuple(t) => tuple(t),
        Value::Ref(r) => match r.id {
            Some(id) => format!("reference to {id}"),
            None => "reference".into(),
        },
    }
}

fn vector(v: &Vector) -> String {
    match v {
        Vector::Dense(raw) => format!("vector {} dense", raw.split_ascii_whitespace().count()),
        Vector::Sparse { dim, .. } => match dim {
            Some(d) => format!("vector {d} sparse"),
            None => "vector sparse".into(),
        },
        Vector::Tuples { entries, .. } => format!("vector of {}", plural(entries.len(), "tuple")),
    }
}

fn row_width(v: &Vector) -> Option<u64> {
    match v {
        Vector::Dense(raw) => Some(raw.split_ascii_whitespace().count() as u64),
        Vector::Sparse { dim, .. } => *dim,
        Vector::Tuples { .. } => None,
    }
}

fn width_of<'a>(rows: impl Iterator<Item = &'a Vector>) -> String {
    let widths: Vec<Option<u64>> = rows.map(row_width).collect();
    match widths.first() {
        Some(Some(w)) if widths.iter().all(|x| *x == Some(*w)) => w.to_string(),
        None => "0".into(),
        _ => "?".into(),
    }
}

fn matrix(m: &Matrix) -> String {
    match m {
        Matrix::Dense { rows, .. } if rows.is_empty() && m_cols(m).is_none() => "matrix 0×0".into(),
        Matrix::Dense { cols, rows } => {
            let width = cols.map_or_else(|| width_of(rows.iter()), |c| c.to_string());
            let kind = if rows.iter().any(|r| matches!(r, Vector::Sparse { .. })) {
                "sparse"
            } else {
                "dense"
            };
            format!("matrix {}×{width} {kind}", rows.len())
        }
        Matrix::Sparse { dim, rows } => {
            format!("matrix {dim}×{} sparse", width_of(rows.iter().map(|r| &r.row)))
        }
        Matrix::Nested(ms) if ms.len() == 1 => "matrix of 1 matrix".into(),
        Matrix::Nested(ms) => format!("matrix of {} matrices", ms.len()),
        Matrix::Tuples(ts) => format!("matrix of {}", plural(ts.len(), "tuple")),
    }
}

fn m_cols(m: &Matrix) -> Option<u64> {
    match m {
        Matrix::Dense { cols, .. } => *cols,
        _ => None,
    }
}

fn tuple(t: &Tuple) -> String {
    match &t.items {
        TupleItems::Text(raw) => format!("tuple of {}", plural(raw.split_ascii_whitespace().count(), "entry")),
        TupleItems::Items(items) => format!("tuple of {}", plural(items.len(), "item")),
    }
}
