use serde_json::{json, Map, Value as Json};

use crate::model::{
    Attachment, AttachmentPayload, Body, Document, Matrix, ObjectNode, Property, PropertyData,
    PropertyPayload, Tuple, TupleItem, TupleItems, Value, Vector,
};

use super::tokenize_dense;

/// Compact JSON text with a fixed key order.
pub fn to_json(doc: &Document) -> String {
    to_json_value(doc).to_string()
}

pub fn to_json_value(doc: &Document) -> Json {
    let mut map = Map::new();
    match &doc.body {
        Body::Object(obj) => {
            map.insert("kind".into(), "object".into());
            map.insert("type".into(), doc.type_name.as_str().into());
            map.insert("name".into(), opt_str(obj.name.as_deref()));
            map.insert("version".into(), opt_str(doc.version.as_deref()));
            object_tail(&mut map, obj);
        }
        Body::Data(data) => {
            map.insert("kind".into(), "data".into());
            map.insert("type".into(), doc.type_name.as_str().into());
            map.insert("version".into(), opt_str(doc.version.as_deref()));
            map.insert("description".into(), opt_str(data.description.as_deref()));
            insert_data(&mut map, &data.data);
            insert_opt(&mut map, "ext", data.ext.as_deref());
        }
    }
    insert_opt(&mut map, "tm", doc.tm.as_deref());
    if !doc.pis.is_empty() {
        let pis = doc
            .pis
            .iter()
            .map(|pi| json!({"target": pi.target, "content": pi.content}))
            .collect();
        map.insert("pis".into(), Json::Array(pis));
    }
    Json::Object(map)
}

fn opt_str(s: Option<&str>) -> Json {
    s.map_or(Json::Null, Into::into)
}

fn insert_opt(map: &mut Map<String, Json>, key: &str, value: Option<&str>) {
    if let Some(v) = value {
        map.insert(key.into(), v.into());
    }
}

/// Description, properties, attachments and the optional extras.
fn object_tail(map: &mut Map<String, Json>, obj: &ObjectNode) {
    map.insert("description".into(), opt_str(obj.description.as_deref()));
    map.insert(
        "properties".into(),
        obj.properties.iter().map(property).collect(),
    );
    map.insert(
        "attachments".into(),
        obj.attachments.iter().map(attachment).collect(),
    );
    insert_opt(map, "ext", obj.ext.as_deref());
    if !obj.credits.is_empty() {
        let credits = obj
            .credits
            .iter()
            .map(|c| json!({"product": c.product, "text": c.text}))
            .collect();
        map.insert("credits".into(), Json::Array(credits));
    }
}

fn subobject(obj: &ObjectNode) -> Json {
    let mut map = Map::new();
    map.insert("kind".into(), "object".into());
    map.insert("type".into(), opt_str(obj.type_name.as_deref()));
    map.insert("name".into(), opt_str(obj.name.as_deref()));
    object_tail(&mut map, obj);
    Json::Object(map)
}

fn property(p: &Property) -> Json {
    let mut map = Map::new();
    map.insert("name".into(), p.name.as_str().into());
    match &p.payload {
        PropertyPayload::Undefined => {
            map.insert("undef".into(), true.into());
        }
        PropertyPayload::Data {
            declared_type,
            data,
        } => {
            insert_opt(&mut map, "type", declared_type.as_deref());
            insert_data(&mut map, data);
        }
        PropertyPayload::Text(t) => {
            map.insert("text".into(), t.as_str().into());
        }
        PropertyPayload::Subobjects(objs) => {
            map.insert("objects".into(), objs.iter().map(subobject).collect());
        }
    }
    insert_opt(&mut map, "ext", p.ext.as_deref());
    Json::Object(map)
}

fn insert_data(map: &mut Map<String, Json>, data: &PropertyData) {
    let (key, v) = match data {
        PropertyData::Scalar(s) => ("value", s.as_str().into()),
        PropertyData::Value(v) => ("data", value(v)),
        PropertyData::ObjectArray(objs) => ("object_array", objs.iter().map(subobject).collect()),
    };
    map.insert(key.into(), v);
}

fn attachment(a: &Attachment) -> Json {
    let mut map = Map::new();
    map.insert("name".into(), a.name.as_str().into());
    match &a.payload {
        AttachmentPayload::Scalar {
            declared_type,
            text,
        } => {
            insert_opt(&mut map, "type", declared_type.as_deref());
            map.insert("value".into(), text.as_str().into());
        }
        AttachmentPayload::Complex {
            declared_type,
            construct,
            value: v,
        } => {
            map.insert("type".into(), declared_type.as_str().into());
            insert_opt(&mut map, "construct", construct.as_deref());
            map.insert("data".into(), value(v));
        }
        AttachmentPayload::Text(t) => {
            map.insert("text".into(), t.as_str().into());
        }
    }
    insert_opt(&mut map, "ext", a.ext.as_deref());
    Json::Object(map)
}

fn value(v: &Value) -> Json {
    match v {
        Value::Vector(v) => vector(v),
        Value::Matrix(m) => matrix(m),
        Value::Tuple(t) => tuple(t),
        Value::Ref(r) => json!({ "ref": r.id }),
    }
}

fn vector(v: &Vector) -> Json {
    match v {
        Vector::Dense(raw) => tokenize_dense(raw).into(),
        Vector::Sparse { dim, entries } => {
            let entries: Map<String, Json> = entries
                .iter()
                .map(|e| (e.index.to_string(), e.text.as_str().into()))
                .collect();
            json!({ "dim": dim, "entries": entries })
        }
        Vector::Tuples { dim, entries } => {
            let tuples: Vec<Json> = entries
                .iter()
                .map(|e| json!({ "index": e.index, "tuple": tuple(&e.tuple) }))
                .collect();
            json!({ "dim": dim, "tuples": tuples })
        }
    }
}

fn matrix(m: &Matrix) -> Json {
    match m {
        Matrix::Dense { cols, rows } => {
            let rows: Vec<Json> = rows.iter().map(vector).collect();
            json!({ "rows": rows, "cols": cols })
        }
        Matrix::Sparse { dim, rows } => {
            let rows: Map<String, Json> = rows
                .iter()
                .map(|r| (r.index.to_string(), vector(&r.row)))
                .collect();
            json!({ "dim": dim, "rows": rows })
        }
        Matrix::Nested(ms) => json!({ "matrix_rows": ms.iter().map(matrix).collect::<Vec<_>>() }),
        Matrix::Tuples(ts) => json!({ "tuple_rows": ts.iter().map(tuple).collect::<Vec<_>>() }),
    }
}

fn tuple(t: &Tuple) -> Json {
    let items: Json = match &t.items {
        TupleItems::Text(s) => s.as_str().into(),
        TupleItems::Items(items) => items
            .iter()
            .map(|item| match item {
                TupleItem::Vector(v) => vector(v),
                TupleItem::Matrix(m) => matrix(m),
                TupleItem::Tuple(t) => tuple(t),
                TupleItem::Ref(r) => json!({ "ref": r.id }),
                TupleItem::Element(s) => json!({ "e": s }),
            })
            .collect(),
    };
    json!({ "id": t.id, "items": items })
}
