use crate::infoset::{is_xml_whitespace, XmlElement, XmlTree};
use crate::model::{
    check_document, Attachment, AttachmentPayload, Body, Credit, Document, IndexedTuple,
    LooseData, Matrix, ObjectNode, Property, PropertyData, PropertyPayload, Reference,
    SparseEntry, SparseRow, Tuple, TupleItem, TupleItems, Value, Vector,
};
use crate::schema::{polymake_schema, validate_with, ValidateOptions};

use super::DecodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Accept a root element without any namespace.
    pub lax_namespace: bool,
    /// Run the validator before mapping the tree.
    pub validate_first: bool,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        Self {
            lax_namespace: false,
            validate_first: true,
        }
    }
}

pub fn decode(tree: &XmlTree, opts: &DecodeOptions) -> Result<Document, DecodeError> {
    if opts.validate_first {
        let report = validate_with(
            tree,
            &polymake_schema(),
            ValidateOptions {
                lax_namespace: opts.lax_namespace,
            },
        )?;
        if !report.valid {
            return Err(DecodeError::SchemaViolation(report.violations));
        }
    }
    let root = &tree.root;
    let type_name = required(root, "type")?.to_owned();
    let version = owned(root, "version");
    let tm = owned(root, "tm").map(|s| s.trim_matches(is_ws_char).to_owned());
    let body = match root.name.as_str() {
        "object" => Body::Object(object_content(root)?),
        "data" => {
            let mut description = None;
            let mut data_el = None;
            for child in root.child_elements() {
                match child.name.as_str() {
                    "description" => description = Some(child.text_content()),
                    _ if data_el.is_none() => data_el = Some(child),
                    _ => return Err(structure(root, "more than one data element")),
                }
            }
            let data = match (root.attr("value"), data_el) {
                (Some(v), _) => PropertyData::Scalar(v.to_owned()),
                (None, Some(el)) => property_data(el)?,
                (None, None) => return Err(structure(root, "no content")),
            };
            Body::Data(LooseData {
                ext: owned(root, "ext"),
                description,
                data,
            })
        }
        _ => return Err(structure(root, "unknown root element")),
    };
    let doc = Document {
        type_name,
        version,
        tm,
        pis: tree.leading_pis.clone(),
        body,
    };
    check_document(&doc)?;
    Ok(doc)
}

fn is_ws_char(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n' | '\r')
}

fn structure(el: &XmlElement, message: &str) -> DecodeError {
    DecodeError::Structure {
        element: el.name.clone(),
        message: message.to_owned(),
    }
}

fn owned(el: &XmlElement, name: &str) -> Option<String> {
    el.attr(name).map(str::to_owned)
}

fn required<'a>(el: &'a XmlElement, name: &str) -> Result<&'a str, DecodeError> {
    el.attr(name)
        .ok_or_else(|| structure(el, &format!("missing attribute {name}")))
}

fn number(el: &XmlElement, name: &str) -> Result<Option<u64>, DecodeError> {
    el.attr(name)
        .map(|raw| {
            raw.trim_matches(is_ws_char)
                .parse::<u64>()
                .map_err(|_| structure(el, &format!("attribute {name} is not a count")))
        })
        .transpose()
}

fn required_number(el: &XmlElement, name: &str) -> Result<u64, DecodeError> {
    number(el, name)?.ok_or_else(|| structure(el, &format!("missing attribute {name}")))
}

/// Character content of an element that must not have element children.
fn text_only(el: &XmlElement) -> Result<String, DecodeError> {
    if el.has_element_children() {
        return Err(structure(el, "unexpected element content"));
    }
    Ok(el.text_content())
}

/// Element children, refusing stray non-whitespace text among them.
fn elements(el: &XmlElement) -> Result<Vec<&XmlElement>, DecodeError> {
    let text = el.text_content();
    if !text.is_empty() && !is_xml_whitespace(&text) {
        return Err(structure(el, "text mixed with elements"));
    }
    Ok(el.child_elements().collect())
}

fn object_content(el: &XmlElement) -> Result<ObjectNode, DecodeError> {
    let mut obj = ObjectNode {
        name: owned(el, "name"),
        ext: owned(el, "ext"),
        ..ObjectNode::default()
    };
    for child in elements(el)? {
        match child.name.as_str() {
            "description" => obj.description = Some(text_only(child)?),
            "credit" => obj.credits.push(Credit {
                product: required(child, "product")?.to_owned(),
                text: text_only(child)?,
            }),
            "property" => obj.properties.push(property(child)?),
            "attachment" => obj.attachments.push(attachment(child)?),
            _ => return Err(structure(child, "not allowed in an object")),
        }
    }
    Ok(obj)
}

fn subobject(el: &XmlElement) -> Result<ObjectNode, DecodeError> {
    if el.name != "object" {
        return Err(structure(el, "expected object"));
    }
    let mut obj = object_content(el)?;
    obj.type_name = owned(el, "type");
    Ok(obj)
}

fn property(el: &XmlElement) -> Result<Property, DecodeError> {
    let name = required(el, "name")?.to_owned();
    let ext = owned(el, "ext");
    let declared_type = owned(el, "type");
    let payload = if el.attr("undef").is_some() {
        PropertyPayload::Undefined
    } else if let Some(value) = el.attr("value") {
        PropertyPayload::Data {
            declared_type,
            data: PropertyData::Scalar(value.to_owned()),
        }
    } else if declared_type.as_deref() == Some("text") && !el.has_element_children() {
        PropertyPayload::Text(el.text_content())
    } else {
        let children = elements(el)?;
        match children.first() {
            None => return Err(structure(el, "no content")),
            Some(first) if first.name == "object" => PropertyPayload::Subobjects(
                children.into_iter().map(subobject).collect::<Result<_, _>>()?,
            ),
            Some(first) => {
                if children.len() > 1 {
                    return Err(structure(el, "more than one data element"));
                }
                PropertyPayload::Data {
                    declared_type,
                    data: property_data(first)?,
                }
            }
        }
    };
    Ok(Property { name, ext, payload })
}

fn property_data(el: &XmlElement) -> Result<PropertyData, DecodeError> {
    if el.name == "m" && el.child_elements().next().is_some_and(|c| c.name == "object") {
        let objs = elements(el)?
            .into_iter()
            .map(subobject)
            .collect::<Result<_, _>>()?;
        return Ok(PropertyData::ObjectArray(objs));
    }
    Ok(PropertyData::Value(value(el)?))
}

fn value(el: &XmlElement) -> Result<Value, DecodeError> {
    Ok(match el.name.as_str() {
        "v" => Value::Vector(vector(el)?),
        "m" => Value::Matrix(matrix(el)?),
        "t" => Value::Tuple(tuple(el)?),
        "r" => Value::Ref(reference(el)?),
        _ => return Err(structure(el, "expected v, m, t or r")),
    })
}

fn reference(el: &XmlElement) -> Result<Reference, DecodeError> {
    if !el.children.is_empty() && !is_xml_whitespace(&el.text_content()) {
        return Err(structure(el, "reference must be empty"));
    }
    Ok(Reference {
        id: number(el, "id")?,
    })
}

fn vector(el: &XmlElement) -> Result<Vector, DecodeError> {
    let dim = number(el, "dim")?;
    let children = elements_or_none(el)?;
    let Some(children) = children else {
        return Ok(match dim {
            Some(_) => Vector::Sparse {
                dim,
                entries: Vec::new(),
            },
            None => Vector::Dense(el.text_content()),
        });
    };
    if children[0].name == "e" {
        let entries = children
            .into_iter()
            .map(|e| {
                if e.name != "e" {
                    return Err(structure(e, "expected e"));
                }
                Ok(SparseEntry::new(required_number(e, "i")?, text_only(e)?))
            })
            .collect::<Result<_, _>>()?;
        Ok(Vector::Sparse { dim, entries })
    } else {
        let entries = children
            .into_iter()
            .map(|t| {
                if t.name != "t" {
                    return Err(structure(t, "expected t"));
                }
                Ok(IndexedTuple {
                    index: number(t, "i")?,
                    tuple: tuple(t)?,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Vector::Tuples { dim, entries })
    }
}

/// `None` when the element has no element children at all.
fn elements_or_none(el: &XmlElement) -> Result<Option<Vec<&XmlElement>>, DecodeError> {
    if el.has_element_children() {
        elements(el).map(Some)
    } else {
        Ok(None)
    }
}

fn matrix(el: &XmlElement) -> Result<Matrix, DecodeError> {
    let children = elements_or_none(el)?.unwrap_or_default();
    if let Some(dim) = number(el, "dim")? {
        let rows = children
            .into_iter()
            .map(|v| {
                if v.name != "v" {
                    return Err(structure(v, "expected v"));
                }
                Ok(SparseRow {
                    index: required_number(v, "i")?,
                    row: vector(v)?,
                })
            })
            .collect::<Result<_, _>>()?;
        return Ok(Matrix::Sparse { dim, rows });
    }
    let Some(first) = children.first() else {
        return Ok(Matrix::Dense {
            cols: number(el, "cols")?,
            rows: Vec::new(),
        });
    };
    let same = |want: &str| -> Result<(), DecodeError> {
        match children.iter().find(|c| c.name != want) {
            Some(c) => Err(structure(c, &format!("expected {want}"))),
            None => Ok(()),
        }
    };
    match first.name.as_str() {
        "v" => {
            same("v")?;
            Ok(Matrix::Dense {
                cols: number(el, "cols")?,
                rows: children.into_iter().map(vector).collect::<Result<_, _>>()?,
            })
        }
        "m" => {
            same("m")?;
            Ok(Matrix::Nested(
                children.into_iter().map(matrix).collect::<Result<_, _>>()?,
            ))
        }
        "t" => {
            same("t")?;
            Ok(Matrix::Tuples(
                children.into_iter().map(tuple).collect::<Result<_, _>>()?,
            ))
        }
        _ => Err(structure(first, "not allowed in a matrix")),
    }
}

fn tuple(el: &XmlElement) -> Result<Tuple, DecodeError> {
    let id = number(el, "id")?;
    let items = match elements_or_none(el)? {
        None => TupleItems::Text(el.text_content()),
        Some(children) => TupleItems::Items(
            children
                .into_iter()
                .map(|c| {
                    Ok(match c.name.as_str() {
                        "v" => TupleItem::Vector(vector(c)?),
                        "m" => TupleItem::Matrix(matrix(c)?),
                        "t" => TupleItem::Tuple(tuple(c)?),
                        "r" => TupleItem::Ref(reference(c)?),
                        "e" => TupleItem::Element(text_only(c)?),
                        _ => return Err(structure(c, "not allowed in a tuple")),
                    })
                })
                .collect::<Result<_, _>>()?,
        ),
    };
    Ok(Tuple { id, items })
}

fn attachment(el: &XmlElement) -> Result<Attachment, DecodeError> {
    let name = required(el, "name")?.to_owned();
    let ext = owned(el, "ext");
    let declared_type = owned(el, "type");
    let payload = if let Some(text) = el.attr("value") {
        AttachmentPayload::Scalar {
            declared_type,
            text: text.to_owned(),
        }
    } else if declared_type.as_deref() == Some("text") && !el.has_element_children() {
        AttachmentPayload::Text(el.text_content())
    } else {
        let children = elements(el)?;
        let [child] = children.as_slice() else {
            return Err(structure(el, "expected exactly one data element"));
        };
        let declared_type =
            declared_type.ok_or_else(|| structure(el, "complex attachment without type"))?;
        AttachmentPayload::Complex {
            declared_type,
            construct: owned(el, "construct"),
            value: value(child)?,
        }
    };
    Ok(Attachment { name, ext, payload })
}
