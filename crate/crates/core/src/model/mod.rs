//! Typed view of a polymake data file.
//!
//! A [`Document`] is either a top-level object or loose data. Object content
//! is split into properties and attachments; container content is the
//! recursive [`Value`] tree of vectors, matrices, tuples and references.
//! Scalars are kept as the exact strings found in the file.

mod check;
mod ids;

use thiserror::Error;

use crate::infoset::ProcessingInstruction;

pub use ids::{collect_ids, resolve_reference, IdEntry, IdTable, NodePath, NodeRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub type_name: String,
    pub version: Option<String>,
    pub tm: Option<String>,
    /// Processing instructions preceding the root, verbatim.
    pub pis: Vec<ProcessingInstruction>,
    pub body: Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    TopObject,
    LooseData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Object(ObjectNode),
    Data(LooseData),
}

impl Document {
    pub fn kind(&self) -> DocumentKind {
        match self.body {
            Body::Object(_) => DocumentKind::TopObject,
            Body::Data(_) => DocumentKind::LooseData,
        }
    }

    pub fn object(&self) -> Option<&ObjectNode> {
        match &self.body {
            Body::Object(o) => Some(o),
            Body::Data(_) => None,
        }
    }

    pub fn loose_data(&self) -> Option<&LooseData> {
        match &self.body {
            Body::Data(d) => Some(d),
            Body::Object(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LooseData {
    pub ext: Option<String>,
    pub description: Option<String>,
    pub data: PropertyData,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObjectNode {
    pub name: Option<String>,
    pub ext: Option<String>,
    /// Only subobjects carry their own type.
    pub type_name: Option<String>,
    pub description: Option<String>,
    pub credits: Vec<Credit>,
    pub properties: Vec<Property>,
    pub attachments: Vec<Attachment>,
}

impl ObjectNode {
    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn attachment(&self, name: &str) -> Option<&Attachment> {
        self.attachments.iter().find(|a| a.name == name)
    }
}

/// All properties called `name`, in document order.
pub fn find_properties<'a>(obj: &'a ObjectNode, name: &str) -> Vec<&'a Property> {
    obj.properties.iter().filter(|p| p.name == name).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Credit {
    pub product: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub ext: Option<String>,
    pub payload: PropertyPayload,
}

impl Property {
    pub fn scalar(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ext: None,
            payload: PropertyPayload::Data {
                declared_type: None,
                data: PropertyData::Scalar(text.into()),
            },
        }
    }

    pub fn value(name: impl Into<String>, value: Value) -> Self {
        Self {
            name: name.into(),
            ext: None,
            payload: PropertyPayload::Data {
                declared_type: None,
                data: PropertyData::Value(value),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyPayload {
    /// `undef="true"`: the property is known to have no value.
    Undefined,
    /// Attribute value, reference, container or object array, with an
    /// optional explicit type.
    Data {
        declared_type: Option<String>,
        data: PropertyData,
    },
    /// `type="text"` with character content.
    Text(String),
    /// One or more `object` children.
    Subobjects(Vec<ObjectNode>),
}

impl PropertyPayload {
    pub fn as_scalar(&self) -> Option<&str> {
        match self {
            Self::Data {
                data: PropertyData::Scalar(s),
                ..
            } => Some(s),
            _ => None,
        }
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            Self::Data {
                data: PropertyData::Value(v),
                ..
            } => Some(v),
            _ => None,
        }
    }

    pub fn declared_type(&self) -> Option<&str> {
        match self {
            Self::Data { declared_type, .. } => declared_type.as_deref(),
            Self::Text(_) => Some("text"),
            _ => None,
        }
    }
}

/// Content shared by properties and loose data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyData {
    Scalar(String),
    Value(Value),
    /// `<m>` whose children are objects.
    ObjectArray(Vec<ObjectNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub name: String,
    pub ext: Option<String>,
    pub payload: AttachmentPayload,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttachmentPayload {
    Scalar {
        declared_type: Option<String>,
        text: String,
    },
    /// Vector, matrix or tuple content. References are not allowed here.
    Complex {
        declared_type: String,
        construct: Option<String>,
        value: Value,
    },
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Vector(Vector),
    Matrix(Matrix),
    Tuple(Tuple),
    Ref(Reference),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Vector {
    /// Whitespace-separated tokens, kept verbatim.
    Dense(String),
    /// Explicit `<e i="...">` entries; absent entries are zero.
    Sparse {
        dim: Option<u64>,
        entries: Vec<SparseEntry>,
    },
    /// Tuple entries, optionally indexed.
    Tuples {
        dim: Option<u64>,
        entries: Vec<IndexedTuple>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseEntry {
    pub index: u64,
    pub text: String,
}

impl SparseEntry {
    pub fn new(index: u64, text: impl Into<String>) -> Self {
        Self {
            index,
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedTuple {
    pub index: Option<u64>,
    pub tuple: Tuple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matrix {
    /// Row vectors, with an optional column count.
    Dense { cols: Option<u64>, rows: Vec<Vector> },
    /// Indexed rows out of `dim`; absent rows are zero.
    Sparse { dim: u64, rows: Vec<SparseRow> },
    Nested(Vec<Matrix>),
    Tuples(Vec<Tuple>),
}

impl Matrix {
    pub fn empty() -> Self {
        Matrix::Dense {
            cols: None,
            rows: Vec::new(),
        }
    }

    /// Number of rows, counting absent sparse rows.
    pub fn row_count(&self) -> u64 {
        match self {
            Matrix::Dense { rows, .. } => rows.len() as u64,
            Matrix::Sparse { dim, .. } => *dim,
            Matrix::Nested(ms) => ms.len() as u64,
            Matrix::Tuples(ts) => ts.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRow {
    pub index: u64,
    pub row: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tuple {
    pub id: Option<u64>,
    pub items: TupleItems,
}

impl Tuple {
    pub fn text(text: impl Into<String>) -> Self {
        Self {
            id: None,
            items: TupleItems::Text(text.into()),
        }
    }

    pub fn of(items: Vec<TupleItem>) -> Self {
        Self {
            id: None,
            items: TupleItems::Items(items),
        }
    }

    pub fn with_id(mut self, id: u64) -> Self {
        self.id = Some(id);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleItems {
    Text(String),
    Items(Vec<TupleItem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleItem {
    Vector(Vector),
    Matrix(Matrix),
    Tuple(Tuple),
    Ref(Reference),
    /// `<e>` element holding a single scalar.
    Element(String),
}

/// `<r id="..."/>`, standing for the tuple with that id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reference {
    pub id: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("id {id} is defined twice (at {first} and {second})")]
    DuplicateId {
        id: u64,
        first: NodePath,
        second: NodePath,
    },
    #[error("reference to undefined id {0}")]
    DanglingReference(u64),
    #[error("reference without an id attribute")]
    MissingId,
    #[error("sparse index {index} appears more than once")]
    DuplicateIndex { index: u64 },
    #[error("sparse index {index} follows {previous}; indices must increase")]
    UnsortedIndex { previous: u64, index: u64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u64 },
    #[error("attachment name {0:?} is used twice")]
    DuplicateAttachmentName(String),
    #[error("{what} {value:?} does not match {pattern}")]
    BadName {
        what: &'static str,
        value: String,
        pattern: &'static str,
    },
    #[error("matrix declares {cols} columns but its rows have {found}")]
    ColumnMismatch { cols: u64, found: u64 },
    #[error("{0} must not be empty")]
    EmptyContainer(&'static str),
    #[error("attachment content must be a vector, matrix or tuple")]
    ReferenceInAttachment,
    #[error("sparse vector without entries needs a dimension")]
    AmbiguousEmptyVector,
    #[error("the top-level object takes its type from the document")]
    TopObjectType,
}

pub use check::check_document;
