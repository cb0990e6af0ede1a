//! Random documents, vectors, numbers and trees.
//!
//! Documents produced by [`document`] satisfy every model invariant and
//! encode to schema-valid trees.

use rand::seq::SliceRandom;
use rand::Rng;

use pmxml_core::codec::DenseVector;
use pmxml_core::codec::encode;
use pmxml_core::infoset::{ProcessingInstruction, XmlElement, XmlNode, XmlTree};
use pmxml_core::model::{
    Attachment, AttachmentPayload, Body, Credit, Document, IndexedTuple, LooseData, Matrix,
    ObjectNode, Property, PropertyData, PropertyPayload, Reference, SparseEntry, SparseRow, Tuple,
    TupleItem, TupleItems, Value, Vector,
};
use pmxml_core::schema::POLYMAKE_NAMESPACE;

const TOKENS: &[&str] = &["0", "1", "-1", "1/3", "2", "-7/2", "x", "y", "true", "1e3"];
const TYPES: &[&str] = &[
    "Rational",
    "Matrix<Rational>",
    "SparseMatrix<Rational,NonSymmetric>",
    "Array<Set<Int>>",
    "Pair<Int,String>",
    "text",
];
const TOP_TYPES: &[&str] = &[
    "polytope::Polytope<Rational>",
    "fan::PolyhedralFan<Rational>",
    "topaz::SimplicialComplex",
    "graph::Graph<Undirected>",
];
const NAME_START: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
const NAME_REST: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_";

/// Size limits for [`document`].
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Nesting budget for objects and values.
    pub depth: u32,
    /// Upper bound on list lengths.
    pub width: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { depth: 4, width: 4 }
    }
}

pub fn simple_name(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(0..8);
    let mut s = String::new();
    s.push(*NAME_START.choose(rng).unwrap() as char);
    for _ in 0..len {
        s.push(*NAME_REST.choose(rng).unwrap() as char);
    }
    s
}

/// Free text, including characters that need escaping.
pub fn text(rng: &mut impl Rng) -> String {
    const PIECES: &[&str] = &[
        "a", "cube", " ", "  ", "<", ">", "&", "\"", "'", "]]>", "\t", "\n", "\r", "é", "√", "1/3",
        "x y", "#", ";",
    ];
    let n = rng.gen_range(0..6);
    (0..n).map(|_| *PIECES.choose(rng).unwrap()).collect()
}

pub fn token(rng: &mut impl Rng) -> String {
    (*TOKENS.choose(rng).unwrap()).to_owned()
}

fn version(rng: &mut impl Rng) -> String {
    ["3.0", "2.9.9", "4", "3.1.1", "."]
        .choose(rng)
        .unwrap()
        .to_string()
}

fn hex(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(0..6) * 2;
    (0..n)
        .map(|_| *b"0123456789abcdefABCDEF".choose(rng).unwrap() as char)
        .collect()
}

pub fn document(rng: &mut impl Rng, limits: Limits) -> Document {
    let pis = (0..rng.gen_range(0..3))
        .map(|i| ProcessingInstruction::new("pm", format!("chk=\"{:08x}\" n=\"{i}\"", rng.gen::<u32>())))
        .collect();
    let version = rng.gen_bool(0.7).then(|| version(rng));
    let tm = rng.gen_bool(0.3).then(|| hex(rng));
    if rng.gen_bool(0.75) {
        let mut obj = object(rng, limits);
        obj.type_name = None;
        Document {
            type_name: (*TOP_TYPES.choose(rng).unwrap()).to_owned(),
            version,
            tm,
            pis,
            body: Body::Object(obj),
        }
    } else {
        Document {
            type_name: (*TYPES.choose(rng).unwrap()).to_owned(),
            version,
            tm,
            pis,
            body: Body::Data(LooseData {
                ext: rng.gen_bool(0.2).then(|| text(rng)),
                description: rng.gen_bool(0.3).then(|| text(rng)),
                data: property_data(rng, limits),
            }),
        }
    }
}

pub fn object(rng: &mut impl Rng, limits: Limits) -> ObjectNode {
    let w = limits.width;
    let properties = (0..rng.gen_range(0..=w))
        .map(|_| property(rng, limits))
        .collect();
    let mut attachments: Vec<Attachment> = Vec::new();
    for _ in 0..rng.gen_range(0..=w / 2) {
        let name = simple_name(rng);
        if attachments.iter().all(|a| a.name != name) {
            attachments.push(attachment(rng, name, limits));
        }
    }
    ObjectNode {
        name: rng.gen_bool(0.6).then(|| text(rng)),
        ext: rng.gen_bool(0.1).then(|| text(rng)),
        type_name: rng.gen_bool(0.5).then(|| (*TOP_TYPES.choose(rng).unwrap()).to_owned()),
        description: rng.gen_bool(0.4).then(|| text(rng)),
        credits: (0..rng.gen_range(0..2))
            .map(|_| Credit {
                product: text(rng),
                text: text(rng),
            })
            .collect(),
        properties,
        attachments,
    }
}

fn declared_type(rng: &mut impl Rng) -> Option<String> {
    rng.gen_bool(0.4)
        .then(|| (*TYPES.choose(rng).unwrap()).to_owned())
}

fn property(rng: &mut impl Rng, limits: Limits) -> Property {
    let payload = match rng.gen_range(0..10) {
        0 => PropertyPayload::Undefined,
        1 => PropertyPayload::Text(text(rng)),
        2 if limits.depth > 1 => {
            let inner = Limits {
                depth: limits.depth - 1,
                width: limits.width.saturating_sub(1).max(1),
            };
            PropertyPayload::Subobjects(
                (0..rng.gen_range(1..=2)).map(|_| object(rng, inner)).collect(),
            )
        }
        _ => PropertyPayload::Data {
            declared_type: declared_type(rng),
            data: property_data(rng, limits),
        },
    };
    Property {
        name: simple_name(rng),
        ext: rng.gen_bool(0.1).then(|| text(rng)),
        payload,
    }
}

fn property_data(rng: &mut impl Rng, limits: Limits) -> PropertyData {
    match rng.gen_range(0..10) {
        0..=2 => PropertyData::Scalar(text(rng)),
        3 if limits.depth > 1 => {
            let inner = Limits {
                depth: limits.depth - 1,
                width: limits.width.saturating_sub(1).max(1),
            };
            PropertyData::ObjectArray((0..rng.gen_range(1..=2)).map(|_| object(rng, inner)).collect())
        }
        _ => PropertyData::Value(value(rng, limits.depth, limits.width)),
    }
}

fn attachment(rng: &mut impl Rng, name: String, limits: Limits) -> Attachment {
    let payload = match rng.gen_range(0..3) {
        0 => AttachmentPayload::Scalar {
            declared_type: declared_type(rng),
            text: text(rng),
        },
        1 => AttachmentPayload::Text(text(rng)),
        _ => {
            let value = loop {
                let v = value(rng, limits.depth, limits.width);
                if !matches!(v, Value::Ref(_)) {
                    break v;
                }
            };
            AttachmentPayload::Complex {
                declared_type: (*TYPES.choose(rng).unwrap()).to_owned(),
                construct: rng.gen_bool(0.3).then(|| text(rng)),
                value,
            }
        }
    };
    Attachment {
        name,
        ext: rng.gen_bool(0.1).then(|| text(rng)),
        payload,
    }
}

/// Assigns tuple ids that are unique within one value tree.
struct Ids {
    next: u64,
    used: Vec<u64>,
}

impl Ids {
    fn fresh(&mut self, rng: &mut impl Rng) -> Option<u64> {
        rng.gen_bool(0.3).then(|| {
            self.next += rng.gen_range(1..5);
            self.used.push(self.next);
            self.next
        })
    }

    fn reference(&self, rng: &mut impl Rng) -> Reference {
        let id = match rng.gen_range(0..10) {
            0 => None,
            1 => Some(rng.gen_range(0..1000)),
            _ => self.used.choose(rng).copied().or(Some(0)),
        };
        Reference { id }
    }
}

/// A random value tree; `depth` bounds its nesting.
pub fn value(rng: &mut impl Rng, depth: u32, width: usize) -> Value {
    let mut ids = Ids {
        next: rng.gen_range(0..3),
        used: Vec::new(),
    };
    let mut g = ValueGen { ids: &mut ids, width };
    match rng.gen_range(0..10) {
        0..=3 => Value::Vector(g.vector(rng, depth)),
        4..=6 => Value::Matrix(g.matrix(rng, depth)),
        7..=8 => Value::Tuple(g.tuple(rng, depth)),
        _ => {
            let r = g.ids.reference(rng);
            Value::Ref(r)
        }
    }
}

struct ValueGen<'a> {
    ids: &'a mut Ids,
    width: usize,
}

impl ValueGen<'_> {
    fn len(&self, rng: &mut impl Rng, min: usize) -> usize {
        rng.gen_range(min..=self.width.max(min))
    }

    fn dense_raw(&self, rng: &mut impl Rng, n: usize) -> String {
        let sep = if rng.gen_bool(0.8) { " " } else { "  \n\t" };
        let body = (0..n).map(|_| token(rng)).collect::<Vec<_>>().join(sep);
        if rng.gen_bool(0.1) {
            format!(" {body} ")
        } else {
            body
        }
    }

    fn sparse_entries(&self, rng: &mut impl Rng, dim: u64, min: usize) -> Vec<SparseEntry> {
        let mut idx: Vec<u64> = (0..dim).collect();
        idx.shuffle(rng);
        let n = rng.gen_range(min..=self.width.max(min)).min(dim as usize);
        let mut chosen: Vec<u64> = idx.into_iter().take(n).collect();
        chosen.sort_unstable();
        chosen
            .into_iter()
            .map(|i| SparseEntry::new(i, token(rng)))
            .collect()
    }

    fn vector(&mut self, rng: &mut impl Rng, depth: u32) -> Vector {
        match rng.gen_range(0..10) {
            0..=4 => {
                let n = self.len(rng, 0);
                Vector::Dense(self.dense_raw(rng, n))
            }
            5..=7 => {
                let dim = rng.gen_range(1..8u64);
                if rng.gen_bool(0.6) {
                    let entries = self.sparse_entries(rng, dim, 0);
                    Vector::Sparse {
                        dim: Some(dim),
                        entries,
                    }
                } else {
                    let entries = self.sparse_entries(rng, dim, 1);
                    Vector::Sparse { dim: None, entries }
                }
            }
            _ if depth > 1 => {
                let n = self.len(rng, 1);
                let entries = (0..n)
                    .map(|_| IndexedTuple {
                        index: rng.gen_bool(0.4).then(|| rng.gen_range(0..20)),
                        tuple: self.tuple(rng, depth - 1),
                    })
                    .collect();
                Vector::Tuples {
                    dim: rng.gen_bool(0.3).then(|| rng.gen_range(0..20)),
                    entries,
                }
            }
            _ => Vector::Dense(self.dense_raw(rng, 2)),
        }
    }

    fn matrix(&mut self, rng: &mut impl Rng, depth: u32) -> Matrix {
        let kind = if depth > 1 { rng.gen_range(0..10) } else { rng.gen_range(0..6) };
        match kind {
            0..=2 => {
                // Rectangular with an explicit width.
                let cols = rng.gen_range(0..5u64);
                let rows = (0..self.len(rng, 0))
                    .map(|_| {
                        if cols > 0 && rng.gen_bool(0.4) {
                            let entries = self.sparse_entries(rng, cols, 0);
                            let dim = if rng.gen_bool(0.5) { Some(cols) } else { None };
                            if dim.is_none() && entries.is_empty() {
                                Vector::Dense(self.dense_raw(rng, cols as usize))
                            } else {
                                Vector::Sparse { dim, entries }
                            }
                        } else {
                            Vector::Dense(self.dense_raw(rng, cols as usize))
                        }
                    })
                    .collect();
                Matrix::Dense {
                    cols: Some(cols),
                    rows,
                }
            }
            3..=4 => {
                let rows = (0..self.len(rng, 0))
                    .map(|_| self.vector(rng, depth.saturating_sub(1).max(1)))
                    .collect();
                Matrix::Dense { cols: None, rows }
            }
            5 => {
                let dim = rng.gen_range(0..6u64);
                let mut idx: Vec<u64> = (0..dim).filter(|_| rng.gen_bool(0.5)).collect();
                idx.truncate(self.width);
                let rows = idx
                    .into_iter()
                    .map(|index| SparseRow {
                        index,
                        row: self.vector(rng, 1),
                    })
                    .collect();
                Matrix::Sparse { dim, rows }
            }
            6..=7 => Matrix::Nested(
                (0..self.len(rng, 1))
                    .map(|_| self.matrix(rng, depth - 1))
                    .collect(),
            ),
            _ => Matrix::Tuples(
                (0..self.len(rng, 1))
                    .map(|_| self.tuple(rng, depth - 1))
                    .collect(),
            ),
        }
    }

    fn tuple(&mut self, rng: &mut impl Rng, depth: u32) -> Tuple {
        let id = self.ids.fresh(rng);
        let items = if depth <= 1 || rng.gen_bool(0.35) {
            TupleItems::Text(if rng.gen_bool(0.8) {
                let n = self.len(rng, 0);
                self.dense_raw(rng, n)
            } else {
                text(rng)
            })
        } else {
            TupleItems::Items(
                (0..self.len(rng, 1))
                    .map(|_| match rng.gen_range(0..5) {
                        0 => TupleItem::Vector(self.vector(rng, depth - 1)),
                        1 => TupleItem::Matrix(self.matrix(rng, depth - 1)),
                        2 => TupleItem::Tuple(self.tuple(rng, depth - 1)),
                        3 => TupleItem::Ref(self.ids.reference(rng)),
                        _ => TupleItem::Element(token(rng)),
                    })
                    .collect(),
            )
        };
        Tuple { id, items }
    }
}

/// Dense token vector with a mix of zero and nonzero tokens.
pub fn token_vector(rng: &mut impl Rng, max_len: usize) -> DenseVector {
    let n = rng.gen_range(0..=max_len);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                "0".to_owned()
            } else {
                token(rng)
            }
        })
        .collect()
}

/// Sparse vector with a dimension, strictly increasing indices and no
/// zero-token entries.
pub fn sorted_sparse_vector(rng: &mut impl Rng, max_dim: u64) -> Vector {
    let dim = rng.gen_range(0..=max_dim);
    let indices: Vec<u64> = (0..dim).filter(|_| rng.gen_bool(0.4)).collect();
    let entries = indices
        .into_iter()
        .map(|i| {
            let t = loop {
                let t = token(rng);
                if t != "0" {
                    break t;
                }
            };
            SparseEntry::new(i, t)
        })
        .collect();
    Vector::Sparse {
        dim: Some(dim),
        entries,
    }
}

/// Random rational token `p/q` with `|p/q| ≤ bound`.
pub fn rational_token(rng: &mut impl Rng, bound: i64) -> String {
    let q = rng.gen_range(1..=12i64);
    let p = rng.gen_range(-bound * q..=bound * q);
    if q == 1 && rng.gen_bool(0.5) {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

/// Vocabulary for unconstrained trees.
const ELEMENTS: &[&str] = &[
    "object", "property", "attachment", "data", "description", "credit", "m", "v", "e", "t", "r",
];
const ATTRIBUTES: &[&str] = &[
    "name", "type", "value", "undef", "ext", "construct", "cols", "dim", "i", "id", "version",
    "tm", "product",
];
const VALUES: &[&str] = &[
    "0", "3", "true", "false", "text", "polytope::Polytope", "A", "x y", "", "1.0", "ab", "-1",
    "abc",
];
const TEXTS: &[&str] = &["", " ", "1 0 0", "x", "\n  ", "1/3", "true"];

/// Unconstrained element tree of at most `depth` levels over the format's
/// element and attribute names.
pub fn vocabulary_tree(rng: &mut impl Rng, depth: u32) -> XmlElement {
    let mut el = XmlElement::new(*ELEMENTS.choose(rng).unwrap()).in_namespace(namespace(rng));
    for _ in 0..rng.gen_range(0..4) {
        el.set_attr(*ATTRIBUTES.choose(rng).unwrap(), *VALUES.choose(rng).unwrap());
    }
    if depth > 1 && rng.gen_bool(0.7) {
        for _ in 0..rng.gen_range(1..4) {
            if rng.gen_bool(0.15) {
                el.children.push(XmlNode::Text((*TEXTS.choose(rng).unwrap()).to_owned()));
            }
            el.children.push(XmlNode::Element(vocabulary_tree(rng, depth - 1)));
        }
    } else if rng.gen_bool(0.6) {
        el.children.push(XmlNode::Text((*TEXTS.choose(rng).unwrap()).to_owned()));
    }
    el
}

fn namespace(rng: &mut impl Rng) -> &'static str {
    match rng.gen_range(0..20) {
        0 => "",
        1 => "urn:other",
        _ => POLYMAKE_NAMESPACE,
    }
}

/// Depth of an element tree, counting the root as 1.
pub fn depth(el: &XmlElement) -> u32 {
    1 + el.child_elements().map(depth).max().unwrap_or(0)
}

/// Drops element children below `max` levels.
pub fn prune(el: &mut XmlElement, max: u32) {
    if max <= 1 {
        el.children.retain(|c| !matches!(c, XmlNode::Element(_)));
        return;
    }
    for c in &mut el.children {
        if let XmlNode::Element(e) = c {
            prune(e, max - 1);
        }
    }
}

/// One random local edit of a tree: rename, drop or add an attribute,
/// change a value, drop a child or insert text.
pub fn mutate(rng: &mut impl Rng, el: &mut XmlElement) {
    let kids: Vec<usize> = el
        .children
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, XmlNode::Element(_)))
        .map(|(i, _)| i)
        .collect();
    if !kids.is_empty() && rng.gen_bool(0.6) {
        let i = *kids.choose(rng).unwrap();
        if let XmlNode::Element(child) = &mut el.children[i] {
            mutate(rng, child);
        }
        return;
    }
    match rng.gen_range(0..6) {
        0 => el.name = (*ELEMENTS.choose(rng).unwrap()).to_owned(),
        1 => {
            if !el.attributes.is_empty() {
                let i = rng.gen_range(0..el.attributes.len());
                el.attributes.remove(i);
            }
        }
        2 => el.set_attr(*ATTRIBUTES.choose(rng).unwrap(), *VALUES.choose(rng).unwrap()),
        3 => {
            if let Some(a) = el.attributes.choose_mut(rng) {
                a.1 = (*VALUES.choose(rng).unwrap()).to_owned();
            }
        }
        4 => {
            if !kids.is_empty() {
                el.children.remove(*kids.choose(rng).unwrap());
            }
        }
        _ => el.children.insert(0, XmlNode::Text((*TEXTS.choose(rng).unwrap()).to_owned())),
    }
}

/// Tree of depth at most `max_depth`: half the time an encoded random
/// document with up to two random edits, otherwise a [`vocabulary_tree`].
pub fn small_tree(rng: &mut impl Rng, max_depth: u32) -> XmlTree {
    if rng.gen_bool(0.5) {
        let doc = document(rng, Limits { depth: 2, width: 3 });
        let mut tree = encode(&doc);
        prune(&mut tree.root, max_depth);
        for _ in 0..rng.gen_range(0..3) {
            mutate(rng, &mut tree.root);
        }
        tree
    } else {
        XmlTree::new(vocabulary_tree(rng, max_depth))
    }
}
