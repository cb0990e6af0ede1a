use crate::infoset::{XmlElement, XmlNode, XmlTree};
use crate::model::{
    AttachmentPayload, Body, Document, Matrix, ObjectNode, Property, PropertyData,
    PropertyPayload, Reference, Tuple, TupleItem, TupleItems, Value, Vector,
};
use crate::schema::POLYMAKE_NAMESPACE;

const ATTRIBUTE_ORDER: [&str; 12] = [
    "name", "type", "value", "undef", "ext", "construct", "cols", "dim", "i", "id", "version",
    "tm",
];

/// Attributes collected in any order and emitted in canonical order.
#[derive(Default)]
struct Attrs(Vec<(&'static str, String)>);

impl Attrs {
    fn set(&mut self, name: &'static str, value: impl Into<String>) -> &mut Self {
        self.0.push((name, value.into()));
        self
    }

    fn opt(&mut self, name: &'static str, value: Option<impl ToString>) -> &mut Self {
        if let Some(v) = value {
            self.0.push((name, v.to_string()));
        }
        self
    }

    fn apply(&mut self, el: &mut XmlElement) {
        self.0
            .sort_by_key(|(n, _)| ATTRIBUTE_ORDER.iter().position(|o| o == n));
        for (n, v) in self.0.drain(..) {
            el.set_attr(n, v);
        }
    }
}

fn element(name: &str, attrs: &mut Attrs) -> XmlElement {
    let mut el = XmlElement::new(name);
    attrs.apply(&mut el);
    el
}

fn text_element(name: &str, attrs: &mut Attrs, text: &str) -> XmlElement {
    let mut el = element(name, attrs);
    if !text.is_empty() {
        el = el.with_text(text);
    }
    el
}

/// Canonical tree for `doc`; `decode` of the result yields `doc` again.
pub fn encode(doc: &Document) -> XmlTree {
    let mut attrs = Attrs::default();
    attrs
        .set("type", doc.type_name.as_str())
        .opt("version", doc.version.as_deref())
        .opt("tm", doc.tm.as_deref());
    let mut root = match &doc.body {
        Body::Object(obj) => object(obj, attrs),
        Body::Data(data) => {
            attrs.opt("ext", data.ext.as_deref());
            let mut root = property_data("data", attrs, &data.data);
            if let Some(d) = &data.description {
                let desc = text_element("description", &mut Attrs::default(), d);
                root.children.insert(0, XmlNode::Element(desc));
            }
            root
        }
    };
    root.set_namespace_recursive(POLYMAKE_NAMESPACE);
    let mut tree = XmlTree::new(root);
    tree.leading_pis = doc.pis.clone();
    tree
}

fn object(obj: &ObjectNode, mut attrs: Attrs) -> XmlElement {
    attrs
        .opt("name", obj.name.as_deref())
        .opt("ext", obj.ext.as_deref())
        .opt("type", obj.type_name.as_deref());
    let mut el = element("object", &mut attrs);
    if let Some(d) = &obj.description {
        el = el.with_child(text_element("description", &mut Attrs::default(), d));
    }
    for c in &obj.credits {
        el = el.with_child(text_element(
            "credit",
            Attrs::default().set("product", c.product.as_str()),
            &c.text,
        ));
    }
    for p in &obj.properties {
        el = el.with_child(property(p));
    }
    for a in &obj.attachments {
        let mut attrs = Attrs::default();
        attrs.set("name", a.name.as_str()).opt("ext", a.ext.as_deref());
        let child = match &a.payload {
            AttachmentPayload::Scalar {
                declared_type,
                text,
            } => {
                attrs
                    .opt("type", declared_type.as_deref())
                    .set("value", text.as_str());
                element("attachment", &mut attrs)
            }
            AttachmentPayload::Complex {
                declared_type,
                construct,
                value: v,
            } => {
                attrs
                    .set("type", declared_type.as_str())
                    .opt("construct", construct.as_deref());
                element("attachment", &mut attrs).with_child(value(v))
            }
            AttachmentPayload::Text(text) => {
                attrs.set("type", "text");
                text_element("attachment", &mut attrs, text)
            }
        };
        el = el.with_child(child);
    }
    el
}

fn property(p: &Property) -> XmlElement {
    let mut attrs = Attrs::default();
    attrs.set("name", p.name.as_str()).opt("ext", p.ext.as_deref());
    match &p.payload {
        PropertyPayload::Undefined => {
            attrs.set("undef", "true");
            element("property", &mut attrs)
        }
        PropertyPayload::Data {
            declared_type,
            data,
        } => {
            attrs.opt("type", declared_type.as_deref());
            property_data("property", attrs, data)
        }
        PropertyPayload::Text(text) => {
            attrs.set("type", "text");
            text_element("property", &mut attrs, text)
        }
        PropertyPayload::Subobjects(objs) => {
            let mut el = element("property", &mut attrs);
            for o in objs {
                el = el.with_child(object(o, Attrs::default()));
            }
            el
        }
    }
}

fn property_data(name: &str, mut attrs: Attrs, data: &PropertyData) -> XmlElement {
    match data {
        PropertyData::Scalar(text) => {
            attrs.set("value", text.as_str());
            element(name, &mut attrs)
        }
        PropertyData::Value(v) => element(name, &mut attrs).with_child(value(v)),
        PropertyData::ObjectArray(objs) => {
            let mut m = XmlElement::new("m");
            for o in objs {
                m = m.with_child(object(o, Attrs::default()));
            }
            element(name, &mut attrs).with_child(m)
        }
    }
}

fn value(v: &Value) -> XmlElement {
    match v {
        Value::Vector(v) => vector(v, Attrs::default()),
        Value::Matrix(m) => matrix(m),
        Value::Tuple(t) => tuple(t, Attrs::default()),
        Value::Ref(r) => reference(r),
    }
}

fn reference(r: &Reference) -> XmlElement {
    element("r", Attrs::default().opt("id", r.id))
}

fn vector(v: &Vector, mut attrs: Attrs) -> XmlElement {
    match v {
        Vector::Dense(raw) => text_element("v", &mut attrs, raw),
        Vector::Sparse { dim, entries } => {
            let mut el = element("v", attrs.opt("dim", *dim));
            for e in entries {
                el = el.with_child(text_element(
                    "e",
                    Attrs::default().set("i", e.index.to_string()),
                    &e.text,
                ));
            }
            el
        }
        Vector::Tuples { dim, entries } => {
            let mut el = element("v", attrs.opt("dim", *dim));
            for e in entries {
                let mut ta = Attrs::default();
                ta.opt("i", e.index);
                el = el.with_child(tuple(&e.tuple, ta));
            }
            el
        }
    }
}

fn matrix(m: &Matrix) -> XmlElement {
    match m {
        Matrix::Dense { cols, rows } => {
            let mut el = element("m", Attrs::default().opt("cols", *cols));
            for r in rows {
                el = el.with_child(vector(r, Attrs::default()));
            }
            el
        }
        Matrix::Sparse { dim, rows } => {
            let mut el = element("m", Attrs::default().set("dim", dim.to_string()));
            for r in rows {
                let mut ra = Attrs::default();
                ra.set("i", r.index.to_string());
                el = el.with_child(vector(&r.row, ra));
            }
            el
        }
        Matrix::Nested(ms) => ms
            .iter()
            .fold(XmlElement::new("m"), |el, m| el.with_child(matrix(m))),
        Matrix::Tuples(ts) => ts.iter().fold(XmlElement::new("m"), |el, t| {
            el.with_child(tuple(t, Attrs::default()))
        }),
    }
}

fn tuple(t: &Tuple, mut attrs: Attrs) -> XmlElement {
    attrs.opt("id", t.id);
    match &t.items {
        TupleItems::Text(text) => text_element("t", &mut attrs, text),
        TupleItems::Items(items) => {
            let mut el = element("t", &mut attrs);
            for item in items {
                el = el.with_child(match item {
                    TupleItem::Vector(v) => vector(v, Attrs::default()),
                    TupleItem::Matrix(m) => matrix(m),
                    TupleItem::Tuple(t) => tuple(t, Attrs::default()),
                    TupleItem::Ref(r) => reference(r),
                    TupleItem::Element(text) => text_element("e", &mut Attrs::default(), text),
                });
            }
            el
        }
    }
}
