//! Minimal XML document model.
//!
//! Everything above this layer works on [`XmlTree`] values and never sees
//! XML syntax. Comments are dropped on read, whitespace-only text between
//! element children is dropped, and namespace declarations are folded into
//! each element's `namespace` field instead of being kept as attributes.

mod equal;
mod read;
mod write;

pub use equal::infoset_equal;
pub use read::{read_document, WellFormednessError};
pub use write::{write_document, write_document_string};

/// A processing instruction such as `<?pm chk="56e977e8"?>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProcessingInstruction {
    pub target: String,
    /// Content after the target, without the separating whitespace.
    pub content: String,
}

impl ProcessingInstruction {
    pub fn new(target: impl Into<String>, content: impl Into<String>) -> Self {
        Self {
            target: target.into(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlTree {
    pub root: XmlElement,
    pub leading_pis: Vec<ProcessingInstruction>,
    pub declared_encoding: String,
}

impl XmlTree {
    pub fn new(root: XmlElement) -> Self {
        Self {
            root,
            leading_pis: Vec::new(),
            declared_encoding: "utf-8".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlElement {
    /// Local name, without any prefix.
    pub name: String,
    /// Namespace URI; empty when the element is in no namespace.
    pub namespace: String,
    pub attributes: Vec<(String, String)>,
    pub children: Vec<XmlNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(XmlElement),
    /// Character data after entity decoding.
    Text(String),
    /// Verbatim content of a CDATA section.
    CData(String),
}

impl XmlElement {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            namespace: String::new(),
            attributes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn in_namespace(mut self, namespace: impl Into<String>) -> Self {
        self.namespace = namespace.into();
        self
    }

    /// Builder-style attribute setter. Replaces an existing attribute of the
    /// same name so the uniqueness invariant holds.
    pub fn with_attr(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.set_attr(name, value);
        self
    }

    pub fn with_child(mut self, child: XmlElement) -> Self {
        self.children.push(XmlNode::Element(child));
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.children.push(XmlNode::Text(text.into()));
        self
    }

    pub fn set_attr(&mut self, name: impl Into<String>, value: impl Into<String>) {
        let name = name.into();
        let value = value.into();
        match self.attributes.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.attributes.push((name, value)),
        }
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn remove_attr(&mut self, name: &str) -> Option<String> {
        let pos = self.attributes.iter().position(|(n, _)| n == name)?;
        Some(self.attributes.remove(pos).1)
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            _ => None,
        })
    }

    pub fn has_element_children(&self) -> bool {
        self.children
            .iter()
            .any(|c| matches!(c, XmlNode::Element(_)))
    }

    /// Concatenated text and CDATA content of the direct children.
    pub fn text_content(&self) -> String {
        let mut out = String::new();
        for child in &self.children {
            match child {
                XmlNode::Text(t) | XmlNode::CData(t) => out.push_str(t),
                XmlNode::Element(_) => {}
            }
        }
        out
    }

    /// Propagates `namespace` to this element and every descendant.
    pub fn set_namespace_recursive(&mut self, namespace: &str) {
        self.namespace = namespace.to_owned();
        for child in &mut self.children {
            if let XmlNode::Element(e) = child {
                e.set_namespace_recursive(namespace);
            }
        }
    }
}

pub(crate) fn is_xml_whitespace(s: &str) -> bool {
    s.bytes().all(|b| matches!(b, b' ' | b'\t' | b'\n' | b'\r'))
}
