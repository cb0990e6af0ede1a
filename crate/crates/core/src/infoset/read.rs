use std::collections::HashMap;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

use super::{is_xml_whitespace, ProcessingInstruction, XmlElement, XmlNode, XmlTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct WellFormednessError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses a UTF-8 XML document into an [`XmlTree`].
pub fn read_document(bytes: &[u8]) -> Result<XmlTree, WellFormednessError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        error_at(
            bytes,
            e.valid_up_to(),
            format!("invalid UTF-8 sequence: {e}"),
        )
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    TreeBuilder::new(text).run()
}

fn error_at(input: &[u8], offset: usize, message: impl Into<String>) -> WellFormednessError {
    let offset = offset.min(input.len());
    let before = &input[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let line_start = before
        .iter()
        .rposition(|&b| b == b'\n')
        .map_or(0, |p| p + 1);
    // Columns count characters, not bytes.
    let column = String::from_utf8_lossy(&before[line_start..]).chars().count() + 1;
    WellFormednessError {
        line,
        column,
        message: message.into(),
    }
}

struct Frame {
    element: XmlElement,
    qname: String,
    scope: HashMap<String, String>,
}

struct TreeBuilder<'a> {
    input: &'a str,
    reader: Reader<&'a [u8]>,
    stack: Vec<Frame>,
    root: Option<XmlElement>,
    pis: Vec<ProcessingInstruction>,
    encoding: String,
    seen_decl: bool,
}

impl<'a> TreeBuilder<'a> {
    fn new(input: &'a str) -> Self {
        let mut reader = Reader::from_str(input);
        reader.config_mut().check_end_names = true;
        Self {
            input,
            reader,
            stack: Vec::new(),
            root: None,
            pis: Vec::new(),
            encoding: "utf-8".to_owned(),
            seen_decl: false,
        }
    }

    fn err(&self, offset: u64, message: impl Into<String>) -> WellFormednessError {
        error_at(self.input.as_bytes(), offset as usize, message)
    }

    fn run(mut self) -> Result<XmlTree, WellFormednessError> {
        loop {
            let start = self.reader.buffer_position();
            let event = match self.reader.read_event() {
                Ok(ev) => ev,
                Err(e) => {
                    let pos = self.reader.error_position();
                    return Err(self.err(pos, e.to_string()));
                }
            };
            match event {
                Event::Decl(decl) => {
                    if self.seen_decl || self.root.is_some() || !self.stack.is_empty() {
                        return Err(self.err(start, "misplaced XML declaration"));
                    }
                    self.seen_decl = true;
                    if let Some(enc) = decl.encoding() {
                        let enc = enc.map_err(|e| self.err(start, e.to_string()))?;
                        let enc = String::from_utf8_lossy(&enc).into_owned();
                        if !enc.eq_ignore_ascii_case("utf-8") && !enc.eq_ignore_ascii_case("utf8")
                        {
                            return Err(self.err(start, format!("unsupported encoding {enc:?}")));
                        }
                        self.encoding = enc;
                    }
                }
                Event::PI(pi) => {
                    let target = String::from_utf8_lossy(pi.target()).into_owned();
                    let content = String::from_utf8_lossy(pi.content())
                        .trim_start_matches([' ', '\t', '\r', '\n'])
                        .to_owned();
                    if target.eq_ignore_ascii_case("xml") {
                        return Err(self.err(start, "misplaced XML declaration"));
                    }
                    // Only processing instructions before the root are retained.
                    if self.root.is_none() && self.stack.is_empty() {
                        self.pis.push(ProcessingInstruction { target, content });
                    }
                }
                Event::DocType(_) => {
                    return Err(self.err(start, "document type declarations are not supported"));
                }
                Event::Comment(_) => {}
                Event::Start(tag) => {
                    let frame = self.open(&tag, start)?;
                    self.stack.push(frame);
                }
                Event::Empty(tag) => {
                    let frame = self.open(&tag, start)?;
                    self.close(frame);
                }
                Event::End(tag) => {
                    let name = String::from_utf8_lossy(tag.name().as_ref()).into_owned();
                    let Some(frame) = self.stack.pop() else {
                        return Err(self.err(start, format!("unexpected end tag </{name}>")));
                    };
                    if frame.qname != name {
                        return Err(self.err(
                            start,
                            format!("end tag </{name}> does not match <{}>", frame.qname),
                        ));
                    }
                    self.close(frame);
                }
                Event::Text(text) => {
                    let raw = std::str::from_utf8(text.as_ref())
                        .map_err(|e| self.err(start, e.to_string()))?;
                    let normalized = normalize_newlines(raw);
                    let decoded = quick_xml::escape::unescape(&normalized)
                        .map_err(|e| self.err(start, e.to_string()))?
                        .into_owned();
                    self.push_text(decoded, start)?;
                }
                Event::CData(data) => {
                    let raw = String::from_utf8_lossy(data.as_ref()).into_owned();
                    match self.stack.last_mut() {
                        Some(frame) => frame.element.children.push(XmlNode::CData(raw)),
                        None => return Err(self.err(start, "CDATA section outside root element")),
                    }
                }
                Event::Eof => break,
            }
        }
        if let Some(frame) = self.stack.last() {
            let pos = self.input.len() as u64;
            return Err(self.err(pos, format!("unclosed element <{}>", frame.qname)));
        }
        let root = self
            .root
            .ok_or_else(|| error_at(self.input.as_bytes(), self.input.len(), "no root element"))?;
        Ok(XmlTree {
            root,
            leading_pis: self.pis,
            declared_encoding: self.encoding,
        })
    }

    fn push_text(&mut self, text: String, start: u64) -> Result<(), WellFormednessError> {
        if text.is_empty() {
            return Ok(());
        }
        match self.stack.last_mut() {
            Some(frame) => {
                if let Some(XmlNode::Text(prev)) = frame.element.children.last_mut() {
                    prev.push_str(&text);
                } else {
                    frame.element.children.push(XmlNode::Text(text));
                }
                Ok(())
            }
            None if is_xml_whitespace(&text) => Ok(()),
            None => Err(self.err(start, "text outside root element")),
        }
    }

    fn open(&self, tag: &BytesStart<'_>, start: u64) -> Result<Frame, WellFormednessError> {
        if self.root.is_some() && self.stack.is_empty() {
            return Err(self.err(start, "more than one root element"));
        }
        let qname = String::from_utf8_lossy(tag.name().as_ref()).into_owned();
        let mut scope = self
            .stack
            .last()
            .map(|f| f.scope.clone())
            .unwrap_or_default();
        let mut attributes: Vec<(String, String)> = Vec::new();
        for attr in tag.attributes() {
            let attr = attr.map_err(|e| self.err(start, e.to_string()))?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
            let raw = std::str::from_utf8(&attr.value).map_err(|e| self.err(start, e.to_string()))?;
            // Attribute-value normalization: literal whitespace becomes a space.
            let normalized: String = normalize_newlines(raw)
                .chars()
                .map(|c| if matches!(c, '\t' | '\n') { ' ' } else { c })
                .collect();
            let value = quick_xml::escape::unescape(&normalized)
                .map_err(|e| self.err(start, e.to_string()))?
                .into_owned();
            if key == "xmlns" {
                scope.insert(String::new(), value);
            } else if let Some(prefix) = key.strip_prefix("xmlns:") {
                scope.insert(prefix.to_owned(), value);
            } else {
                if attributes.iter().any(|(n, _)| *n == key) {
                    return Err(self.err(start, format!("duplicate attribute {key:?}")));
                }
                attributes.push((key, value));
            }
        }
        let (prefix, local) = match qname.split_once(':') {
            Some((p, l)) => (p, l),
            None => ("", qname.as_str()),
        };
        let namespace = match scope.get(prefix) {
            Some(ns) => ns.clone(),
            None if prefix.is_empty() => String::new(),
            None => return Err(self.err(start, format!("undeclared namespace prefix {prefix:?}"))),
        };
        Ok(Frame {
            element: XmlElement {
                name: local.to_owned(),
                namespace,
                attributes,
                children: Vec::new(),
            },
            qname,
            scope,
        })
    }

    fn close(&mut self, frame: Frame) {
        let mut element = frame.element;
        if element.has_element_children() {
            element
                .children
                .retain(|c| !matches!(c, XmlNode::Text(t) if is_xml_whitespace(t)));
        }
        match self.stack.last_mut() {
            Some(parent) => parent.element.children.push(XmlNode::Element(element)),
            None => self.root = Some(element),
        }
    }
}

fn normalize_newlines(raw: &str) -> std::borrow::Cow<'_, str> {
    if raw.contains('\r') {
        raw.replace("\r\n", "\n").replace('\r', "\n").into()
    } else {
        raw.into()
    }
}
