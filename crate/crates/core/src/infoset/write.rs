use std::fmt::Write as _;

use super::{XmlElement, XmlNode, XmlTree};

const INDENT: &str = "  ";

/// Serializes a tree as UTF-8 bytes.
pub fn write_document(tree: &XmlTree) -> Vec<u8> {
    write_document_string(tree).into_bytes()
}

pub fn write_document_string(tree: &XmlTree) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n");
    for pi in &tree.leading_pis {
        out.push_str("<?");
        out.push_str(&pi.target);
        if !pi.content.is_empty() {
            out.push(' ');
            out.push_str(&pi.content);
        }
        out.push_str("?>\n");
    }
    write_element(&mut out, &tree.root, 0, "");
    out.push('\n');
    out
}

fn write_element(out: &mut String, el: &XmlElement, depth: usize, parent_ns: &str) {
    out.push('<');
    out.push_str(&el.name);
    for (name, value) in &el.attributes {
        let _ = write!(out, " {name}=\"");
        escape_attr(out, value);
        out.push('"');
    }
    if el.namespace != parent_ns {
        out.push_str(" xmlns=\"");
        escape_attr(out, &el.namespace);
        out.push('"');
    }
    if el.children.is_empty() {
        out.push_str(" />");
        return;
    }
    out.push('>');
    let has_elements = el.has_element_children();
    let has_text = el
        .children
        .iter()
        .any(|c| !matches!(c, XmlNode::Element(_)));
    if has_elements && !has_text {
        for child in el.child_elements() {
            out.push('\n');
            for _ in 0..=depth {
                out.push_str(INDENT);
            }
            write_element(out, child, depth + 1, &el.namespace);
        }
        out.push('\n');
        for _ in 0..depth {
            out.push_str(INDENT);
        }
    } else {
        // Text-only or mixed content goes inline so no whitespace is invented.
        for child in &el.children {
            match child {
                XmlNode::Element(e) => write_element(out, e, depth + 1, &el.namespace),
                XmlNode::Text(t) => escape_text(out, t),
                XmlNode::CData(t) => write_cdata(out, t),
            }
        }
    }
    out.push_str("</");
    out.push_str(&el.name);
    out.push('>');
}

fn escape_text(out: &mut String, text: &str) {
    for c in text.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
}

fn escape_attr(out: &mut String, text: &str) {
    for c in text.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
}

fn write_cdata(out: &mut String, text: &str) {
    // `]]>` cannot appear inside a section; split it across two.
    out.push_str("<![CDATA[");
    out.push_str(&text.replace("]]>", "]]]]><![CDATA[>"));
    out.push_str("]]>");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infoset::{read_document, ProcessingInstruction};

    #[test]
    fn escapes_attribute_values() {
        let tree = XmlTree::new(XmlElement::new("a").with_attr("type", "A<B>\"&"));
        let s = write_document_string(&tree);
        assert!(s.contains(r#"type="A&lt;B&gt;&quot;&amp;""#), "{s}");
    }

    #[test]
    fn empty_element_is_self_closing() {
        let tree = XmlTree::new(XmlElement::new("m"));
        assert_eq!(
            write_document_string(&tree),
            "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<m />\n"
        );
    }

    #[test]
    fn layout_matches_indentation_style() {
        let mut tree = XmlTree::new(
            XmlElement::new("object")
                .in_namespace("urn:pm")
                .with_attr("name", "x")
                .with_child(
                    XmlElement::new("property")
                        .in_namespace("urn:pm")
                        .with_attr("name", "P")
                        .with_child(XmlElement::new("v").in_namespace("urn:pm").with_text("1 0")),
                ),
        );
        tree.leading_pis.push(ProcessingInstruction::new("pm", "chk=\"00\""));
        let expected = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n\
<?pm chk=\"00\"?>\n\
<object name=\"x\" xmlns=\"urn:pm\">\n  <property name=\"P\">\n    <v>1 0</v>\n  </property>\n</object>\n";
        assert_eq!(write_document_string(&tree), expected);
    }

    #[test]
    fn awkward_characters_survive_a_reread() {
        let el = XmlElement::new("a")
            .with_attr("k", "tab\there\nnl\r")
            .with_text("x\r\ny ]]> <&>");
        let mut el = el;
        el.children.push(XmlNode::CData("a]]>b".into()));
        let tree = XmlTree::new(el);
        let back = read_document(&write_document(&tree)).unwrap();
        assert_eq!(back.root.attr("k"), Some("tab\there\nnl\r"));
        assert_eq!(back.root.text_content(), "x\r\ny ]]> <&>a]]>b");
    }

    #[test]
    fn clears_namespace_for_unqualified_children() {
        let tree = XmlTree::new(
            XmlElement::new("a")
                .in_namespace("urn:x")
                .with_child(XmlElement::new("b")),
        );
        let back = read_document(&write_document(&tree)).unwrap();
        assert_eq!(back, tree);
    }
}
