use super::{is_xml_whitespace, XmlElement, XmlNode, XmlTree};

/// Structural equality ignoring attribute order, formatting whitespace and
/// the text/CDATA distinction. Processing instructions compare verbatim.
pub fn infoset_equal(a: &XmlTree, b: &XmlTree) -> bool {
    a.leading_pis == b.leading_pis && elements_equal(&a.root, &b.root)
}

#[derive(PartialEq)]
enum Normalized<'a> {
    Element(&'a XmlElement),
    Text(String),
}

fn normalized_children(el: &XmlElement) -> Vec<Normalized<'_>> {
    let mut out: Vec<Normalized<'_>> = Vec::new();
    for child in &el.children {
        match child {
            XmlNode::Element(e) => out.push(Normalized::Element(e)),
            XmlNode::Text(t) | XmlNode::CData(t) => {
                if let Some(Normalized::Text(prev)) = out.last_mut() {
                    prev.push_str(t);
                } else {
                    out.push(Normalized::Text(t.clone()));
                }
            }
        }
    }
    if el.has_element_children() {
        out.retain(|n| !matches!(n, Normalized::Text(t) if is_xml_whitespace(t)));
    }
    out.retain(|n| !matches!(n, Normalized::Text(t) if t.is_empty()));
    out
}

fn elements_equal(a: &XmlElement, b: &XmlElement) -> bool {
    if a.name != b.name || a.namespace != b.namespace {
        return false;
    }
    if a.attributes.len() != b.attributes.len()
        || !a
            .attributes
            .iter()
            .all(|(n, v)| b.attr(n) == Some(v.as_str()))
    {
        return false;
    }
    let ca = normalized_children(a);
    let cb = normalized_children(b);
    ca.len() == cb.len()
        && ca.iter().zip(&cb).all(|pair| match pair {
            (Normalized::Element(x), Normalized::Element(y)) => elements_equal(x, y),
            (Normalized::Text(x), Normalized::Text(y)) => x == y,
            _ => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infoset::read_document;

    fn eq(a: &str, b: &str) -> bool {
        infoset_equal(
            &read_document(a.as_bytes()).unwrap(),
            &read_document(b.as_bytes()).unwrap(),
        )
    }

    #[test]
    fn cdata_equals_text() {
        assert!(eq("<v>1 0 0</v>", "<v><![CDATA[1 0 0]]></v>"));
        assert!(eq("<v>1 <![CDATA[0]]> 0</v>", "<v>1 0 0</v>"));
    }

    #[test]
    fn differing_text_is_unequal() {
        assert!(!eq("<v>1 0 0</v>", "<v>1 0 1</v>"));
    }

    #[test]
    fn attribute_order_is_ignored() {
        assert!(eq(r#"<a x="1" y="2"/>"#, r#"<a y="2" x="1"/>"#));
        assert!(!eq(r#"<a x="1" y="2"/>"#, r#"<a y="2" x="2"/>"#));
        assert!(!eq(r#"<a x="1"/>"#, r#"<a x="1" y="2"/>"#));
    }

    #[test]
    fn namespace_and_pis_matter() {
        assert!(!eq(r#"<a xmlns="urn:x"/>"#, "<a/>"));
        assert!(!eq("<?pm a?><a/>", "<?pm b?><a/>"));
        assert!(eq("<?pm a?><a/>", "<?pm a?>\n<a/>"));
    }

    #[test]
    fn child_order_matters() {
        assert!(!eq("<a><b/><c/></a>", "<a><c/><b/></a>"));
        assert!(eq("<a>\n  <b/>\n  <c/>\n</a>", "<a><b/><c/></a>"));
    }
}
