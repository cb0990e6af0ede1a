use std::collections::BTreeMap;

use super::{Datatype, DatatypeSpec, Pattern, PatternGraph};

/// Names of every production in the built-in grammar, in source order.
pub const PRODUCTIONS: [&str; 20] = [
    "TopObject",
    "TopAttribs",
    "ObjectContent",
    "Property",
    "SubObject",
    "Attachment",
    "LooseData",
    "SimpleName",
    "PropertyData",
    "AttachmentData",
    "Text",
    "Complex",
    "VectorContents",
    "ElementIndex",
    "IdReference",
    "Vector",
    "MatrixContents",
    "Matrix",
    "TupleContents",
    "Tuple",
];

fn r(name: &str) -> Pattern {
    Pattern::named(name)
}

fn attr(name: &str, content: Pattern) -> Pattern {
    Pattern::attribute(name, content)
}

fn text_attr(name: &str) -> Pattern {
    attr(name, Pattern::Text)
}

fn el(name: &str, content: Pattern) -> Pattern {
    Pattern::element(name, content)
}

fn opt(p: Pattern) -> Pattern {
    Pattern::optional(p)
}

fn nonneg() -> Pattern {
    Pattern::Data(DatatypeSpec::plain(Datatype::NonNegativeInteger))
}

fn facet(pattern: &str) -> Pattern {
    Pattern::Data(DatatypeSpec::string_matching(pattern))
}

fn top_attribs(type_content: Pattern) -> Pattern {
    Pattern::seq([
        attr("type", type_content),
        opt(attr("version", facet(r"[\d.]+"))),
        opt(attr("tm", Pattern::Data(DatatypeSpec::plain(Datatype::HexBinary)))),
    ])
}

/// `TopAttribs` with the type facet dropped, as used by `LooseData`.
pub(crate) fn loose_data_attribs() -> Pattern {
    top_attribs(Pattern::Text)
}

/// The polymake data-file grammar.
///
/// Every production is built with the same associativity the compact syntax
/// parser produces, so `parse_compact(compact_syntax())` yields an equal
/// graph, with one exception: `LooseData` inlines a copy of `TopAttribs`
/// whose `type` attribute accepts any text.
pub fn polymake_schema() -> PatternGraph {
    let mut defs = BTreeMap::new();
    let mut def = |name: &str, p: Pattern| {
        defs.insert(name.to_owned(), p);
    };

    def(
        "TopObject",
        el("object", Pattern::seq([r("TopAttribs"), r("ObjectContent")])),
    );
    def("TopAttribs", top_attribs(facet("[a-zA-Z][a-zA-Z_0-9]*::.*")));
    def(
        "ObjectContent",
        Pattern::seq([
            opt(text_attr("name")),
            opt(text_attr("ext")),
            opt(el("description", Pattern::Text)),
            Pattern::zero_or_more(el(
                "credit",
                Pattern::seq([text_attr("product"), Pattern::Text]),
            )),
            Pattern::interleave(
                Pattern::zero_or_more(r("Property")),
                Pattern::zero_or_more(r("Attachment")),
            ),
        ]),
    );
    def(
        "Property",
        el(
            "property",
            Pattern::seq([
                r("SimpleName"),
                opt(text_attr("ext")),
                Pattern::any_of([
                    Pattern::seq([attr("undef", Pattern::Value("true".into())), Pattern::Empty]),
                    Pattern::seq([opt(text_attr("type")), r("PropertyData")]),
                    r("Text"),
                    Pattern::one_or_more(r("SubObject")),
                ]),
            ]),
        ),
    );
    def(
        "SubObject",
        el(
            "object",
            Pattern::seq([opt(text_attr("type")), r("ObjectContent")]),
        ),
    );
    def(
        "Attachment",
        el(
            "attachment",
            Pattern::seq([r("SimpleName"), opt(text_attr("ext")), r("AttachmentData")]),
        ),
    );
    // Loose data shares TopAttribs except that its type is free text: real
    // data files carry container types such as `Array<Int>` with no
    // application prefix.
    def(
        "LooseData",
        el(
            "data",
            Pattern::seq([
                loose_data_attribs(),
                opt(text_attr("ext")),
                opt(el("description", Pattern::Text)),
                r("PropertyData"),
            ]),
        ),
    );
    def("SimpleName", attr("name", facet("[a-zA-Z][a-zA-Z_0-9]*")));
    def(
        "PropertyData",
        Pattern::any_of([
            Pattern::seq([text_attr("value"), Pattern::Empty]),
            r("IdReference"),
            r("Complex"),
            el("m", Pattern::one_or_more(r("SubObject"))),
        ]),
    );
    def(
        "AttachmentData",
        Pattern::any_of([
            Pattern::seq([opt(text_attr("type")), text_attr("value"), Pattern::Empty]),
            Pattern::seq([text_attr("type"), opt(text_attr("construct")), r("Complex")]),
            r("Text"),
        ]),
    );
    def(
        "Text",
        Pattern::seq([attr("type", Pattern::Value("text".into())), Pattern::Text]),
    );
    def("Complex", Pattern::any_of([r("Vector"), r("Matrix"), r("Tuple")]));
    def(
        "VectorContents",
        Pattern::any_of([
            Pattern::Text,
            Pattern::seq([
                opt(attr("dim", nonneg())),
                Pattern::any_of([
                    Pattern::zero_or_more(el(
                        "e",
                        Pattern::seq([r("ElementIndex"), Pattern::Text]),
                    )),
                    Pattern::one_or_more(el(
                        "t",
                        Pattern::seq([opt(r("ElementIndex")), r("TupleContents")]),
                    )),
                ]),
            ]),
        ]),
    );
    def("ElementIndex", attr("i", nonneg()));
    def(
        "IdReference",
        el("r", Pattern::seq([opt(attr("id", nonneg())), Pattern::Empty])),
    );
    def("Vector", el("v", r("VectorContents")));
    def(
        "MatrixContents",
        Pattern::any_of([
            Pattern::seq([
                opt(attr("cols", nonneg())),
                Pattern::zero_or_more(r("Vector")),
            ]),
            Pattern::seq([
                attr("dim", nonneg()),
                Pattern::zero_or_more(el(
                    "v",
                    Pattern::seq([r("ElementIndex"), r("VectorContents")]),
                )),
            ]),
            Pattern::one_or_more(r("Matrix")),
            Pattern::one_or_more(r("Tuple")),
        ]),
    );
    def("Matrix", el("m", r("MatrixContents")));
    def(
        "TupleContents",
        Pattern::seq([
            opt(attr("id", nonneg())),
            Pattern::any_of([
                Pattern::Text,
                Pattern::one_or_more(Pattern::any_of([
                    r("Vector"),
                    r("Matrix"),
                    r("Tuple"),
                    r("IdReference"),
                    el("e", Pattern::Text),
                ])),
            ]),
        ]),
    );
    def("Tuple", el("t", r("TupleContents")));

    PatternGraph {
        definitions: defs,
        start: Pattern::choice(r("TopObject"), r("LooseData")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn has_every_production_and_nothing_else() {
        let g = polymake_schema();
        let names: Vec<&str> = g.definitions.keys().map(String::as_str).collect();
        let mut expected = PRODUCTIONS.to_vec();
        expected.sort_unstable();
        assert_eq!(names, expected);
    }

    #[test]
    fn start_is_top_object_or_loose_data() {
        assert_eq!(
            polymake_schema().start,
            Pattern::choice(r("TopObject"), r("LooseData"))
        );
    }

    #[test]
    fn simple_name_carries_its_facet() {
        let g = polymake_schema();
        assert_eq!(
            g.definitions["SimpleName"],
            attr(
                "name",
                Pattern::Data(DatatypeSpec::string_matching("[a-zA-Z][a-zA-Z_0-9]*"))
            )
        );
    }

    #[test]
    fn top_attribs_requires_type_only() {
        let g = polymake_schema();
        let Pattern::Group(head, tm) = &g.definitions["TopAttribs"] else {
            panic!("TopAttribs is not a sequence");
        };
        let Pattern::Group(ty, version) = head.as_ref() else {
            panic!("TopAttribs head is not a sequence");
        };
        assert!(matches!(ty.as_ref(), Pattern::Attribute { name, .. } if name == "type"));
        assert!(matches!(version.as_ref(),
            Pattern::Choice(a, e) if **e == Pattern::Empty
                && matches!(a.as_ref(), Pattern::Attribute { name, .. } if name == "version")));
        assert!(matches!(tm.as_ref(),
            Pattern::Choice(a, e) if **e == Pattern::Empty
                && matches!(a.as_ref(), Pattern::Attribute { name, content }
                    if name == "tm" && **content == Pattern::Data(DatatypeSpec::plain(Datatype::HexBinary)))));
    }

    #[test]
    fn no_dangling_references() {
        fn refs<'a>(p: &'a Pattern, out: &mut Vec<&'a str>) {
            match p {
                Pattern::NamedRef(n) => out.push(n),
                Pattern::Choice(a, b) | Pattern::Group(a, b) | Pattern::Interleave(a, b) => {
                    refs(a, out);
                    refs(b, out);
                }
                Pattern::OneOrMore(a)
                | Pattern::Element { content: a, .. }
                | Pattern::Attribute { content: a, .. } => refs(a, out),
                _ => {}
            }
        }
        let g = polymake_schema();
        let mut all = Vec::new();
        refs(&g.start, &mut all);
        for p in g.definitions.values() {
            refs(p, &mut all);
        }
        for name in all {
            assert!(g.definitions.contains_key(name), "{name}");
        }
    }
}
