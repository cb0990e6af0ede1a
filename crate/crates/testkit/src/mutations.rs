//! Single-edit corruptions of the fixture files, each of which breaks the
//! grammar.

use crate::fixtures::{POLYNOMIAL_XML, SQUARE_XML};

pub struct Mutation {
    pub label: &'static str,
    pub source: &'static str,
    pub find: &'static str,
    pub replace: &'static str,
}

impl Mutation {
    /// The corrupted document text. Panics if the edit does not apply.
    pub fn apply(&self) -> String {
        assert!(
            self.source.contains(self.find),
            "mutation {:?} does not apply",
            self.label
        );
        self.source.replacen(self.find, self.replace, 1)
    }
}

const fn m(
    label: &'static str,
    source: &'static str,
    find: &'static str,
    replace: &'static str,
) -> Mutation {
    Mutation {
        label,
        source,
        find,
        replace,
    }
}

pub const MUTATIONS: &[Mutation] = &[
    m(
        "missing type",
        SQUARE_XML,
        r#"type="polytope::Polytope&lt;Rational&gt;""#,
        "",
    ),
    m(
        "name violating SimpleName",
        SQUARE_XML,
        r#"<property name="VERTICES">"#,
        r#"<property name="1VERTICES">"#,
    ),
    m(
        "value attribute with child content",
        SQUARE_XML,
        r#"<property name="N_FACETS" value="4" />"#,
        r#"<property name="N_FACETS" value="4"><v>4</v></property>"#,
    ),
    m(
        "r inside e",
        SQUARE_XML,
        r#"<e i="2">1</e>"#,
        r#"<e i="2"><r id="1"/></e>"#,
    ),
    m(
        "negative i index",
        SQUARE_XML,
        r#"<e i="1">1</e>"#,
        r#"<e i="-1">1</e>"#,
    ),
    m(
        "odd-length tm",
        SQUARE_XML,
        r#"version="3.0""#,
        r#"version="3.0" tm="abc""#,
    ),
    m(
        "property outside object",
        SQUARE_XML,
        "<v>4 5 2</v>",
        r#"<v><property name="X" value="1" /></v>"#,
    ),
    m(
        "attachment without name",
        SQUARE_XML,
        r#"<property name="BOUNDED" value="true" />"#,
        r#"<property name="BOUNDED" value="true" /><attachment type="text">note</attachment>"#,
    ),
    m(
        "data with a property child",
        POLYNOMIAL_XML,
        "  <v>\n    <t>",
        "  <property name=\"X\" value=\"1\" />\n  <v>\n    <t>",
    ),
    m(
        "sparse row without dim on the matrix",
        SQUARE_XML,
        "<m cols=\"3\">\n      <v> <e i=\"1\">1</e> </v>",
        "<m>\n      <v i=\"0\"> <e i=\"1\">1</e> </v>",
    ),
    m(
        "non-integer cols",
        SQUARE_XML,
        r#"<m cols="3">"#,
        r#"<m cols="3.5">"#,
    ),
    m(
        "text where SubObject+ required",
        SQUARE_XML,
        r#"<property name="TRIANGULATION">"#,
        r#"<property name="TRIANGULATION">unnamed</property><property name="UNUSED">"#,
    ),
    m(
        "undef other than true",
        SQUARE_XML,
        r#"<property name="BOUNDED" value="true" />"#,
        r#"<property name="BOUNDED" undef="false" />"#,
    ),
    m(
        "unknown attribute",
        SQUARE_XML,
        r#"<property name="VOLUME" value="1/9" />"#,
        r#"<property name="VOLUME" value="1/9" unit="m3" />"#,
    ),
    m(
        "e without index",
        POLYNOMIAL_XML,
        r#"<e i="0">2</e>"#,
        "<e>2</e>",
    ),
    m(
        "description after property",
        SQUARE_XML,
        r#"<property name="VOLUME" value="1/9" />"#,
        r#"<property name="VOLUME" value="1/9" /><description>late</description>"#,
    ),
];
