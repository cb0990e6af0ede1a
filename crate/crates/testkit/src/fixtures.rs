use pmxml_core::infoset::{read_document, XmlTree};

pub const SQUARE_XML: &str = include_str!("../fixtures/square.xml");
pub const POLYNOMIAL_XML: &str = include_str!("../fixtures/polynomial.xml");

pub fn square_tree() -> XmlTree {
    read_document(SQUARE_XML.as_bytes()).expect("square fixture is well-formed")
}

pub fn polynomial_tree() -> XmlTree {
    read_document(POLYNOMIAL_XML.as_bytes()).expect("polynomial fixture is well-formed")
}

/// Absolute path of a fixture file, for tools that take paths.
pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}
