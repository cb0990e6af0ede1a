use regex::Regex;

use super::SchemaInternalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Datatype {
    String,
    NonNegativeInteger,
    HexBinary,
    Token,
}

/// An XML Schema datatype with an optional `pattern` facet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DatatypeSpec {
    pub base: Datatype,
    /// Only meaningful for [`Datatype::String`].
    pub regex_facet: Option<String>,
}

impl DatatypeSpec {
    pub fn plain(base: Datatype) -> Self {
        Self {
            base,
            regex_facet: None,
        }
    }

    pub fn string_matching(pattern: impl Into<String>) -> Self {
        Self {
            base: Datatype::String,
            regex_facet: Some(pattern.into()),
        }
    }
}

/// Checks `text` against a datatype. A facet that fails to compile matches
/// nothing.
pub fn match_datatype(spec: &DatatypeSpec, text: &str) -> bool {
    CompiledDatatype::new(spec).is_ok_and(|c| c.matches(text))
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledDatatype {
    base: Datatype,
    facet: Option<Regex>,
}

impl CompiledDatatype {
    pub(crate) fn new(spec: &DatatypeSpec) -> Result<Self, SchemaInternalError> {
        let facet = match (&spec.regex_facet, spec.base) {
            (None, _) => None,
            (Some(pattern), Datatype::String) => Some(compile_facet(pattern)?),
            (Some(pattern), _) => {
                return Err(SchemaInternalError::BadFacet {
                    pattern: pattern.clone(),
                    reason: "pattern facets are only supported on xsd:string".into(),
                })
            }
        };
        Ok(Self {
            base: spec.base,
            facet,
        })
    }

    pub(crate) fn matches(&self, text: &str) -> bool {
        match self.base {
            Datatype::String => self.facet.as_ref().is_none_or(|re| re.is_match(text)),
            Datatype::Token => true,
            Datatype::NonNegativeInteger => {
                let t = collapse(text);
                let digits = t.strip_prefix('+').unwrap_or(t);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            }
            Datatype::HexBinary => {
                let t = collapse(text);
                t.len().is_multiple_of(2) && t.bytes().all(|b| b.is_ascii_hexdigit())
            }
        }
    }
}

fn collapse(text: &str) -> &str {
    text.trim_matches([' ', '\t', '\n', '\r'])
}

/// Translates the XML Schema regex subset used by the grammar into an
/// anchored `regex` pattern. `\d` means ASCII digits and `.` excludes line
/// breaks, as in XML Schema.
fn compile_facet(pattern: &str) -> Result<Regex, SchemaInternalError> {
    let mut out = String::from("^(?:");
    let mut in_class = false;
    let mut chars = pattern.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('d') if in_class => out.push_str("0-9"),
                Some('d') => out.push_str("[0-9]"),
                Some(other) => {
                    out.push('\\');
                    out.push(other);
                }
                None => {
                    return Err(SchemaInternalError::BadFacet {
                        pattern: pattern.to_owned(),
                        reason: "trailing backslash".into(),
                    })
                }
            },
            '[' if !in_class => {
                in_class = true;
                out.push('[');
            }
            ']' if in_class => {
                in_class = false;
                out.push(']');
            }
            '.' if !in_class => out.push_str("[^\\n\\r]"),
            _ => out.push(c),
        }
    }
    out.push_str(")$");
    Regex::new(&out).map_err(|e| SchemaInternalError::BadFacet {
        pattern: pattern.to_owned(),
        reason: e.to_string(),
    })
}
