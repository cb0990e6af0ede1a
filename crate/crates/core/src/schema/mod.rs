//! The polymake data-file grammar and a derivative-based validator for it.
//!
//! [`polymake_schema`] builds the grammar as a [`PatternGraph`];
//! [`validate`] decides whether an [`XmlTree`](crate::infoset::XmlTree)
//! conforms, reporting the deepest point of failure.

mod compact;
mod datatype;
mod grammar;
mod validate;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

pub use compact::{compact_syntax, parse_compact, CompactSyntaxError};
pub use datatype::{match_datatype, Datatype, DatatypeSpec};
pub use grammar::{polymake_schema, PRODUCTIONS};
pub use validate::{
    validate, validate_with, ValidateOptions, ValidationReport, Violation, POLYMAKE_NAMESPACE,
};

/// A node of the grammar's pattern AST.
///
/// `p?` is written as `Choice(p, Empty)` and `p*` as
/// `Choice(OneOrMore(p), Empty)`; see [`Pattern::optional`] and
/// [`Pattern::zero_or_more`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Empty,
    NotAllowed,
    Text,
    Choice(Box<Pattern>, Box<Pattern>),
    Group(Box<Pattern>, Box<Pattern>),
    Interleave(Box<Pattern>, Box<Pattern>),
    OneOrMore(Box<Pattern>),
    Element { name: String, content: Box<Pattern> },
    Attribute { name: String, content: Box<Pattern> },
    Data(DatatypeSpec),
    Value(String),
    NamedRef(String),
}

impl Pattern {
    pub fn choice(a: Pattern, b: Pattern) -> Pattern {
        Pattern::Choice(Box::new(a), Box::new(b))
    }

    pub fn group(a: Pattern, b: Pattern) -> Pattern {
        Pattern::Group(Box::new(a), Box::new(b))
    }

    pub fn interleave(a: Pattern, b: Pattern) -> Pattern {
        Pattern::Interleave(Box::new(a), Box::new(b))
    }

    pub fn one_or_more(p: Pattern) -> Pattern {
        Pattern::OneOrMore(Box::new(p))
    }

    pub fn optional(p: Pattern) -> Pattern {
        Pattern::choice(p, Pattern::Empty)
    }

    pub fn zero_or_more(p: Pattern) -> Pattern {
        Pattern::choice(Pattern::one_or_more(p), Pattern::Empty)
    }

    pub fn element(name: impl Into<String>, content: Pattern) -> Pattern {
        Pattern::Element {
            name: name.into(),
            content: Box::new(content),
        }
    }

    pub fn attribute(name: impl Into<String>, content: Pattern) -> Pattern {
        Pattern::Attribute {
            name: name.into(),
            content: Box::new(content),
        }
    }

    pub fn named(name: impl Into<String>) -> Pattern {
        Pattern::NamedRef(name.into())
    }

    /// Left-associated sequence `a, b, c, ...`.
    pub fn seq(items: impl IntoIterator<Item = Pattern>) -> Pattern {
        fold_left(items, Pattern::group).unwrap_or(Pattern::Empty)
    }

    /// Left-associated alternation `a | b | c | ...`.
    pub fn any_of(items: impl IntoIterator<Item = Pattern>) -> Pattern {
        fold_left(items, Pattern::choice).unwrap_or(Pattern::NotAllowed)
    }
}

fn fold_left(
    items: impl IntoIterator<Item = Pattern>,
    join: fn(Pattern, Pattern) -> Pattern,
) -> Option<Pattern> {
    items.into_iter().reduce(join)
}

/// A set of named productions plus the start pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    pub definitions: BTreeMap<String, Pattern>,
    pub start: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaInternalError {
    #[error("reference to undefined production {0:?}")]
    UndefinedReference(String),
    #[error("production {0:?} refers to itself outside of an element")]
    UnguardedRecursion(String),
    #[error("invalid regular expression facet {pattern:?}: {reason}")]
    BadFacet { pattern: String, reason: String },
}

/// Whether `p` matches the empty sequence of attributes and children.
///
/// Named references are resolved through `graph`; recursive productions are
/// handled by assuming "not nullable" while a production is being evaluated.
pub fn nullable(p: &Pattern, graph: &PatternGraph) -> bool {
    fn go(p: &Pattern, graph: &PatternGraph, memo: &mut HashMap<String, bool>) -> bool {
        match p {
            Pattern::Empty | Pattern::Text => true,
            Pattern::NotAllowed
            | Pattern::Element { .. }
            | Pattern::Attribute { .. }
            | Pattern::Data(_)
            | Pattern::Value(_) => false,
            Pattern::Choice(a, b) => go(a, graph, memo) || go(b, graph, memo),
            Pattern::Group(a, b) | Pattern::Interleave(a, b) => {
                go(a, graph, memo) && go(b, graph, memo)
            }
            Pattern::OneOrMore(a) => go(a, graph, memo),
            Pattern::NamedRef(name) => {
                if let Some(&known) = memo.get(name) {
                    return known;
                }
                memo.insert(name.clone(), false);
                let result = graph
                    .definitions
                    .get(name)
                    .is_some_and(|def| go(def, graph, memo));
                memo.insert(name.clone(), result);
                result
            }
        }
    }
    go(p, graph, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullable_basics() {
        let g = polymake_schema();
        assert!(nullable(&Pattern::Empty, &g));
        assert!(!nullable(&Pattern::element("v", Pattern::Text), &g));
        for x in [
            Pattern::element("v", Pattern::Text),
            Pattern::NotAllowed,
            Pattern::named("Vector"),
        ] {
            assert!(nullable(&Pattern::zero_or_more(x), &g));
        }
        assert!(!nullable(&Pattern::named("TopObject"), &g));
        assert!(nullable(&Pattern::named("VectorContents"), &g));
        assert!(!nullable(&Pattern::named("TopAttribs"), &g));
    }

    #[test]
    fn nullable_terminates_on_self_reference() {
        let mut g = PatternGraph {
            definitions: BTreeMap::new(),
            start: Pattern::named("L"),
        };
        g.definitions.insert(
            "L".into(),
            Pattern::choice(
                Pattern::group(Pattern::named("L"), Pattern::Text),
                Pattern::Empty,
            ),
        );
        assert!(nullable(&Pattern::named("L"), &g));
    }
}
