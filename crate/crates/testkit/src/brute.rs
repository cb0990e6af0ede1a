//! Reference validator: exhaustive backtracking over attribute subsets and
//! child subsequences, straight from the meaning of each pattern.
//!
//! Exponential in the number of attributes and children, so only suitable
//! for small trees.

use std::collections::HashMap;

use pmxml_core::infoset::{XmlElement, XmlNode, XmlTree};
use pmxml_core::schema::{match_datatype, Pattern, PatternGraph, POLYMAKE_NAMESPACE};

#[derive(Clone)]
enum Item<'a> {
    Element(&'a XmlElement),
    Text(String),
}

struct Frame<'a> {
    attrs: &'a [(String, String)],
    kids: Vec<Item<'a>>,
}

pub struct BruteValidator<'g> {
    graph: &'g PatternGraph,
    namespace: String,
}

fn is_ws(s: &str) -> bool {
    s.chars().all(|c| matches!(c, ' ' | '\t' | '\n' | '\r'))
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// All submasks of `mask`, including 0 and `mask`.
fn submasks(mask: u32) -> Vec<u32> {
    let mut out = vec![];
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out
}

/// Text and element children with adjacent text merged.
fn merge(el: &XmlElement) -> Vec<Item<'_>> {
    let mut out: Vec<Item<'_>> = Vec::new();
    for c in &el.children {
        match c {
            XmlNode::Element(e) => out.push(Item::Element(e)),
            XmlNode::Text(t) | XmlNode::CData(t) => match out.last_mut() {
                Some(Item::Text(prev)) => prev.push_str(t),
                _ => out.push(Item::Text(t.clone())),
            },
        }
    }
    out
}

impl<'g> BruteValidator<'g> {
    pub fn new(graph: &'g PatternGraph) -> Self {
        Self {
            graph,
            namespace: String::new(),
        }
    }

    pub fn is_valid(&mut self, tree: &XmlTree, lax_namespace: bool) -> bool {
        let ns = tree.root.namespace.as_str();
        if !(ns == POLYMAKE_NAMESPACE || (lax_namespace && ns.is_empty())) {
            return false;
        }
        self.namespace = ns.to_owned();
        let root = [Item::Element(&tree.root)];
        let frame = Frame {
            attrs: &[],
            kids: root.to_vec(),
        };
        let start = self.graph.start.clone();
        self.matches(&start, &frame, 0, 1, &mut HashMap::new())
    }

    /// Whether `p` matches exactly the attributes in `attrs` and the children
    /// in `kids` (a subsequence, in document order).
    fn matches(
        &self,
        p: &Pattern,
        f: &Frame<'_>,
        attrs: u32,
        kids: u32,
        memo: &mut HashMap<(usize, u32, u32), bool>,
    ) -> bool {
        let key = (p as *const Pattern as usize, attrs, kids);
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let r = self.matches_uncached(p, f, attrs, kids, memo);
        memo.insert(key, r);
        r
    }

    fn matches_uncached(
        &self,
        p: &Pattern,
        f: &Frame<'_>,
        attrs: u32,
        kids: u32,
        memo: &mut HashMap<(usize, u32, u32), bool>,
    ) -> bool {
        match p {
            Pattern::Empty => attrs == 0 && kids == 0,
            Pattern::NotAllowed => false,
            Pattern::Text => attrs == 0 && bits(kids).all(|i| matches!(f.kids[i], Item::Text(_))),
            Pattern::Data(_) | Pattern::Value(_) => {
                attrs == 0 && {
                    let texts: Vec<&str> = bits(kids)
                        .filter_map(|i| match &f.kids[i] {
                            Item::Text(t) => Some(t.as_str()),
                            Item::Element(_) => None,
                        })
                        .collect();
                    texts.len() == 1
                        && bits(kids).count() == 1
                        && self.string_matches(p, texts[0])
                }
            }
            Pattern::Choice(a, b) => {
                self.matches(a, f, attrs, kids, memo) || self.matches(b, f, attrs, kids, memo)
            }
            Pattern::Group(a, b) => {
                let order: Vec<usize> = bits(kids).collect();
                submasks(attrs).into_iter().any(|a1| {
                    (0..=order.len()).any(|k| {
                        let k1: u32 = order[..k].iter().map(|i| 1 << i).sum();
                        self.matches(a, f, a1, k1, memo)
                            && self.matches(b, f, attrs & !a1, kids & !k1, memo)
                    })
                })
            }
            Pattern::Interleave(a, b) => submasks(attrs).into_iter().any(|a1| {
                submasks(kids).into_iter().any(|k1| {
                    self.matches(a, f, a1, k1, memo)
                        && self.matches(b, f, attrs & !a1, kids & !k1, memo)
                })
            }),
            Pattern::OneOrMore(inner) => {
                if self.matches(inner, f, attrs, kids, memo) {
                    return true;
                }
                let order: Vec<usize> = bits(kids).collect();
                submasks(attrs).into_iter().any(|a1| {
                    (0..=order.len()).any(|k| {
                        let k1: u32 = order[..k].iter().map(|i| 1 << i).sum();
                        (a1 != 0 || k1 != 0)
                            && (a1, k1) != (attrs, kids)
                            && self.matches(inner, f, a1, k1, memo)
                            && self.matches(p, f, attrs & !a1, kids & !k1, memo)
                    })
                })
            }
            Pattern::Attribute { name, content } => {
                kids == 0 && attrs.count_ones() == 1 && {
                    let (key, value) = &f.attrs[attrs.trailing_zeros() as usize];
                    key == name && self.value_matches(content, value)
                }
            }
            Pattern::Element { name, content } => {
                attrs == 0 && kids.count_ones() == 1 && {
                    match &f.kids[kids.trailing_zeros() as usize] {
                        Item::Element(el) => {
                            el.name == *name
                                && el.namespace == self.namespace
                                && self.element_matches(content, el)
                        }
                        Item::Text(_) => false,
                    }
                }
            }
            Pattern::NamedRef(n) => match self.graph.definitions.get(n) {
                Some(def) => self.matches(def, f, attrs, kids, memo),
                None => false,
            },
        }
    }

    fn element_matches(&self, content: &Pattern, el: &XmlElement) -> bool {
        if el.attributes.len() > 31 {
            return false;
        }
        let merged = merge(el);
        let all_attrs = (1u32 << el.attributes.len()) - 1;
        // Candidate readings of the content: whitespace-only text is
        // ignorable, and no content at all reads as an empty string.
        let readings: Vec<Vec<Item<'_>>> = match merged.as_slice() {
            [] => vec![vec![], vec![Item::Text(String::new())]],
            [Item::Text(t)] if is_ws(t) => vec![vec![], merged.clone()],
            [_] => vec![merged.clone()],
            _ => vec![merged
                .iter()
                .filter(|k| !matches!(k, Item::Text(t) if is_ws(t)))
                .cloned()
                .collect()],
        };
        readings.into_iter().any(|kids| {
            if kids.len() > 31 {
                return false;
            }
            let all_kids = (1u32 << kids.len()) - 1;
            let frame = Frame {
                attrs: &el.attributes,
                kids,
            };
            self.matches(content, &frame, all_attrs, all_kids, &mut HashMap::new())
        })
    }

    fn value_matches(&self, content: &Pattern, value: &str) -> bool {
        let empty = Frame {
            attrs: &[],
            kids: vec![],
        };
        if is_ws(value) && self.matches(content, &empty, 0, 0, &mut HashMap::new()) {
            return true;
        }
        let frame = Frame {
            attrs: &[],
            kids: vec![Item::Text(value.to_owned())],
        };
        self.matches(content, &frame, 0, 1, &mut HashMap::new())
    }

    fn string_matches(&self, p: &Pattern, s: &str) -> bool {
        match p {
            Pattern::Value(v) => {
                let norm = |x: &str| x.split_ascii_whitespace().collect::<Vec<_>>().join(" ");
                norm(v) == norm(s)
            }
            Pattern::Data(spec) => match_datatype(spec, s),
            _ => false,
        }
    }
}
