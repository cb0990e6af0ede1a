//! Derivative-based validation.
//!
//! Patterns are compiled into a hash-consed arena so that identical
//! residual patterns share one id; every derivative is memoized per call.
//! Element children are consumed left to right, attributes as an unordered
//! set, and interleave is handled by deriving either operand.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::datatype::CompiledDatatype;
use super::{Pattern, PatternGraph, SchemaInternalError};
use crate::infoset::{is_xml_whitespace, XmlElement, XmlNode, XmlTree};

pub const POLYMAKE_NAMESPACE: &str = "http://www.math.tu-berlin.de/polymake/#3";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Accept a root element without any namespace.
    pub lax_namespace: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Element path such as `/object/property[3]/m`.
    pub path: String,
    /// Production responsible for the failed constraint.
    pub rule: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.path, self.rule, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violation(v: Option<Violation>) -> Self {
        match v {
            None => Self {
                valid: true,
                violations: Vec::new(),
            },
            Some(v) => Self {
                valid: false,
                violations: vec![v],
            },
        }
    }
}

/// Validates in strict namespace mode.
pub fn validate(
    tree: &XmlTree,
    graph: &PatternGraph,
) -> Result<ValidationReport, SchemaInternalError> {
    validate_with(tree, graph, ValidateOptions::default())
}

pub fn validate_with(
    tree: &XmlTree,
    graph: &PatternGraph,
    opts: ValidateOptions,
) -> Result<ValidationReport, SchemaInternalError> {
    let mut arena = Arena::compile(graph)?;
    let root = &tree.root;
    let root_path = format!("/{}", root.name);
    let expected_ns = if root.namespace == POLYMAKE_NAMESPACE {
        POLYMAKE_NAMESPACE
    } else if opts.lax_namespace && root.namespace.is_empty() {
        ""
    } else {
        let found = if root.namespace.is_empty() {
            "no namespace".to_owned()
        } else {
            format!("namespace {:?}", root.namespace)
        };
        return Ok(ValidationReport::from_violation(Some(Violation {
            path: root_path,
            rule: "start".into(),
            message: format!("root element is in {found}, expected {POLYMAKE_NAMESPACE:?}"),
        })));
    };
    arena.expected_ns = expected_ns.to_owned();
    let start = arena.start;
    let residual = arena.element_deriv(start, root, &root_path, "start");
    if arena.violation.is_none() && !arena.nullable(residual) {
        arena.violation = Some(Violation {
            path: root_path,
            rule: "start".into(),
            message: "document is incomplete".into(),
        });
    }
    Ok(ValidationReport::from_violation(arena.violation))
}

type Id = u32;
type Sym = u32;

const EMPTY: Id = 0;
const NOT_ALLOWED: Id = 1;
const TEXT: Id = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Empty,
    NotAllowed,
    Text,
    Choice(Id, Id),
    Group(Id, Id),
    Interleave(Id, Id),
    OneOrMore(Id),
    After(Id, Id),
    Element { name: Sym, content: Id, rule: Sym },
    Attribute { name: Sym, content: Id, rule: Sym },
    Data(u32),
    Value(Sym),
    Ref(u32),
}

/// Continuation applied to the second component of an `After`.
#[derive(Clone, Copy)]
enum AfterOp {
    InterleaveRight(Id),
    InterleaveLeft(Id),
    GroupWith(Id),
    AfterWith(Id),
}

#[derive(Hash, PartialEq, Eq)]
enum MemoKey {
    Text(Id, String),
    Attr(Id, Sym, Option<String>),
    Open(Id, Sym),
    Close(Id),
    End(Id),
}

struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
    symbols: Vec<String>,
    symbol_index: HashMap<String, Sym>,
    datatypes: Vec<CompiledDatatype>,
    defs: Vec<Id>,
    start: Id,
    nullable_memo: HashMap<Id, bool>,
    memo: HashMap<MemoKey, Id>,
    expected_ns: String,
    violation: Option<Violation>,
}

impl Arena {
    fn compile(graph: &PatternGraph) -> Result<Self, SchemaInternalError> {
        check_guarded(graph)?;
        let mut arena = Arena {
            nodes: Vec::new(),
            index: HashMap::new(),
            symbols: Vec::new(),
            symbol_index: HashMap::new(),
            datatypes: Vec::new(),
            defs: Vec::new(),
            start: NOT_ALLOWED,
            nullable_memo: HashMap::new(),
            memo: HashMap::new(),
            expected_ns: String::new(),
            violation: None,
        };
        for node in [Node::Empty, Node::NotAllowed, Node::Text] {
            arena.intern(node);
        }
        let def_ids: HashMap<&str, u32> = graph
            .definitions
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i as u32))
            .collect();
        let mut dt_index = HashMap::new();
        for (name, p) in &graph.definitions {
            let id = arena.lower(p, name, &def_ids, &mut dt_index)?;
            arena.defs.push(id);
        }
        arena.start = arena.lower(&graph.start, "start", &def_ids, &mut dt_index)?;
        Ok(arena)
    }

    fn lower(
        &mut self,
        p: &Pattern,
        rule: &str,
        defs: &HashMap<&str, u32>,
        dt_index: &mut HashMap<super::DatatypeSpec, u32>,
    ) -> Result<Id, SchemaInternalError> {
        Ok(match p {
            Pattern::Empty => EMPTY,
            Pattern::NotAllowed => NOT_ALLOWED,
            Pattern::Text => TEXT,
            Pattern::Choice(a, b) => {
                let (a, b) = (
                    self.lower(a, rule, defs, dt_index)?,
                    self.lower(b, rule, defs, dt_index)?,
                );
                self.choice(a, b)
            }
            Pattern::Group(a, b) => {
                let (a, b) = (
                    self.lower(a, rule, defs, dt_index)?,
                    self.lower(b, rule, defs, dt_index)?,
                );
                self.group(a, b)
            }
            Pattern::Interleave(a, b) => {
                let (a, b) = (
                    self.lower(a, rule, defs, dt_index)?,
                    self.lower(b, rule, defs, dt_index)?,
                );
                self.interleave(a, b)
            }
            Pattern::OneOrMore(a) => {
                let a = self.lower(a, rule, defs, dt_index)?;
                self.one_or_more(a)
            }
            Pattern::Element { name, content } => {
                let content = self.lower(content, rule, defs, dt_index)?;
                let name = self.sym(name);
                let rule = self.sym(rule);
                self.intern(Node::Element {
                    name,
                    content,
                    rule,
                })
            }
            Pattern::Attribute { name, content } => {
                let content = self.lower(content, rule, defs, dt_index)?;
                let name = self.sym(name);
                let rule = self.sym(rule);
                self.intern(Node::Attribute {
                    name,
                    content,
                    rule,
                })
            }
            Pattern::Data(spec) => {
                let idx = match dt_index.get(spec) {
                    Some(&i) => i,
                    None => {
                        self.datatypes.push(CompiledDatatype::new(spec)?);
                        let i = (self.datatypes.len() - 1) as u32;
                        dt_index.insert(spec.clone(), i);
                        i
                    }
                };
                self.intern(Node::Data(idx))
            }
            Pattern::Value(v) => {
                let s = self.sym(v);
                self.intern(Node::Value(s))
            }
            Pattern::NamedRef(name) => {
                let &d = defs
                    .get(name.as_str())
                    .ok_or_else(|| SchemaInternalError::UndefinedReference(name.clone()))?;
                self.intern(Node::Ref(d))
            }
        })
    }

    fn sym(&mut self, s: &str) -> Sym {
        if let Some(&id) = self.symbol_index.get(s) {
            return id;
        }
        let id = self.symbols.len() as Sym;
        self.symbols.push(s.to_owned());
        self.symbol_index.insert(s.to_owned(), id);
        id
    }

    fn lookup_sym(&self, s: &str) -> Option<Sym> {
        self.symbol_index.get(s).copied()
    }

    fn intern(&mut self, node: Node) -> Id {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn node(&self, id: Id) -> Node {
        self.nodes[id as usize]
    }

    fn deref(&self, mut id: Id) -> Id {
        while let Node::Ref(d) = self.node(id) {
            id = self.defs[d as usize];
        }
        id
    }

    // Smart constructors.

    fn choice(&mut self, a: Id, b: Id) -> Id {
        if a == NOT_ALLOWED {
            return b;
        }
        if b == NOT_ALLOWED || a == b {
            return a;
        }
        let (a, b) = (a.min(b), a.max(b));
        self.intern(Node::Choice(a, b))
    }

    fn group(&mut self, a: Id, b: Id) -> Id {
        if a == NOT_ALLOWED || b == NOT_ALLOWED {
            return NOT_ALLOWED;
        }
        if a == EMPTY {
            return b;
        }
        if b == EMPTY {
            return a;
        }
        self.intern(Node::Group(a, b))
    }

    fn interleave(&mut self, a: Id, b: Id) -> Id {
        if a == NOT_ALLOWED || b == NOT_ALLOWED {
            return NOT_ALLOWED;
        }
        if a == EMPTY {
            return b;
        }
        if b == EMPTY {
            return a;
        }
        let (a, b) = (a.min(b), a.max(b));
        self.intern(Node::Interleave(a, b))
    }

    fn after(&mut self, a: Id, b: Id) -> Id {
        if a == NOT_ALLOWED || b == NOT_ALLOWED {
            return NOT_ALLOWED;
        }
        self.intern(Node::After(a, b))
    }

    fn one_or_more(&mut self, a: Id) -> Id {
        if a == NOT_ALLOWED || a == EMPTY {
            return a;
        }
        self.intern(Node::OneOrMore(a))
    }

    fn nullable(&mut self, id: Id) -> bool {
        if let Some(&n) = self.nullable_memo.get(&id) {
            return n;
        }
        let result = match self.node(id) {
            Node::Empty | Node::Text => true,
            Node::NotAllowed
            | Node::Element { .. }
            | Node::Attribute { .. }
            | Node::Data(_)
            | Node::Value(_)
            | Node::After(..) => false,
            Node::Choice(a, b) => self.nullable(a) || self.nullable(b),
            Node::Group(a, b) | Node::Interleave(a, b) => self.nullable(a) && self.nullable(b),
            Node::OneOrMore(a) => self.nullable(a),
            Node::Ref(_) => {
                let target = self.deref(id);
                self.nullable(target)
            }
        };
        self.nullable_memo.insert(id, result);
        result
    }

    fn text_deriv(&mut self, p: Id, s: &str) -> Id {
        let key = MemoKey::Text(p, s.to_owned());
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let result = match self.node(p) {
            Node::Choice(a, b) => {
                let (x, y) = (self.text_deriv(a, s), self.text_deriv(b, s));
                self.choice(x, y)
            }
            Node::Interleave(a, b) => {
                let da = self.text_deriv(a, s);
                let left = self.interleave(da, b);
                let db = self.text_deriv(b, s);
                let right = self.interleave(a, db);
                self.choice(left, right)
            }
            Node::Group(a, b) => {
                let da = self.text_deriv(a, s);
                let x = self.group(da, b);
                if self.nullable(a) {
                    let db = self.text_deriv(b, s);
                    self.choice(x, db)
                } else {
                    x
                }
            }
            Node::After(a, b) => {
                let da = self.text_deriv(a, s);
                self.after(da, b)
            }
            Node::OneOrMore(a) => {
                let da = self.text_deriv(a, s);
                let rest = self.choice(p, EMPTY);
                self.group(da, rest)
            }
            Node::Text => TEXT,
            Node::Value(v) => {
                if normalize_space(&self.symbols[v as usize]) == normalize_space(s) {
                    EMPTY
                } else {
                    NOT_ALLOWED
                }
            }
            Node::Data(d) => {
                if self.datatypes[d as usize].matches(s) {
                    EMPTY
                } else {
                    NOT_ALLOWED
                }
            }
            Node::Ref(_) => {
                let target = self.deref(p);
                self.text_deriv(target, s)
            }
            Node::Empty | Node::NotAllowed | Node::Element { .. } | Node::Attribute { .. } => {
                NOT_ALLOWED
            }
        };
        self.memo.insert(MemoKey::Text(p, s.to_owned()), result);
        result
    }

    fn value_matches(&mut self, p: Id, s: &str) -> bool {
        (self.nullable(p) && is_xml_whitespace(s)) || {
            let d = self.text_deriv(p, s);
            self.nullable(d)
        }
    }

    /// Derivative with respect to one attribute. `value: None` accepts any
    /// value and is only used for diagnostics.
    fn att_deriv(&mut self, p: Id, name: Sym, value: Option<&str>) -> Id {
        let key = MemoKey::Attr(p, name, value.map(str::to_owned));
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let result = match self.node(p) {
            Node::After(a, b) => {
                let da = self.att_deriv(a, name, value);
                self.after(da, b)
            }
            Node::Choice(a, b) => {
                let (x, y) = (
                    self.att_deriv(a, name, value),
                    self.att_deriv(b, name, value),
                );
                self.choice(x, y)
            }
            Node::Group(a, b) => {
                let da = self.att_deriv(a, name, value);
                let left = self.group(da, b);
                let db = self.att_deriv(b, name, value);
                let right = self.group(a, db);
                self.choice(left, right)
            }
            Node::Interleave(a, b) => {
                let da = self.att_deriv(a, name, value);
                let left = self.interleave(da, b);
                let db = self.att_deriv(b, name, value);
                let right = self.interleave(a, db);
                self.choice(left, right)
            }
            Node::OneOrMore(a) => {
                let da = self.att_deriv(a, name, value);
                let rest = self.choice(p, EMPTY);
                self.group(da, rest)
            }
            Node::Attribute {
                name: n, content, ..
            } => {
                let ok = n == name && value.is_none_or(|v| self.value_matches(content, v));
                if ok {
                    EMPTY
                } else {
                    NOT_ALLOWED
                }
            }
            Node::Ref(_) => {
                let target = self.deref(p);
                self.att_deriv(target, name, value)
            }
            _ => NOT_ALLOWED,
        };
        self.memo
            .insert(MemoKey::Attr(p, name, value.map(str::to_owned)), result);
        result
    }

    fn apply_after(&mut self, p: Id, op: AfterOp) -> Id {
        match self.node(p) {
            Node::After(a, b) => {
                let b2 = match op {
                    AfterOp::InterleaveRight(r) => self.interleave(b, r),
                    AfterOp::InterleaveLeft(l) => self.interleave(l, b),
                    AfterOp::GroupWith(r) => self.group(b, r),
                    AfterOp::AfterWith(r) => self.after(b, r),
                };
                self.after(a, b2)
            }
            Node::Choice(a, b) => {
                let (x, y) = (self.apply_after(a, op), self.apply_after(b, op));
                self.choice(x, y)
            }
            _ => NOT_ALLOWED,
        }
    }

    fn start_tag_open(&mut self, p: Id, name: Sym) -> Id {
        if let Some(&r) = self.memo.get(&MemoKey::Open(p, name)) {
            return r;
        }
        let result = match self.node(p) {
            Node::Choice(a, b) => {
                let (x, y) = (self.start_tag_open(a, name), self.start_tag_open(b, name));
                self.choice(x, y)
            }
            Node::Element {
                name: n, content, ..
            } => {
                if n == name {
                    self.after(content, EMPTY)
                } else {
                    NOT_ALLOWED
                }
            }
            Node::Interleave(a, b) => {
                let da = self.start_tag_open(a, name);
                let left = self.apply_after(da, AfterOp::InterleaveRight(b));
                let db = self.start_tag_open(b, name);
                let right = self.apply_after(db, AfterOp::InterleaveLeft(a));
                self.choice(left, right)
            }
            Node::OneOrMore(a) => {
                let da = self.start_tag_open(a, name);
                let rest = self.choice(p, EMPTY);
                self.apply_after(da, AfterOp::GroupWith(rest))
            }
            Node::Group(a, b) => {
                let da = self.start_tag_open(a, name);
                let x = self.apply_after(da, AfterOp::GroupWith(b));
                if self.nullable(a) {
                    let db = self.start_tag_open(b, name);
                    self.choice(x, db)
                } else {
                    x
                }
            }
            Node::After(a, b) => {
                let da = self.start_tag_open(a, name);
                self.apply_after(da, AfterOp::AfterWith(b))
            }
            Node::Ref(_) => {
                let target = self.deref(p);
                self.start_tag_open(target, name)
            }
            _ => NOT_ALLOWED,
        };
        self.memo.insert(MemoKey::Open(p, name), result);
        result
    }

    fn start_tag_close(&mut self, p: Id) -> Id {
        if let Some(&r) = self.memo.get(&MemoKey::Close(p)) {
            return r;
        }
        let result = match self.node(p) {
            Node::After(a, b) => {
                let x = self.start_tag_close(a);
                self.after(x, b)
            }
            Node::Choice(a, b) => {
                let (x, y) = (self.start_tag_close(a), self.start_tag_close(b));
                self.choice(x, y)
            }
            Node::Group(a, b) => {
                let (x, y) = (self.start_tag_close(a), self.start_tag_close(b));
                self.group(x, y)
            }
            Node::Interleave(a, b) => {
                let (x, y) = (self.start_tag_close(a), self.start_tag_close(b));
                self.interleave(x, y)
            }
            Node::OneOrMore(a) => {
                let x = self.start_tag_close(a);
                self.one_or_more(x)
            }
            Node::Attribute { .. } => NOT_ALLOWED,
            Node::Ref(_) => {
                let target = self.deref(p);
                self.start_tag_close(target)
            }
            _ => p,
        };
        self.memo.insert(MemoKey::Close(p), result);
        result
    }

    fn end_tag(&mut self, p: Id) -> Id {
        if let Some(&r) = self.memo.get(&MemoKey::End(p)) {
            return r;
        }
        let result = match self.node(p) {
            Node::Choice(a, b) => {
                let (x, y) = (self.end_tag(a), self.end_tag(b));
                self.choice(x, y)
            }
            Node::After(a, b) => {
                if self.nullable(a) {
                    b
                } else {
                    NOT_ALLOWED
                }
            }
            _ => NOT_ALLOWED,
        };
        self.memo.insert(MemoKey::End(p), result);
        result
    }

    /// Leaf patterns reachable without entering an element or attribute,
    /// and without leaving the current element.
    fn reachable(&self, p: Id) -> Vec<Node> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut stack = vec![p];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            match self.node(id) {
                Node::Choice(a, b) | Node::Group(a, b) | Node::Interleave(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Node::OneOrMore(a) | Node::After(a, _) => stack.push(a),
                Node::Ref(_) => stack.push(self.deref(id)),
                leaf @ (Node::Element { .. }
                | Node::Attribute { .. }
                | Node::Data(_)
                | Node::Value(_)
                | Node::Text) => out.push(leaf),
                Node::Empty | Node::NotAllowed => {}
            }
        }
        out
    }

    fn expected_elements(&self, p: Id) -> String {
        let mut names: Vec<&str> = Vec::new();
        for node in self.reachable(p) {
            if let Node::Element { name, .. } = node {
                let n = self.symbols[name as usize].as_str();
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        if names.is_empty() {
            "no further elements".to_owned()
        } else {
            format!("expected one of <{}>", names.join(">, <"))
        }
    }

    fn element_rule(&self, p: Id, name: Sym) -> String {
        let mut rules: Vec<&str> = Vec::new();
        for node in self.reachable(p) {
            if let Node::Element { name: n, rule, .. } = node {
                let r = self.symbols[rule as usize].as_str();
                if n == name && !rules.contains(&r) {
                    rules.push(r);
                }
            }
        }
        rules.join("|")
    }

    fn record(&mut self, path: &str, rule: &str, message: String) {
        if self.violation.is_none() {
            self.violation = Some(Violation {
                path: path.to_owned(),
                rule: rule.to_owned(),
                message,
            });
        }
    }

    fn element_deriv(&mut self, p: Id, el: &XmlElement, path: &str, parent_rule: &str) -> Id {
        let name = self.lookup_sym(&el.name);
        if el.namespace != self.expected_ns {
            let message = format!(
                "element <{}> is in namespace {:?}, expected {:?}",
                el.name, el.namespace, self.expected_ns
            );
            self.record(path, parent_rule, message);
            return NOT_ALLOWED;
        }
        let opened = match name {
            Some(sym) => self.start_tag_open(p, sym),
            None => NOT_ALLOWED,
        };
        let Some(name) = name.filter(|_| opened != NOT_ALLOWED) else {
            let message = format!(
                "element <{}> not allowed here; {}",
                el.name,
                self.expected_elements(p)
            );
            self.record(path, parent_rule, message);
            return NOT_ALLOWED;
        };
        let rule = self.element_rule(p, name);

        let mut cur = opened;
        for (key, value) in &el.attributes {
            let next = match self.lookup_sym(key) {
                Some(k) => self.att_deriv(cur, k, Some(value)),
                None => NOT_ALLOWED,
            };
            if next == NOT_ALLOWED {
                self.diagnose_attribute(cur, key, value, path, &rule);
                return NOT_ALLOWED;
            }
            cur = next;
        }
        let closed = self.start_tag_close(cur);
        if closed == NOT_ALLOWED {
            self.diagnose_missing_attribute(cur, path, &rule);
            return NOT_ALLOWED;
        }
        let content = self.children_deriv(closed, el, path, &rule);
        if content == NOT_ALLOWED {
            return NOT_ALLOWED;
        }
        let done = self.end_tag(content);
        if done == NOT_ALLOWED {
            let message = format!(
                "content of <{}> is incomplete; {}",
                el.name,
                self.expected_elements(content)
            );
            self.record(path, &rule, message);
        }
        done
    }

    fn diagnose_attribute(&mut self, p: Id, key: &str, value: &str, path: &str, rule: &str) {
        let owner = self.reachable(p).into_iter().find_map(|node| match node {
            Node::Attribute { name, rule, .. } if self.symbols[name as usize] == key => {
                Some(self.symbols[rule as usize].clone())
            }
            _ => None,
        });
        match owner {
            Some(owner) => self.record(
                path,
                &owner,
                format!("invalid value {value:?} for attribute {key:?}"),
            ),
            None => self.record(path, rule, format!("attribute {key:?} not allowed here")),
        }
    }

    fn diagnose_missing_attribute(&mut self, p: Id, path: &str, rule: &str) {
        let mut candidates: Vec<(Sym, Sym)> = Vec::new();
        for node in self.reachable(p) {
            if let Node::Attribute { name, rule, .. } = node {
                if !candidates.iter().any(|(n, _)| *n == name) {
                    candidates.push((name, rule));
                }
            }
        }
        for (name, owner) in candidates {
            let with = self.att_deriv(p, name, None);
            if with != NOT_ALLOWED && self.start_tag_close(with) != NOT_ALLOWED {
                let message = format!(
                    "missing required attribute {:?}",
                    self.symbols[name as usize]
                );
                let owner = self.symbols[owner as usize].clone();
                self.record(path, &owner, message);
                return;
            }
        }
        self.record(path, rule, "missing required attributes".into());
    }

    fn diagnose_text(&mut self, p: Id, text: &str, path: &str, rule: &str) {
        let typed = self
            .reachable(p)
            .iter()
            .any(|n| matches!(n, Node::Data(_) | Node::Value(_)));
        let message = if typed {
            format!("invalid text {text:?}")
        } else {
            format!("text {:?} not allowed here", abbreviate(text))
        };
        self.record(path, rule, message);
    }

    fn children_deriv(&mut self, p: Id, el: &XmlElement, path: &str, rule: &str) -> Id {
        let kids = merged_children(el);
        match kids.as_slice() {
            [] => {
                let d = self.text_deriv(p, "");
                self.choice(p, d)
            }
            [Kid::Text(s)] => {
                let d = self.text_deriv(p, s);
                let result = if is_xml_whitespace(s) {
                    self.choice(p, d)
                } else {
                    d
                };
                if result == NOT_ALLOWED {
                    self.diagnose_text(p, s, path, rule);
                }
                result
            }
            _ => {
                let mut counts: HashMap<&str, usize> = HashMap::new();
                let mut cur = p;
                for kid in &kids {
                    match kid {
                        Kid::Text(s) if is_xml_whitespace(s) => continue,
                        Kid::Text(s) => {
                            let next = self.text_deriv(cur, s);
                            if next == NOT_ALLOWED {
                                self.diagnose_text(cur, s, path, rule);
                                return NOT_ALLOWED;
                            }
                            cur = next;
                        }
                        Kid::Element(child) => {
                            let n = counts.entry(child.name.as_str()).or_insert(0);
                            *n += 1;
                            let child_path = format!("{path}/{}[{n}]", child.name);
                            cur = self.element_deriv(cur, child, &child_path, rule);
                            if cur == NOT_ALLOWED {
                                return NOT_ALLOWED;
                            }
                        }
                    }
                }
                cur
            }
        }
    }
}

enum Kid<'a> {
    Element(&'a XmlElement),
    Text(String),
}

fn merged_children(el: &XmlElement) -> Vec<Kid<'_>> {
    let mut out: Vec<Kid<'_>> = Vec::new();
    for child in &el.children {
        match child {
            XmlNode::Element(e) => out.push(Kid::Element(e)),
            XmlNode::Text(t) | XmlNode::CData(t) => {
                if let Some(Kid::Text(prev)) = out.last_mut() {
                    prev.push_str(t);
                } else {
                    out.push(Kid::Text(t.clone()));
                }
            }
        }
    }
    out
}

fn normalize_space(s: &str) -> String {
    s.split_ascii_whitespace().collect::<Vec<_>>().join(" ")
}

fn abbreviate(s: &str) -> String {
    let trimmed = s.trim();
    if trimmed.chars().count() > 40 {
        let head: String = trimmed.chars().take(37).collect();
        format!("{head}...")
    } else {
        trimmed.to_owned()
    }
}

/// Rejects productions that reach themselves without passing through an
/// element, which would make the derivatives diverge.
fn check_guarded(graph: &PatternGraph) -> Result<(), SchemaInternalError> {
    fn walk<'a>(
        p: &'a Pattern,
        graph: &'a PatternGraph,
        stack: &mut Vec<&'a str>,
        done: &mut HashSet<&'a str>,
    ) -> Result<(), SchemaInternalError> {
        match p {
            Pattern::Choice(a, b) | Pattern::Group(a, b) | Pattern::Interleave(a, b) => {
                walk(a, graph, stack, done)?;
                walk(b, graph, stack, done)
            }
            Pattern::OneOrMore(a) | Pattern::Attribute { content: a, .. } => {
                walk(a, graph, stack, done)
            }
            Pattern::NamedRef(name) => {
                if stack.contains(&name.as_str()) {
                    return Err(SchemaInternalError::UnguardedRecursion(name.clone()));
                }
                if done.contains(name.as_str()) {
                    return Ok(());
                }
                let (key, def) = graph
                    .definitions
                    .get_key_value(name)
                    .ok_or_else(|| SchemaInternalError::UndefinedReference(name.clone()))?;
                stack.push(key);
                walk(def, graph, stack, done)?;
                stack.pop();
                done.insert(key);
                Ok(())
            }
            // Element content starts a fresh context; checked from the
            // production that owns it.
            _ => Ok(()),
        }
    }
    let mut done = HashSet::new();
    walk(&graph.start, graph, &mut Vec::new(), &mut done)?;
    for def in graph.definitions.values() {
        walk(def, graph, &mut Vec::new(), &mut done)?;
    }
    // Element contents themselves may also recurse unguarded.
    fn contents<'a>(p: &'a Pattern, out: &mut Vec<&'a Pattern>) {
        match p {
            Pattern::Choice(a, b) | Pattern::Group(a, b) | Pattern::Interleave(a, b) => {
                contents(a, out);
                contents(b, out);
            }
            Pattern::OneOrMore(a) | Pattern::Attribute { content: a, .. } => contents(a, out),
            Pattern::Element { content, .. } => {
                out.push(content);
                contents(content, out);
            }
            _ => {}
        }
    }
    let mut inner = Vec::new();
    contents(&graph.start, &mut inner);
    for def in graph.definitions.values() {
        contents(def, &mut inner);
    }
    for p in inner {
        walk(p, graph, &mut Vec::new(), &mut done)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::infoset::read_document;
    use crate::schema::polymake_schema;

    fn check(xml: &str) -> ValidationReport {
        let tree = read_document(xml.as_bytes()).unwrap();
        validate(&tree, &polymake_schema()).unwrap()
    }

    fn wrap(body: &str) -> String {
        format!(
            r#"<object type="a::B" xmlns="{POLYMAKE_NAMESPACE}">{body}</object>"#
        )
    }

    #[test]
    fn minimal_object_is_valid() {
        assert!(check(&wrap("")).valid);
    }

    #[test]
    fn missing_type_points_at_top_attribs() {
        let r = check(&format!(r#"<object xmlns="{POLYMAKE_NAMESPACE}"/>"#));
        assert!(!r.valid);
        assert_eq!(r.violations[0].path, "/object");
        assert_eq!(r.violations[0].rule, "TopAttribs");
    }

    #[test]
    fn interleaves_properties_and_attachments() {
        let body = r#"<property name="A" value="1"/><attachment name="x" value="2"/><property name="B" value="3"/>"#;
        assert!(check(&wrap(body)).valid);
    }

    #[test]
    fn description_must_precede_properties() {
        let body = r#"<property name="A" value="1"/><description>d</description>"#;
        let r = check(&wrap(body));
        assert!(!r.valid);
        assert_eq!(r.violations[0].path, "/object/description[1]");
    }

    #[test]
    fn value_property_must_be_empty() {
        let r = check(&wrap(r#"<property name="BOUNDED" value="true"><m/></property>"#));
        assert!(!r.valid);
        assert_eq!(r.violations[0].path, "/object/property[1]/m[1]");
    }

    #[test]
    fn undef_only_accepts_true() {
        assert!(check(&wrap(r#"<property name="A" undef="true"/>"#)).valid);
        assert!(check(&wrap(r#"<property name="A" undef=" true "/>"#)).valid);
        let r = check(&wrap(r#"<property name="A" undef="false"/>"#));
        assert!(!r.valid);
        assert_eq!(r.violations[0].rule, "Property");
    }

    #[test]
    fn unknown_attribute_is_rejected() {
        let r = check(&wrap(r#"<property name="A" value="1" colour="red"/>"#));
        assert!(!r.valid);
        assert!(r.violations[0].message.contains("colour"));
    }

    #[test]
    fn text_property_needs_type_text() {
        assert!(check(&wrap(r#"<property name="A" type="text">hello</property>"#)).valid);
        assert!(!check(&wrap(r#"<property name="A">hello</property>"#)).valid);
    }

    #[test]
    fn sparse_rows_need_dim() {
        let ok = r#"<property name="A"><m dim="3"><v i="0">1 2</v></m></property>"#;
        assert!(check(&wrap(ok)).valid);
        let bad = r#"<property name="A"><m><v i="0">1 2</v></m></property>"#;
        assert!(!check(&wrap(bad)).valid);
    }

    #[test]
    fn whitespace_around_sparse_entries_is_ignored() {
        let xml = r#"<property name="A"><v dim="3"> <e i="1">1</e> </v></property>"#;
        assert!(check(&wrap(xml)).valid);
        let xml = r#"<property name="A"><v dim="3">  </v></property>"#;
        assert!(check(&wrap(xml)).valid);
    }

    #[test]
    fn namespace_modes() {
        let bare = r#"<object type="a::B"/>"#;
        let tree = read_document(bare.as_bytes()).unwrap();
        let g = polymake_schema();
        assert!(!validate(&tree, &g).unwrap().valid);
        let lax = ValidateOptions {
            lax_namespace: true,
        };
        assert!(validate_with(&tree, &g, lax).unwrap().valid);
        let other = r#"<object type="a::B" xmlns="urn:other"/>"#;
        let tree = read_document(other.as_bytes()).unwrap();
        assert!(!validate_with(&tree, &g, lax).unwrap().valid);
    }

    #[test]
    fn loose_data_with_reference() {
        let xml = format!(
            r#"<data type="Int" xmlns="{POLYMAKE_NAMESPACE}"><r id="3"/></data>"#
        );
        assert!(check(&xml).valid);
        let xml = format!(
            r#"<data type="Int" version="x" xmlns="{POLYMAKE_NAMESPACE}"><r id="3"/></data>"#
        );
        let r = check(&xml);
        assert!(!r.valid);
        assert_eq!(r.violations[0].rule, "LooseData");
        let xml = format!(
            r#"<data type="Int" xmlns="{POLYMAKE_NAMESPACE}"><property name="A" value="1"/></data>"#
        );
        assert!(!check(&xml).valid);
    }

    #[test]
    fn rejects_unguarded_recursion() {
        let mut definitions = BTreeMap::new();
        definitions.insert(
            "A".to_owned(),
            Pattern::choice(Pattern::named("A"), Pattern::Empty),
        );
        let g = PatternGraph {
            definitions,
            start: Pattern::element("a", Pattern::named("A")),
        };
        let tree = read_document(b"<a/>").unwrap();
        assert_eq!(
            validate_with(&tree, &g, ValidateOptions { lax_namespace: true }),
            Err(SchemaInternalError::UnguardedRecursion("A".into()))
        );
    }

    #[test]
    fn rejects_dangling_reference() {
        let g = PatternGraph {
            definitions: BTreeMap::new(),
            start: Pattern::named("Nope"),
        };
        let tree = read_document(b"<a/>").unwrap();
        assert!(matches!(
            validate(&tree, &g),
            Err(SchemaInternalError::UndefinedReference(_))
        ));
    }
}
