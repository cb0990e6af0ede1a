use std::collections::BTreeMap;
use std::fmt;

use super::{Matrix, ModelError, Reference, Tuple, TupleItem, TupleItems, Value, Vector};

/// Child indices leading from a value root to a node.
///
/// Vectors index their tuple entries, matrices their rows, tuples their
/// items.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("/")?;
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef<'a> {
    Vector(&'a Vector),
    Matrix(&'a Matrix),
    Tuple(&'a Tuple),
    Ref(&'a Reference),
    Element(&'a str),
}

impl<'a> NodeRef<'a> {
    pub fn of(value: &'a Value) -> Self {
        match value {
            Value::Vector(v) => NodeRef::Vector(v),
            Value::Matrix(m) => NodeRef::Matrix(m),
            Value::Tuple(t) => NodeRef::Tuple(t),
            Value::Ref(r) => NodeRef::Ref(r),
        }
    }

    fn children(self) -> Vec<NodeRef<'a>> {
        match self {
            NodeRef::Vector(Vector::Tuples { entries, .. }) => {
                entries.iter().map(|e| NodeRef::Tuple(&e.tuple)).collect()
            }
            NodeRef::Vector(_) | NodeRef::Ref(_) | NodeRef::Element(_) => Vec::new(),
            NodeRef::Matrix(Matrix::Dense { rows, .. }) => rows.iter().map(NodeRef::Vector).collect(),
            NodeRef::Matrix(Matrix::Sparse { rows, .. }) => {
                rows.iter().map(|r| NodeRef::Vector(&r.row)).collect()
            }
            NodeRef::Matrix(Matrix::Nested(ms)) => ms.iter().map(NodeRef::Matrix).collect(),
            NodeRef::Matrix(Matrix::Tuples(ts)) => ts.iter().map(NodeRef::Tuple).collect(),
            NodeRef::Tuple(t) => match &t.items {
                TupleItems::Text(_) => Vec::new(),
                TupleItems::Items(items) => items
                    .iter()
                    .map(|item| match item {
                        TupleItem::Vector(v) => NodeRef::Vector(v),
                        TupleItem::Matrix(m) => NodeRef::Matrix(m),
                        TupleItem::Tuple(t) => NodeRef::Tuple(t),
                        TupleItem::Ref(r) => NodeRef::Ref(r),
                        TupleItem::Element(s) => NodeRef::Element(s),
                    })
                    .collect(),
            },
        }
    }
}

impl Value {
    /// The node reached by following `path` from this value.
    pub fn node_at(&self, path: &NodePath) -> Option<NodeRef<'_>> {
        let mut node = NodeRef::of(self);
        for &step in &path.0 {
            node = *node.children().get(step)?;
        }
        Some(node)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdEntry<'a> {
    pub path: NodePath,
    pub tuple: &'a Tuple,
}

/// Map from tuple id to the tuple carrying it, scoped to one value tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdTable<'a> {
    entries: BTreeMap<u64, IdEntry<'a>>,
}

impl<'a> IdTable<'a> {
    pub fn get(&self, id: u64) -> Option<&IdEntry<'a>> {
        self.entries.get(&id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &IdEntry<'a>)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// The tuple a reference stands for.
    pub fn resolve(&self, r: &Reference) -> Result<&'a Tuple, ModelError> {
        let id = r.id.ok_or(ModelError::MissingId)?;
        self.entries
            .get(&id)
            .map(|e| e.tuple)
            .ok_or(ModelError::DanglingReference(id))
    }
}

/// Records every tuple id in `value`.
pub fn collect_ids(value: &Value) -> Result<IdTable<'_>, ModelError> {
    fn walk<'a>(
        node: NodeRef<'a>,
        path: &mut Vec<usize>,
        table: &mut IdTable<'a>,
    ) -> Result<(), ModelError> {
        if let NodeRef::Tuple(t) = node {
            if let Some(id) = t.id {
                let here = NodePath(path.clone());
                if let Some(prev) = table.entries.get(&id) {
                    return Err(ModelError::DuplicateId {
                        id,
                        first: prev.path.clone(),
                        second: here,
                    });
                }
                table.entries.insert(id, IdEntry { path: here, tuple: t });
            }
        }
        for (i, child) in node.children().into_iter().enumerate() {
            path.push(i);
            walk(child, path, table)?;
            path.pop();
        }
        Ok(())
    }
    let mut table = IdTable::default();
    walk(NodeRef::of(value), &mut Vec::new(), &mut table)?;
    Ok(table)
}

/// Path of the node a reference points to.
pub fn resolve_reference<'t>(table: &'t IdTable<'_>, r: &Reference) -> Result<&'t NodePath, ModelError> {
    let id = r.id.ok_or(ModelError::MissingId)?;
    table
        .get(id)
        .map(|e| &e.path)
        .ok_or(ModelError::DanglingReference(id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Value {
        // <v><t><m/><t id="1"><v>x y</v></t></t></v>
        Value::Vector(Vector::Tuples {
            dim: None,
            entries: vec![super::super::IndexedTuple {
                index: None,
                tuple: Tuple::of(vec![
                    TupleItem::Matrix(Matrix::empty()),
                    TupleItem::Tuple(
                        Tuple::of(vec![TupleItem::Vector(Vector::Dense("x y".into()))]).with_id(1),
                    ),
                ]),
            }],
        })
    }

    #[test]
    fn collects_and_resolves() {
        let v = sample();
        let table = collect_ids(&v).unwrap();
        assert_eq!(table.len(), 1);
        let path = resolve_reference(&table, &Reference { id: Some(1) }).unwrap();
        assert_eq!(path, &NodePath(vec![0, 1]));
        assert_eq!(path.to_string(), "/0/1");
        assert!(matches!(v.node_at(path), Some(NodeRef::Tuple(t)) if t.id == Some(1)));
        assert_eq!(table.resolve(&Reference { id: Some(1) }).unwrap().id, Some(1));
    }

    #[test]
    fn reference_errors() {
        let v = sample();
        let table = collect_ids(&v).unwrap();
        assert_eq!(
            resolve_reference(&table, &Reference { id: Some(7) }),
            Err(ModelError::DanglingReference(7))
        );
        assert_eq!(
            resolve_reference(&table, &Reference { id: None }),
            Err(ModelError::MissingId)
        );
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let v = Value::Tuple(Tuple::of(vec![
            TupleItem::Tuple(Tuple::text("a").with_id(1)),
            TupleItem::Tuple(Tuple::text("b").with_id(1)),
        ]));
        assert_eq!(
            collect_ids(&v),
            Err(ModelError::DuplicateId {
                id: 1,
                first: NodePath(vec![0]),
                second: NodePath(vec![1]),
            })
        );
    }

    #[test]
    fn root_tuple_id_counts() {
        let v = Value::Tuple(Tuple::text("a").with_id(4));
        let table = collect_ids(&v).unwrap();
        assert_eq!(table.get(4).unwrap().path, NodePath::default());
    }

    #[test]
    fn node_at_out_of_range() {
        assert!(sample().node_at(&NodePath(vec![0, 5])).is_none());
    }
}
