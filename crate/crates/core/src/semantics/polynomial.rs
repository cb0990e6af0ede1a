use std::collections::HashSet;

use crate::codec::{densify_vector, tokenize_dense};
use crate::model::{IdTable, Matrix, Tuple, TupleItem, TupleItems, Vector};

use super::{quad_from_tuple, QuadExt, SemanticsError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    /// One exponent per variable.
    pub exponents: Vec<u64>,
    pub coefficient: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: Vec<Term>,
    pub variables: Vec<String>,
}

fn shape(msg: &str) -> SemanticsError {
    SemanticsError::Shape(msg.to_owned())
}

fn items(t: &Tuple) -> Result<&[TupleItem], SemanticsError> {
    match &t.items {
        TupleItems::Items(items) => Ok(items),
        TupleItems::Text(_) => Err(shape("expected a tuple with element items")),
    }
}

/// Reads a polynomial stored as `(terms, variables)`, where the terms are a
/// matrix of `(exponent vector, coefficient)` tuples and the variables a
/// tuple holding a vector of names, possibly behind a reference.
pub fn decode_polynomial(t: &Tuple, table: &IdTable<'_>) -> Result<Polynomial, SemanticsError> {
    let [terms, vars] = items(t)? else {
        return Err(SemanticsError::Arity {
            expected: 2,
            found: items(t)?.len(),
        });
    };
    let vars_tuple = match vars {
        TupleItem::Tuple(v) => v,
        TupleItem::Ref(r) => table.resolve(r)?,
        _ => return Err(shape("variables must be a tuple or a reference")),
    };
    let variables = match items(vars_tuple)? {
        [TupleItem::Vector(Vector::Dense(raw))] => tokenize_dense(raw),
        _ => return Err(shape("variables must be a single vector of names")),
    };
    let rows: &[Tuple] = match terms {
        TupleItem::Matrix(Matrix::Tuples(rows)) => rows,
        TupleItem::Matrix(Matrix::Dense { rows, .. }) if rows.is_empty() => &[],
        _ => return Err(shape("terms must be a matrix of tuples")),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let [TupleItem::Vector(exp), TupleItem::Tuple(coef)] = items(row)? else {
            return Err(shape("term must be an exponent vector and a coefficient"));
        };
        let dense = densify_vector(exp, Some(variables.len() as u64), "0")?;
        if dense.len() != variables.len() {
            return Err(SemanticsError::DimensionMismatch {
                left: dense.len(),
                right: variables.len(),
            });
        }
        let exponents = dense
            .entries
            .iter()
            .map(|e| {
                e.parse::<u64>()
                    .map_err(|_| SemanticsError::Parse(e.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !seen.insert(exponents.clone()) {
            return Err(shape("two terms share an exponent vector"));
        }
        out.push(Term {
            exponents,
            coefficient: quad_from_tuple(coef)?,
        });
    }
    Ok(Polynomial {
        terms: out,
        variables,
    })
}

/// Terms in stored order joined by ` + `, each as
/// `coefficient*x^e*y` with exponent 1 bare and exponent 0 omitted.
pub fn render_polynomial(p: &Polynomial) -> String {
    if p.terms.is_empty() {
        return "0".to_owned();
    }
    p.terms
        .iter()
        .map(|term| {
            let mut parts = vec![term.coefficient.to_string()];
            for (var, &e) in p.variables.iter().zip(&term.exponents) {
                match e {
                    0 => {}
                    1 => parts.push(var.clone()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            parts.join("*")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Rational;

    #[test]
    fn render_edge_cases() {
        let one = Polynomial {
            terms: vec![Term {
                exponents: vec![0, 0],
                coefficient: QuadExt::rational(Rational::one()),
            }],
            variables: vec!["x".into(), "y".into()],
        };
        assert_eq!(render_polynomial(&one), "1");
        let empty = Polynomial {
            terms: vec![],
            variables: vec!["x".into()],
        };
        assert_eq!(render_polynomial(&empty), "0");
        let linear = Polynomial {
            terms: vec![Term {
                exponents: vec![1],
                coefficient: QuadExt::rational(Rational::from(3)),
            }],
            variables: vec!["x".into()],
        };
        assert_eq!(render_polynomial(&linear), "3*x");
    }
}
