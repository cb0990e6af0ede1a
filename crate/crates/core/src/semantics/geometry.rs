use crate::codec::{tokenize_dense, DenseMatrix, DenseVector};
use crate::model::{Matrix, ObjectNode, PropertyPayload, Value, Vector};

use super::{parse_rational, Rational, SemanticsError};

/// Point in homogeneous coordinates; the first entry is the homogenizing one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoint {
    pub coords: Vec<Rational>,
}

/// Inequality `a0 + a1·x1 + … + an·xn ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IneqVector {
    pub coeffs: Vec<Rational>,
}

/// Vertex/facet products of a polytope description.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IncidenceReport {
    /// `products[v][f]` is the pairing of vertex `v` with facet `f`.
    pub products: Vec<Vec<Rational>>,
    /// Where the product is exactly zero.
    pub incident: Vec<Vec<bool>>,
    /// `(vertex, facet)` pairs with a negative product.
    pub violations: Vec<(usize, usize)>,
}

pub fn parse_row(row: &DenseVector) -> Result<Vec<Rational>, SemanticsError> {
    row.entries.iter().map(|t| parse_rational(t)).collect()
}

pub fn dehomogenize(p: &HomPoint) -> Result<Vec<Rational>, SemanticsError> {
    let (first, rest) = p
        .coords
        .split_first()
        .ok_or(SemanticsError::PointAtInfinity)?;
    if first.is_zero() {
        return Err(SemanticsError::PointAtInfinity);
    }
    Ok(rest.iter().map(|x| x / first).collect())
}

pub fn pairing(p: &HomPoint, a: &IneqVector) -> Result<Rational, SemanticsError> {
    if p.coords.len() != a.coeffs.len() {
        return Err(SemanticsError::DimensionMismatch {
            left: p.coords.len(),
            right: a.coeffs.len(),
        });
    }
    Ok(p.coords.iter().zip(&a.coeffs).map(|(x, y)| x * y).sum())
}

pub fn incidence_check(
    vertices: &DenseMatrix,
    facets: &DenseMatrix,
) -> Result<IncidenceReport, SemanticsError> {
    if !vertices.rows.is_empty() && !facets.rows.is_empty() && vertices.cols != facets.cols {
        return Err(SemanticsError::DimensionMismatch {
            left: vertices.cols,
            right: facets.cols,
        });
    }
    let points = vertices
        .rows
        .iter()
        .map(|r| parse_row(r).map(|coords| HomPoint { coords }))
        .collect::<Result<Vec<_>, _>>()?;
    let ineqs = facets
        .rows
        .iter()
        .map(|r| parse_row(r).map(|coeffs| IneqVector { coeffs }))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = IncidenceReport::default();
    for (vi, p) in points.iter().enumerate() {
        let row = ineqs
            .iter()
            .map(|a| pairing(p, a))
            .collect::<Result<Vec<_>, _>>()?;
        for (fi, x) in row.iter().enumerate() {
            if x.signum() < 0 {
                report.violations.push((vi, fi));
            }
        }
        report.incident.push(row.iter().map(Rational::is_zero).collect());
        report.products.push(row);
    }
    Ok(report)
}

fn matrix_of<'a>(obj: &'a ObjectNode, name: &str) -> Option<&'a Matrix> {
    match obj.property(name)?.payload.as_value()? {
        Value::Matrix(m) => Some(m),
        _ => None,
    }
}

/// Compares stored counts with the matrices they count. Pairs that are
/// missing or unreadable are skipped.
pub fn check_counts(obj: &ObjectNode) -> Vec<String> {
    let mut out = Vec::new();
    for (count, matrix) in [("N_FACETS", "FACETS"), ("N_VERTICES", "VERTICES")] {
        let stated = obj
            .property(count)
            .and_then(|p| p.payload.as_scalar())
            .and_then(|s| s.trim().parse::<u64>().ok());
        let (Some(stated), Some(m)) = (stated, matrix_of(obj, matrix)) else {
            continue;
        };
        let actual = m.row_count();
        if stated != actual {
            out.push(format!("{count} is {stated} but {matrix} has {actual} rows"));
        }
    }
    out
}

/// Checks that every triangulation facet only names existing vertices.
pub fn check_triangulation(obj: &ObjectNode) -> Vec<String> {
    let mut out = Vec::new();
    let Some(n_vertices) = matrix_of(obj, "VERTICES").map(Matrix::row_count) else {
        return out;
    };
    for prop in obj.properties.iter().filter(|p| p.name == "TRIANGULATION") {
        let PropertyPayload::Subobjects(subs) = &prop.payload else {
            continue;
        };
        for (si, sub) in subs.iter().enumerate() {
            let Some(Matrix::Dense { rows, .. }) = matrix_of(sub, "FACETS") else {
                continue;
            };
            for (ri, row) in rows.iter().enumerate() {
                let tokens = match row {
                    Vector::Dense(raw) => tokenize_dense(raw),
                    Vector::Sparse { entries, .. } => {
                        entries.iter().map(|e| e.text.trim().to_owned()).collect()
                    }
                    Vector::Tuples { .. } => continue,
                };
                for t in tokens {
                    match t.parse::<u64>() {
                        Ok(i) if i < n_vertices => {}
                        Ok(i) => out.push(format!(
                            "TRIANGULATION[{si}] facet {ri} refers to vertex {i}, \
                             but there are only {n_vertices} vertices"
                        )),
                        Err(_) => out.push(format!(
                            "TRIANGULATION[{si}] facet {ri} has non-index entry {t:?}"
                        )),
                    }
                }
            }
        }
    }
    out
}
