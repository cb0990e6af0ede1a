//! Acceptance suite: one PASS/FAIL line per criterion, written straight to
//! stdout so the lines show up even when the harness captures output.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pmxml_core::codec::{
    decode, densify_matrix, densify_vector, encode, sparsify_vector, to_json, DecodeOptions,
    DenseMatrix,
};
use pmxml_core::infoset::{infoset_equal, read_document, write_document};
use pmxml_core::model::{
    collect_ids, AttachmentPayload, Body, Document, Matrix, ObjectNode, PropertyData,
    PropertyPayload, Reference, Tuple, TupleItem, TupleItems, Value, Vector,
};
use pmxml_core::schema::{polymake_schema, validate, validate_with, ValidateOptions};
use pmxml_core::semantics::{
    decode_polynomial, dehomogenize, incidence_check, parse_rational, quad_sign, HomPoint, QuadExt,
    Rational,
};
use pmxml_testkit::brute::BruteValidator;
use pmxml_testkit::fixtures::{fixture_path, polynomial_tree, square_tree, SQUARE_XML};
use pmxml_testkit::generate::{
    depth, document, rational_token, small_tree, sorted_sparse_vector, token_vector, Limits,
};
use pmxml_testkit::mutations::MUTATIONS;
use pmxml_testkit::numeric::{approximate_sign, exceeds, frac};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn strs(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn dense_rows(m: &DenseMatrix) -> Vec<Vec<String>> {
    m.rows.iter().map(|r| r.entries.clone()).collect()
}

fn matrix<'a>(obj: &'a ObjectNode, name: &str) -> Result<&'a Matrix, String> {
    match obj.property(name).and_then(|p| p.payload.as_value()) {
        Some(Value::Matrix(m)) => Ok(m),
        other => Err(format!("{name} is not a matrix: {other:?}")),
    }
}

fn square_object() -> Result<ObjectNode, String> {
    let doc = decode(&square_tree(), &DecodeOptions::default()).map_err(|e| e.to_string())?;
    doc.object().cloned().ok_or_else(|| "square is not an object".into())
}

fn square_fixture() -> Verdict {
    let doc = decode(&square_tree(), &DecodeOptions::default()).map_err(|e| e.to_string())?;
    ensure!(doc.type_name == "polytope::Polytope<Rational>", "type {}", doc.type_name);
    ensure!(doc.version.as_deref() == Some("3.0"), "version {:?}", doc.version);
    let obj = doc.object().ok_or("not an object")?;
    ensure!(obj.name.as_deref() == Some("square"), "name {:?}", obj.name);
    ensure!(
        obj.description.as_deref() == Some("cube of dimension 2"),
        "description {:?}",
        obj.description
    );

    let vertices = matrix(obj, "VERTICES")?;
    ensure!(matches!(vertices, Matrix::Dense { .. }), "VERTICES is not dense");
    let v = densify_matrix(vertices, "0").map_err(|e| e.to_string())?;
    let expected_v = strs(&[
        &["1", "0", "0"],
        &["1", "1/3", "0"],
        &["1", "0", "1/3"],
        &["1", "1/3", "1/3"],
    ]);
    ensure!(dense_rows(&v) == expected_v && v.cols == 3, "VERTICES {:?}", v);

    let f = densify_matrix(matrix(obj, "FACETS")?, "0").map_err(|e| e.to_string())?;
    let expected_f = strs(&[
        &["0", "1", "0"],
        &["1/3", "-1", "0"],
        &["0", "0", "1"],
        &["1/3", "0", "-1"],
    ]);
    ensure!(dense_rows(&f) == expected_f, "FACETS {:?}", f);

    for (name, value) in [("BOUNDED", "true"), ("N_FACETS", "4"), ("N_VERTICES", "4")] {
        let found = obj.property(name).and_then(|p| p.payload.as_scalar());
        ensure!(found == Some(value), "{name} is {found:?}");
    }
    let volume = obj
        .property("VOLUME")
        .and_then(|p| p.payload.as_scalar())
        .ok_or("VOLUME missing")?;
    ensure!(
        parse_rational(volume).ok() == Some(Rational::new(1, 9)),
        "VOLUME is {volume}"
    );

    let Some(PropertyPayload::Subobjects(subs)) =
        obj.property("TRIANGULATION").map(|p| &p.payload)
    else {
        return Err("TRIANGULATION has no subobjects".into());
    };
    ensure!(subs.len() == 1, "{} triangulation subobjects", subs.len());
    ensure!(subs[0].name.as_deref() == Some("unnamed#0"), "name {:?}", subs[0].name);
    let tri = densify_matrix(matrix(&subs[0], "FACETS")?, "0").map_err(|e| e.to_string())?;
    ensure!(
        dense_rows(&tri) == strs(&[&["0", "1", "2"], &["1", "2", "3"]]),
        "triangulation {:?}",
        tri
    );
    let Some(Value::Vector(fv)) = subs[0].property("F_VECTOR").and_then(|p| p.payload.as_value())
    else {
        return Err("F_VECTOR is not a vector".into());
    };
    let fv = densify_vector(fv, None, "0").map_err(|e| e.to_string())?;
    ensure!(fv.entries == ["4", "5", "2"], "F_VECTOR {:?}", fv.entries);
    Ok("all fields exact".into())
}

fn polynomial_fixture() -> Verdict {
    let doc = decode(&polynomial_tree(), &DecodeOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        doc.type_name == "Array<Polynomial<QuadraticExtension>>",
        "type {}",
        doc.type_name
    );
    let Body::Data(data) = &doc.body else {
        return Err("not loose data".into());
    };
    let PropertyData::Value(value) = &data.data else {
        return Err("data is not a value".into());
    };
    let Value::Vector(Vector::Tuples { entries, .. }) = value else {
        return Err("data is not a vector of tuples".into());
    };
    ensure!(entries.len() == 1, "{} polynomials", entries.len());
    let table = collect_ids(value).map_err(|e| e.to_string())?;
    let p = decode_polynomial(&entries[0].tuple, &table).map_err(|e| e.to_string())?;
    ensure!(p.variables == ["x", "y"], "variables {:?}", p.variables);
    let q = |a: i64, b: Rational, c: i64| QuadExt::new(a.into(), b, c.into()).unwrap();
    ensure!(p.terms.len() == 2, "{} terms", p.terms.len());
    ensure!(
        p.terms[0].exponents == [2, 0] && p.terms[0].coefficient == q(0, Rational::new(1, 5), 5),
        "first term {:?}",
        p.terms[0]
    );
    ensure!(
        p.terms[1].exponents == [0, 3] && p.terms[1].coefficient == q(-1, Rational::zero(), 0),
        "second term {:?}",
        p.terms[1]
    );

    // A reference to id 1 must land on the variable-name tuple, and using it
    // in place of the inline tuple must give the same polynomial.
    let target = table
        .resolve(&Reference { id: Some(1) })
        .map_err(|e| e.to_string())?;
    ensure!(
        target.items == TupleItems::Items(vec![TupleItem::Vector(Vector::Dense("x y".into()))]),
        "id 1 resolves to {:?}",
        target
    );
    let mut by_ref = entries[0].tuple.clone();
    if let TupleItems::Items(items) = &mut by_ref.items {
        items[1] = TupleItem::Ref(Reference { id: Some(1) });
    }
    let through_ref = decode_polynomial(&by_ref, &table).map_err(|e| e.to_string())?;
    ensure!(through_ref == p, "reference changes the polynomial");
    Ok("2 terms, variables (x,y), id 1 resolves".into())
}

fn validation() -> Verdict {
    let graph = polymake_schema();
    for (label, tree) in [("square", square_tree()), ("polynomial", polynomial_tree())] {
        let report = validate(&tree, &graph).map_err(|e| e.to_string())?;
        ensure!(report.valid, "{label} fixture rejected: {:?}", report.violations);
    }
    let required = [
        "missing type",
        "name violating SimpleName",
        "value attribute with child content",
        "r inside e",
        "negative i index",
        "odd-length tm",
        "property outside object",
        "attachment without name",
        "data with a property child",
        "sparse row without dim on the matrix",
        "non-integer cols",
        "text where SubObject+ required",
    ];
    for label in required {
        ensure!(MUTATIONS.iter().any(|m| m.label == label), "no mutation {label:?}");
    }
    let mut killed = 0;
    for m in MUTATIONS {
        let tree = read_document(m.apply().as_bytes()).map_err(|e| format!("{}: {e}", m.label))?;
        let report = validate(&tree, &graph).map_err(|e| e.to_string())?;
        ensure!(!report.valid, "{} accepted", m.label);
        ensure!(
            report.violations.iter().all(|v| v.path.starts_with('/')),
            "{} has no path",
            m.label
        );
        killed += 1;
    }
    Ok(format!("2 fixtures valid, {killed}/{} mutations killed", MUTATIONS.len()))
}

#[derive(Default)]
struct Coverage(std::collections::BTreeSet<&'static str>);

impl Coverage {
    fn object(&mut self, obj: &ObjectNode) {
        for p in &obj.properties {
            match &p.payload {
                PropertyPayload::Undefined => self.mark("undefined"),
                PropertyPayload::Text(_) => self.mark("text property"),
                PropertyPayload::Subobjects(subs) => {
                    self.mark("subobjects");
                    subs.iter().for_each(|s| self.object(s));
                }
                PropertyPayload::Data { data, .. } => self.data(data),
            }
        }
        for a in &obj.attachments {
            match &a.payload {
                AttachmentPayload::Scalar { .. } => self.mark("scalar attachment"),
                AttachmentPayload::Text(_) => self.mark("text attachment"),
                AttachmentPayload::Complex { value, .. } => {
                    self.mark("complex attachment");
                    self.value(value);
                }
            }
        }
    }

    fn data(&mut self, data: &PropertyData) {
        match data {
            PropertyData::Scalar(_) => self.mark("scalar"),
            PropertyData::Value(v) => self.value(v),
            PropertyData::ObjectArray(objs) => {
                self.mark("object array");
                objs.iter().for_each(|o| self.object(o));
            }
        }
    }

    fn value(&mut self, v: &Value) {
        match v {
            Value::Vector(v) => self.vector(v),
            Value::Matrix(m) => self.matrix(m),
            Value::Tuple(t) => self.tuple(t),
            Value::Ref(_) => self.mark("reference"),
        }
    }

    fn vector(&mut self, v: &Vector) {
        match v {
            Vector::Dense(_) => self.mark("dense vector"),
            Vector::Sparse { .. } => self.mark("sparse vector"),
            Vector::Tuples { entries, .. } => {
                self.mark("tuple vector");
                entries.iter().for_each(|e| self.tuple(&e.tuple));
            }
        }
    }

    fn matrix(&mut self, m: &Matrix) {
        match m {
            Matrix::Dense { rows, .. } => {
                self.mark("dense matrix");
                rows.iter().for_each(|r| self.vector(r));
            }
            Matrix::Sparse { rows, .. } => {
                self.mark("sparse matrix");
                rows.iter().for_each(|r| self.vector(&r.row));
            }
            Matrix::Nested(ms) => {
                self.mark("nested matrix");
                ms.iter().for_each(|m| self.matrix(m));
            }
            Matrix::Tuples(ts) => {
                self.mark("tuple matrix");
                ts.iter().for_each(|t| self.tuple(t));
            }
        }
    }

    fn tuple(&mut self, t: &Tuple) {
        match &t.items {
            TupleItems::Text(_) => self.mark("text tuple"),
            TupleItems::Items(items) => {
                self.mark("item tuple");
                for item in items {
                    match item {
                        TupleItem::Vector(v) => self.vector(v),
                        TupleItem::Matrix(m) => self.matrix(m),
                        TupleItem::Tuple(t) => {
                            self.mark("nested tuple");
                            self.tuple(t);
                        }
                        TupleItem::Ref(_) => self.mark("reference"),
                        TupleItem::Element(_) => self.mark("tuple element"),
                    }
                }
            }
        }
    }

    fn mark(&mut self, what: &'static str) {
        self.0.insert(what);
    }
}

fn round_trip_one(doc: &Document) -> Result<(), String> {
    let once = encode(doc);
    let reread = read_document(&write_document(&once)).map_err(|e| e.to_string())?;
    ensure!(infoset_equal(&reread, &once), "serialization changed the infoset");
    let back = decode(&reread, &DecodeOptions::default()).map_err(|e| e.to_string())?;
    ensure!(back == *doc, "decode(encode(doc)) differs");
    ensure!(infoset_equal(&encode(&back), &once), "second encoding differs");
    Ok(())
}

fn round_trip() -> Verdict {
    for (label, tree) in [("square", square_tree()), ("polynomial", polynomial_tree())] {
        let doc = decode(&tree, &DecodeOptions::default()).map_err(|e| e.to_string())?;
        round_trip_one(&doc).map_err(|e| format!("{label}: {e}"))?;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let mut coverage = Coverage::default();
    for i in 0..500 {
        let doc = document(&mut rng, Limits::default());
        let report = validate(&encode(&doc), &polymake_schema()).map_err(|e| e.to_string())?;
        ensure!(report.valid, "document {i} encodes to an invalid file: {:?}", report.violations);
        round_trip_one(&doc).map_err(|e| format!("document {i}: {e}"))?;
        match &doc.body {
            Body::Object(obj) => coverage.object(obj),
            Body::Data(data) => coverage.data(&data.data),
        }
    }
    let wanted = [
        "dense vector",
        "sparse vector",
        "tuple vector",
        "dense matrix",
        "sparse matrix",
        "nested matrix",
        "tuple matrix",
        "item tuple",
        "text tuple",
        "nested tuple",
        "reference",
        "scalar",
        "undefined",
        "subobjects",
        "object array",
    ];
    let missing: Vec<_> = wanted.iter().filter(|w| !coverage.0.contains(*w)).collect();
    ensure!(missing.is_empty(), "generator never produced {missing:?}");
    Ok(format!(
        "2 fixtures and 500 generated documents, {} shapes covered",
        coverage.0.len()
    ))
}

fn sparse_dense() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    for i in 0..1000 {
        let d = token_vector(&mut rng, 16);
        let back = densify_vector(&sparsify_vector(&d, "0"), None, "0").map_err(|e| e.to_string())?;
        ensure!(back == d, "token vector {i}: {:?} became {:?}", d, back);
    }
    for i in 0..1000 {
        let v = sorted_sparse_vector(&mut rng, 16);
        let dense = densify_vector(&v, None, "0").map_err(|e| e.to_string())?;
        let back = sparsify_vector(&dense, "0");
        ensure!(back == v, "sparse vector {i}: {:?} became {:?}", v, back);
    }
    let obj = square_object()?;
    let f = densify_matrix(matrix(&obj, "FACETS")?, "0").map_err(|e| e.to_string())?;
    let expected = strs(&[
        &["0", "1", "0"],
        &["1/3", "-1", "0"],
        &["0", "0", "1"],
        &["1/3", "0", "-1"],
    ]);
    ensure!(dense_rows(&f) == expected, "FACETS densify to {:?}", f);
    Ok("1000 + 1000 vectors and the FACETS rows".into())
}

fn oracle() -> Verdict {
    let graph = polymake_schema();
    let mut brute = BruteValidator::new(&graph);
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let (mut checked, mut valid) = (0, 0);
    while checked < 300 {
        let tree = small_tree(&mut rng, 4);
        if depth(&tree.root) > 4 {
            continue;
        }
        let lax = rng.gen_bool(0.25);
        let fast = validate_with(&tree, &graph, ValidateOptions { lax_namespace: lax })
            .map_err(|e| e.to_string())?;
        let slow = brute.is_valid(&tree, lax);
        ensure!(
            fast.valid == slow,
            "tree {checked} disagrees: derivative {} brute force {}\n{}",
            fast.valid,
            slow,
            String::from_utf8_lossy(&write_document(&tree))
        );
        checked += 1;
        valid += usize::from(slow);
    }
    ensure!(valid > 0 && valid < checked, "only one verdict seen ({valid} valid)");
    Ok(format!("300/300 agree ({valid} valid, {} invalid)", 300 - valid))
}

fn semantics() -> Verdict {
    let obj = square_object()?;
    let v = densify_matrix(matrix(&obj, "VERTICES")?, "0").map_err(|e| e.to_string())?;
    let f = densify_matrix(matrix(&obj, "FACETS")?, "0").map_err(|e| e.to_string())?;
    let report = incidence_check(&v, &f).map_err(|e| e.to_string())?;
    let third = Rational::new(1, 3);
    let products: Vec<&Rational> = report.products.iter().flatten().collect();
    ensure!(products.len() == 16, "{} products", products.len());
    ensure!(
        products.iter().all(|p| p.is_zero() || **p == third),
        "products {:?}",
        report.products
    );
    for (vi, row) in report.products.iter().enumerate() {
        let zeros = row.iter().filter(|p| p.is_zero()).count();
        ensure!(zeros == 2, "vertex {vi} lies on {zeros} facets");
    }
    for fi in 0..4 {
        let zeros = report.products.iter().filter(|r| r[fi].is_zero()).count();
        ensure!(zeros == 2, "facet {fi} holds {zeros} vertices");
    }

    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let radicands = ["0", "2", "3", "5", "6", "7", "1/2", "10/3"];
    let mut samples = 0;
    while samples < 500 {
        let a = rational_token(&mut rng, 50);
        let b = rational_token(&mut rng, 50);
        let c = radicands[rng.gen_range(0..radicands.len())];
        let (fa, fb, fc) = (frac(&a), frac(&b), frac(c));
        if !exceeds(&fa, &fb, &fc, 6) {
            continue;
        }
        let x = QuadExt::new(
            parse_rational(&a).map_err(|e| e.to_string())?,
            parse_rational(&b).map_err(|e| e.to_string())?,
            parse_rational(c).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let reference = approximate_sign(&fa, &fb, &fc);
        ensure!(
            Some(quad_sign(&x)) == reference,
            "sign of {a} + {b}√{c}: {} vs {reference:?}",
            quad_sign(&x)
        );
        samples += 1;
    }

    let points = v
        .rows
        .iter()
        .map(|r| {
            let coords = r
                .entries
                .iter()
                .map(|t| parse_rational(t).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            dehomogenize(&HomPoint { coords }).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (z, t) = (Rational::zero(), third);
    let expected = vec![
        vec![z.clone(), z.clone()],
        vec![t.clone(), z.clone()],
        vec![z, t.clone()],
        vec![t.clone(), t],
    ];
    ensure!(points == expected, "dehomogenized vertices {points:?}");
    Ok("16 products in {0, 1/3}, 500 signs agree, square vertices recovered".into())
}

fn pmxml(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_pmxml"))
        .args(args)
        .env("PMXML_COLOR", "0")
        .output()
        .map_err(|e| e.to_string())
}

fn write(dir: &Path, name: &str, text: &str) -> Result<String, String> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| e.to_string())?;
    Ok(path.to_string_lossy().into_owned())
}

fn cli_contract() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let good = fixture_path("square.xml").to_string_lossy().into_owned();
    let invalid = write(
        dir.path(),
        "invalid.xml",
        &SQUARE_XML.replacen(r#"type="polytope::Polytope&lt;Rational&gt;""#, "", 1),
    )?;
    let missing = dir.path().join("missing.xml").to_string_lossy().into_owned();
    let moved = write(
        dir.path(),
        "moved.xml",
        &SQUARE_XML.replacen("<v>1 1/3 1/3</v>", "<v>1 1 1</v>", 1),
    )?;
    let nine = write(
        dir.path(),
        "nine.xml",
        &SQUARE_XML.replacen("<v>1 2 3</v>", "<v>1 2 9</v>", 1),
    )?;

    // Expected codes for validate, inspect, to-json, roundtrip --check, check.
    let matrix: [(&str, &str, [i32; 5]); 5] = [
        ("good", &good, [0, 0, 0, 0, 0]),
        ("invalid", &invalid, [1, 1, 1, 1, 1]),
        ("missing", &missing, [2, 2, 2, 2, 2]),
        ("moved vertex", &moved, [0, 0, 0, 0, 3]),
        ("index 9", &nine, [0, 0, 0, 0, 3]),
    ];
    let commands: [&[&str]; 5] = [
        &["validate"],
        &["inspect"],
        &["to-json"],
        &["roundtrip", "--check"],
        &["check"],
    ];
    let mut runs = 0;
    for (label, path, codes) in matrix {
        for (cmd, want) in commands.iter().zip(codes) {
            let mut args = cmd.to_vec();
            args.push(path);
            let got = pmxml(&args)?.status.code();
            ensure!(got == Some(want), "{label} file, {cmd:?}: exit {got:?}, expected {want}");
            runs += 1;
        }
    }
    let unwritable = pmxml(&["to-json", &good, "--out", "/no/such/dir/out.json"])?;
    ensure!(unwritable.status.code() == Some(2), "unwritable output exits {:?}", unwritable.status.code());

    for name in ["square.xml", "polynomial.xml"] {
        let path = fixture_path(name).to_string_lossy().into_owned();
        let first = pmxml(&["to-json", &path])?.stdout;
        let second = pmxml(&["to-json", &path])?.stdout;
        ensure!(!first.is_empty() && first == second, "{name}: to-json output differs between runs");
        let doc = decode(
            &read_document(&std::fs::read(&path).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?,
            &DecodeOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            first == format!("{}\n", to_json(&doc)).into_bytes(),
            "{name}: CLI JSON differs from the library"
        );
    }
    Ok(format!("{} exit codes as expected, to-json stable", runs + 1))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("square fixture fidelity", square_fixture),
        ("polynomial fixture fidelity", polynomial_fixture),
        ("validation and mutation kill rate", validation),
        ("round trip", round_trip),
        ("sparse/dense conversion", sparse_dense),
        ("validator oracle equivalence", oracle),
        ("semantics", semantics),
        ("CLI contract", cli_contract),
    ];
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let line = match &verdict {
            Ok(detail) => format!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("FAIL {}. {name}: {why}", i + 1)
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
