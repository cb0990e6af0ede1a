use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::rngs::StdRng;
use rand::SeedableRng;

use pmxml_bench::{cube, POLYNOMIAL_XML, SQUARE_XML};
use pmxml_core::codec::{decode, densify_matrix, encode, to_json, DecodeOptions};
use pmxml_core::infoset::{read_document, write_document};
use pmxml_core::model::Value;
use pmxml_core::schema::{polymake_schema, validate};
use pmxml_core::semantics::incidence_check;
use pmxml_testkit::generate::{document, Limits};

fn inputs() -> Vec<(&'static str, Vec<u8>)> {
    let random = document(&mut StdRng::seed_from_u64(7), Limits { depth: 4, width: 6 });
    vec![
        ("square", SQUARE_XML.as_bytes().to_vec()),
        ("polynomial", POLYNOMIAL_XML.as_bytes().to_vec()),
        ("cube8", write_document(&encode(&cube(8)))),
        ("random", write_document(&encode(&random))),
    ]
}

fn pipeline(c: &mut Criterion) {
    let graph = polymake_schema();
    let opts = DecodeOptions::default();
    let mut group = c.benchmark_group("pipeline");
    for (name, bytes) in inputs() {
        group.throughput(Throughput::Bytes(bytes.len() as u64));
        let tree = read_document(&bytes).unwrap();
        let doc = decode(&tree, &opts).unwrap();

        group.bench_with_input(BenchmarkId::new("read", name), &bytes, |b, bytes| {
            b.iter(|| read_document(black_box(bytes)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("validate", name), &tree, |b, tree| {
            b.iter(|| validate(black_box(tree), &graph).unwrap())
        });
        let unchecked = DecodeOptions {
            validate_first: false,
            ..opts
        };
        group.bench_with_input(BenchmarkId::new("decode", name), &tree, |b, tree| {
            b.iter(|| decode(black_box(tree), &unchecked).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("encode", name), &doc, |b, doc| {
            b.iter(|| write_document(&encode(black_box(doc))))
        });
        group.bench_with_input(BenchmarkId::new("to_json", name), &doc, |b, doc| {
            b.iter(|| to_json(black_box(doc)))
        });
    }
    group.finish();
}

fn incidences(c: &mut Criterion) {
    let mut group = c.benchmark_group("incidence");
    for d in [3, 6, 9] {
        let doc = cube(d);
        let obj = doc.object().unwrap();
        let dense = |name: &str| match obj.property(name).unwrap().payload.as_value() {
            Some(Value::Matrix(m)) => densify_matrix(m, "0").unwrap(),
            _ => unreachable!(),
        };
        let (v, f) = (dense("VERTICES"), dense("FACETS"));
        group.bench_function(BenchmarkId::from_parameter(d), |b| {
            b.iter(|| incidence_check(black_box(&v), black_box(&f)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pipeline, incidences);
criterion_main!(benches);
