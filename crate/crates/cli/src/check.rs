use pmxml_core::codec::densify_matrix;
use pmxml_core::model::{Body, Document, ObjectNode, Value};
use pmxml_core::semantics::{check_counts, check_triangulation, incidence_check};

pub struct CheckReport {
    pub lines: Vec<String>,
    pub clean: bool,
}

pub fn run(doc: &Document) -> CheckReport {
    let mut report = CheckReport {
        lines: Vec::new(),
        clean: true,
    };
    let Body::Object(obj) = &doc.body else {
        report.lines.push("nothing to check in loose data".into());
        return report;
    };
    incidences(obj, &mut report);
    let counts = check_counts(obj);
    if counts.is_empty() {
        report.lines.push("counts: consistent".into());
    }
    flag(&mut report, counts);
    let tri = check_triangulation(obj);
    if tri.is_empty() {
        report.lines.push("triangulation: indices in range".into());
    }
    flag(&mut report, tri);
    report
}

fn flag(report: &mut CheckReport, problems: Vec<String>) {
    if !problems.is_empty() {
        report.clean = false;
        report.lines.extend(problems);
    }
}

fn incidences(obj: &ObjectNode, report: &mut CheckReport) {
    let matrix = |name: &str| match obj.property(name)?.payload.as_value()? {
        Value::Matrix(m) => Some(m),
        _ => None,
    };
    let (Some(vertices), Some(facets)) = (matrix("VERTICES"), matrix("FACETS")) else {
        report.lines.push("incidence: VERTICES or FACETS missing, skipped".into());
        return;
    };
    let result = densify_matrix(vertices, "0")
        .map_err(pmxml_core::SemanticsError::from)
        .and_then(|v| Ok((v, densify_matrix(facets, "0")?)))
        .and_then(|(v, f)| incidence_check(&v, &f));
    match result {
        Err(e) => flag(report, vec![format!("incidence: {e}")]),
        Ok(r) => {
            let total: usize = r.products.iter().map(Vec::len).sum();
            let ok = total - r.violations.len();
            report
                .lines
                .push(format!("incidence: {ok}/{total} products ≥ 0"));
            let problems = r
                .violations
                .iter()
                .map(|&(v, f)| {
                    format!(
                        "vertex {v} violates facet {f}: product {} < 0",
                        r.products[v][f]
                    )
                })
                .collect();
            flag(report, problems);
        }
    }
}
