use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use stationary_af::dimgroup::DimensionGroup;
use stationary_af::equiv::{
    build_cstar_certificate, check_shift_equivalence, field_and_prime_conditions,
    intertwiner_conditions, no_power_conjugacy_obstruction, powers_conjugate_over_q,
    CertificateOptions, DEFAULT_COEFFICIENT_BOUND,
};
use stationary_af::exact::factor_over_z;
use stationary_af::matops::{is_primitive, IntMatrix};
use stationary_af::padic::{p_adic_limit, padic_row_space_battery, row_space_mod};
use stationary_af::perron::perron_data;

use crate::document::MatrixDocument;
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum CheckKind {
    Se,
    Conjugate,
    T6,
    T7,
    T10,
    Cstar,
}

impl CheckKind {
    fn label(self) -> &'static str {
        match self {
            CheckKind::Se => "se",
            CheckKind::Conjugate => "conjugate",
            CheckKind::T6 => "t6",
            CheckKind::T7 => "t7",
            CheckKind::T10 => "t10",
            CheckKind::Cstar => "cstar",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Request {
    pub charpoly: bool,
    pub pf: bool,
    pub dimgroup: bool,
    pub primitive: bool,
    pub padic: Option<(u64, u32)>,
    pub checks: Vec<CheckKind>,
    pub powers: Option<(u32, u32)>,
    pub budget: Option<u64>,
}

impl Request {
    fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (on, name) in [
            (self.charpoly, "charpoly"),
            (self.pf, "pf"),
            (self.dimgroup, "dimgroup"),
            (self.primitive, "primitive"),
            (self.padic.is_some(), "padic"),
        ] {
            if on {
                out.push(name.to_string());
            }
        }
        out.extend(self.checks.iter().map(|c| format!("check:{}", c.label())));
        out
    }
}

#[derive(Serialize)]
struct Subject<'a> {
    name: &'a str,
    matrix: &'a IntMatrix,
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    /// All computation is deterministic; kept for format stability.
    seed: u64,
    subjects: Vec<Subject<'a>>,
    requested: Vec<String>,
    results: BTreeMap<String, Value>,
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub struct Outcome {
    pub json: String,
    pub summary: Vec<String>,
}

fn per_matrix(
    docs: &[MatrixDocument],
    summary: &mut Vec<String>,
    mut f: impl FnMut(&MatrixDocument, &mut Vec<String>) -> Result<Value, Failure>,
) -> Result<Value, Failure> {
    let mut out = Vec::new();
    for d in docs {
        let mut v = f(d, summary)?;
        if let Value::Object(m) = &mut v {
            m.insert("name".into(), Value::String(d.name.clone()));
        }
        out.push(v);
    }
    Ok(Value::Array(out))
}

pub fn run(docs: &[MatrixDocument], req: &Request) -> Result<Outcome, Failure> {
    let mut results = BTreeMap::new();
    let mut summary = Vec::new();
    if req.charpoly {
        let v = per_matrix(docs, &mut summary, |d, s| {
            let p = d.matrix.charpoly()?;
            let f = factor_over_z(&p)?;
            s.push(format!("{}: charpoly {p}", d.name));
            Ok(json!({ "charpoly": value(&p), "factorization": value(&f) }))
        })?;
        results.insert("charpoly".into(), v);
    }
    if req.primitive {
        let v = per_matrix(docs, &mut summary, |d, s| {
            let p = is_primitive(&d.matrix)?;
            s.push(format!("{}: primitive = {p}", d.name));
            Ok(json!({ "primitive": p }))
        })?;
        results.insert("primitive".into(), v);
    }
    if req.pf {
        let v = per_matrix(docs, &mut summary, |d, s| {
            let pd = perron_data(&d.matrix)?;
            s.push(format!("{}: lambda = {}", d.name, pd.lambda));
            Ok(value(&pd))
        })?;
        results.insert("pf".into(), v);
    }
    if req.dimgroup {
        let v = per_matrix(docs, &mut summary, |d, s| {
            let g = DimensionGroup::new(&d.matrix)?;
            let index = g.quotient_index()?;
            s.push(format!("{}: (G_(m+1) : G_m) = {index}", d.name));
            Ok(json!({
                "det": d.matrix.det()?.to_string(),
                "quotient_index": index.to_string(),
                "trace_functional": value(&g.alpha()),
                "perron_field_modulus": value(g.perron().field.modulus()),
            }))
        })?;
        results.insert("dimgroup".into(), v);
    }
    if let Some((p, m)) = req.padic {
        let v = per_matrix(docs, &mut summary, |d, s| {
            let limit = p_adic_limit(&d.matrix, p, m)?;
            let top = limit.levels.last().expect("m >= 1");
            let rs = row_space_mod(top.idempotent.matrix(), p, m)?;
            s.push(format!("{}: idempotent mod {p}^{m} has row space of size {p}^{}", d.name, rs.log_p_size()));
            Ok(json!({ "limit": value(&limit), "row_space": value(&rs) }))
        })?;
        results.insert("padic".into(), v);
    }
    if !req.checks.is_empty() {
        if !(2..=3).contains(&docs.len()) {
            return Err(Failure::Usage(
                "pairwise checks take two documents J, K and optionally A1".into(),
            ));
        }
        let (j, k) = (&docs[0].matrix, &docs[1].matrix);
        let a1 = match docs.get(2) {
            Some(d) => d.matrix.clone(),
            None => IntMatrix::identity(k.rows()),
        };
        for &c in &req.checks {
            let v = pair_check(c, j, k, &a1, req, &mut summary)?;
            results.insert(format!("check:{}", c.label()), v);
        }
    }
    if results.is_empty() {
        return Err(Failure::Usage("nothing requested; see --help".into()));
    }
    let report = Report {
        tool: "stationary-af",
        version: env!("CARGO_PKG_VERSION"),
        seed: 0,
        subjects: docs.iter().map(|d| Subject { name: &d.name, matrix: &d.matrix }).collect(),
        requested: req.names(),
        results,
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    Ok(Outcome { json, summary })
}

fn pair_check(
    c: CheckKind,
    j: &IntMatrix,
    k: &IntMatrix,
    a1: &IntMatrix,
    req: &Request,
    summary: &mut Vec<String>,
) -> Result<Value, Failure> {
    Ok(match c {
        CheckKind::Se => {
            let k_max = req.budget.unwrap_or(4).min(u64::from(u32::MAX)) as u32;
            let r = check_shift_equivalence(j, k, k_max, true, DEFAULT_COEFFICIENT_BOUND)?;
            let verified = match r.witness() {
                Some(w) => Some(w.verify(j, k)?),
                None => None,
            };
            summary.push(format!("se: witness found = {}", verified.is_some()));
            json!({ "search": value(&r), "verified": verified })
        }
        CheckKind::Conjugate => {
            let (a, b) = req.powers.unwrap_or((1, 1));
            let mut pairs = Vec::new();
            let mut any = false;
            for n in a..=b {
                for m in a..=b {
                    let r = powers_conjugate_over_q(j, k, n, m)?;
                    any |= r.conjugate;
                    pairs.push(value(&r));
                }
            }
            let obstruction = no_power_conjugacy_obstruction(j, k)?;
            summary.push(format!(
                "conjugate: some pair conjugate = {any}; obstruction = {}",
                obstruction.as_ref().map_or("none".to_string(), |o| o.kind().to_string())
            ));
            json!({ "powers": [a, b], "pairs": pairs, "obstruction": value(&obstruction) })
        }
        CheckKind::T6 => {
            let r = intertwiner_conditions(j, k, a1, 4)?;
            summary.push(format!("t6: passed = {}", r.passed()));
            json!({ "passed": r.passed(), "report": value(&r), "obstruction": value(&r.obstruction()) })
        }
        CheckKind::T7 => {
            let checks = padic_row_space_battery(j, k, a1, 4, 4)?;
            let passed = checks.iter().all(|r| r.passed);
            summary.push(format!("t7: passed = {passed} at {} primes", checks.len()));
            json!({ "passed": passed, "checks": value(&checks) })
        }
        CheckKind::T10 => {
            let r = field_and_prime_conditions(j, k, 3)?;
            summary.push(format!("t10: passed = {}", r.passed()));
            json!({ "passed": r.passed(), "report": value(&r), "obstruction": value(&r.obstruction()) })
        }
        CheckKind::Cstar => {
            let mut opts = CertificateOptions::default();
            if let Some(b) = req.budget {
                opts.budget = b;
            }
            let cert = build_cstar_certificate(j, k, a1, &opts)?;
            let verified = cert.verify(j, k)?;
            summary.push(format!("cstar: certificate with prefix {} verified = {verified}", cert.b.len()));
            json!({ "verified": verified, "certificate": value(&cert) })
        }
    })
}
