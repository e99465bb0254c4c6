//! Text and JSON renderings of command results.
//!
//! Text reports are `key: value` lines. Machine reports are a JSON object
//! with keys `command`, `exit_code`, `report` and, for seeded commands,
//! `seed`; object keys are sorted.

use serde_json::{json, Map, Value};

use dspec_core::exact::Poly;
use dspec_core::nabla::NablaExpansion;
use dspec_core::search::{Refutation, SearchReport};
use dspec_core::spectrum::{BatchClearance, ConeVerdict, SpecPoint};
use dspec_core::suite::SuiteSummary;

pub struct Report {
    command: &'static str,
    seed: Option<u64>,
    lines: Vec<String>,
    fields: Map<String, Value>,
    pub exit: u8,
}

impl Report {
    pub fn new(command: &'static str, seed: Option<u64>) -> Self {
        Report {
            command,
            seed,
            lines: Vec::new(),
            fields: Map::new(),
            exit: 0,
        }
    }

    pub fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.fields.insert(key.to_string(), v);
    }

    pub fn text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(s) = self.seed {
            out.push_str(&format!("seed: {s}\n"));
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn machine(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), json!(self.command));
        top.insert("exit_code".into(), json!(self.exit));
        if let Some(s) = self.seed {
            top.insert("seed".into(), json!(s));
        }
        top.insert("report".into(), Value::Object(self.fields.clone()));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

pub fn coords(p: &SpecPoint) -> Value {
    json!(p.coords().iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn point_header(r: &mut Report, p: &SpecPoint) {
    r.line(format!("generators: {}", p.field().generators()));
    r.line(format!("base_ring: {}", p.field().base_ring_name()));
    r.line(format!("point: {p}"));
    r.set(
        "point",
        json!({
            "generators": p.field().generators().names(),
            "base_ring": p.field().base_ring_name(),
            "vars": p.x_vars().names(),
            "coords": coords(p),
        }),
    );
}

pub fn expansion(r: &mut Report, j: usize, e: &NablaExpansion, only: Option<usize>) -> Value {
    let f = e.source();
    r.line(format!("poly[{}]: {}", j + 1, f));
    r.line(format!("  arity: {}", e.arity()));
    r.line(format!("  degree: {}", e.degree()));
    r.line(format!("  depth: {}", e.depth()));
    let mut levels = Vec::new();
    for k in 1..=e.depth() {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let g = &e.tower()[k - 1];
        r.line(format!("  G_{k} = {g}"));
        let mut table = Vec::new();
        for (w, p) in e.coeff_table(k).into_iter().flatten() {
            r.line(format!("  P_{{{k},{w}}} = {p}"));
            table.push(json!({ "w": w.to_string(), "p": p.to_string() }));
        }
        let mut bs = Vec::new();
        for ((v, w), b) in e.b_coefficients(k).into_iter().flatten() {
            r.line(format!("  b_{{{v},{w}}} = {b}"));
            bs.push(json!({ "v": v.to_string(), "w": w.to_string(), "b": b.to_string() }));
        }
        levels.push(json!({ "k": k, "g": g.to_string(), "table": table, "b": bs }));
    }
    let linear: Vec<String> = e.linear_rep().iter().map(Poly::to_string).collect();
    r.line(format!(
        "  linear: {}",
        linear
            .iter()
            .enumerate()
            .map(|(i, p)| format!("P{i} = {p}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    json!({
        "poly": f.to_string(),
        "arity": e.arity(),
        "degree": e.degree(),
        "depth": e.depth(),
        "levels": levels,
        "linear": linear,
    })
}

pub fn verdict(r: &mut Report, v: &ConeVerdict) -> Value {
    r.line(format!("predicate: {}", v.predicate));
    r.line(format!("result: {}", pass(v.passed)));
    let mut ws = Vec::new();
    for (i, w) in v.witnesses.iter().enumerate() {
        r.line(format!(
            "witness[{}]: {} -> {} (sign {}, {})",
            i + 1,
            w.poly,
            w.value,
            w.sign,
            w.magnitude
        ));
        ws.push(json!({
            "poly": w.poly.to_string(),
            "value": w.value.to_string(),
            "sign": w.sign.as_i8(),
            "magnitude": w.magnitude.name(),
        }));
    }
    let failure = match &v.failure {
        Some(f) => {
            let at = match f.corpus_index {
                Some(i) => format!("corpus[{}]", i + 1),
                None => "base ring".to_string(),
            };
            r.line(format!("failure: {at} {} -> {}: {}", f.poly, f.value, f.reason));
            json!({
                "corpus_index": f.corpus_index.map(|i| i + 1),
                "poly": f.poly.to_string(),
                "value": f.value.to_string(),
                "reason": f.reason,
            })
        }
        None => Value::Null,
    };
    json!({
        "predicate": v.predicate,
        "passed": v.passed,
        "witnesses": ws,
        "failure": failure,
    })
}

pub fn batch(r: &mut Report, b: &BatchClearance) -> Value {
    r.line(format!("bound: {}", b.bound));
    r.line(format!("checked: {}", b.checked));
    r.line(format!("result: {}", pass(b.passed())));
    let failure = match &b.failure {
        Some((a, c)) => {
            let normal = a.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            r.line(format!("failure: normal ({normal}) gives {} ({})", c.value, c.magnitude));
            json!({ "normal": a, "value": c.value.to_string(), "magnitude": c.magnitude.name() })
        }
        None => Value::Null,
    };
    json!({ "bound": b.bound, "checked": b.checked, "passed": b.passed(), "failure": failure })
}

fn plan_lines(r: &mut Report, direction: &str, count: u64, lambda: &str, generated: u64) {
    r.line(format!("direction: {direction}"));
    r.line(format!("count: {count}"));
    r.line(format!("lambda: {lambda}"));
    r.line(format!("points_generated: {generated}"));
    r.set("direction", json!(direction));
    r.set("count", json!(count));
    r.set("lambda", json!(lambda));
    r.set("points_generated", json!(generated));
}

pub fn search_report(r: &mut Report, corpus: &[Poly], rep: &SearchReport) {
    r.line("outcome: report".to_string());
    r.set("outcome", json!("report"));
    plan_lines(r, &rep.direction.to_string(), rep.count, &rep.lambda.to_string(), rep.points_generated);
    r.line(format!("index: {}", rep.index));
    r.line(format!("gamma: {}", rep.gamma));
    r.line(format!("in_ball: {}", rep.in_ball));
    let mut values = Vec::new();
    for (i, ((f, v), m)) in corpus.iter().zip(&rep.values).zip(&rep.magnitudes).enumerate() {
        r.line(format!("value[{}]: {} -> {} ({})", i + 1, f, v, m));
        values.push(json!({ "poly": f.to_string(), "value": v.to_string(), "magnitude": m.name() }));
    }
    r.set("index", json!(rep.index));
    r.set("gamma", coords(&rep.gamma));
    r.set("in_ball", json!(rep.in_ball));
    r.set("values", Value::Array(values));
    let pre = precheck(r, &rep.precheck);
    r.set("precheck", pre);
}

fn precheck(r: &mut Report, b: &BatchClearance) -> Value {
    let status = match &b.failure {
        None => format!("pass ({} normals up to {})", b.checked, b.bound),
        Some((a, c)) => format!(
            "fail: normal ({}) gives {} ({})",
            a.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            c.value,
            c.magnitude
        ),
    };
    r.line(format!("precheck: {status}"));
    json!({
        "bound": b.bound,
        "checked": b.checked,
        "passed": b.passed(),
        "failure_normal": b.failure.as_ref().map(|(a, _)| a.clone()),
    })
}

pub fn refutation(r: &mut Report, corpus: &[Poly], x: &Refutation) {
    let c = &x.certificate;
    r.line("outcome: certificate".to_string());
    r.set("outcome", json!("certificate"));
    plan_lines(r, &x.direction.to_string(), x.count, &x.lambda.to_string(), x.points_generated);
    let d: Vec<String> = c.d.iter().map(Poly::to_string).collect();
    r.line(format!("poly: corpus[{}] {}", x.poly_index + 1, corpus[x.poly_index]));
    r.line(format!("interpolation_points: {}, {}", x.a_index, x.b_index));
    r.line(format!("d: {}", d.join(", ")));
    r.line(format!("d0: {}", c.d0));
    r.line(format!("scale: {}", c.scale));
    r.line(format!("c: {}", c.c));
    r.line(format!("check_value: {}", c.check_value));
    r.line(format!("distance_squared: {}", c.distance_squared));
    r.line(format!("clearance: {}", c.clearance));
    r.set(
        "certificate",
        json!({
            "poly_index": x.poly_index + 1,
            "poly": corpus[x.poly_index].to_string(),
            "a_index": x.a_index,
            "b_index": x.b_index,
            "d": d,
            "d0": c.d0.to_string(),
            "scale": c.scale.to_string(),
            "c": coords(&c.c),
            "check_value": c.check_value.to_string(),
            "distance_squared": c.distance_squared.to_string(),
            "clearance": c.clearance.name(),
        }),
    );
    let pre = precheck(r, &x.precheck);
    r.set("precheck", pre);
}

pub fn suite(r: &mut Report, s: &SuiteSummary) {
    r.line(format!("trials: {}", s.trials));
    if let Some(w) = &s.warning {
        r.line(format!("warning: {w}"));
    }
    let mut fams = Vec::new();
    for f in &s.families {
        r.line(format!(
            "{}: {} ({}/{} passed)",
            f.name,
            pass(f.passed()),
            f.cases - f.failures,
            f.cases
        ));
        if let Some(msg) = &f.first_failure {
            r.line(format!("  first failure: {msg}"));
        }
        fams.push(json!({
            "name": f.name,
            "cases": f.cases,
            "failures": f.failures,
            "first_failure": f.first_failure,
        }));
    }
    r.line(format!("result: {}", pass(s.all_passed())));
    r.set("trials", json!(s.trials));
    r.set("warning", json!(s.warning));
    r.set("families", Value::Array(fams));
    r.set("passed", json!(s.all_passed()));
}
