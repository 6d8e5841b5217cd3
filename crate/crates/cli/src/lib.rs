//! Problem parsing, dispatch and report rendering behind the `lefschetz`
//! binary.
//!
//! A problem is a JSON object:
//!
//! ```json
//! {"n": 1, "weights": [1, 0], "bundle": [{"l": 0, "c": 0, "mult": 1}],
//!  "command": "verify", "p_max": 8, "q_max": 8, "trunc": 6, "format": "json"}
//! ```
//!
//! Only `n` and `weights` are required. The bundle defaults to `O`, the
//! command to `verify`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use lefschetz::adelictrace::{biseries, exactness_defect, single_filtration_trace, BiseriesReport, FiltrationTraceReport};
use lefschetz::cohomology::{cech_oracle, euler_sequence, h_character, lefschetz_direct, CohomologyCharacter, VirtualBundle};
use lefschetz::exactnum::{expand, BoundarySeries, Point, RationalFunction};
use lefschetz::localization::{localize, localize_points, LocalizationReport};
use lefschetz::torusaction::LinearAction;
use lefschetz::verify::{self, GridSummary, Options, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Direct,
    Localize,
    Points,
    Biseries,
    Filtration,
    Cech,
    Verify,
    Defect,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Direct,
        Command::Localize,
        Command::Points,
        Command::Biseries,
        Command::Filtration,
        Command::Cech,
        Command::Verify,
        Command::Defect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Direct => "direct",
            Command::Localize => "localize",
            Command::Points => "points",
            Command::Biseries => "biseries",
            Command::Filtration => "filtration",
            Command::Cech => "cech",
            Command::Verify => "verify",
            Command::Defect => "defect",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// A validated problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub action: LinearAction,
    pub bundle: VirtualBundle,
    pub command: Command,
    pub p_max: usize,
    pub q_max: usize,
    pub trunc: i64,
    /// Expansion order for the boundary series attached to reports.
    pub order: Option<i64>,
    pub format: Format,
    /// Input of `defect`; the action's Euler sequence when absent.
    pub sequence: Option<Vec<VirtualBundle>>,
}

/// Schema violation, naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ParseError {
    pub field: String,
    pub message: String,
}

fn bad(field: &str, message: impl Into<String>) -> ParseError {
    ParseError {
        field: field.to_string(),
        message: message.into(),
    }
}

const FIELDS: [&str; 10] = ["n", "weights", "bundle", "command", "p_max", "q_max", "trunc", "order", "format", "sequence"];

fn integer(obj: &Map<String, Value>, field: &str) -> Result<Option<i64>, ParseError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_i64().map(Some).ok_or_else(|| bad(field, format!("expected an integer, got {v}"))),
    }
}

fn bounded(obj: &Map<String, Value>, field: &str, lo: i64, hi: i64, default: i64) -> Result<i64, ParseError> {
    let v = integer(obj, field)?.unwrap_or(default);
    if !(lo..=hi).contains(&v) {
        return Err(bad(field, format!("must lie in [{lo}, {hi}] (got {v})")));
    }
    Ok(v)
}

fn bundle_from(field: &str, v: &Value) -> Result<VirtualBundle, ParseError> {
    serde_json::from_value(v.clone()).map_err(|e| bad(field, e.to_string()))
}

/// Validates a problem given as a JSON value.
pub fn parse_problem_value(input: &Value) -> Result<Problem, ParseError> {
    let obj = input.as_object().ok_or_else(|| bad("problem", "expected a JSON object"))?;
    if let Some(unknown) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(bad(unknown, "unknown field"));
    }

    let n = integer(obj, "n")?.ok_or_else(|| bad("n", "missing field"))?;
    if n < 0 {
        return Err(bad("n", format!("must be nonnegative (got {n})")));
    }
    let weights: Vec<i64> = match obj.get("weights") {
        None => return Err(bad("weights", "missing field")),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| bad("weights", e.to_string()))?,
    };
    if weights.len() as i64 != n + 1 {
        return Err(bad(
            "weights",
            format!("weights length must be n+1 = {} (got {})", n + 1, weights.len()),
        ));
    }
    let action = LinearAction::new(n as usize, weights).map_err(|e| bad("weights", e.to_string()))?;

    let bundle = match obj.get("bundle") {
        None | Some(Value::Null) => VirtualBundle::line(0, 0),
        Some(v) => bundle_from("bundle", v)?,
    };
    let command = match obj.get("command") {
        None | Some(Value::Null) => Command::Verify,
        Some(Value::String(s)) => Command::parse(s).ok_or_else(|| {
            let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
            bad("command", format!("unknown command {s:?}; expected one of {}", names.join(", ")))
        })?,
        Some(v) => return Err(bad("command", format!("expected a string, got {v}"))),
    };
    let format = match obj.get("format") {
        None | Some(Value::Null) => Format::Json,
        Some(Value::String(s)) if s == "json" => Format::Json,
        Some(Value::String(s)) if s == "text" => Format::Text,
        Some(v) => return Err(bad("format", format!("expected \"json\" or \"text\", got {v}"))),
    };
    let sequence = match obj.get("sequence") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .enumerate()
                .map(|(i, v)| bundle_from(&format!("sequence[{i}]"), v))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(v) => return Err(bad("sequence", format!("expected a list of bundles, got {v}"))),
    };
    let order = integer(obj, "order")?;
    if let Some(o) = order {
        if !(0..=256).contains(&o) {
            return Err(bad("order", format!("must lie in [0, 256] (got {o})")));
        }
    }

    Ok(Problem {
        action,
        bundle,
        command,
        p_max: bounded(obj, "p_max", 1, 64, 8)? as usize,
        q_max: bounded(obj, "q_max", 1, 64, 8)? as usize,
        trunc: bounded(obj, "trunc", 1, 32, 6)?,
        order,
        format,
        sequence,
    })
}

/// Parses and validates a problem from JSON text.
pub fn parse_problem(input: &str) -> Result<Problem, ParseError> {
    let value: Value = serde_json::from_str(input).map_err(|e| bad("problem", format!("malformed JSON: {e}")))?;
    parse_problem_value(&value)
}

/// A rendered report and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    /// Sorted-key JSON (or a plain-text summary), newline terminated.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => render_text(&self.report),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn diagnostic(kind: &str, message: &str, extra: Option<(&str, Value)>) -> Outcome {
    let mut err = json!({"kind": kind, "message": message});
    if let Some((k, v)) = extra {
        err[k] = v;
    }
    Outcome {
        report: json!({ "error": err }),
        exit_code: EXIT_INVALID,
    }
}

pub fn parse_failure(e: &ParseError) -> Outcome {
    diagnostic("invalid-input", &e.message, Some(("field", Value::String(e.field.clone()))))
}

fn engine_failure(e: &lefschetz::Error) -> Outcome {
    match e {
        lefschetz::Error::NotApplicable { reason, witness } => diagnostic(
            "not-applicable",
            reason,
            witness.as_ref().map(|w| ("witness", to_value(w.as_ref()))),
        ),
        lefschetz::Error::InvalidInput(m) => diagnostic("invalid-input", m, None),
        lefschetz::Error::NotInvertible(m) => diagnostic("not-invertible", m, None),
        other => diagnostic("invalid-input", &other.to_string(), None),
    }
}

fn series_value(s: &BoundarySeries) -> Value {
    let coeffs: Vec<Value> = s.coeffs().iter().map(|(k, c)| json!([c.to_string(), k])).collect();
    json!({"point": s.point, "order": s.order, "coeffs": coeffs})
}

fn expansions(x: &RationalFunction, order: i64) -> Value {
    json!({
        "zero": series_value(&expand(x, Point::Zero, order)),
        "infinity": series_value(&expand(x, Point::Infinity, order)),
    })
}

fn envelope(p: &Problem, report: Value, exit_code: i32) -> Outcome {
    Outcome {
        report: json!({
            "command": p.command,
            "action": to_value(&p.action),
            "bundle": to_value(&p.bundle),
            "report": report,
        }),
        exit_code,
    }
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn direct_report(p: &Problem) -> Value {
    let characters: Vec<Value> = p
        .bundle
        .terms()
        .iter()
        .map(|t| {
            let h: CohomologyCharacter = h_character(&p.action, t.l, t.c);
            json!({"l": t.l, "c": t.c, "mult": t.mult, "character": to_value(&h)})
        })
        .collect();
    json!({"total": to_value(&lefschetz_direct(&p.action, &p.bundle)), "terms": characters})
}

fn localize_report(p: &Problem, r: &LocalizationReport) -> Value {
    let mut v = to_value(r);
    if let Some(order) = p.order {
        v["expansions"] = r.parts.iter().map(|part| expansions(&part.value, order)).collect();
    }
    v
}

fn filtration_report(p: &Problem, r: &FiltrationTraceReport) -> Value {
    let mut v = to_value(r);
    if let Some(order) = p.order {
        v["expansions"] = r
            .per_component
            .iter()
            .map(|part| series_value(&expand(&part.value, part.point, order)))
            .collect();
    }
    v
}

fn cech_report(p: &Problem) -> lefschetz::Result<(Value, bool)> {
    let mut ok = true;
    let terms = p
        .bundle
        .terms()
        .iter()
        .map(|t| {
            let h = cech_oracle(&p.action, t.l, t.c, p.trunc)?;
            let agrees = h.same_characters(&h_character(&p.action, t.l, t.c));
            ok &= agrees && h.stabilized == Some(true);
            Ok(json!({"l": t.l, "c": t.c, "character": to_value(&h), "agrees_with_monomials": agrees}))
        })
        .collect::<lefschetz::Result<Vec<_>>>()?;
    Ok((json!({"trunc": p.trunc, "terms": terms}), ok))
}

fn dispatch(p: &Problem) -> lefschetz::Result<Outcome> {
    let opts = Options {
        p_max: p.p_max,
        q_max: p.q_max,
        trunc: p.trunc,
    };
    Ok(match p.command {
        Command::Direct => envelope(p, direct_report(p), EXIT_OK),
        Command::Localize => {
            let r = localize(&p.action, &p.bundle)?;
            envelope(p, localize_report(p, &r), EXIT_OK)
        }
        Command::Points => {
            let total = localize_points(&p.action, &p.bundle)?;
            envelope(p, json!({"total": to_value(&total)}), EXIT_OK)
        }
        Command::Biseries => {
            let r: BiseriesReport = biseries(&p.action, &p.bundle, p.p_max, p.q_max)?;
            let code = status(r.passed());
            envelope(p, to_value(&r), code)
        }
        Command::Filtration => {
            let r = single_filtration_trace(&p.action, &p.bundle, p.p_max)?;
            let code = status(r.passed());
            envelope(p, filtration_report(p, &r), code)
        }
        Command::Cech => {
            let (v, ok) = cech_report(p)?;
            envelope(p, v, status(ok))
        }
        Command::Verify => {
            let r: VerifyReport = verify::verify(&p.action, &p.bundle, opts)?;
            envelope(p, to_value(&r), status(r.ok))
        }
        Command::Defect => {
            let seq = p.sequence.clone().unwrap_or_else(|| euler_sequence(&p.action, 0));
            let d = exactness_defect(&p.action, &seq)?;
            let v = json!({"defect": to_value(&d), "sequence": to_value(&seq), "exact": d.is_zero()});
            envelope(p, v, status(d.is_zero()))
        }
    })
}

/// Runs the problem's command. Engine errors become diagnostics with exit
/// code 2; failed comparisons or certificates give exit code 1.
pub fn run(problem: &Problem) -> Outcome {
    dispatch(problem).unwrap_or_else(|e| engine_failure(&e))
}

/// Runs the built-in verification grid.
pub fn run_grid(opts: Options) -> Outcome {
    match verify::run_grid(opts) {
        Ok(results) => {
            let summary = GridSummary::from_results(&results);
            let failing: Vec<Value> = results
                .iter()
                .flat_map(|a| &a.cases)
                .filter(|c| !c.routes_agree() || !c.certificates_pass || c.cech_agrees == Some(false) || c.filtration_agrees == Some(false))
                .take(20)
                .map(|c| json!({"weights": c.weights, "l": c.l, "c": c.c}))
                .collect();
            let code = status(summary.ok());
            Outcome {
                report: json!({"command": "verify", "grid": to_value(&summary), "first_failures": failing}),
                exit_code: code,
            }
        }
        Err(e) => engine_failure(&e),
    }
}

fn render_text(v: &Value) -> String {
    fn rf_text(v: &Value) -> String {
        match serde_json::from_value::<RationalFunction>(v.clone()) {
            Ok(x) => x.to_string(),
            Err(_) => v.to_string(),
        }
    }
    let mut out = String::new();
    if let Some(err) = v.get("error") {
        let _ = writeln!(out, "error ({}): {}", err["kind"].as_str().unwrap_or("?"), err["message"].as_str().unwrap_or(""));
        if let Some(f) = err.get("field") {
            let _ = writeln!(out, "  field: {}", f.as_str().unwrap_or(""));
        }
        if let Some(w) = err.get("witness") {
            let _ = writeln!(out, "  witness: {w}");
        }
        return out;
    }
    if let Some(grid) = v.get("grid") {
        for (k, val) in grid.as_object().into_iter().flatten() {
            let _ = writeln!(out, "{k}: {val}");
        }
        return out;
    }
    let command = v["command"].as_str().unwrap_or("");
    let _ = writeln!(out, "command: {command}");
    let _ = writeln!(out, "weights: {}", v["action"]["weights"]);
    let r = &v["report"];
    for key in ["total", "direct", "defect"] {
        if let Some(x) = r.get(key) {
            let _ = writeln!(out, "{key}: {}", rf_text(x));
        }
    }
    if let Some(loc) = r.get("localize") {
        let _ = writeln!(out, "localize: {}", rf_text(&loc["total"]));
    }
    let parts = [&r["localize"]["parts"], &r["parts"], &r["per_component"]]
        .into_iter()
        .filter_map(Value::as_array)
        .flatten();
    for part in parts {
        let _ = writeln!(
            out,
            "  component weight {} {}: {}",
            part["component"]["weight"],
            part["component"]["indices"],
            rf_text(&part["value"])
        );
    }
    if let Some(tr_p) = r.get("tr_p").and_then(Value::as_array) {
        for (p, x) in tr_p.iter().enumerate() {
            let _ = writeln!(out, "  Tr_{p}: {}", rf_text(x));
        }
    }
    if let Some(certs) = r.get("certificates").and_then(Value::as_array) {
        let passed = certs.iter().filter(|c| c["status"] == "pass").count();
        let _ = writeln!(out, "certificates: {passed}/{} pass", certs.len());
    }
    if let Some(ok) = r.get("ok") {
        let _ = writeln!(out, "ok: {ok}");
        for f in r["failures"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  failure: {}", f.as_str().unwrap_or(""));
        }
        for n in r["notes"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  note: {}", n.as_str().unwrap_or(""));
        }
    }
    for t in r.get("terms").and_then(Value::as_array).into_iter().flatten() {
        let h = &t["character"]["h"];
        let _ = writeln!(out, "  O({}) ⊗ λ^{}: H = {h}", t["l"], t["c"]);
    }
    out
}
