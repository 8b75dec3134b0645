//! The command layer behind the `basicindex` binary. Every command produces a
//! [`Report`] holding a plain-text rendering, a tree-structured value with the
//! same content, and an exit status.

use serde_json::{json, Value};

use super::{fmt_g, parse_scenario, round_g, CORPUS};
use crate::clifford::{CliffordModule, GradingKind};
use crate::error::Error;
use crate::lab::{convergence_report, Outcome};
use crate::linalg::smallest_singular_value;
use crate::local_index::{
    global_index_detail, odd_invertible_perturbation, validate_closure, GlobalPerturbation, ScenarioModel, SectorDetail,
    Severity,
};
use crate::model::{analytic_spectrum, model_cross_check, tuple_oracle_levels};
use crate::Tolerances;

/// Grid size of the finite-difference oracle used by `spectrum --numerical`.
pub const ORACLE_GRID: usize = 2000;
/// Largest accepted deviation between analytic and oracle levels.
pub const ORACLE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Mismatch = 1,
    InputError = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn worst(self, other: Self) -> Self {
        if other.code() > self.code() {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    /// Pretty-printed tree notation.
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub status: ExitStatus,
    pub text: String,
    pub value: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.value).expect("report values serialize");
                s.push('\n');
                s
            }
        }
    }

    /// Report for a failed command: input errors exit 2, anything else 1.
    pub fn from_error(err: &Error) -> Self {
        let status = if err.is_input_error() { ExitStatus::InputError } else { ExitStatus::Mismatch };
        Self { status, text: format!("error: {err}\n"), value: json!({ "error": err.to_string(), "status": status.code() }) }
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round_g(x)).map_or(Value::Null, Value::Number)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_g(x)).collect::<Vec<_>>().join(", ")
}

/// `validate`: every closure check, plus the global perturbation if present.
pub fn validate(s: &ScenarioModel, tols: Tolerances) -> Report {
    let mut status = ExitStatus::Success;
    let mut text = format!("scenario {}\n", s.name);
    let mut closures = Vec::new();
    for d in &s.closures {
        let report = validate_closure(d, tols.tol);
        if !report.passed() {
            status = ExitStatus::Mismatch;
        }
        text += &format!("closure {}: {}\n", d.name(), if report.passed() { "ok" } else { "FAILED" });
        let mut checks = Vec::new();
        for c in &report.checks {
            let tag = match (c.passed, c.severity) {
                (true, _) => "pass",
                (false, Severity::Error) => "FAIL",
                (false, Severity::Warning) => "warn",
            };
            text += &format!("  {tag:<4} {:<24} {}", c.name, fmt_g(c.violation));
            if !c.note.is_empty() {
                text += &format!("  ({})", c.note);
            }
            text.push('\n');
            checks.push(json!({
                "name": c.name,
                "severity": match c.severity { Severity::Error => "error", Severity::Warning => "warning" },
                "passed": c.passed,
                "violation": num(c.violation),
                "note": c.note,
            }));
        }
        closures.push(json!({ "closure": d.name(), "passed": report.passed(), "checks": checks }));
    }
    let mut value = json!({ "scenario": s.name, "closures": closures });
    if let Some(GlobalPerturbation::OddChiralityProduct) = s.global_perturbation {
        let checked = CliffordModule::exterior(s.codimension, GradingKind::Parity)
            .and_then(|module| odd_invertible_perturbation(&module, tols.tol))
            .and_then(|z| Ok((z.hermitian_defect(), smallest_singular_value(&z)?)));
        match checked {
            Ok((herm, smin)) => {
                text += &format!(
                    "global perturbation: ok (hermitian defect {}, smallest singular value {})\n",
                    fmt_g(herm),
                    fmt_g(smin)
                );
                value["global_perturbation"] =
                    json!({ "passed": true, "hermitian_defect": num(herm), "smallest_singular_value": num(smin) });
            }
            Err(e) => {
                status = status.worst(ExitStatus::Mismatch);
                text += &format!("global perturbation: FAILED ({e})\n");
                value["global_perturbation"] = json!({ "passed": false, "error": e.to_string() });
            }
        }
    }
    text += if status == ExitStatus::Success { "all checks passed\n" } else { "validation failed\n" };
    value["passed"] = json!(status == ExitStatus::Success);
    Report { status, text, value }
}

fn sector_value(d: &SectorDetail) -> Value {
    json!({
        "sector_dim": d.sector_dim,
        "intersection_dim": d.intersection_dim(),
        "invariant_dim": d.invariant_dim,
        "tuples": d.tuples.iter().map(|t| nums(t)).collect::<Vec<_>>(),
    })
}

/// `index`: local indices, their sum, and the comparison with the expected value.
pub fn index(s: &ScenarioModel, tols: Tolerances) -> Report {
    let (total, details) = match global_index_detail(s, tols) {
        Ok(r) => r,
        Err(e) => return Report::from_error(&e),
    };
    let mut parts: Vec<String> = details.iter().map(|d| format!("{}: {}", d.closure, d.index())).collect();
    parts.push(format!("total: {total}"));
    let mut text = parts.join(", ");
    text.push('\n');
    let matches = s.expected_index.map(|e| e == total);
    match (s.expected_index, matches) {
        (Some(e), Some(false)) => text += &format!("MISMATCH: expected {e}\n"),
        (Some(e), _) => text += &format!("expected {e}: ok\n"),
        _ => {}
    }
    let status = if matches == Some(false) { ExitStatus::Mismatch } else { ExitStatus::Success };
    let closures: Vec<Value> = details
        .iter()
        .map(|d| json!({ "closure": d.closure, "index": d.index(), "plus": sector_value(&d.plus), "minus": sector_value(&d.minus) }))
        .collect();
    let value = json!({
        "scenario": s.name,
        "closures": closures,
        "total": total,
        "expected": s.expected_index,
        "matches": matches,
    });
    Report { status, text, value }
}

/// `spectrum`: lowest model levels of one closure, optionally against the
/// finite-difference oracle.
pub fn spectrum(s: &ScenarioModel, closure: &str, count: usize, numerical: bool, tols: Tolerances) -> Report {
    let Some(d) = s.closures.iter().find(|d| d.name() == closure) else {
        let names: Vec<&str> = s.closures.iter().map(|d| d.name()).collect();
        return Report::from_error(&Error::Schema {
            path: "--closure".into(),
            message: format!("no closure `{closure}` in `{}` (have: {})", s.name, names.join(", ")),
        });
    };
    let spec = match analytic_spectrum(d, count, tols) {
        Ok(spec) => spec,
        Err(e) => return Report::from_error(&e.in_closure(closure)),
    };
    let mut text = format!(
        "closure {closure}: lowest {count} levels: {}\nkernel: plus {}, minus {}\n",
        list(&spec.eigenvalues),
        spec.kernel_dim_plus,
        spec.kernel_dim_minus
    );
    let mut value = json!({
        "scenario": s.name,
        "closure": closure,
        "eigenvalues": nums(&spec.eigenvalues),
        "kernel_plus": spec.kernel_dim_plus,
        "kernel_minus": spec.kernel_dim_minus,
    });
    let mut status = ExitStatus::Success;
    if numerical {
        let mut seen: Vec<Vec<f64>> = Vec::new();
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for t in &spec.tuples {
            if seen.iter().any(|l| l.iter().zip(&t.lambdas).all(|(a, b)| (a - b).abs() <= tols.sign_tol)) {
                continue;
            }
            seen.push(t.lambdas.clone());
            let analytic = t.levels(count);
            let oracle = match tuple_oracle_levels(&t.lambdas, count, ORACLE_GRID) {
                Ok(o) => o,
                Err(e) => return Report::from_error(&e),
            };
            let dev = analytic.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
            text += &format!(
                "tuple ({}):\n  analytic {}\n  oracle   {}\n  deviation {}\n",
                list(&t.lambdas),
                list(&analytic),
                list(&oracle),
                fmt_g(dev)
            );
            rows.push(json!({ "lambdas": nums(&t.lambdas), "analytic": nums(&analytic), "oracle": nums(&oracle), "max_deviation": num(dev) }));
        }
        let ok = worst <= ORACLE_TOL;
        text += &format!("max deviation {} ({})\n", fmt_g(worst), if ok { "ok" } else { "MISMATCH" });
        if !ok {
            status = ExitStatus::Mismatch;
        }
        value["numerical"] = json!({ "grid": ORACLE_GRID, "tuples": rows, "max_deviation": num(worst), "passed": ok });
    }
    Report { status, text, value }
}

/// `model-check`: local indices against the invariant model kernels.
pub fn model_check(s: &ScenarioModel, tols: Tolerances) -> Report {
    let report = match model_cross_check(s, tols) {
        Ok(r) => r,
        Err(e) => return Report::from_error(&e),
    };
    let mut text = String::new();
    for r in &report.rows {
        text += &format!(
            "{}: local index {}, model kernel plus {} minus {}\n",
            r.closure, r.local_index, r.kernel_plus, r.kernel_minus
        );
    }
    text += &format!("global index {}, kernel index {}: ok\n", report.global_index, report.kernel_index);
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| json!({ "closure": r.closure, "local_index": r.local_index, "kernel_plus": r.kernel_plus, "kernel_minus": r.kernel_minus }))
        .collect();
    let value = json!({
        "scenario": s.name,
        "closures": rows,
        "global_index": report.global_index,
        "kernel_index": report.kernel_index,
        "passed": true,
    });
    Report { status: ExitStatus::Success, text, value }
}

/// `localize`: the convergence table of the scenario's circle model.
pub fn localize(s: &ScenarioModel, s_list: &[f64], modes: usize, j_max: usize) -> Report {
    let Some(model) = &s.circle_model else {
        return Report::from_error(&Error::Schema {
            path: "$.circle_model".into(),
            message: format!("scenario `{}` has no circle model", s.name),
        });
    };
    let report = match convergence_report(model, s_list, j_max, modes) {
        Ok(r) => r,
        Err(e) => return Report::from_error(&e),
    };
    let mut text = format!("modes {modes}, lowest {j_max} eigenvalues of D²/s\n");
    text += &format!("{:>14} {:>18} {:>18}  eigenvalues\n", "s", "max gap", "doubling delta");
    let mut rows = Vec::new();
    for r in &report.rows {
        let gap = if r.gaps.is_empty() { "-".to_string() } else { fmt_g(r.max_gap()) };
        text += &format!("{:>14} {:>18} {:>18}  {}\n", fmt_g(r.s), gap, fmt_g(r.doubling_delta), list(&r.eigenvalues));
        rows.push(json!({
            "s": num(r.s),
            "eigenvalues": nums(&r.eigenvalues),
            "gaps": nums(&r.gaps),
            "max_gap": if r.gaps.is_empty() { Value::Null } else { num(r.max_gap()) },
            "doubling_delta": num(r.doubling_delta),
        }));
    }
    let outcome = match &report.outcome {
        Outcome::Localizing(l) => {
            text += &format!(
                "zeros of Z at t = {}\nmodel levels {}\nstrictly decreasing tail: {}\nfitted C = {}, gap <= C s^(-1/5): {}\n",
                list(&l.zeros),
                list(&l.model),
                l.monotone_tail,
                fmt_g(l.fitted_c),
                l.bound_holds
            );
            text += &format!(
                "eigenvalues below {}: plus {}, minus {} (model kernel plus {}, minus {})\n",
                fmt_g(l.threshold),
                l.kernel.0,
                l.kernel.1,
                l.model_kernel.0,
                l.model_kernel.1
            );
            json!({
                "kind": "localizing",
                "zeros": nums(&l.zeros),
                "model": nums(&l.model),
                "monotone_tail": l.monotone_tail,
                "fitted_c": num(l.fitted_c),
                "bound_holds": l.bound_holds,
                "threshold": num(l.threshold),
                "kernel": [l.kernel.0, l.kernel.1],
                "model_kernel": [l.model_kernel.0, l.model_kernel.1],
            })
        }
        Outcome::Invertible(g) => {
            text += &format!("Z invertible: min λ_1(s)/s = {}, linear growth: {}\n", fmt_g(g.fitted_c), g.linear);
            json!({ "kind": "invertible", "fitted_c": num(g.fitted_c), "linear": g.linear })
        }
    };
    let passed = report.passed();
    text += if passed { "localization check passed\n" } else { "localization check FAILED\n" };
    let value = json!({
        "scenario": s.name,
        "modes": modes,
        "j_max": j_max,
        "rows": rows,
        "outcome": outcome,
        "passed": passed,
    });
    Report { status: if passed { ExitStatus::Success } else { ExitStatus::Mismatch }, text, value }
}

/// `list-examples`.
pub fn list_examples() -> Report {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (name, body) in CORPUS {
        let s = parse_scenario(body).expect("bundled scenarios parse");
        let expected = s.expected_index.map_or("-".to_string(), |e| e.to_string());
        text += &format!(
            "corpus/{name:<26} codimension {}, {} closures, expected index {expected}\n",
            s.codimension,
            s.closures.len()
        );
        rows.push(json!({
            "name": name,
            "path": format!("corpus/{name}"),
            "codimension": s.codimension,
            "closures": s.closures.len(),
            "expected_index": s.expected_index,
            "circle_model": s.circle_model.is_some(),
        }));
    }
    Report { status: ExitStatus::Success, text, value: json!({ "examples": rows }) }
}

/// `run-corpus`: index and two-route check on every bundled scenario.
pub fn run_corpus(tols: Tolerances) -> Report {
    let mut status = ExitStatus::Success;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (name, body) in CORPUS {
        let s = match parse_scenario(body) {
            Ok(s) => s,
            Err(e) => {
                status = status.worst(ExitStatus::InputError);
                text += &format!("{name}: error: {e}\n");
                rows.push(json!({ "name": name, "passed": false, "error": e.to_string() }));
                continue;
            }
        };
        let index = index(&s, tols);
        let routes = model_cross_check(&s, tols);
        let total = index.value.get("total").and_then(Value::as_i64);
        let passed = index.status == ExitStatus::Success && routes.is_ok();
        if !passed {
            status = status.worst(index.status.worst(ExitStatus::Mismatch));
        }
        let expected = s.expected_index.map_or("-".to_string(), |e| e.to_string());
        let got = total.map_or("error".to_string(), |t| t.to_string());
        text += &format!("{:<4} {name:<26} index {got:>5}, expected {expected:>3}", if passed { "PASS" } else { "FAIL" });
        if let Err(e) = &routes {
            text += &format!(" ({e})");
        }
        text.push('\n');
        rows.push(json!({
            "name": name,
            "index": total,
            "expected": s.expected_index,
            "routes_agree": routes.is_ok(),
            "passed": passed,
        }));
    }
    let passed = rows.iter().filter(|r| r["passed"] == json!(true)).count();
    text += &format!("{passed}/{} scenarios passed\n", rows.len());
    Report { status, text, value: json!({ "scenarios": rows, "passed": status == ExitStatus::Success }) }
}
