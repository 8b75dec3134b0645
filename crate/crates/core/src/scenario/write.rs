//! Scenario serialization. Every matrix is written explicitly so that parsing
//! the output reproduces an equal model.

use serde_json::{json, Map, Value};

use crate::clifford::{parity, CliffordModule};
use crate::lab::{CircleModel, TrigMatrix};
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::local_index::{ClosureDatum, GlobalPerturbation, ScenarioModel};

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub(crate) fn complex_matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|z| if z.im == 0.0 { number(z.re) } else { Value::Array(vec![number(z.re), number(z.im)]) })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn real_matrix_value(m: &RealMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| number(m[(i, j)])).collect())).collect())
}

fn module_value(module: &CliffordModule) -> Value {
    if module.is_exterior() {
        let m = module.m();
        let grading = if module.grading() == &parity(m) {
            json!("parity")
        } else if module.grading() == &module.chirality() {
            json!("chirality")
        } else {
            complex_matrix_value(module.grading())
        };
        json!({ "kind": "exterior", "grading": grading })
    } else {
        json!({
            "kind": "explicit",
            "c": module.generators().iter().map(complex_matrix_value).collect::<Vec<_>>(),
            "grading": complex_matrix_value(module.grading()),
        })
    }
}

fn closure_value(d: &ClosureDatum) -> Value {
    let h = d.holonomy();
    let holonomy = if h.is_trivial() {
        json!({ "kind": "trivial" })
    } else {
        json!({
            "infinitesimal": h.infinitesimal().iter().map(|g| real_matrix_value(&g.x)).collect::<Vec<_>>(),
            "components": h.components().iter().map(|g| real_matrix_value(&g.dg)).collect::<Vec<_>>(),
            "module_action": { "matrices": {
                "infinitesimal": h.infinitesimal().iter().map(|g| complex_matrix_value(&g.action)).collect::<Vec<_>>(),
                "components": h.components().iter().map(|g| complex_matrix_value(&g.action)).collect::<Vec<_>>(),
            }},
        })
    };
    json!({
        "name": d.name(),
        "normal_dim": d.m(),
        "module": module_value(d.module()),
        "perturbation": { "kind": "explicit", "Z": d.z().iter().map(complex_matrix_value).collect::<Vec<_>>() },
        "holonomy": holonomy,
    })
}

fn trig_value(f: &TrigMatrix) -> Value {
    let pairs = |p: &[(u32, f64)]| Value::Array(p.iter().map(|&(k, a)| json!([k, number(a)])).collect());
    Value::Array(
        f.terms()
            .iter()
            .map(|t| json!({ "matrix": complex_matrix_value(&t.matrix), "cos": pairs(&t.cos), "sin": pairs(&t.sin) }))
            .collect(),
    )
}

fn circle_value(c: &CircleModel) -> Value {
    json!({
        "fiber_dim": c.fiber_dim(),
        "symbol": complex_matrix_value(c.symbol()),
        "grading": complex_matrix_value(c.grading()),
        "drift": trig_value(c.drift()),
        "perturbation": trig_value(c.z()),
    })
}

/// The scenario as a JSON value.
pub fn scenario_value(s: &ScenarioModel) -> Value {
    let mut root = Map::new();
    root.insert("name".into(), json!(s.name));
    root.insert("codimension".into(), json!(s.codimension));
    root.insert("closures".into(), Value::Array(s.closures.iter().map(closure_value).collect()));
    if let Some(e) = s.expected_index {
        root.insert("expected_index".into(), json!(e));
    }
    if let Some(c) = &s.circle_model {
        root.insert("circle_model".into(), circle_value(c));
    }
    if let Some(GlobalPerturbation::OddChiralityProduct) = s.global_perturbation {
        root.insert("global_perturbation".into(), json!({ "kind": "odd_chirality_product" }));
    }
    Value::Object(root)
}

/// Pretty-printed scenario document.
pub fn serialize_scenario(s: &ScenarioModel) -> String {
    serde_json::to_string_pretty(&scenario_value(s)).expect("scenario values serialize")
}
