//! Scenario files, the bundled corpus, and report formatting for the CLI.

pub mod commands;
mod parse;
mod write;

pub use parse::{load_scenario, parse_scenario};
pub use write::{scenario_value, serialize_scenario};

use crate::error::{Error, Result};
use crate::local_index::ScenarioModel;

/// Bundled scenarios, addressable as `corpus/<name>`.
pub const CORPUS: &[(&str, &str)] = &[
    ("sphere_suspension", include_str!("../../corpus/sphere_suspension.json")),
    ("carriere", include_str!("../../corpus/carriere.json")),
    ("cp2_signature_increasing", include_str!("../../corpus/cp2_signature_increasing.json")),
    ("cp2_signature_swapped", include_str!("../../corpus/cp2_signature_swapped.json")),
    ("cp2_signature_middle", include_str!("../../corpus/cp2_signature_middle.json")),
    ("odd_codim_q3", include_str!("../../corpus/odd_codim_q3.json")),
    ("circle_cos_hat", include_str!("../../corpus/circle_cos_hat.json")),
];

pub fn corpus_text(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Loads `corpus/<name>` from the bundled set, anything else from disk.
pub fn resolve(arg: &str) -> Result<ScenarioModel> {
    if let Some(name) = arg.strip_prefix("corpus/") {
        let name = name.trim_end_matches(".json");
        let text = corpus_text(name).ok_or_else(|| Error::Io {
            path: arg.to_string(),
            message: format!(
                "no bundled scenario named `{name}`; available: {}",
                CORPUS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
            ),
        })?;
        return parse_scenario(text);
    }
    load_scenario(std::path::Path::new(arg))
}

/// `%.12g`: twelve significant digits, trailing zeros removed, exponent form
/// outside `[1e-4, 1e12)`.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to twelve significant digits, for machine-readable reports.
pub fn round_g(x: f64) -> f64 {
    fmt_g(x).parse().unwrap_or(x)
}
