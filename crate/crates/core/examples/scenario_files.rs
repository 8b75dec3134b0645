//! Scenario documents: loading bundled and hand-written files, running
//! commands on them, and serializing back.

use basicindex::scenario::commands::{self, Format};
use basicindex::scenario::{parse_scenario, resolve, serialize_scenario};
use basicindex::Tolerances;

const HAND_WRITTEN: &str = r#"{
  "name": "one_pole",
  "codimension": 2,
  "expected_index": 1,
  "closures": [{
    "name": "pole",
    "normal_dim": 2,
    "module": {"kind": "exterior", "grading": "parity"},
    "perturbation": {"kind": "hat_linear", "coefficients": [[-1.0, 1], [-1.0, 2]]},
    "holonomy": {"kind": "trivial"}
  }]
}"#;

fn main() -> basicindex::Result<()> {
    let tols = Tolerances::default();
    let s = parse_scenario(HAND_WRITTEN)?;
    print!("{}", commands::index(&s, tols).render(Format::Text));

    let bundled = resolve("corpus/carriere")?;
    let text = serialize_scenario(&bundled);
    let again = parse_scenario(&text)?;
    println!("carriere round trip equal: {}", again == bundled);

    print!("{}", commands::run_corpus(tols).render(Format::Text));

    match parse_scenario(r#"{"name": "x", "codimension": 1, "closures": [{"name": "a", "normal_dim": 1, "module": {"kind": "exterior", "grading": "sideways"}}]}"#) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
