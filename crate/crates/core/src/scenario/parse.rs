//! Scenario files: JSON documents walked with key-path error reporting.

use serde_json::{Map, Value};

use crate::clifford::{clifford_generator, clifford_hat_generator, parity, CliffordModule, GradingKind};
use crate::error::{Error, Result};
use crate::holonomy::{ComponentGenerator, HolonomyGroup, InfinitesimalGenerator};
use crate::lab::{CircleModel, TrigMatrix, TrigTerm};
use crate::linalg::{ComplexMatrix, RealMatrix, C64};
use crate::local_index::{ClosureDatum, GlobalPerturbation, ScenarioModel};
use crate::clifford::{derived_exterior_action, exterior_rep};

/// A JSON value together with its key path from the document root.
#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    path: &'a str,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

impl<'a> Node<'a> {
    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| schema(self.path, "expected an object"))
    }

    fn get(&self, key: &str) -> Result<Option<&'a Value>> {
        Ok(self.object()?.get(key))
    }

    fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| schema(self.path, "expected a string"))
    }

    fn usize(&self) -> Result<usize> {
        self.value
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| schema(self.path, "expected a non-negative integer"))
    }

    fn f64(&self) -> Result<f64> {
        self.value.as_f64().ok_or_else(|| schema(self.path, "expected a number"))
    }

    fn array(&self) -> Result<&'a Vec<Value>> {
        self.value.as_array().ok_or_else(|| schema(self.path, "expected an array"))
    }

    fn complex(&self) -> Result<C64> {
        match self.value {
            Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
                Ok(C64::new(a[0].as_f64().unwrap_or(f64::NAN), a[1].as_f64().unwrap_or(f64::NAN)))
            }
            _ => Err(schema(self.path, "expected a number or a [re, im] pair")),
        }
    }
}

/// Runs `f` on the child at `key`, with the child's path.
fn field<T>(node: Node, key: &str, f: impl FnOnce(Node) -> Result<T>) -> Result<T> {
    let path = format!("{}.{key}", node.path);
    let value = node.get(key)?.ok_or_else(|| schema(&path, "missing required key"))?;
    f(Node { value, path: &path })
}

fn opt_field<T>(node: Node, key: &str, f: impl FnOnce(Node) -> Result<T>) -> Result<Option<T>> {
    let path = format!("{}.{key}", node.path);
    match node.get(key)? {
        None | Some(Value::Null) => Ok(None),
        Some(value) => f(Node { value, path: &path }).map(Some),
    }
}

fn each<T>(node: Node, mut f: impl FnMut(Node) -> Result<T>) -> Result<Vec<T>> {
    node.array()?
        .iter()
        .enumerate()
        .map(|(k, value)| {
            let path = format!("{}[{k}]", node.path);
            f(Node { value, path: &path })
        })
        .collect()
}

fn matrix_rows<T>(node: Node, mut entry: impl FnMut(Node) -> Result<T>) -> Result<(usize, usize, Vec<T>)> {
    let rows = each(node, |row| each(row, &mut entry))?;
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some((k, bad)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
        return Err(Error::Shape(format!(
            "{}: row {k} has {} entries, row 0 has {c}",
            node.path,
            bad.len()
        )));
    }
    Ok((r, c, rows.into_iter().flatten().collect()))
}

fn square(node: Node, r: usize, c: usize, n: Option<usize>) -> Result<()> {
    if r != c || r == 0 {
        return Err(Error::Shape(format!("{}: expected a square matrix, got {r}x{c}", node.path)));
    }
    if let Some(n) = n {
        if r != n {
            return Err(Error::Shape(format!("{}: expected {n}x{n}, got {r}x{c}", node.path)));
        }
    }
    Ok(())
}

fn complex_matrix(node: Node, n: Option<usize>) -> Result<ComplexMatrix> {
    let (r, c, data) = matrix_rows(node, |e| e.complex())?;
    square(node, r, c, n)?;
    ComplexMatrix::from_row_major(r, c, data)
}

fn real_matrix(node: Node, n: Option<usize>) -> Result<RealMatrix> {
    let (r, c, data) = matrix_rows(node, |e| e.f64())?;
    square(node, r, c, n)?;
    RealMatrix::from_row_major(r, c, data)
}

/// How the Clifford generators of an exterior module sit in `Λ*(ℝ^ambient)`.
struct ExteriorLayout {
    ambient: usize,
    axes: Vec<usize>,
}

fn module(node: Node, m: usize) -> Result<(CliffordModule, Option<ExteriorLayout>)> {
    let kind = field(node, "kind", |n| n.str().map(str::to_owned))?;
    match kind.as_str() {
        "exterior" => {
            let ambient = opt_field(node, "ambient_dim", |n| n.usize())?.unwrap_or(m);
            let axes = opt_field(node, "axes", |n| each(n, |a| a.usize()))?.unwrap_or_else(|| (1..=m).collect());
            let path = format!("{}.axes", node.path);
            if axes.len() != m {
                return Err(Error::Shape(format!("{path}: {} axes for normal_dim {m}", axes.len())));
            }
            if ambient < m || ambient > 12 {
                return Err(schema(&format!("{}.ambient_dim", node.path), format!("must lie in {m}..=12")));
            }
            if let Some(a) = axes.iter().find(|&&a| a == 0 || a > ambient) {
                return Err(schema(&path, format!("axis {a} outside 1..={ambient}")));
            }
            let dim = 1usize << ambient;
            let grading = field(node, "grading", |g| match g.value {
                Value::String(s) if s == "parity" => Ok(None),
                Value::String(s) if s == "chirality" => Ok(Some(GradingKind::Chirality)),
                Value::String(s) => Err(schema(g.path, format!("unknown grading kind `{s}`"))),
                _ => complex_matrix(g, Some(dim)).map(|mat| Some(GradingKind::Explicit(mat))),
            })?;
            let standard = ambient == m && axes.iter().copied().eq(1..=m);
            let module = if standard {
                CliffordModule::exterior(m, grading.unwrap_or(GradingKind::Parity))?
            } else {
                let c = axes.iter().map(|&a| clifford_generator(a, ambient)).collect::<Result<Vec<_>>>()?;
                CliffordModule::explicit(c, grading.unwrap_or_else(|| GradingKind::Explicit(parity(ambient))))?
            };
            Ok((module, Some(ExteriorLayout { ambient, axes })))
        }
        "explicit" => {
            let c = field(node, "c", |n| each(n, |mat| complex_matrix(mat, None)))?;
            if c.len() != m {
                return Err(Error::Shape(format!("{}.c: {} generators for normal_dim {m}", node.path, c.len())));
            }
            let dim = c.first().map(ComplexMatrix::rows);
            let grading = field(node, "grading", |g| match g.value {
                Value::String(s) if s == "chirality" => Ok(GradingKind::Chirality),
                Value::String(s) => Err(schema(g.path, format!("unknown grading kind `{s}` for an explicit module"))),
                _ => complex_matrix(g, dim).map(GradingKind::Explicit),
            })?;
            Ok((CliffordModule::explicit(c, grading)?, None))
        }
        other => Err(schema(&format!("{}.kind", node.path), format!("unknown module kind `{other}`"))),
    }
}

fn perturbation(node: Node, module: &CliffordModule, layout: Option<&ExteriorLayout>) -> Result<Vec<ComplexMatrix>> {
    let n = module.dim();
    let kind = field(node, "kind", |k| k.str().map(str::to_owned))?;
    match kind.as_str() {
        "explicit" => field(node, "Z", |z| each(z, |mat| complex_matrix(mat, Some(n)))),
        "hat_linear" => field(node, "coefficients", |list| {
            each(list, |entry| {
                let (form, scale, axis) = match entry.value {
                    Value::Array(_) => {
                        let parts = entry.array()?;
                        if parts.len() != 2 {
                            return Err(schema(entry.path, "expected [scale, axis]"));
                        }
                        let scale = Node { value: &parts[0], path: entry.path }.f64()?;
                        let axis = Node { value: &parts[1], path: entry.path }.usize()?;
                        ("hat".to_string(), scale, axis)
                    }
                    _ => (
                        field(entry, "form", |f| f.str().map(str::to_owned))?,
                        field(entry, "scale", |s| s.f64())?,
                        field(entry, "axis", |a| a.usize())?,
                    ),
                };
                match form.as_str() {
                    "hat" => {
                        let layout = layout.ok_or_else(|| {
                            schema(entry.path, "`hat` coefficients need an exterior module")
                        })?;
                        if axis == 0 || axis > layout.ambient {
                            return Err(schema(entry.path, format!("axis {axis} outside 1..={}", layout.ambient)));
                        }
                        Ok(clifford_hat_generator(axis, layout.ambient)?.scale_real(scale))
                    }
                    "i_c" => {
                        let c = match layout {
                            Some(l) => {
                                if axis == 0 || axis > l.ambient {
                                    return Err(schema(entry.path, format!("axis {axis} outside 1..={}", l.ambient)));
                                }
                                clifford_generator(axis, l.ambient)?
                            }
                            None => {
                                if axis == 0 || axis > module.m() {
                                    return Err(schema(entry.path, format!("axis {axis} outside 1..={}", module.m())));
                                }
                                module.c(axis).clone()
                            }
                        };
                        Ok(c.scale(C64::new(0.0, scale)))
                    }
                    other => Err(schema(entry.path, format!("unknown coefficient form `{other}`"))),
                }
            })
        }),
        other => Err(schema(&format!("{}.kind", node.path), format!("unknown perturbation kind `{other}`"))),
    }
}

/// Embeds an `m×m` matrix into `ambient×ambient` at the given 1-based axes,
/// filling the rest with `fill` on the diagonal.
fn embed(x: &RealMatrix, layout: &ExteriorLayout, fill: f64) -> RealMatrix {
    let mut out = RealMatrix::identity(layout.ambient).scale(fill);
    for (i, &a) in layout.axes.iter().enumerate() {
        for (j, &b) in layout.axes.iter().enumerate() {
            out[(a - 1, b - 1)] = x[(i, j)];
        }
    }
    out
}

fn holonomy(node: Node, module: &CliffordModule, layout: Option<&ExteriorLayout>) -> Result<HolonomyGroup> {
    let m = module.m();
    let n = module.dim();
    if let Some(kind) = opt_field(node, "kind", |k| k.str().map(str::to_owned))? {
        match kind.as_str() {
            "trivial" => return Ok(HolonomyGroup::trivial(m, n)),
            "generated" => {}
            other => return Err(schema(&format!("{}.kind", node.path), format!("unknown holonomy kind `{other}`"))),
        }
    }
    let xs = opt_field(node, "infinitesimal", |l| each(l, |mat| real_matrix(mat, Some(m))))?.unwrap_or_default();
    let gs = opt_field(node, "components", |l| each(l, |mat| real_matrix(mat, Some(m))))?.unwrap_or_default();
    let action = field(node, "module_action", |a| match a.value {
        Value::String(s) if s == "derive-from-exterior" => Ok(None),
        Value::String(s) => Err(schema(a.path, format!("unknown module action `{s}`"))),
        _ => field(a, "matrices", |mats| {
            let inf = opt_field(mats, "infinitesimal", |l| each(l, |mat| complex_matrix(mat, Some(n))))?.unwrap_or_default();
            let comp = opt_field(mats, "components", |l| each(l, |mat| complex_matrix(mat, Some(n))))?.unwrap_or_default();
            Ok(Some((inf, comp)))
        }),
    })?;
    let (inf_actions, comp_actions) = match action {
        Some((inf, comp)) => {
            if inf.len() != xs.len() || comp.len() != gs.len() {
                return Err(Error::Shape(format!(
                    "{}.module_action: {} and {} matrices for {} infinitesimal and {} component generators",
                    node.path,
                    inf.len(),
                    comp.len(),
                    xs.len(),
                    gs.len()
                )));
            }
            (inf, comp)
        }
        None => {
            let layout = layout.ok_or_else(|| {
                schema(&format!("{}.module_action", node.path), "derive-from-exterior needs an exterior module")
            })?;
            let inf = xs.iter().map(|x| derived_exterior_action(&embed(x, layout, 0.0))).collect::<Result<Vec<_>>>()?;
            let comp = gs.iter().map(|g| exterior_rep(&embed(g, layout, 1.0))).collect::<Result<Vec<_>>>()?;
            (inf, comp)
        }
    };
    HolonomyGroup::new(
        m,
        n,
        xs.into_iter().zip(inf_actions).map(|(x, action)| InfinitesimalGenerator { x, action }).collect(),
        gs.into_iter().zip(comp_actions).map(|(dg, action)| ComponentGenerator { dg, action }).collect(),
    )
}

fn node_name(node: Node<'_>) -> &str {
    node.value.get("name").and_then(Value::as_str).unwrap_or("?")
}

fn closure(node: Node) -> Result<ClosureDatum> {
    let name = field(node, "name", |n| n.str().map(str::to_owned))?;
    let m = field(node, "normal_dim", |n| n.usize())?;
    if m == 0 || m > 12 {
        return Err(schema(&format!("{}.normal_dim", node.path), "must lie in 1..=12"));
    }
    let (module, layout) = field(node, "module", |n| module(n, m))?;
    let z = field(node, "perturbation", |n| perturbation(n, &module, layout.as_ref()))?;
    if z.len() != m {
        return Err(Error::Shape(format!(
            "{}.perturbation: closure `{name}` has {} coefficients for normal_dim {m}",
            node.path,
            z.len()
        )));
    }
    let holonomy = field(node, "holonomy", |n| holonomy(n, &module, layout.as_ref()))?;
    ClosureDatum::new(name, module, z, holonomy).map_err(|e| match e {
        Error::Shape(msg) => Error::Shape(format!("{}: closure `{}`: {msg}", node.path, node_name(node))),
        other => other,
    })
}

fn trig_terms(node: Node, n: usize) -> Result<TrigMatrix> {
    let terms = each(node, |t| {
        let matrix = field(t, "matrix", |mat| complex_matrix(mat, Some(n)))?;
        let pairs = |key: &str| -> Result<Vec<(u32, f64)>> {
            Ok(opt_field(t, key, |l| {
                each(l, |p| {
                    let parts = p.array()?;
                    if parts.len() != 2 {
                        return Err(schema(p.path, "expected [frequency, coefficient]"));
                    }
                    let freq = Node { value: &parts[0], path: p.path }.usize()?;
                    let coeff = Node { value: &parts[1], path: p.path }.f64()?;
                    Ok((u32::try_from(freq).map_err(|_| schema(p.path, "frequency too large"))?, coeff))
                })
            })?
            .unwrap_or_default())
        };
        Ok(TrigTerm { matrix, cos: pairs("cos")?, sin: pairs("sin")? })
    })?;
    TrigMatrix::new(n, terms)
}

fn circle_model(node: Node) -> Result<CircleModel> {
    if let Some(preset) = opt_field(node, "preset", |p| p.str().map(str::to_owned))? {
        return match preset.as_str() {
            "carriere" => {
                let lambda = opt_field(node, "lambda", |l| l.f64())?.unwrap_or_else(CircleModel::default_carriere_lambda);
                CircleModel::carriere(lambda)
            }
            "cos_hat" => Ok(CircleModel::cos_hat()),
            "constant_hat" => Ok(CircleModel::constant_hat()),
            other => Err(schema(&format!("{}.preset", node.path), format!("unknown circle model preset `{other}`"))),
        };
    }
    let symbol = field(node, "symbol", |s| complex_matrix(s, None))?;
    let n = symbol.rows();
    if let Some(fd) = opt_field(node, "fiber_dim", |f| f.usize())? {
        if fd != n {
            return Err(Error::Shape(format!("{}.fiber_dim: {fd} but the symbol is {n}x{n}", node.path)));
        }
    }
    let grading = field(node, "grading", |g| complex_matrix(g, Some(n)))?;
    let drift = opt_field(node, "drift", |d| trig_terms(d, n))?.unwrap_or_else(|| TrigMatrix::zero(n));
    let z = field(node, "perturbation", |z| trig_terms(z, n))?;
    CircleModel::new(symbol, drift, z, grading)
}

fn parse_error(e: &serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Parses a scenario document. Loading has no side effects.
pub fn parse_scenario(text: &str) -> Result<ScenarioModel> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(&e))?;
    let root = Node { value: &value, path: "$" };
    root.object()?;
    let name = field(root, "name", |n| n.str().map(str::to_owned))?;
    let codimension = field(root, "codimension", |n| n.usize())?;
    let closures = field(root, "closures", |list| each(list, closure))?;
    let expected = opt_field(root, "expected_index", |e| {
        e.value.as_i64().ok_or_else(|| schema(e.path, "expected an integer"))
    })?;
    let circle = opt_field(root, "circle_model", circle_model)?;
    let global = opt_field(root, "global_perturbation", |g| {
        let kind = field(g, "kind", |k| k.str().map(str::to_owned))?;
        match kind.as_str() {
            "odd_chirality_product" => Ok(GlobalPerturbation::OddChiralityProduct),
            other => Err(schema(&format!("{}.kind", g.path), format!("unknown global perturbation `{other}`"))),
        }
    })?;
    let mut s = ScenarioModel::new(name, codimension, closures)?;
    s.expected_index = expected;
    s.circle_model = circle;
    if let Some(g) = global {
        s = s.with_global_perturbation(g)?;
    }
    Ok(s)
}

/// Reads and parses a scenario file.
pub fn load_scenario(path: &std::path::Path) -> Result<ScenarioModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_scenario(&text)
}
