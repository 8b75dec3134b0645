use super::ClosureDatum;
use crate::holonomy::{check_equivariance, fit_in_generator_span};
use crate::linalg::{hermitian_eig, smallest_singular_value, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// A failed error check makes the closure unusable.
    Error,
    /// Reported, but the index is still computed.
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub severity: Severity,
    pub passed: bool,
    /// Size of the violation, relative to the natural scale of the check.
    pub violation: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub closure: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// True when no error-severity check failed.
    pub fn passed(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && c.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && c.severity == Severity::Warning)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= n).all(|&p| !n.is_multiple_of(p)) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Deterministic points on the unit sphere `S^{m-1}`: Halton points in
/// `[0,1)^{2⌈m/2⌉}` pushed through Box–Muller and normalized.
pub fn sphere_samples(m: usize, count: usize) -> Vec<Vec<f64>> {
    let pairs = m.div_ceil(2);
    let bases = primes(2 * pairs);
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let mut x = Vec::with_capacity(2 * pairs);
        for p in 0..pairs {
            let u1 = radical_inverse(i, bases[2 * p]);
            let u2 = radical_inverse(i, bases[2 * p + 1]);
            let r = (-2.0 * u1.ln()).sqrt();
            let th = std::f64::consts::TAU * u2;
            x.push(r * th.cos());
            x.push(r * th.sin());
        }
        x.truncate(m);
        i += 1;
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-8 {
            out.push(x.into_iter().map(|v| v / norm).collect());
        }
    }
    out
}

const SPHERE_SAMPLES: usize = 64;

/// Checks every structural hypothesis of a closure datum and reports each
/// separately. Violations are measured relative to `‖Z‖`, the largest
/// root-mean-square singular value among the `Z_j`.
pub fn validate_closure(d: &ClosureDatum, tol: f64) -> ValidationReport {
    let module = d.module();
    let n = d.dim();
    let m = d.m();
    let root_n = (n as f64).sqrt();
    let zscale = d.z().iter().map(|z| z.frobenius_norm() / root_n).fold(1.0, f64::max);
    let mut checks = Vec::new();
    let mut push = |name, severity, violation: f64, note: String| {
        checks.push(Check { name, severity, passed: violation < tol, violation, note });
    };

    push("clifford_relations", Severity::Error, module.clifford_defect() / root_n, String::new());
    push("clifford_skew", Severity::Error, module.skew_defect() / root_n, String::new());
    push("grading_involution", Severity::Error, module.involution_defect() / root_n, String::new());
    push("grading_odd_clifford", Severity::Error, module.odd_defect() / root_n, String::new());

    let herm = d.z().iter().map(ComplexMatrix::hermitian_defect).fold(0.0, f64::max);
    push("z_hermitian", Severity::Error, herm / root_n / zscale, String::new());
    let odd = d.z().iter().map(|z| module.grading().anticommutator(z).frobenius_norm()).fold(0.0, f64::max);
    push("z_odd", Severity::Error, odd / root_n / zscale, String::new());

    // Anticommutation with the Clifford generators. When it fails, accept
    // scalar first-order couplings whose linear vector field is tangent to
    // the holonomy orbits.
    let mut strict: f64 = 0.0;
    let mut scalar_defect: f64 = 0.0;
    let mut coupling = vec![vec![C64::new(0.0, 0.0); m]; m];
    for k in 0..m {
        for j in 0..m {
            let a = module.generators()[k].anticommutator(&d.z()[j]).scale_real(0.5);
            strict = strict.max(a.frobenius_norm() / root_n / zscale);
            let (s, defect) = a.scalar_part();
            coupling[k][j] = s;
            scalar_defect = scalar_defect.max(defect / root_n / zscale);
        }
    }
    if strict < tol {
        push("anticommutation", Severity::Error, strict, "strict".into());
    } else {
        let residual = fit_in_generator_span(d.holonomy(), &coupling) / zscale;
        let violation = scalar_defect.max(residual);
        let note = if violation < tol {
            "first-order coupling tangent to the holonomy orbits".to_string()
        } else {
            format!("Z_j c_k + c_k Z_j = 0 fails by {strict:.3e}")
        };
        push("anticommutation", Severity::Error, violation, note);
    }

    let (g, gdefect) = d.gram();
    push("g_scalar", Severity::Error, gdefect / root_n / (zscale * zscale), String::new());
    let gm = ComplexMatrix::from_fn(m, m, |j, k| g[j][k]);
    let g_min = match hermitian_eig(&gm, tol.max(1e-12)) {
        Ok(e) => {
            let lo = e.values[0];
            let rel = gm.hermitian_defect() / (zscale * zscale);
            let violation = if lo > tol * zscale * zscale { rel } else { 1.0 };
            push("g_positive_definite", Severity::Error, violation, format!("smallest eigenvalue {lo:.6e}"));
            lo
        }
        Err(e) => {
            push("g_positive_definite", Severity::Error, f64::INFINITY, e.to_string());
            0.0
        }
    };

    // Nondegeneracy: Σσ_j Z_j stays invertible on the unit sphere.
    if g_min > 0.0 {
        let bound = g_min.sqrt();
        let mut worst: f64 = 0.0;
        let mut note = String::new();
        for sigma in sphere_samples(m, SPHERE_SAMPLES) {
            let zs = sigma
                .iter()
                .zip(d.z())
                .fold(ComplexMatrix::zeros(n, n), |acc, (&s, z)| &acc + &z.scale_real(s));
            let smin = smallest_singular_value(&zs).unwrap_or(0.0);
            let shortfall = (1.0 - smin / bound).max(0.0);
            if shortfall > worst {
                worst = shortfall;
                note = format!("σ_min = {smin:.6e} below √λ_min(G) = {bound:.6e}");
            }
        }
        push("nondegenerate_sphere", Severity::Error, worst, note);
    } else {
        push("nondegenerate_sphere", Severity::Error, f64::INFINITY, "G is not positive definite".into());
    }

    let admissible = super::admissible_rank(m, n);
    push(
        "admissible_rank",
        Severity::Error,
        if admissible { 0.0 } else { f64::INFINITY },
        if admissible { String::new() } else { format!("rank {n} is not admissible for {m} directions") },
    );

    push("holonomy_structure", Severity::Error, d.holonomy().structure_defect() / root_n, String::new());
    let eq = check_equivariance(d.holonomy(), d);
    push("holonomy_grading", Severity::Error, eq.grading / root_n, String::new());
    push("equivariance_clifford", Severity::Warning, eq.clifford / root_n, String::new());
    push("equivariance_z", Severity::Warning, eq.perturbation / root_n / zscale, String::new());

    ValidationReport { closure: d.name().to_string(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_lie_on_sphere_and_are_deterministic() {
        for m in 1..=5 {
            let a = sphere_samples(m, 64);
            assert_eq!(a.len(), 64);
            for p in &a {
                assert_eq!(p.len(), m);
                let n: f64 = p.iter().map(|v| v * v).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
            assert_eq!(a, sphere_samples(m, 64));
        }
        let one = sphere_samples(1, 64);
        assert!(one.iter().any(|p| p[0] > 0.0) && one.iter().any(|p| p[0] < 0.0));
    }
}
