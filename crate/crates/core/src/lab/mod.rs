//! One-dimensional periodic Dirac operators `D = C d/dt + B(t) + s Z(t)` and
//! the localization of `H_s = D²/s` onto harmonic-oscillator models at the
//! zeros of `Z`.

mod operator;
mod report;

pub use operator::{assemble_hs, graded_counts_below, lowest_eigenvalues, HsBand};
pub use report::{
    convergence_report, model_spectrum_at_zeros, zero_models, zeros, ConvergenceReport, ConvergenceRow, Growth,
    Localization, Outcome, ZeroModel,
};

use crate::clifford::{clifford_generator, clifford_hat_generator, parity};
use crate::error::{Error, Result};
use crate::linalg::{smallest_singular_value, ComplexMatrix, C64};

/// `M · (Σ a_k cos kt + Σ b_k sin kt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    pub matrix: ComplexMatrix,
    pub cos: Vec<(u32, f64)>,
    pub sin: Vec<(u32, f64)>,
}

impl TrigTerm {
    pub fn constant(matrix: ComplexMatrix) -> Self {
        Self { matrix, cos: vec![(0, 1.0)], sin: Vec::new() }
    }

    pub fn cos(matrix: ComplexMatrix, freq: u32) -> Self {
        Self { matrix, cos: vec![(freq, 1.0)], sin: Vec::new() }
    }

    fn value(&self, t: f64) -> f64 {
        let c: f64 = self.cos.iter().map(|&(k, a)| a * (k as f64 * t).cos()).sum();
        let s: f64 = self.sin.iter().map(|&(k, b)| b * (k as f64 * t).sin()).sum();
        c + s
    }

    fn slope(&self, t: f64) -> f64 {
        let c: f64 = self.cos.iter().map(|&(k, a)| -a * k as f64 * (k as f64 * t).sin()).sum();
        let s: f64 = self.sin.iter().map(|&(k, b)| b * k as f64 * (k as f64 * t).cos()).sum();
        c + s
    }

    /// Coefficient of `e^{ipt}` in the scalar factor.
    fn fourier(&self, p: i64) -> C64 {
        let mut out = C64::new(0.0, 0.0);
        for &(k, a) in &self.cos {
            let k = k as i64;
            if k == 0 && p == 0 {
                out += a;
            } else if k != 0 && p.abs() == k {
                out += 0.5 * a;
            }
        }
        for &(k, b) in &self.sin {
            let k = k as i64;
            if k != 0 && p == k {
                out += C64::new(0.0, -0.5 * b);
            } else if k != 0 && p == -k {
                out += C64::new(0.0, 0.5 * b);
            }
        }
        out
    }

    fn max_freq(&self) -> u32 {
        self.cos.iter().chain(&self.sin).map(|&(k, _)| k).max().unwrap_or(0)
    }
}

/// A matrix-valued trigonometric polynomial on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigMatrix {
    dim: usize,
    terms: Vec<TrigTerm>,
}

impl TrigMatrix {
    pub fn new(dim: usize, terms: Vec<TrigTerm>) -> Result<Self> {
        for (k, t) in terms.iter().enumerate() {
            if t.matrix.rows() != dim || t.matrix.cols() != dim {
                return Err(Error::Shape(format!("term {k} is {}x{}, expected {dim}x{dim}", t.matrix.rows(), t.matrix.cols())));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn eval(&self, t: f64) -> ComplexMatrix {
        self.combine(|term| term.value(t))
    }

    pub fn derivative(&self, t: f64) -> ComplexMatrix {
        self.combine(|term| term.slope(t))
    }

    /// Matrix coefficient of `e^{ipt}`.
    pub fn fourier(&self, p: i64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for term in &self.terms {
            let a = term.fourier(p);
            if a != C64::new(0.0, 0.0) {
                out = &out + &term.matrix.scale(a);
            }
        }
        out
    }

    pub fn max_freq(&self) -> u32 {
        self.terms.iter().map(TrigTerm::max_freq).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.matrix.max_abs() == 0.0 || (t.cos.iter().chain(&t.sin).all(|&(_, a)| a == 0.0)))
    }

    fn combine(&self, f: impl Fn(&TrigTerm) -> f64) -> ComplexMatrix {
        self.terms.iter().fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, term| {
            let a = f(term);
            if a == 0.0 {
                acc
            } else {
                &acc + &term.matrix.scale_real(a)
            }
        })
    }
}

/// Sample points used to check pointwise conditions on `Z` and `B`.
const SAMPLE_POINTS: usize = 64;

/// Dirac-type operator data on the circle `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleModel {
    c: ComplexMatrix,
    drift: TrigMatrix,
    z: TrigMatrix,
    grading: ComplexMatrix,
}

impl CircleModel {
    /// Checks: even fiber dimension; `C` skew-Hermitian, invertible and odd;
    /// `ε` an involution; `B(t)` and `Z(t)` Hermitian and odd at sample points.
    pub fn new(c: ComplexMatrix, drift: TrigMatrix, z: TrigMatrix, grading: ComplexMatrix) -> Result<Self> {
        let n = c.rows();
        if !c.is_square() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Shape(format!("symbol must be square of even size, got {}x{}", c.rows(), c.cols())));
        }
        if drift.dim() != n || z.dim() != n || grading.rows() != n || grading.cols() != n {
            return Err(Error::Shape(format!("circle model parts must all be {n}x{n}")));
        }
        let tol = 1e-9;
        let scale = c.frobenius_norm().max(1.0);
        let bad = |what: &str, v: f64| Error::InvalidArgument(format!("{what} (defect {v:.3e})"));
        if c.skew_hermitian_defect() > tol * scale {
            return Err(bad("symbol is not skew-Hermitian", c.skew_hermitian_defect()));
        }
        if smallest_singular_value(&c)? < tol * scale {
            return Err(Error::InvalidArgument("symbol is not invertible".into()));
        }
        let inv = (&grading.matmul(&grading) - &ComplexMatrix::identity(n)).frobenius_norm().max(grading.hermitian_defect());
        if inv > tol {
            return Err(bad("grading is not a Hermitian involution", inv));
        }
        let odd = grading.anticommutator(&c).frobenius_norm();
        if odd > tol * scale {
            return Err(bad("symbol does not anticommute with the grading", odd));
        }
        for (name, f) in [("drift", &drift), ("perturbation", &z)] {
            for k in 0..SAMPLE_POINTS {
                let t = std::f64::consts::TAU * (k as f64 + 0.5) / SAMPLE_POINTS as f64;
                let v = f.eval(t);
                let s = v.frobenius_norm().max(1.0);
                if v.hermitian_defect() > tol * s {
                    return Err(bad(&format!("{name} is not Hermitian at t = {t:.6}"), v.hermitian_defect()));
                }
                let o = grading.anticommutator(&v).frobenius_norm();
                if o > tol * s {
                    return Err(bad(&format!("{name} is not odd at t = {t:.6}"), o));
                }
            }
        }
        Ok(Self { c, drift, z, grading })
    }

    /// `Z(t) = cos t · ĉ` on `Λ*(ℝ)` with `C = c(∂_t)`, no drift.
    pub fn cos_hat() -> Self {
        let c = clifford_generator(1, 1).expect("m = 1");
        let hat = clifford_hat_generator(1, 1).expect("m = 1");
        let z = TrigMatrix::new(2, vec![TrigTerm::cos(hat, 1)]).expect("2x2");
        Self::new(c, TrigMatrix::zero(2), z, parity(1)).expect("valid model")
    }

    /// Constant invertible `Z = ĉ` on `Λ*(ℝ)`.
    pub fn constant_hat() -> Self {
        let c = clifford_generator(1, 1).expect("m = 1");
        let hat = clifford_hat_generator(1, 1).expect("m = 1");
        let z = TrigMatrix::new(2, vec![TrigTerm::constant(hat)]).expect("2x2");
        Self::new(c, TrigMatrix::zero(2), z, parity(1)).expect("valid model")
    }

    /// Carrière flow reduced to the circle `τ = 2πt`: fiber `Λ*(ℝ²)` on
    /// `(y, t)`, `C = 2π c(dt)`, `Z(τ) = cos τ · ĉ(dt)`, and a constant drift
    /// `½ log λ · i c(dt)` from the mean curvature of the flow.
    pub fn carriere(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 1.0) {
            return Err(Error::InvalidArgument(format!("Carrière stretch factor must exceed 1, got {lambda}")));
        }
        let ct = clifford_generator(2, 2)?;
        let hat = clifford_hat_generator(2, 2)?;
        let c = ct.scale_real(std::f64::consts::TAU);
        let drift = ct.scale(C64::new(0.0, 0.5 * lambda.ln()));
        Self::new(
            c,
            TrigMatrix::new(4, vec![TrigTerm::constant(drift)])?,
            TrigMatrix::new(4, vec![TrigTerm::cos(hat, 1)])?,
            parity(2),
        )
    }

    /// Largest eigenvalue of the Anosov matrix `[[2,1],[1,1]]`.
    pub fn default_carriere_lambda() -> f64 {
        (3.0 + 5f64.sqrt()) / 2.0
    }

    pub fn fiber_dim(&self) -> usize {
        self.c.rows()
    }

    pub fn symbol(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn drift(&self) -> &TrigMatrix {
        &self.drift
    }

    pub fn z(&self) -> &TrigMatrix {
        &self.z
    }

    pub fn grading(&self) -> &ComplexMatrix {
        &self.grading
    }

    /// Highest Fourier frequency among the coefficients.
    pub fn bandwidth(&self) -> u32 {
        self.drift.max_freq().max(self.z.max_freq())
    }
}
