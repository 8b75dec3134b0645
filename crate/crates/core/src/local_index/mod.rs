//! Clifford-form data at critical leaf closures and their local indices.

mod index;
pub mod presets;
mod validate;

pub use index::{
    admissible_rank, build_l, global_index, global_index_detail, local_index, odd_invertible_perturbation,
    LocalIndexDetail, SectorDetail,
};
pub(crate) use index::graded_bases_of;
pub use validate::{sphere_samples, validate_closure, Check, Severity, ValidationReport};

use crate::clifford::CliffordModule;
use crate::error::{Error, Result};
use crate::holonomy::HolonomyGroup;
use crate::lab::CircleModel;
use crate::linalg::ComplexMatrix;

/// Local data at one critical leaf closure: a Clifford module on the normal
/// slice, the linear perturbation coefficients `Z_1 … Z_m`, and the holonomy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureDatum {
    name: String,
    module: CliffordModule,
    z: Vec<ComplexMatrix>,
    holonomy: HolonomyGroup,
}

impl ClosureDatum {
    /// Checks shapes only; algebraic conditions are reported by
    /// [`validate_closure`].
    pub fn new(
        name: impl Into<String>,
        module: CliffordModule,
        z: Vec<ComplexMatrix>,
        holonomy: HolonomyGroup,
    ) -> Result<Self> {
        let name = name.into();
        let n = module.dim();
        if z.len() != module.m() {
            return Err(Error::Shape(format!(
                "closure `{name}`: {} perturbation coefficients for {} Clifford generators",
                z.len(),
                module.m()
            )));
        }
        if module.m() == 0 {
            return Err(Error::Shape(format!("closure `{name}` has no normal directions")));
        }
        for (j, zj) in z.iter().enumerate() {
            if zj.rows() != n || zj.cols() != n {
                return Err(Error::Shape(format!(
                    "closure `{name}`: Z_{} is {}x{}, module dimension is {n}",
                    j + 1,
                    zj.rows(),
                    zj.cols()
                )));
            }
        }
        if holonomy.m() != module.m() || holonomy.module_dim() != n {
            return Err(Error::Shape(format!(
                "closure `{name}`: holonomy acts on ℝ^{} and dimension {}, expected ℝ^{} and {n}",
                holonomy.m(),
                holonomy.module_dim(),
                module.m()
            )));
        }
        Ok(Self { name, module, z, holonomy })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn module(&self) -> &CliffordModule {
        &self.module
    }

    pub fn m(&self) -> usize {
        self.module.m()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn z(&self) -> &[ComplexMatrix] {
        &self.z
    }

    pub fn holonomy(&self) -> &HolonomyGroup {
        &self.holonomy
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `G_jk = ½(Z_j Z_k + Z_k Z_j)` as scalars, with the largest departure
    /// from a scalar matrix.
    pub fn gram(&self) -> (Vec<Vec<crate::linalg::C64>>, f64) {
        let m = self.m();
        let mut g = vec![vec![crate::linalg::C64::new(0.0, 0.0); m]; m];
        let mut defect: f64 = 0.0;
        for j in 0..m {
            for k in j..m {
                let (s, d) = self.z[j].anticommutator(&self.z[k]).scale_real(0.5).scalar_part();
                g[j][k] = s;
                g[k][j] = s;
                defect = defect.max(d);
            }
        }
        (g, defect)
    }

    /// Relabels the normal directions: new direction `i` is old direction
    /// `perm[i]`. Generators, perturbation coefficients and holonomy move
    /// together.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let m = self.m();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{m}")));
        }
        let c = perm.iter().map(|&p| self.module.generators()[p].clone()).collect();
        let module = CliffordModule::explicit(c, crate::clifford::GradingKind::Explicit(self.module.grading().clone()))?;
        let z = perm.iter().map(|&p| self.z[p].clone()).collect();
        Self::new(self.name.clone(), module, z, self.holonomy.permuted(perm))
    }

    /// Replaces each `Z_j` by `t_j Z_j`.
    pub fn scaled(&self, t: &[f64]) -> Result<Self> {
        if t.len() != self.m() {
            return Err(Error::InvalidArgument(format!("{} scale factors for m = {}", t.len(), self.m())));
        }
        let z = self.z.iter().zip(t).map(|(z, &s)| z.scale_real(s)).collect();
        Self::new(self.name.clone(), self.module.clone(), z, self.holonomy.clone())
    }
}

/// How the odd-codimension scenario supplies its global perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalPerturbation {
    /// `Z = i^{q(q+1)/2} c_1 ⋯ c_q`, invertible everywhere.
    OddChiralityProduct,
}

/// A foliation scenario: codimension, its critical leaf closures and optional
/// companion data for the one-dimensional localization experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioModel {
    pub name: String,
    pub codimension: usize,
    pub closures: Vec<ClosureDatum>,
    pub expected_index: Option<i64>,
    pub circle_model: Option<CircleModel>,
    pub global_perturbation: Option<GlobalPerturbation>,
}

impl ScenarioModel {
    pub fn new(name: impl Into<String>, codimension: usize, closures: Vec<ClosureDatum>) -> Result<Self> {
        let s = Self {
            name: name.into(),
            codimension,
            closures,
            expected_index: None,
            circle_model: None,
            global_perturbation: None,
        };
        s.check()?;
        Ok(s)
    }

    pub fn with_expected_index(mut self, index: i64) -> Self {
        self.expected_index = Some(index);
        self
    }

    pub fn with_circle_model(mut self, model: CircleModel) -> Self {
        self.circle_model = Some(model);
        self
    }

    pub fn with_global_perturbation(mut self, p: GlobalPerturbation) -> Result<Self> {
        self.global_perturbation = Some(p);
        self.check()?;
        Ok(self)
    }

    /// Structural checks: every closure has `m ≤ q`, names are distinct, and a
    /// global invertible perturbation excludes critical closures.
    pub fn check(&self) -> Result<()> {
        if self.codimension == 0 {
            return Err(Error::InvalidArgument("codimension must be positive".into()));
        }
        for (k, c) in self.closures.iter().enumerate() {
            if c.m() > self.codimension {
                return Err(Error::InvalidClosure {
                    closure: c.name().to_string(),
                    reason: format!("{} normal directions exceed codimension {}", c.m(), self.codimension),
                });
            }
            if self.closures[..k].iter().any(|o| o.name() == c.name()) {
                return Err(Error::InvalidArgument(format!("duplicate closure name `{}`", c.name())));
            }
        }
        if self.global_perturbation.is_some() {
            if self.codimension.is_multiple_of(2) {
                return Err(Error::EvenCodimension(self.codimension));
            }
            if !self.closures.is_empty() {
                return Err(Error::InvalidArgument(
                    "an everywhere-invertible perturbation has no critical closures".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
