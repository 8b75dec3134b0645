//! Deterministic dense complex linear algebra.

pub mod banded;
pub mod eigen;
pub mod joint;
pub mod matrix;
pub mod subspace;

pub use banded::{map_band, BlockTridiagonal, SymTridiagonal};
pub use eigen::{hermitian_eig, right_singular, smallest_singular_value, HermitianEigen};
pub use joint::{joint_eig, negative_eigenspace, JointEigenstructure};
pub use matrix::{inner, vec_norm, ComplexMatrix, RealMatrix, C64};
pub use subspace::{nullspace, rank, subspace_intersection, Subspace};
