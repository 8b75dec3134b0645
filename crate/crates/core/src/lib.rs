//! Local and global basic indices of Dirac-type operators on Riemannian
//! foliations, computed from Clifford-form data at critical leaf closures.

pub mod clifford;
pub mod error;
pub mod holonomy;
pub mod lab;
pub mod linalg;
pub mod local_index;
pub mod model;
pub mod scenario;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
