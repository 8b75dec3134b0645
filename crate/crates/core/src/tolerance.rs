//! Numerical tolerances shared by validation and index computations.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SIGN_TOL: f64 = 1e-8;

/// Environment variable overriding the default `tol`.
pub const TOL_ENV: &str = "BASICINDEX_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for algebraic identities.
    pub tol: f64,
    /// Eigenvalues with `|λ| < sign_tol` cannot be classified by sign.
    pub sign_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, sign_tol: DEFAULT_SIGN_TOL }
    }
}

impl Tolerances {
    pub fn new(tol: f64, sign_tol: f64) -> Result<Self> {
        for (name, v) in [("tol", tol), ("sign_tol", sign_tol)] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(Self { tol, sign_tol })
    }

    /// Defaults, with `tol` taken from `BASICINDEX_TOL` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(s) => {
                let tol: f64 = s.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("{TOL_ENV}={s:?} is not a number"))
                })?;
                Self::new(tol, DEFAULT_SIGN_TOL)
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonsense() {
        assert!(Tolerances::new(0.0, 1e-8).is_err());
        assert!(Tolerances::new(f64::NAN, 1e-8).is_err());
        assert!(Tolerances::new(1e-9, 2.0).is_err());
        assert_eq!(Tolerances::new(1e-9, 1e-8).unwrap(), Tolerances::default());
    }
}
