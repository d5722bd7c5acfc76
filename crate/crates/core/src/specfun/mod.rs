//! Double precision special functions used by the spectral routines.
//!
//! Everything here is pure and allocation-light: log-gamma, Legendre and
//! fully normalized associated Legendre functions, the normalized radial
//! profiles `Λ_n(r) = 2^ν Γ(ν+1) J_ν(r) / r^ν` with `ν = (n-2)/2`, the
//! complementary error function and a couple of quadrature rules.

mod bessel;
mod erf;
mod gamma;
mod legendre;
pub mod quad;

pub use bessel::{bessel_j0, bessel_j0_asymptotic, bessel_j0_series, radial_profile, radial_profile_series};
pub use erf::{erfc, erfcx};
pub use gamma::log_gamma;
pub use quad::{gauss_legendre, integrate};
pub use legendre::{
    assoc_legendre_normalized, legendre_p, legendre_p_unchecked, one_minus_legendre, DegreeTable,
};

/// Tolerance and term cap for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl EvalPolicy {
    pub fn new(rel_tol: f64, max_terms: usize) -> crate::Result<Self> {
        if !(rel_tol > 0.0) || max_terms < 1 {
            return crate::error::domain("EvalPolicy needs rel_tol > 0 and max_terms >= 1");
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-17,
            max_terms: 400,
        }
    }
}
