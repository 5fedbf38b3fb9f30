//! Physical problem definition in natural units (hbar = c = 1).

use crate::error::{Error, Result};

/// Hyperbolic Eckart-type potential `V(r) = V1 sech^2(alpha r) - V2 tanh(alpha r)`
/// coupled equally as scalar and vector potential to a Klein-Gordon particle
/// of mass `mass`.
///
/// `v1 < 0` gives an attractive well; `v2` tilts the asymptotes to
/// `-+ v2` at `r -> +-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    /// sech^2 strength (energy units, either sign).
    pub v1: f64,
    /// tanh strength (energy units, either sign).
    pub v2: f64,
    /// Range parameter (inverse length, > 0).
    pub alpha: f64,
    /// Particle mass (> 0).
    pub mass: f64,
}

impl PotentialSpec {
    pub fn new(v1: f64, v2: f64, alpha: f64, mass: f64) -> Result<Self> {
        if !v1.is_finite() {
            return Err(Error::NonFinite("v1"));
        }
        if !v2.is_finite() {
            return Err(Error::NonFinite("v2"));
        }
        if !alpha.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        if !mass.is_finite() {
            return Err(Error::NonFinite("mass"));
        }
        if alpha <= 0.0 {
            return Err(Error::NonPositive("alpha"));
        }
        if mass <= 0.0 {
            return Err(Error::NonPositive("mass"));
        }
        Ok(Self { v1, v2, alpha, mass })
    }

    /// Bare potential `V(r)`.
    pub fn potential(&self, r: f64) -> f64 {
        let x = self.alpha * r;
        self.v1 * sech(x) * sech(x) - self.v2 * x.tanh()
    }
}

/// `1/cosh(x)`, saturating to 0 for large `|x|` instead of overflowing.
pub(crate) fn sech(x: f64) -> f64 {
    let c = x.cosh();
    if c.is_infinite() {
        0.0
    } else {
        1.0 / c
    }
}
