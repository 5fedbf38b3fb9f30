//! Bound states of the s-wave Klein-Gordon equation with equal scalar and
//! vector hyperbolic Eckart-type potential
//! `V(r) = V1 sech^2(alpha r) - V2 tanh(alpha r)`, in natural units.
//!
//! Two independent solution paths are provided and cross-validated:
//!
//! * an algebraic path — superpotential factorization, shape-invariance
//!   ladder, and a transcendental spectrum condition solved by bracketed
//!   root-finding ([`susy`], [`spectrum`]), with closed-form Jacobi-polynomial
//!   wavefunctions ([`wavefunction`], [`specialfns`]);
//! * a matrix path — finite-difference discretization, Sturm-sequence
//!   bisection, and an outer self-consistency loop over the energy-dependent
//!   coupling ([`oracle`]).
//!
//! The narrative guide under `book/` walks through the construction; its code
//! snippets compile and run as doc-tests (see [`guide`]).
//!
//! ```
//! use eckart_kg::{PotentialSpec, SolverSettings, spectrum::enumerate_levels};
//!
//! let spec = PotentialSpec::new(-2.0, 0.5, 1.0, 1.0).unwrap();
//! let found = enumerate_levels(&spec, &SolverSettings::default()).unwrap();
//! assert_eq!(found.levels.len(), 1);
//! assert!((found.levels[0].energy - (-0.7326434245206807)).abs() < 1e-9);
//! ```

pub mod config;
pub mod error;
pub mod grid;
pub mod guide;
pub mod oracle;
pub mod potential;
pub mod specialfns;
pub mod spectrum;
pub mod susy;
pub mod wavefunction;

pub use config::{GridSettings, RunConfig};
pub use error::{Error, Result};
pub use grid::{DomainMode, RadialFunction, RadialGrid};
pub use potential::PotentialSpec;
pub use spectrum::{EnergyLevel, SolverSettings, Spectrum};
pub use susy::{Branch, SuperCoeffs};
