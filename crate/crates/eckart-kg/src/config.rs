//! Run configuration: a flat sectioned key-value document (TOML syntax) with
//! `[potential]`, `[solver]`, and `[grid]` sections. Unknown keys are hard
//! errors so typos in physics parameters cannot pass silently.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::{DomainMode, RadialGrid, DEFAULT_N_POINTS, DEFAULT_R_MAX_FACTOR};
use crate::potential::PotentialSpec;
use crate::spectrum::SolverSettings;

/// Grid controls from the config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSettings {
    pub r_max_factor: f64,
    pub n_points: usize,
    pub domain_mode: DomainMode,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            r_max_factor: DEFAULT_R_MAX_FACTOR,
            n_points: DEFAULT_N_POINTS,
            domain_mode: DomainMode::FullLine,
        }
    }
}

/// Fully validated configuration with defaults applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub solver: SolverSettings,
    pub grid: GridSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    potential: Option<RawPotential>,
    solver: Option<RawSolver>,
    grid: Option<RawGrid>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    v1: Option<f64>,
    v2: Option<f64>,
    alpha: Option<f64>,
    mass: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    abs_tol: Option<f64>,
    max_iter: Option<u32>,
    bracket_samples: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    r_max_factor: Option<f64>,
    n_points: Option<usize>,
    domain_mode: Option<String>,
}

impl RunConfig {
    /// Parse and validate a config document. Solver and grid sections are
    /// optional; the four potential fields are required.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))?;
        let pot = raw.potential.ok_or(Error::MissingField("potential"))?;
        let v1 = pot.v1.ok_or(Error::MissingField("v1"))?;
        let v2 = pot.v2.ok_or(Error::MissingField("v2"))?;
        let alpha = pot.alpha.ok_or(Error::MissingField("alpha"))?;
        let mass = pot.mass.ok_or(Error::MissingField("mass"))?;
        let potential = PotentialSpec::new(v1, v2, alpha, mass)?;

        let defaults = SolverSettings::default();
        let solver = match raw.solver {
            Some(s) => SolverSettings {
                abs_tol: s.abs_tol.unwrap_or(defaults.abs_tol),
                max_iter: s.max_iter.unwrap_or(defaults.max_iter),
                bracket_samples: s.bracket_samples.unwrap_or(defaults.bracket_samples),
            },
            None => defaults,
        };
        if !solver.abs_tol.is_finite() {
            return Err(Error::NonFinite("abs_tol"));
        }
        solver.validate()?;

        let grid_defaults = GridSettings::default();
        let grid = match raw.grid {
            Some(g) => GridSettings {
                r_max_factor: g.r_max_factor.unwrap_or(grid_defaults.r_max_factor),
                n_points: g.n_points.unwrap_or(grid_defaults.n_points),
                domain_mode: match g.domain_mode.as_deref() {
                    None => grid_defaults.domain_mode,
                    Some("full") => DomainMode::FullLine,
                    Some("half") => DomainMode::HalfLine,
                    Some(other) => {
                        return Err(Error::ConfigSyntax(format!(
                            "domain_mode must be \"full\" or \"half\", got \"{other}\""
                        )))
                    }
                },
            },
            None => grid_defaults,
        };
        if !grid.r_max_factor.is_finite() {
            return Err(Error::NonFinite("r_max_factor"));
        }
        if grid.r_max_factor <= 0.0 {
            return Err(Error::NonPositive("r_max_factor"));
        }

        let config = Self { potential, solver, grid };
        config.build_grid()?;
        Ok(config)
    }

    /// Serialize back to the config format. `parse(emit(c)) == c` exactly.
    pub fn emit(&self) -> String {
        let mode = match self.grid.domain_mode {
            DomainMode::FullLine => "full",
            DomainMode::HalfLine => "half",
        };
        format!(
            "[potential]\nv1 = {}\nv2 = {}\nalpha = {}\nmass = {}\n\n\
             [solver]\nabs_tol = {}\nmax_iter = {}\nbracket_samples = {}\n\n\
             [grid]\nr_max_factor = {}\nn_points = {}\ndomain_mode = \"{}\"\n",
            emit_f64(self.potential.v1),
            emit_f64(self.potential.v2),
            emit_f64(self.potential.alpha),
            emit_f64(self.potential.mass),
            emit_f64(self.solver.abs_tol),
            self.solver.max_iter,
            self.solver.bracket_samples,
            emit_f64(self.grid.r_max_factor),
            self.grid.n_points,
            mode,
        )
    }

    /// The radial grid this configuration describes.
    pub fn build_grid(&self) -> Result<RadialGrid> {
        RadialGrid::sized_for(
            &self.potential,
            self.grid.domain_mode,
            self.grid.r_max_factor,
            self.grid.n_points,
        )
    }
}

/// Shortest representation that round-trips exactly, as a valid TOML float.
fn emit_f64(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}
