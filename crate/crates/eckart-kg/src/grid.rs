//! Uniform radial grids and sampled radial functions.

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::specialfns::simpson;

/// Domain of the radial coordinate.
///
/// The shape-invariance spectrum is that of the full-line problem, so
/// `FullLine` is the default and the mode the oracle cross-validates.
/// `HalfLine` (Dirichlet wall at r = 0) is provided for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainMode {
    FullLine,
    HalfLine,
}

/// Uniform grid on `[r_min, r_max]` with an odd number of points
/// (odd so composite Simpson applies directly).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    n_points: usize,
    domain_mode: DomainMode,
}

/// Default box size in units of 1/alpha. Far beyond this the effective
/// potential is flat to well below truncation-relevant levels.
pub const DEFAULT_R_MAX_FACTOR: f64 = 25.0;
/// Default point count (odd).
pub const DEFAULT_N_POINTS: usize = 4001;

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize, domain_mode: DomainMode) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_min >= r_max {
            return Err(Error::InvalidGrid(format!(
                "need finite r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n_points < 3 || n_points % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "need an odd point count >= 3, got {n_points}"
            )));
        }
        match domain_mode {
            DomainMode::FullLine => {
                if (r_min + r_max).abs() > 1e-12 * r_max.abs() {
                    return Err(Error::InvalidGrid(
                        "full-line grid must be symmetric: r_min = -r_max".into(),
                    ));
                }
            }
            DomainMode::HalfLine => {
                // r_min = 0 for plain half-line grids; wavefunction sampling may
                // offset the first point by h/2 to exclude the origin.
                if r_min < 0.0 {
                    return Err(Error::InvalidGrid("half-line grid needs r_min >= 0".into()));
                }
            }
        }
        Ok(Self { r_min, r_max, n_points, domain_mode })
    }

    /// Default grid for a spec: `r_max = 25/alpha`, 4001 points.
    pub fn default_for(spec: &PotentialSpec, mode: DomainMode) -> Self {
        Self::sized_for(spec, mode, DEFAULT_R_MAX_FACTOR, DEFAULT_N_POINTS)
            .expect("default grid parameters are valid")
    }

    /// Grid with explicit size: `r_max = r_max_factor/alpha`.
    pub fn sized_for(
        spec: &PotentialSpec,
        mode: DomainMode,
        r_max_factor: f64,
        n_points: usize,
    ) -> Result<Self> {
        let r_max = r_max_factor / spec.alpha;
        let r_min = match mode {
            DomainMode::FullLine => -r_max,
            DomainMode::HalfLine => 0.0,
        };
        Self::new(r_min, r_max, n_points, mode)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn domain_mode(&self) -> DomainMode {
        self.domain_mode
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Same span, spacing halved (2n - 1 points). Used by refinement studies.
    pub fn refined(&self) -> Self {
        Self {
            r_min: self.r_min,
            r_max: self.r_max,
            n_points: 2 * self.n_points - 1,
            domain_mode: self.domain_mode,
        }
    }
}

/// A real function sampled on a grid, unit-normalized under composite Simpson.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
    norm_constant: f64,
    node_count: usize,
}

impl RadialFunction {
    /// Normalize raw samples to unit L2 norm and count interior nodes.
    ///
    /// The overall sign is canonicalized so the sample of largest magnitude is
    /// positive. Fails with `NotNormalizable` when the samples grow toward
    /// either grid end (wrong superpotential branch or an unbound level).
    pub fn from_samples(grid: RadialGrid, mut values: Vec<f64>) -> Result<Self> {
        assert_eq!(values.len(), grid.n_points(), "sample count must match grid");
        let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 || !peak.is_finite() {
            return Err(Error::NotNormalizable);
        }
        // On a half-line grid the left edge is the origin, not an asymptotic
        // end; growth there is the (separately reported) 1/r pole.
        let check_left = grid.domain_mode() == DomainMode::FullLine;
        if grows_toward_end(&values, check_left) {
            return Err(Error::NotNormalizable);
        }
        let peak_idx = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap();
        if values[peak_idx] < 0.0 {
            for v in &mut values {
                *v = -*v;
            }
        }
        let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
        let norm2 = simpson(&sq, grid.spacing())?;
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::NotNormalizable);
        }
        let norm_constant = 1.0 / norm2.sqrt();
        for v in &mut values {
            *v *= norm_constant;
        }
        let node_count = count_nodes(&values);
        Ok(Self { grid, values, norm_constant, node_count })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Factor applied to the raw samples during normalization.
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }
}

/// Sign changes of consecutive samples, ignoring amplitudes below
/// `1e-12 * max|f|` so exponential-tail chatter is not counted.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * peak;
    let mut nodes = 0;
    let mut last_sign = 0i8;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        let s = if v > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            nodes += 1;
        }
        last_sign = s;
    }
    nodes
}

/// True when |f| increases toward an end (max over the outer 5% exceeds the
/// max over the adjacent 5%).
fn grows_toward_end(values: &[f64], check_left: bool) -> bool {
    let n = values.len();
    let band = (n / 20).max(2);
    let seg_max = |s: &[f64]| s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let outer_hi = seg_max(&values[n - band..]);
    let inner_hi = seg_max(&values[n - 2 * band..n - band]);
    if outer_hi > inner_hi {
        return true;
    }
    check_left && seg_max(&values[..band]) > seg_max(&values[band..2 * band])
}
