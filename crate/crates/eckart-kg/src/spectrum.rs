//! Level-by-level solution of the implicit relativistic spectrum condition
//! `M^2 - E^2 = (E+M)^2 V2^2 / (alpha^2 (n+delta)^2) + alpha^2 (n+delta)^2`
//! by bracketed root-finding in `E`.

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::susy::{super_coeffs, Branch};

/// Root-finder controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Absolute tolerance on the energy root.
    pub abs_tol: f64,
    /// Iteration cap per bracket.
    pub max_iter: u32,
    /// Subdivisions of `(-M, M)` scanned for sign changes.
    pub bracket_samples: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { abs_tol: 1e-12, max_iter: 200, bracket_samples: 400 }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidSettings("abs_tol must be > 0".into()));
        }
        if self.max_iter < 10 {
            return Err(Error::InvalidSettings("max_iter must be >= 10".into()));
        }
        if self.bracket_samples < 2 {
            return Err(Error::InvalidSettings("bracket_samples must be >= 2".into()));
        }
        Ok(())
    }
}

/// One solved bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    /// Level index = node count = Jacobi degree.
    pub n: u32,
    /// Bound-state energy, `|E| < M`.
    pub energy: f64,
    /// `E^2 - M^2` (negative for bound states).
    pub lambda: f64,
    /// Quantum-defect parameter at `E_n`; bound levels have `n + delta < 0`.
    pub delta: f64,
    /// Wavefunction exponent `p` (see the wavefunction module).
    pub p_param: f64,
    /// Wavefunction exponent `w`.
    pub w_param: f64,
    /// `|g(E_n)|` at exit.
    pub residual: f64,
    /// Refinement iterations spent on the accepted root.
    pub iterations: u32,
}

/// Quantum defect `delta(E) = (1 - sqrt(1 - 8(E+M)V1/alpha^2)) / 2 = B_minus/alpha`.
///
/// Real whenever the Minus-branch superpotential exists; for attractive wells
/// it is negative and bound levels satisfy `n + delta < 0`.
pub fn delta_of(spec: &PotentialSpec, trial_energy: f64) -> Result<f64> {
    let radicand = 1.0 - 8.0 * (trial_energy + spec.mass) * spec.v1 / (spec.alpha * spec.alpha);
    if radicand < 0.0 {
        return Err(Error::ComplexDelta(radicand));
    }
    Ok(0.5 * (1.0 - radicand.sqrt()))
}

/// Residual of the spectrum condition,
/// `g(E) = M^2 - E^2 - (E+M)^2 V2^2/(alpha^2 (n+delta)^2) - alpha^2 (n+delta)^2`.
///
/// A root `g(E_n) = 0` defines level `n`. Errors: `ComplexDelta` propagates;
/// `DegenerateIndex` when `n + delta(E) = 0` with `V2 != 0` (a pole, not a root).
pub fn spectrum_residual(spec: &PotentialSpec, n: u32, trial_energy: f64) -> Result<f64> {
    let delta = delta_of(spec, trial_energy)?;
    let nd = f64::from(n) + delta;
    let scaled = spec.alpha * nd;
    let tilt = (trial_energy + spec.mass) * spec.v2;
    if scaled == 0.0 && tilt != 0.0 {
        return Err(Error::DegenerateIndex);
    }
    let m2 = spec.mass * spec.mass;
    let centrifugal = if tilt == 0.0 && scaled == 0.0 { 0.0 } else { (tilt / scaled).powi(2) };
    Ok(m2 - trial_energy * trial_energy - centrifugal - scaled * scaled)
}

/// Where a candidate root was discarded and why (solver diagnostics).
#[derive(Debug, Clone, PartialEq)]
pub enum RejectedRoot {
    /// `n + delta(E) >= 0`: an algebraic artifact of the squared index.
    IndexBranch(f64),
    /// The quantization there is met only by the growing exponential
    /// (`c^2 <= |(E+M)V2|` with `c = -alpha(n+delta)`), so no normalizable
    /// eigenfunction exists.
    NotNormalizable(f64),
}

/// Root-level detail behind a [`solve_level`] call.
#[derive(Debug, Clone, Default)]
pub struct LevelScan {
    /// Physically admissible roots found (ascending energy).
    pub admissible: Vec<f64>,
    /// Discarded sign changes.
    pub rejected: Vec<RejectedRoot>,
}

/// Bound-state acceptance filter shared by the analytic solver and the
/// matrix oracle: strictly below both asymptotes of the effective potential.
pub fn is_bound_lambda(spec: &PotentialSpec, energy: f64) -> bool {
    let lambda = energy * energy - spec.mass * spec.mass;
    let edge = -2.0 * (energy + spec.mass) * spec.v2.abs();
    lambda < edge - 1e-12 * spec.mass * spec.mass
}

/// Solve the spectrum condition for level `n`.
pub fn solve_level(spec: &PotentialSpec, n: u32, settings: &SolverSettings) -> Result<EnergyLevel> {
    solve_level_scan(spec, n, settings).map(|(level, _)| level)
}

/// Like [`solve_level`] but also returning the scan diagnostics
/// (extra admissible roots, rejected sign changes).
pub fn solve_level_scan(
    spec: &PotentialSpec,
    n: u32,
    settings: &SolverSettings,
) -> Result<(EnergyLevel, LevelScan)> {
    settings.validate()?;
    let m = spec.mass;
    let eps = 1e-9 * m;
    let lo = -m + eps;
    let hi = m - eps;
    let samples = settings.bracket_samples as usize;
    let g = |e: f64| spectrum_residual(spec, n, e);

    let mut scan = LevelScan::default();
    let mut iterations_used = 0u32;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=samples {
        let e = lo + (hi - lo) * i as f64 / samples as f64;
        let val = match g(e) {
            Ok(v) if v.is_finite() => v,
            // Complex delta or the index pole: no root can sit on a gap point.
            _ => {
                prev = None;
                continue;
            }
        };
        if let Some((e_prev, v_prev)) = prev {
            if v_prev == 0.0 || v_prev * val < 0.0 {
                let (root, iters) = refine_root(&g, e_prev, e, v_prev, val, settings)?;
                iterations_used = iterations_used.max(iters);
                classify_root(spec, n, root, &mut scan);
            }
        }
        prev = Some((e, val));
    }

    let &energy = scan.admissible.first().ok_or(Error::NoRoot { n })?;
    let residual = g(energy).unwrap_or(f64::NAN).abs();
    let level = finish_level(spec, n, energy, residual, iterations_used)?;
    Ok((level, scan))
}

fn classify_root(spec: &PotentialSpec, n: u32, root: f64, scan: &mut LevelScan) {
    let delta = match delta_of(spec, root) {
        Ok(d) => d,
        Err(_) => return,
    };
    let nd = f64::from(n) + delta;
    if nd >= 0.0 {
        scan.rejected.push(RejectedRoot::IndexBranch(root));
        return;
    }
    // Both decay rates positive: c^2 > |(E+M)V2| with c = -alpha(n+delta).
    // (This implies lambda below both continuum edges.)
    let c = -spec.alpha * nd;
    if c * c <= ((root + spec.mass) * spec.v2).abs() {
        scan.rejected.push(RejectedRoot::NotNormalizable(root));
        return;
    }
    scan.admissible.push(root);
    scan.admissible.sort_by(f64::total_cmp);
}

/// Fill the derived `EnergyLevel` fields at a converged root.
fn finish_level(
    spec: &PotentialSpec,
    n: u32,
    energy: f64,
    residual: f64,
    iterations: u32,
) -> Result<EnergyLevel> {
    let delta = delta_of(spec, energy)?;
    let coeffs = super_coeffs(spec, energy, Branch::Minus)?;
    let b_n = coeffs.b_coef + f64::from(n) * spec.alpha;
    let a_n = (energy + spec.mass) * spec.v2 / b_n;
    let p_param = (a_n + b_n) / (2.0 * spec.alpha);
    let w_param = (b_n - a_n) / (2.0 * spec.alpha);
    Ok(EnergyLevel {
        n,
        energy,
        lambda: energy * energy - spec.mass * spec.mass,
        delta,
        p_param,
        w_param,
        residual,
        iterations,
    })
}

/// Bisection-guarded secant refinement of a sign-change bracket.
fn refine_root(
    g: &dyn Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    mut g_lo: f64,
    mut g_hi: f64,
    settings: &SolverSettings,
) -> Result<(f64, u32)> {
    debug_assert!(g_lo == 0.0 || g_lo * g_hi <= 0.0);
    if g_lo == 0.0 {
        return Ok((lo, 0));
    }
    for iter in 1..=settings.max_iter {
        let width = hi - lo;
        if width <= settings.abs_tol {
            // Keep the endpoint with the smaller residual.
            let best = if g_lo.abs() <= g_hi.abs() { lo } else { hi };
            return Ok((best, iter));
        }
        // Secant estimate, clamped to the interior; midpoint when degenerate.
        let mut cand = if g_hi != g_lo { hi - g_hi * (hi - lo) / (g_hi - g_lo) } else { f64::NAN };
        let margin = 0.01 * width;
        if !(cand > lo + margin && cand < hi - margin) {
            cand = 0.5 * (lo + hi);
        }
        let g_cand = match g(cand) {
            Ok(v) if v.is_finite() => v,
            _ => {
                // Gap inside the bracket: retreat to plain bisection on the
                // half carrying the sign change.
                let mid = 0.5 * (lo + hi);
                match g(mid) {
                    Ok(v) if v.is_finite() => {
                        if g_lo * v <= 0.0 {
                            hi = mid;
                            g_hi = v;
                        } else {
                            lo = mid;
                            g_lo = v;
                        }
                        continue;
                    }
                    _ => return Err(Error::NoConvergence { max_iter: settings.max_iter }),
                }
            }
        };
        if g_cand == 0.0 {
            return Ok((cand, iter));
        }
        if g_lo * g_cand < 0.0 {
            hi = cand;
            g_hi = g_cand;
        } else {
            lo = cand;
            g_lo = g_cand;
        }
    }
    Err(Error::NoConvergence { max_iter: settings.max_iter })
}

/// All bound levels of a spec plus solver diagnostics.
#[derive(Debug, Clone, Default)]
pub struct Spectrum {
    /// Accepted levels, indexed by `n` in order.
    pub levels: Vec<EnergyLevel>,
    /// Human-readable notes (extra roots, skipped levels).
    pub diagnostics: Vec<String>,
}

/// Enumerate levels `n = 0, 1, 2, ...` until the first unbound index.
pub fn enumerate_levels(spec: &PotentialSpec, settings: &SolverSettings) -> Result<Spectrum> {
    settings.validate()?;
    let mut out = Spectrum::default();
    for n in 0.. {
        match solve_level_scan(spec, n, settings) {
            Ok((level, scan)) => {
                if scan.admissible.len() > 1 {
                    out.diagnostics.push(format!(
                        "level {n}: multiple admissible roots {:?}, kept {:.17e}",
                        scan.admissible, level.energy
                    ));
                }
                out.levels.push(level);
            }
            Err(Error::NoRoot { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(v1: f64, v2: f64, alpha: f64, mass: f64) -> PotentialSpec {
        PotentialSpec::new(v1, v2, alpha, mass).unwrap()
    }

    #[test]
    fn delta_zero_potential() {
        let s = spec(0.0, 0.0, 1.0, 1.0);
        for e in [-0.9, 0.0, 0.7] {
            assert_eq!(delta_of(&s, e).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_resolved_convention() {
        // Attractive well: delta = B_minus/alpha < 0. V1 = -2, E = M = 1,
        // alpha = 1: delta = (1 - sqrt(33))/2.
        let s = spec(-2.0, 0.0, 1.0, 1.0);
        let d = delta_of(&s, 1.0).unwrap();
        assert!((d - 0.5 * (1.0 - 33.0f64.sqrt())).abs() < 1e-15);
        // Radicand-zero boundary now sits at 8(E+M)V1 = +alpha^2: delta = 1/2.
        let s = spec(1.0 / 16.0, 0.0, 1.0, 1.0);
        assert!((delta_of(&s, 1.0).unwrap() - 0.5).abs() < 1e-15);
        // Strong repulsion: complex.
        let s = spec(1.0, 0.0, 1.0, 1.0);
        assert!(matches!(delta_of(&s, 1.0), Err(Error::ComplexDelta(_))));
    }

    #[test]
    fn residual_zero_potential_identity() {
        // V1 = V2 = 0, n = 1, alpha = 0.6: g(E) = 1 - E^2 - 0.36, roots +-0.8.
        let s = spec(0.0, 0.0, 0.6, 1.0);
        let g = |e: f64| spectrum_residual(&s, 1, e).unwrap();
        assert!((g(0.8)).abs() < 1e-15);
        assert!((g(-0.8)).abs() < 1e-15);
        assert!((g(0.0) - 0.64).abs() < 1e-15);
    }

    #[test]
    fn residual_negative_at_positive_edge_with_tilt() {
        let s = spec(-2.0, 0.5, 1.0, 1.0);
        let g = spectrum_residual(&s, 0, 1.0 - 1e-9).unwrap();
        assert!(g < 0.0);
    }

    #[test]
    fn zero_potential_roots_are_filtered_as_unphysical() {
        let s = spec(0.0, 0.0, 0.6, 1.0);
        assert!(matches!(solve_level(&s, 1, &SolverSettings::default()), Err(Error::NoRoot { n: 1 })));
        // ... but the scan machinery did see both algebraic roots.
        let err_scan = solve_level_scan(&s, 1, &SolverSettings::default());
        assert!(err_scan.is_err());
    }

    #[test]
    fn repulsive_spec_has_no_levels() {
        let s = spec(0.5, 0.0, 1.0, 1.0);
        for n in 0..3 {
            assert!(matches!(solve_level(&s, n, &SolverSettings::default()), Err(Error::NoRoot { .. })));
        }
        let spectrum = enumerate_levels(&s, &SolverSettings::default()).unwrap();
        assert!(spectrum.levels.is_empty());
    }

    #[test]
    fn fixture_ground_states_match_high_precision_roots() {
        // Roots of the spectrum condition solved independently at 40-digit
        // precision (bisection on the same resolved condition).
        let cases = [
            (-2.0, 0.0, 0, -0.6854037877232480),
            (-2.0, 0.0, 1, 0.3982873301221267),
            (-2.0, 0.0, 2, 0.9431353038259292),
            (-2.0, 0.5, 0, -0.7326434245206807),
            (-2.0, 0.25, 1, 0.3309283331507667),
            (-0.5, 0.0, 0, 0.5436890126920764),
            (-5.0, 0.0, 0, -0.9694607812966094),
            (-5.0, 0.25, 2, 0.1571296850386959),
            (-5.0, 0.5, 1, -0.4897734404990085),
        ];
        for (v1, v2, n, expected) in cases {
            let s = spec(v1, v2, 1.0, 1.0);
            let level = solve_level(&s, n, &SolverSettings::default()).unwrap();
            assert!(
                (level.energy - expected).abs() < 1e-11,
                "V1={v1} V2={v2} n={n}: {} vs {expected}",
                level.energy
            );
            assert!(level.residual < 1e-12);
            assert!(level.energy.abs() < s.mass);
            assert!(level.lambda < 0.0);
        }
    }

    #[test]
    fn level_census_matches_admissibility() {
        let s = spec(-2.0, 0.0, 1.0, 1.0);
        let spectrum = enumerate_levels(&s, &SolverSettings::default()).unwrap();
        assert_eq!(spectrum.levels.len(), 3);
        // V2 != 0 trims weakly bound upper levels.
        let s = spec(-2.0, 0.5, 1.0, 1.0);
        assert_eq!(enumerate_levels(&s, &SolverSettings::default()).unwrap().levels.len(), 1);
        // Deeper wells bind strictly more levels.
        let deep = spec(-20.0, 0.0, 1.0, 1.0);
        assert!(
            enumerate_levels(&deep, &SolverSettings::default()).unwrap().levels.len()
                > spectrum.levels.len()
        );
    }

    #[test]
    fn levels_ordered_by_index_with_increasing_energy() {
        for (v1, v2) in [(-2.0, 0.0), (-5.0, 0.25), (-5.0, 0.5), (-0.5, 0.0)] {
            let s = spec(v1, v2, 1.0, 1.0);
            let spectrum = enumerate_levels(&s, &SolverSettings::default()).unwrap();
            for (i, level) in spectrum.levels.iter().enumerate() {
                assert_eq!(level.n as usize, i);
                if i > 0 {
                    assert!(level.energy > spectrum.levels[i - 1].energy);
                }
            }
        }
    }

    #[test]
    fn stored_fields_reproduce_from_converged_energy() {
        let s = spec(-5.0, 0.25, 1.0, 1.0);
        let spectrum = enumerate_levels(&s, &SolverSettings::default()).unwrap();
        assert!(!spectrum.levels.is_empty());
        for level in &spectrum.levels {
            let delta = delta_of(&s, level.energy).unwrap();
            let nd = f64::from(level.n) + delta;
            assert!((level.delta - delta).abs() <= 1e-12 * delta.abs());
            assert!(nd < 0.0);
            // p + w = n + delta; p - w = (E+M)V2 / (alpha^2 (n+delta)).
            let sum = level.p_param + level.w_param;
            let diff = level.p_param - level.w_param;
            let tilt_term = (level.energy + s.mass) * s.v2 / (s.alpha * s.alpha * nd);
            assert!((sum - nd).abs() <= 1e-12 * nd.abs());
            assert!((diff - tilt_term).abs() <= 1e-12 * tilt_term.abs().max(1e-30));
            assert!((level.lambda - (level.energy * level.energy - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn tightening_tolerance_is_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let s = spec(
                rng.gen_range(-6.0..-0.5),
                rng.gen_range(-0.5..0.5),
                rng.gen_range(0.6..1.8),
                rng.gen_range(0.6..1.5),
            );
            let coarse = SolverSettings { abs_tol: 1e-8, ..Default::default() };
            let fine = SolverSettings { abs_tol: 5e-9, ..Default::default() };
            let a = enumerate_levels(&s, &coarse).unwrap();
            let b = enumerate_levels(&s, &fine).unwrap();
            assert_eq!(a.levels.len(), b.levels.len());
            for (x, y) in a.levels.iter().zip(&b.levels) {
                assert!((x.energy - y.energy).abs() <= coarse.abs_tol);
            }
        }
    }

    #[test]
    fn spectrum_invariant_under_tilt_sign_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let s = spec(
                rng.gen_range(-6.0..-0.5),
                rng.gen_range(0.05..0.5),
                rng.gen_range(0.6..1.8),
                rng.gen_range(0.6..1.5),
            );
            let flipped = spec(s.v1, -s.v2, s.alpha, s.mass);
            let a = enumerate_levels(&s, &SolverSettings::default()).unwrap();
            let b = enumerate_levels(&flipped, &SolverSettings::default()).unwrap();
            assert_eq!(a.levels.len(), b.levels.len());
            for (x, y) in a.levels.iter().zip(&b.levels) {
                assert!((x.energy - y.energy).abs() < 1e-10);
            }
        }
    }
}
