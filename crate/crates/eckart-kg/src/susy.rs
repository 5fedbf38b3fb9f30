//! Superpotential construction, partner potentials, Riccati verification,
//! shape-invariance steps, and the algebraic energy ladder.
//!
//! Sign conventions are fixed mechanically, not by fiat: the ground state is
//! `f0 = exp(-int W)` with `W = A - B tanh(alpha r)`, and every coefficient
//! below is the unique choice making the Riccati defect
//! `W^2 - W' - (V_eff - lambda0)` vanish identically while `f0` decays at
//! both ends. The conventions chapter of the guide tabulates each choice and
//! the test that pins it.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potential::{sech, PotentialSpec};

/// Which sign of `+-sqrt(alpha^2 - 8(E+M)V1)` a coefficient set took.
///
/// `Minus` is the physical branch: it gives `B <= alpha/2` and, for attractive
/// wells, `B < 0`, which is what makes `exp(-int W)` normalizable. `Plus`
/// (`B >= alpha/2`) is exposed for exploration; its ground state grows at the
/// ends and it is excluded from spectrum solving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Superpotential coefficients at a given trial energy.
///
/// Both `A` and `B` depend on the energy through the coupling `2(E+M)`, so a
/// coefficient set is only meaningful together with the energy it was built
/// at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperCoeffs {
    /// Tilt coefficient `A = (E+M)V2 / B`.
    pub a_coef: f64,
    /// Well coefficient `B = (alpha +- sqrt(alpha^2 - 8(E+M)V1)) / 2`.
    pub b_coef: f64,
    /// Ground-state offset `lambda0 = -(A^2 + B^2)`.
    pub lambda0: f64,
    pub branch: Branch,
    pub trial_energy: f64,
}

/// Effective potential `2(E+M)[V1 sech^2(alpha r) - V2 tanh(alpha r)]`.
pub fn effective_potential(spec: &PotentialSpec, trial_energy: f64, r: f64) -> f64 {
    2.0 * (trial_energy + spec.mass) * spec.potential(r)
}

/// Discriminant root `sqrt(alpha^2 - 8(E+M)V1)`, or `ComplexDiscriminant`.
fn discriminant_root(spec: &PotentialSpec, trial_energy: f64) -> Result<f64> {
    let d2 = spec.alpha * spec.alpha - 8.0 * (trial_energy + spec.mass) * spec.v1;
    if d2 < 0.0 {
        return Err(Error::ComplexDiscriminant(d2));
    }
    Ok(d2.sqrt())
}

/// Build the superpotential coefficients for one branch at a trial energy.
pub fn super_coeffs(spec: &PotentialSpec, trial_energy: f64, branch: Branch) -> Result<SuperCoeffs> {
    let d = discriminant_root(spec, trial_energy)?;
    let b_coef = match branch {
        Branch::Plus => 0.5 * (spec.alpha + d),
        Branch::Minus => 0.5 * (spec.alpha - d),
    };
    let tilt = (trial_energy + spec.mass) * spec.v2;
    let a_coef = if b_coef == 0.0 {
        if tilt == 0.0 {
            0.0
        } else {
            return Err(Error::DivisionByZero);
        }
    } else {
        tilt / b_coef
    };
    let lambda0 = -(a_coef * a_coef + b_coef * b_coef);
    Ok(SuperCoeffs { a_coef, b_coef, lambda0, branch, trial_energy })
}

/// `W(r) = A - B tanh(alpha r)`.
pub fn superpotential(coeffs: &SuperCoeffs, alpha: f64, r: f64) -> f64 {
    coeffs.a_coef - coeffs.b_coef * (alpha * r).tanh()
}

/// Partner potentials `V+- = W^2 +- W'` in closed form:
/// `V+- = A^2 + B^2 - B(B -+ alpha) sech^2(alpha r) - 2AB tanh(alpha r)`.
pub fn partner_potentials(coeffs: &SuperCoeffs, alpha: f64, r: f64) -> (f64, f64) {
    partner_pair(coeffs.a_coef, coeffs.b_coef, alpha, r)
}

fn partner_pair(a: f64, b: f64, alpha: f64, r: f64) -> (f64, f64) {
    let x = alpha * r;
    let s2 = sech(x) * sech(x);
    let t = x.tanh();
    let flat = a * a + b * b - 2.0 * a * b * t;
    let v_plus = flat - b * (b + alpha) * s2;
    let v_minus = flat - b * (b - alpha) * s2;
    (v_plus, v_minus)
}

/// Sup-norm of the Riccati defect `W^2 - W' - (V_eff - lambda0)` over a grid.
///
/// This is the arbiter that fixes every sign convention: it vanishes (to
/// roundoff) exactly for coefficients built by [`super_coeffs`] from the same
/// spec and trial energy.
pub fn riccati_residual(spec: &PotentialSpec, coeffs: &SuperCoeffs, grid: &RadialGrid) -> f64 {
    let alpha = spec.alpha;
    let mut sup = 0.0f64;
    for i in 0..grid.n_points() {
        let r = grid.point(i);
        let w = superpotential(coeffs, alpha, r);
        let s = sech(alpha * r);
        let w_prime = -coeffs.b_coef * alpha * s * s;
        let defect =
            w * w - w_prime - (effective_potential(spec, coeffs.trial_energy, r) - coeffs.lambda0);
        sup = sup.max(defect.abs());
    }
    sup
}

/// Parameters after one shape-invariance step.
///
/// `a0` is the stepped tilt coefficient, `a1` the stepped well coefficient,
/// and `remainder` the constant `R` with
/// `V+(r; old) = V-(r; new) + R` identically in `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub a0: f64,
    pub a1: f64,
    pub remainder: f64,
}

impl ShapeParams {
    /// The step map applied to a raw `(A, B)` pair:
    /// `B -> B + alpha`, `A -> A B / (B + alpha)` (the product `A B` is
    /// invariant), `R = (A^2 + B^2) - (A'^2 + B'^2)`.
    pub fn step_from_pair(a: f64, b: f64, alpha: f64) -> Result<Self> {
        let b_next = b + alpha;
        if b_next == 0.0 {
            return Err(Error::SingularMap);
        }
        let a_next = a * b / b_next;
        let remainder = (a * a + b * b) - (a_next * a_next + b_next * b_next);
        Ok(Self { a0: a_next, a1: b_next, remainder })
    }
}

/// First shape-invariance step from a coefficient set.
pub fn shape_step_initial(coeffs: &SuperCoeffs, alpha: f64) -> Result<ShapeParams> {
    ShapeParams::step_from_pair(coeffs.a_coef, coeffs.b_coef, alpha)
}

/// Subsequent step from already-stepped parameters.
pub fn shape_step(params: &ShapeParams, alpha: f64) -> Result<ShapeParams> {
    ShapeParams::step_from_pair(params.a0, params.a1, alpha)
}

/// One rung of the energy ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderTerm {
    /// Step index, starting at 1.
    pub k: u32,
    pub params: ShapeParams,
    /// Running sum of remainders through step `k`.
    pub cumulative: f64,
}

/// All ladder rungs until termination (stepped well coefficient reaching 0)
/// or `max_steps`.
pub fn ladder_terms(coeffs: &SuperCoeffs, alpha: f64, max_steps: u32) -> Vec<LadderTerm> {
    let mut out = Vec::new();
    let mut a = coeffs.a_coef;
    let mut b = coeffs.b_coef;
    let mut cumulative = 0.0;
    for k in 1..=max_steps {
        // A normalizable rung needs the stepped well coefficient still negative.
        if b + alpha >= 0.0 {
            break;
        }
        let params = match ShapeParams::step_from_pair(a, b, alpha) {
            Ok(p) => p,
            Err(_) => break,
        };
        cumulative += params.remainder;
        out.push(LadderTerm { k, params, cumulative });
        a = params.a0;
        b = params.a1;
    }
    out
}

/// Ladder eigenvalue relative to the SUSY zero (the partner-Hamiltonian
/// ground state): `lambda_n^(-) = (A^2+B^2) - ((AB/(B+n alpha))^2 + (B+n alpha)^2)`.
///
/// Equals the running remainder sum by telescoping; 0 at `n = 0`.
pub fn susy_ladder(coeffs: &SuperCoeffs, alpha: f64, n: u32) -> Result<f64> {
    let b_n = coeffs.b_coef + f64::from(n) * alpha;
    if n > 0 && b_n >= 0.0 {
        return Err(Error::LadderTerminated { n });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let a_n = coeffs.a_coef * coeffs.b_coef / b_n;
    let before = coeffs.a_coef * coeffs.a_coef + coeffs.b_coef * coeffs.b_coef;
    Ok(before - (a_n * a_n + b_n * b_n))
}

/// Physical eigenvalue `lambda_n = lambda0 + lambda_n^(-)`
/// `= -[(AB/(B+n alpha))^2 + (B+n alpha)^2]`.
pub fn physical_lambda(coeffs: &SuperCoeffs, alpha: f64, n: u32) -> Result<f64> {
    Ok(coeffs.lambda0 + susy_ladder(coeffs, alpha, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(v1: f64, v2: f64, alpha: f64, mass: f64) -> PotentialSpec {
        PotentialSpec::new(v1, v2, alpha, mass).unwrap()
    }

    /// Random attractive spec plus a trial energy inside (-M, M).
    fn random_case(rng: &mut ChaCha8Rng) -> (PotentialSpec, f64) {
        let alpha = rng.gen_range(0.5..2.0);
        let mass = rng.gen_range(0.5..2.0);
        let v1 = rng.gen_range(-6.0..-0.3);
        let v2 = rng.gen_range(-0.6..0.6);
        let e = rng.gen_range(-0.95 * mass..0.95 * mass);
        (spec(v1, v2, alpha, mass), e)
    }

    #[test]
    fn effective_potential_zero_and_origin() {
        let s0 = spec(0.0, 0.0, 1.0, 1.0);
        assert_eq!(effective_potential(&s0, 0.7, 1.3), 0.0);
        let s1 = spec(1.0, 0.0, 1.0, 1.0);
        assert_eq!(effective_potential(&s1, 1.0, 0.0), 4.0);
    }

    #[test]
    fn effective_potential_matches_high_precision_value() {
        // 2(0+1)[(-2) sech^2(3) - 0.5 tanh(3)], evaluated independently at
        // 40-digit precision.
        let s = spec(-2.0, 0.5, 1.0, 1.0);
        let got = effective_potential(&s, 0.0, 3.0);
        assert!((got - (-1.034518902348491216424505)).abs() < 1e-15);
    }

    #[test]
    fn super_coeffs_trivial_cases() {
        // V1 = V2 = 0: Plus branch gives B = alpha, A = 0.
        let s = spec(0.0, 0.0, 1.0, 1.0);
        let c = super_coeffs(&s, 1.0, Branch::Plus).unwrap();
        assert_eq!(c.b_coef, 1.0);
        assert_eq!(c.a_coef, 0.0);
        // V1 = 0, V2 = 1, E = M = 1: B = 1, A = 2(E+M)V2/(alpha + alpha) = 2.
        let s = spec(0.0, 1.0, 1.0, 1.0);
        let c = super_coeffs(&s, 1.0, Branch::Plus).unwrap();
        assert_eq!(c.b_coef, 1.0);
        assert_eq!(c.a_coef, 2.0);
    }

    #[test]
    fn super_coeffs_branch_sides_of_half_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let (s, e) = random_case(&mut rng);
            let plus = super_coeffs(&s, e, Branch::Plus).unwrap();
            let minus = super_coeffs(&s, e, Branch::Minus).unwrap();
            assert!(plus.b_coef >= s.alpha / 2.0);
            assert!(minus.b_coef <= s.alpha / 2.0);
        }
    }

    #[test]
    fn super_coeffs_complex_discriminant_for_strong_repulsion() {
        let s = spec(5.0, 0.0, 1.0, 1.0);
        assert!(matches!(
            super_coeffs(&s, 0.5, Branch::Minus),
            Err(Error::ComplexDiscriminant(_))
        ));
    }

    #[test]
    fn super_coeffs_division_by_zero_on_minus_branch_with_tilt() {
        // V1 = 0 makes the Minus-branch B vanish; with V2 != 0 the tilt is undefined.
        let s = spec(0.0, 0.5, 1.0, 1.0);
        assert_eq!(super_coeffs(&s, 0.3, Branch::Minus).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn superpotential_values_and_saturation() {
        let c = SuperCoeffs {
            a_coef: 1.0,
            b_coef: 2.0,
            lambda0: -5.0,
            branch: Branch::Plus,
            trial_energy: 0.0,
        };
        let zero = SuperCoeffs { a_coef: 0.0, b_coef: 0.0, lambda0: 0.0, ..c };
        assert_eq!(superpotential(&zero, 1.0, 0.37), 0.0);
        let unit = SuperCoeffs { a_coef: 1.0, b_coef: 1.0, lambda0: -2.0, ..c };
        assert_eq!(superpotential(&unit, 1.0, 0.0), 1.0);
        assert!((superpotential(&c, 1.0, 25.0) - (1.0 - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn partner_potentials_reflectionless_limit() {
        // B = alpha on the minus combination: V- = W^2 - W' is the constant
        // A^2 + B^2 when A = 0 (the sech^2 term dies).
        let c = SuperCoeffs {
            a_coef: 0.0,
            b_coef: 1.0,
            lambda0: -1.0,
            branch: Branch::Plus,
            trial_energy: 0.0,
        };
        for i in 0..100 {
            let r = -25.0 + i as f64 * 0.5;
            let (_, v_minus) = partner_potentials(&c, 1.0, r);
            assert!((v_minus - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partner_potentials_match_finite_difference_derivative() {
        let c = SuperCoeffs {
            a_coef: 1.0,
            b_coef: 2.0,
            lambda0: -5.0,
            branch: Branch::Plus,
            trial_energy: 0.0,
        };
        let alpha = 1.0;
        let h = 1e-5;
        for &r in &[0.7, -1.3, 0.0, 2.9] {
            let w = |r: f64| superpotential(&c, alpha, r);
            let w_prime_fd = (w(r + h) - w(r - h)) / (2.0 * h);
            let (v_plus, v_minus) = partner_potentials(&c, alpha, r);
            assert!((v_plus - (w(r) * w(r) + w_prime_fd)).abs() < 1e-8);
            assert!((v_minus - (w(r) * w(r) - w_prime_fd)).abs() < 1e-8);
        }
    }

    #[test]
    fn analytic_w_prime_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let (s, e) = random_case(&mut rng);
            let c = super_coeffs(&s, e, Branch::Minus).unwrap();
            let g = RadialGrid::default_for(&s, DomainMode::FullLine);
            let h = 1e-5 / s.alpha;
            for i in (0..g.n_points()).step_by(97) {
                let r = g.point(i);
                let sch = sech(s.alpha * r);
                let analytic = -c.b_coef * s.alpha * sch * sch;
                let fd = (superpotential(&c, s.alpha, r + h) - superpotential(&c, s.alpha, r - h))
                    / (2.0 * h);
                assert!((analytic - fd).abs() < 1e-8, "r={r}: {analytic} vs {fd}");
            }
        }
    }

    #[test]
    fn riccati_residual_vanishes_for_constructed_coeffs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let (s, e) = random_case(&mut rng);
            let g = RadialGrid::default_for(&s, DomainMode::FullLine);
            for branch in [Branch::Plus, Branch::Minus] {
                let c = super_coeffs(&s, e, branch).unwrap();
                let res = riccati_residual(&s, &c, &g);
                assert!(res < 1e-10, "branch {branch:?}: residual {res:e}");
            }
        }
    }

    #[test]
    fn riccati_residual_zero_for_zero_potential() {
        let s = spec(0.0, 0.0, 1.0, 1.0);
        let c = super_coeffs(&s, 0.4, Branch::Minus).unwrap();
        assert_eq!((c.a_coef, c.b_coef, c.lambda0), (0.0, 0.0, 0.0));
        let g = RadialGrid::default_for(&s, DomainMode::FullLine);
        assert_eq!(riccati_residual(&s, &c, &g), 0.0);
    }

    #[test]
    fn riccati_residual_detects_corrupted_offset() {
        let s = spec(-2.0, 0.5, 1.0, 1.0);
        let g = RadialGrid::default_for(&s, DomainMode::FullLine);
        let mut c = super_coeffs(&s, 0.2, Branch::Minus).unwrap();
        c.lambda0 += 1.0;
        assert!(riccati_residual(&s, &c, &g) >= 1.0 - 1e-12);
    }

    #[test]
    fn shape_step_direct_values() {
        // Step map on raw pairs: B -> B + alpha, A -> AB/(B+alpha),
        // R = old constants - new constants.
        let p = ShapeParams::step_from_pair(0.0, -2.0, 1.0).unwrap();
        assert_eq!((p.a0, p.a1), (0.0, -1.0));
        assert_eq!(p.remainder, 4.0 - 1.0);
        let q = ShapeParams::step_from_pair(1.0, -2.0, 1.0).unwrap();
        assert_eq!((q.a0, q.a1), (2.0, -1.0));
        assert_eq!(q.remainder, (1.0 + 4.0) - (4.0 + 1.0));
    }

    #[test]
    fn shape_step_singular_map() {
        assert_eq!(ShapeParams::step_from_pair(0.3, -1.0, 1.0).unwrap_err(), Error::SingularMap);
    }

    #[test]
    fn shape_invariance_identity_over_grid() {
        // V+(r; step k-1) - V-(r; step k) is the constant R_k, for every rung.
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..50 {
            let (s, e) = random_case(&mut rng);
            let c = super_coeffs(&s, e, Branch::Minus).unwrap();
            let g = RadialGrid::default_for(&s, DomainMode::FullLine);
            let mut a = c.a_coef;
            let mut b = c.b_coef;
            for term in ladder_terms(&c, s.alpha, 40) {
                let p = term.params;
                for i in (0..g.n_points()).step_by(53) {
                    let r = g.point(i);
                    let (v_plus_old, _) = partner_pair(a, b, s.alpha, r);
                    let (_, v_minus_new) = partner_pair(p.a0, p.a1, s.alpha, r);
                    let defect = v_plus_old - v_minus_new - p.remainder;
                    assert!(defect.abs() < 1e-10, "k={} defect={defect:e}", term.k);
                }
                a = p.a0;
                b = p.a1;
            }
        }
    }

    #[test]
    fn ladder_sum_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..100 {
            let (s, e) = random_case(&mut rng);
            let c = super_coeffs(&s, e, Branch::Minus).unwrap();
            for term in ladder_terms(&c, s.alpha, 40) {
                let closed = susy_ladder(&c, s.alpha, term.k).unwrap();
                let scale = closed.abs().max(term.cumulative.abs()).max(1e-30);
                assert!(
                    (closed - term.cumulative).abs() <= 1e-12 * scale,
                    "k={}: sum={} closed={}",
                    term.k,
                    term.cumulative,
                    closed
                );
            }
        }
    }

    #[test]
    fn ladder_base_and_termination() {
        let s = spec(-2.0, 0.0, 1.0, 1.0);
        let c = super_coeffs(&s, 0.5, Branch::Minus).unwrap();
        assert_eq!(susy_ladder(&c, 1.0, 0).unwrap(), 0.0);
        assert_eq!(physical_lambda(&c, 1.0, 0).unwrap(), c.lambda0);
        // b = -B ~ 2.37 here, so n = 3 is past termination.
        assert!(matches!(susy_ladder(&c, 1.0, 3), Err(Error::LadderTerminated { n: 3 })));
    }

    #[test]
    fn partner_asymptotes_are_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..20 {
            let (s, e) = random_case(&mut rng);
            let c = super_coeffs(&s, e, Branch::Minus).unwrap();
            let (a, b) = (c.a_coef, c.b_coef);
            let r = 25.0 / s.alpha;
            let (vp_hi, vm_hi) = partner_potentials(&c, s.alpha, r);
            let (vp_lo, vm_lo) = partner_potentials(&c, s.alpha, -r);
            let flat_hi = a * a + b * b - 2.0 * a * b;
            let flat_lo = a * a + b * b + 2.0 * a * b;
            for (got, want) in [(vp_hi, flat_hi), (vm_hi, flat_hi), (vp_lo, flat_lo), (vm_lo, flat_lo)]
            {
                assert!((got - want).abs() < 1e-9);
            }
        }
    }
}
