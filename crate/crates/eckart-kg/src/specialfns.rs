//! Jacobi polynomials for general real parameters, composite Simpson
//! quadrature, and the 3-point second-difference stencil.

use crate::error::{Error, Result};

/// Parameters of a Jacobi polynomial `P_n^(a,b)`.
///
/// Negative non-integer parameters are allowed; the wavefunctions evaluate
/// `P_n^(-2p,-2w)` with real `p`, `w`, at arguments outside `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub degree: u32,
    pub alpha_p: f64,
    pub beta_p: f64,
}

impl JacobiParams {
    pub fn new(degree: u32, alpha_p: f64, beta_p: f64) -> Self {
        assert!(alpha_p.is_finite() && beta_p.is_finite(), "Jacobi parameters must be finite");
        Self { degree, alpha_p, beta_p }
    }
}

/// Evaluate `P_n^(a,b)(x)` for arbitrary real parameters and argument.
///
/// Uses the three-term recurrence in the degree; when a leading recurrence
/// coefficient degenerates (parameter sums hitting negative integers) it
/// falls back to the explicit finite hypergeometric sum, so callers always
/// get a value. Both routes run in compensated double-double arithmetic:
/// for strongly negative parameters the degree recurrence tracks a decaying
/// solution and plain f64 loses several digits to the growing companion.
pub fn jacobi_eval(params: JacobiParams, x: f64) -> f64 {
    match jacobi_eval_recurrence(params, x) {
        Some(v) => v,
        None => jacobi_eval_series(params, x),
    }
}

/// Recurrence route. `None` on recurrence breakdown (handled by
/// [`jacobi_eval`]; exposed so the two routes can be cross-tested).
pub fn jacobi_eval_recurrence(params: JacobiParams, x: f64) -> Option<f64> {
    let (n, a, b) = (params.degree, params.alpha_p, params.beta_p);
    if n == 0 {
        return Some(1.0);
    }
    // Everything from the exact inputs onward stays in double-double: the
    // recurrence coefficients are rational in (k, a, b) and even 1-ulp f64
    // perturbations there get amplified through the unstable directions.
    let x = Dd::from(x);
    let one = Dd::from(1.0);
    let two = Dd::from(2.0);
    let a_dd = Dd::from(a);
    let b_dd = Dd::from(b);
    let ab = a_dd + b_dd;
    let a2_minus_b2 = a_dd * a_dd - b_dd * b_dd;
    let p1 = a_dd + one + (ab + two) * (x - one) / two;
    if n == 1 {
        return Some(p1.to_f64());
    }
    let mut pkm2 = one;
    let mut pkm1 = p1;
    for k in 2..=n {
        let kf = f64::from(k);
        let k_dd = Dd::from(kf);
        let s = two * k_dd + ab;
        let s_m2 = s - two;
        let lead = two * k_dd * (k_dd + ab) * s_m2;
        // Breakdown guard: parameter sums at negative integers kill the
        // leading coefficient.
        let scale = 2.0 * kf * (kf + a.abs() + b.abs() + 1.0) * (s.to_f64().abs() + 2.0);
        if lead.to_f64().abs() < 1e-9 * scale {
            return None;
        }
        let c1 = (s - one) * (s * s_m2 * x + a2_minus_b2);
        let c2 = two * (k_dd + a_dd - one) * (k_dd + b_dd - one) * s;
        let pk = (c1 * pkm1 - c2 * pkm2) / lead;
        pkm2 = pkm1;
        pkm1 = pk;
    }
    Some(pkm1.to_f64())
}

/// Explicit finite sum, valid for any real parameters:
/// `P_n^(a,b)(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)`.
pub fn jacobi_eval_series(params: JacobiParams, x: f64) -> f64 {
    let (n, a, b) = (params.degree, params.alpha_p, params.beta_p);
    let n_us = n as usize;
    let lo = (Dd::from(x) - Dd::from(1.0)) * Dd::from(0.5);
    let hi = (Dd::from(x) + Dd::from(1.0)) * Dd::from(0.5);
    let mut total = Dd::from(0.0);
    for s in 0..=n_us {
        let term = gen_binomial_dd(f64::from(n) + a, n_us - s)
            * gen_binomial_dd(f64::from(n) + b, s)
            * lo.powi(s)
            * hi.powi(n_us - s);
        total = total + term;
    }
    total.to_f64()
}

/// Generalized binomial coefficient `C(t, k)` for real `t`, integer `k >= 0`.
pub fn gen_binomial(t: f64, k: usize) -> f64 {
    gen_binomial_dd(t, k).to_f64()
}

fn gen_binomial_dd(t: f64, k: usize) -> Dd {
    let mut acc = Dd::from(1.0);
    for i in 1..=k {
        acc = acc * (Dd::from(t) - Dd::from((k - i) as f64)) / Dd::from(i as f64);
    }
    acc
}

/// Double-double value: an unevaluated sum `hi + lo` carrying ~31 significant
/// digits. Just the handful of operations the Jacobi routes need.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn powi(self, k: usize) -> Self {
        let mut acc = Dd::from(1.0);
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }
}

/// Error-free sum: `a + b = s + err` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via fused multiply-add.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + Dd { hi: -rhs.hi, lo: -rhs.lo }
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - Dd::from(q1) * rhs;
        let q2 = r.hi / rhs.hi;
        let r = r - Dd::from(q2) * rhs;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

/// Composite Simpson integral of uniformly spaced samples.
///
/// Needs an odd sample count >= 3.
pub fn simpson(values: &[f64], spacing: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::EvenSampleCount(n));
    }
    let mut acc = values[0] + values[n - 1];
    let mut i = 1;
    while i < n - 1 {
        acc += 4.0 * values[i];
        if i + 1 < n - 1 {
            acc += 2.0 * values[i + 1];
        }
        i += 2;
    }
    Ok(acc * spacing / 3.0)
}

/// Interior second derivatives `(f[i-1] - 2 f[i] + f[i+1]) / h^2`.
///
/// Output has `len - 2` entries (endpoints excluded).
pub fn central_diff2(values: &[f64], spacing: f64) -> Result<Vec<f64>> {
    if values.len() < 3 {
        return Err(Error::TooFewSamples(values.len()));
    }
    let h2 = spacing * spacing;
    Ok(values
        .windows(3)
        .map(|w| (w[0] - 2.0 * w[1] + w[2]) / h2)
        .collect())
}
