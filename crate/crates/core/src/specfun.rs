//! Scalar special functions and shared constants.
//!
//! Everything here is pure f64 arithmetic: exponential integral on the
//! negative axis, modified Bessel K of real order, gamma/digamma, the
//! Riemann zeta function with its completed form, and erfc. The zeta
//! continuation uses Euler-Maclaurin summation; zeta'(-1) is produced
//! from zeta'(2) through the functional equation rather than hard-coded,
//! since the main-identity checks are only as exact as this constant.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Working precision and tolerance bundle threaded through numeric routines.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Precision {
    /// Requested decimal digits. The f64 engine delivers at most ~15.9;
    /// larger requests are honored by clamping tolerances at the f64 floor.
    pub working_digits: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Precision {
    pub fn new(working_digits: u32) -> Result<Self> {
        if working_digits < 15 {
            return Err(Error::Config(format!(
                "working_digits must be >= 15, got {working_digits}"
            )));
        }
        let eff = working_digits.min(15);
        let tol = 10f64.powi(-(eff as i32)).max(1e-15);
        Ok(Precision { working_digits, abs_tol: tol, rel_tol: tol })
    }

    /// Digits actually deliverable by the f64 backend.
    pub fn effective_digits(&self) -> u32 {
        self.working_digits.min(15)
    }
}

impl Default for Precision {
    fn default() -> Self {
        // Requested 30 digits; tolerances sit at the f64 floor.
        Precision { working_digits: 30, abs_tol: 1e-12, rel_tol: 1e-12 }
    }
}

/// Constants every other module reads.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Constants {
    pub euler_gamma: f64,
    /// zeta(-1) = -1/12, exact.
    pub zeta_neg1: f64,
    /// zeta'(-1), computed from zeta'(2) via the functional equation.
    pub zeta_prime_neg1: f64,
    /// zeta'(-1)/zeta(-1) = -12 zeta'(-1).
    pub zeta_log_deriv_neg1: f64,
    /// kappa = pi/3, the hyperbolic volume of the modular surface.
    pub kappa: f64,
    /// c = 18/pi^2, the Chern-form volume factor; kappa^2 * c = 2.
    pub c_vol: f64,
}

impl Constants {
    pub fn compute() -> Self {
        // zeta(s) = chi(s) zeta(1-s), chi(s) = 2^s pi^{s-1} sin(pi s/2) gamma(1-s).
        // Differentiating at s = -1 (where cot(-pi/2) = 0, psi(2) = 1 - gamma):
        //   zeta'(-1) = -(ln 2pi - 1 + gamma)/12 + zeta'(2)/(2 pi^2).
        let (_, zp2) = zeta_em_with_derivative(2.0);
        let zeta_prime_neg1 =
            -((2.0 * PI).ln() - 1.0 + EULER_GAMMA) / 12.0 + zp2 / (2.0 * PI * PI);
        Constants {
            euler_gamma: EULER_GAMMA,
            zeta_neg1: -1.0 / 12.0,
            zeta_prime_neg1,
            zeta_log_deriv_neg1: -12.0 * zeta_prime_neg1,
            kappa: PI / 3.0,
            c_vol: 18.0 / (PI * PI),
        }
    }
}

// ---------------------------------------------------------------------------
// Exponential integral
// ---------------------------------------------------------------------------

/// E1(t) for t > 0 by the alternating power series; cancellation-limited,
/// used below the continued-fraction switchover.
fn e1_series(t: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -t / k as f64;
        let contrib = -term / k as f64;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    -EULER_GAMMA - t.ln() + sum
}

/// e^t E1(t) for t >= switchover, by the modified Lentz continued fraction
///   E1(t) = e^{-t} / (t + 1 - 1^2/(t + 3 - 2^2/(t + 5 - ...))).
fn e1_cf_scaled(t: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = t + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for k in 1..200 {
        let a = -(k as f64) * (k as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

const E1_SWITCH: f64 = 5.0;

/// Scaled exponential integral e^t E1(t), t > 0. Stable for all t.
pub fn e1_scaled(t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::domain("e1_scaled", format!("t must be > 0, got {t}")));
    }
    if t < E1_SWITCH {
        Ok(t.exp() * e1_series(t))
    } else {
        Ok(e1_cf_scaled(t))
    }
}

/// Exponential integral Ei(x) on the negative axis.
///
/// Only x < 0 is supported: Ei(x) = -E1(-x) there. Monotone increasing,
/// tending to 0- as x -> -inf and to -inf as x -> 0-.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::domain("exp_integral_ei", format!("x must be < 0, got {x}")));
    }
    let t = -x;
    if t < E1_SWITCH {
        Ok(-e1_series(t))
    } else {
        Ok(-((-t).exp() * e1_cf_scaled(t)))
    }
}

// ---------------------------------------------------------------------------
// Gamma and digamma
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function on the real line (Lanczos, reflection for x < 1/2).
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "gamma", at: x });
    }
    if x < 0.5 {
        // gamma(x) = pi / (sin(pi x) gamma(1 - x))
        return Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, coeff) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += coeff / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(SQRT_2PI * t.powf(z + 0.5) * (-t).exp() * acc)
}

/// B_{2k}/(2k) for k = 1..7, the digamma asymptotic coefficients.
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Digamma psi(x) = gamma'(x)/gamma(x): recurrence into x >= 8, then the
/// asymptotic series; reflection for x < 0.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "digamma", at: x });
    }
    if x < 0.0 {
        // psi(x) = psi(1-x) - pi cot(pi x)
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut result = 0.0;
    let mut xx = x;
    while xx < 8.0 {
        result -= 1.0 / xx;
        xx += 1.0;
    }
    result += xx.ln() - 0.5 / xx;
    let inv2 = 1.0 / (xx * xx);
    let mut p = inv2;
    for &c in &DIGAMMA_ASYMP {
        result -= c * p;
        p *= inv2;
    }
    Ok(result)
}

/// (gamma(x), psi(x)) in one call.
pub fn gamma_and_digamma(x: f64) -> Result<(f64, f64)> {
    Ok((gamma(x)?, digamma(x)?))
}

// ---------------------------------------------------------------------------
// Riemann zeta
// ---------------------------------------------------------------------------

/// Bernoulli numbers B_{2k}, k = 1..14.
const BERNOULLI_2K: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

const EM_N: usize = 30;

/// Euler-Maclaurin evaluation of (zeta(s), zeta'(s)).
///
/// Valid for real s > -20 or so away from s = 1; the derivative is the
/// exact term-by-term s-derivative of the same expansion.
fn zeta_em_with_derivative(s: f64) -> (f64, f64) {
    let n = EM_N as f64;
    let ln_n = n.ln();
    let mut val = 0.0;
    let mut der = 0.0;
    for k in 1..EM_N {
        let kf = k as f64;
        let t = kf.powf(-s);
        val += t;
        der -= kf.ln() * t;
    }
    let n_pow = n.powf(-s);
    // N^{1-s}/(s-1)
    let tail = n * n_pow / (s - 1.0);
    val += tail;
    der += tail * (-ln_n - 1.0 / (s - 1.0));
    // N^{-s}/2
    val += 0.5 * n_pow;
    der -= 0.5 * ln_n * n_pow;
    // Bernoulli corrections: B_{2k}/(2k)! * (s)(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut fact = 1.0f64; // (2k)!
    let mut poch = 1.0f64; // rising product
    let mut dpoch = 0.0f64; // its s-derivative
    let mut j = 0usize; // next factor index: (s + j)
    let mut n_shift = n * n_pow; // N^{-s-2k+1}, starts at N^{1-s}
    for (k, &b2k) in BERNOULLI_2K.iter().enumerate() {
        let k1 = k + 1;
        fact *= (2 * k1 - 1) as f64 * (2 * k1) as f64;
        // extend the rising product to 2k1 - 1 factors
        while j < 2 * k1 - 1 {
            let f = s + j as f64;
            dpoch = dpoch * f + poch;
            poch *= f;
            j += 1;
        }
        n_shift /= n * n;
        let c = b2k / fact;
        val += c * poch * n_shift;
        der += c * (dpoch - poch * ln_n) * n_shift;
    }
    (val, der)
}

/// Riemann zeta on the real line, s != 1.
///
/// Euler-Maclaurin for s >= 0, functional-equation reflection for s < 0.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole { func: "zeta", at: 1.0 });
    }
    if s < 0.0 {
        // zeta(s) = 2^s pi^{s-1} sin(pi s/2) gamma(1-s) zeta(1-s)
        let chi = 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(1.0 - s)?;
        return Ok(chi * zeta(1.0 - s)?);
    }
    if s > 55.0 {
        return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s) + 4f64.powf(-s));
    }
    Ok(zeta_em_with_derivative(s).0)
}

/// zeta'(s) for s >= 0, s != 1 (term-by-term Euler-Maclaurin derivative).
pub fn zeta_prime(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole { func: "zeta", at: 1.0 });
    }
    if s < 0.0 {
        return Err(Error::domain("zeta_prime", "derivative route implemented for s >= 0 only"));
    }
    Ok(zeta_em_with_derivative(s).1)
}

/// Completed zeta: zeta*(s) = pi^{-s/2} gamma(s/2) zeta(s).
///
/// Simple poles at s = 0 and s = 1; satisfies zeta*(s) = zeta*(1-s).
pub fn zeta_star(s: f64) -> Result<f64> {
    if s == 0.0 || s == 1.0 {
        return Err(Error::Pole { func: "zeta_star", at: s });
    }
    Ok(PI.powf(-s / 2.0) * gamma(s / 2.0)? * zeta(s)?)
}

// ---------------------------------------------------------------------------
// Modified Bessel K
// ---------------------------------------------------------------------------

/// K_nu(t) = int_0^inf e^{-t cosh u} cosh(nu u) du, t > 0, real order.
///
/// Trapezoidal sum in u: the integrand extends to an even analytic function
/// with exponential decay, so the equally spaced sum converges faster than
/// any power of the step. Symmetric in nu by construction.
pub fn bessel_k(nu: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("bessel_k", format!("t must be > 0, got {t}")));
    }
    let h = 0.2;
    let mut sum = 0.5; // u = 0 term: e^{-t} cosh(0), scaled by e^{t} below
    let scale = -t; // accumulate exp(t(1 - cosh u)) * cosh(nu u) against e^{-t}
    let mut k = 1usize;
    loop {
        let u = h * k as f64;
        let expo = scale * ((u.cosh()) - 1.0);
        let term = expo.exp() * (nu * u).cosh();
        sum += term;
        if term < 1e-18 * sum && u > 1.0 {
            break;
        }
        if expo < -760.0 {
            break;
        }
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    Ok(h * sum * (-t).exp())
}

// ---------------------------------------------------------------------------
// erfc
// ---------------------------------------------------------------------------

/// Complementary error function, ~1e-15 relative accuracy.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 1.5 {
        // erf(x) = (2x/sqrt(pi)) e^{-x^2} sum (2x^2)^n/(2n+1)!!
        let x2 = 2.0 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = 1u32;
        loop {
            term *= x2 / (2 * n + 1) as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            n += 1;
        }
        let erf = 2.0 / PI.sqrt() * x * (-x * x).exp() * sum;
        1.0 - erf
    } else {
        // contracted Laplace continued fraction:
        // sqrt(pi) x e^{x^2} erfc(x) = x^2/(x^2 + 1/2 - q1/(x^2 + 5/2 - q2/(...)))
        // with q_n = n(n - 1/2); converges in < 50 terms for x >= 1.5
        let x2 = x * x;
        let tiny = 1e-300;
        let mut b = x2 + 0.5;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for n in 1..200 {
            let a = -(n as f64) * (n as f64 - 0.5);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-17 {
                break;
            }
        }
        x2 * h * (-x2).exp() / (PI.sqrt() * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ei_at_minus_one() {
        // int_1^inf e^{-t}/t dt = 0.219383934395520274...
        let v = exp_integral_ei(-1.0).unwrap();
        assert!((v + 0.219_383_934_395_520_27).abs() < 1e-14, "Ei(-1) = {v}");
    }

    #[test]
    fn ei_small_argument_series() {
        // -Ei(-x) = -gamma - log x + x - x^2/(2*2!) + ... at x = 0.1
        let x: f64 = 0.1;
        let mut series = -EULER_GAMMA - x.ln();
        let mut p = 1.0;
        for k in 1..=10 {
            p *= -x / k as f64;
            series -= p / k as f64;
        }
        let v = -exp_integral_ei(-x).unwrap();
        assert!((v - series).abs() < 1e-10, "{v} vs {series}");
    }

    #[test]
    fn ei_far_negative_bound() {
        // 0 < -Ei(-x) < e^{-x}/x for x > 0
        let v = exp_integral_ei(-50.0).unwrap();
        assert!(v < 0.0 && v.abs() < (-50.0f64).exp());
    }

    #[test]
    fn ei_rejects_nonnegative() {
        assert!(exp_integral_ei(0.0).is_err());
        assert!(exp_integral_ei(1.0).is_err());
    }

    #[test]
    fn ei_derivative_matches_exp_over_x() {
        // d/dx Ei(x) = e^x/x, central differences
        for &x in &[-0.5f64, -1.0, -2.0, -4.0, -5.5, -9.0, -20.0] {
            let h = 1e-6 * x.abs();
            let num = (exp_integral_ei(x + h).unwrap() - exp_integral_ei(x - h).unwrap())
                / (2.0 * h);
            let exact = x.exp() / x;
            assert!(
                ((num - exact) / exact).abs() < 1e-6,
                "x={x}: {num} vs {exact}"
            );
        }
    }

    #[test]
    fn e1_scaled_continuity_at_switch() {
        let below = e1_scaled(E1_SWITCH - 1e-9).unwrap();
        let above = e1_scaled(E1_SWITCH + 1e-9).unwrap();
        assert!(((below - above) / below).abs() < 1e-10);
    }

    #[test]
    fn bessel_k_half_closed_form() {
        // K_{1/2}(t) = sqrt(pi/(2t)) e^{-t}
        let v = bessel_k(0.5, 2.0).unwrap();
        let exact = (PI / 4.0).sqrt() * (-2.0f64).exp();
        assert!(((v - exact) / exact).abs() < 1e-13, "{v} vs {exact}");
    }

    #[test]
    fn bessel_k_symmetric_in_order() {
        let a = bessel_k(0.3, 2.0).unwrap();
        let b = bessel_k(-0.3, 2.0).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn bessel_k_positive_decreasing_in_t() {
        for &nu in &[0.0, 0.5, 0.9, 1.7] {
            let mut prev = f64::INFINITY;
            for i in 1..40 {
                let t = 0.25 * i as f64;
                let v = bessel_k(nu, t).unwrap();
                assert!(v > 0.0 && v < prev, "nu={nu}, t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let v = gamma(0.5).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn digamma_standard_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-13);
        let d = digamma(0.5).unwrap();
        assert!((d + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-12, "psi(1/2) = {d}");
    }

    #[test]
    fn gamma_pole_rejected() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
    }

    #[test]
    fn zeta_standard_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        // zeta(3) = 1.2020569031595942854...
        assert!((zeta(3.0).unwrap() - 1.202_056_903_159_594_3).abs() < 1e-14);
        // zeta(0.5) = -1.4603545088095868...
        assert!((zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-13);
    }

    #[test]
    fn zeta_prime_at_two() {
        // zeta'(2) = -0.9375482543158437537...
        let v = zeta_prime(2.0).unwrap();
        assert!((v + 0.937_548_254_315_843_75).abs() < 1e-13, "zeta'(2) = {v}");
    }

    #[test]
    fn zeta_star_values_and_symmetry() {
        let v = zeta_star(2.0).unwrap();
        assert!((v - PI / 6.0).abs() < 1e-14);
        let a = zeta_star(0.3).unwrap();
        let b = zeta_star(0.7).unwrap();
        assert!(((a - b) / a).abs() < 1e-10, "{a} vs {b}");
        assert!(zeta_star(0.0).is_err());
        assert!(zeta_star(1.0).is_err());
    }

    #[test]
    fn constants_invariants() {
        let c = Constants::compute();
        assert_eq!(c.zeta_neg1, -1.0 / 12.0);
        assert!((c.zeta_log_deriv_neg1 + 12.0 * c.zeta_prime_neg1).abs() < 1e-16);
        assert!((c.kappa * c.kappa * c.c_vol - 2.0).abs() < 1e-15);
        // literature value of zeta'(-1)
        assert!(
            (c.zeta_prime_neg1 + 0.165_421_143_700_450_93).abs() < 1e-13,
            "zeta'(-1) = {}",
            c.zeta_prime_neg1
        );
    }

    #[test]
    fn erfc_reference_values() {
        let cases = [
            (0.5, 0.479_500_122_186_953_46),
            (1.0, 0.157_299_207_050_285_13),
            (1.5, 0.033_894_853_524_689_272),
            (2.0, 0.004_677_734_981_047_266),
            (3.0, 2.209_049_699_858_544e-5),
        ];
        for (x, want) in cases {
            let got = erfc(x);
            assert!(((got - want) / want).abs() < 1e-12, "erfc({x}) = {got}");
        }
    }

    #[test]
    fn precision_validation() {
        assert!(Precision::new(14).is_err());
        let p = Precision::new(30).unwrap();
        assert_eq!(p.effective_digits(), 15);
    }
}
