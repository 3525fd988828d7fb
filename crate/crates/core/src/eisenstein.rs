//! The completed real-analytic Eisenstein series E*(tau, s), its weight-2
//! descendant E2 = (1/(2 pi i)) d/dtau E*, and the Fourier coefficients of
//! E2 and E2' at s = 1.
//!
//! Two independent evaluation routes are provided for E*:
//! - `e_star_lattice`: the raw lattice sum over (c, d), valid for s > 1;
//!   box truncation with O(radius^{2-2s}) tail. `e_star_lattice_extrapolated`
//!   removes the leading tail terms by Richardson extrapolation in the radius.
//! - `e_star_fourier`: constant term from completed zeta values plus a
//!   K-Bessel sum, valid on the whole s-line away from s in {0, 1/2, 1}.
//!
//! The closed coefficient formulas at s = 1:
//!   a(v,1,m)  = sigma(m) for m > 0; -1/24 + 1/(8 pi v) for m = 0; 0 for m < 0
//!   a'(v,1,m) = sigma(m)/(4 pi m v) + 2 sum d log d - sigma(m) log m   (m > 0)
//!             = sigma(|m|)(Ei(-4 pi |m| v) + e^{-4 pi |m| v}/(4 pi |m| v)) (m < 0)
//! and the modified-series combinations A = 12 a,
//! A' = -48(zeta'(-1)/zeta(-1) + 1/2) a + 12 a'.

use crate::arith::{self, divisor_profile};
use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{self, Constants};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// The modular variable tau = u + iv, v > 0.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TauPoint {
    pub u: f64,
    pub v: f64,
}

impl TauPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !u.is_finite() {
            return Err(Error::domain("TauPoint", format!("need v > 0, got tau = {u} + {v}i")));
        }
        Ok(TauPoint { u, v })
    }
}

/// The Eisenstein spectral variable. Named apart from the boundary ratio
/// coordinate, which also goes by "s" in the hyperbolic parametrization.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SpectralParam {
    pub s_spec: f64,
}

impl SpectralParam {
    pub fn new(s_spec: f64) -> Result<Self> {
        if !s_spec.is_finite() {
            return Err(Error::domain("SpectralParam", "s must be finite"));
        }
        Ok(SpectralParam { s_spec })
    }
}

// ---------------------------------------------------------------------------
// E* evaluation routes
// ---------------------------------------------------------------------------

fn lattice_sum(tau: TauPoint, s: f64, radius: i64) -> f64 {
    let (u, v) = (tau.u, tau.v);
    let mut sum = 0.0;
    // fast path for the half-integer exponent used by the two-route checks
    let half_integer = (2.0 * s - 3.0).abs() < 1e-15;
    for c in 1..=radius {
        let cf = c as f64;
        let cu = cf * u;
        let cv2 = (cf * v) * (cf * v);
        let mut row = 0.0;
        for d in -radius..=radius {
            let re = cu + d as f64;
            let q = re * re + cv2;
            row += if half_integer { 1.0 / (q * q.sqrt()) } else { q.powf(-s) };
        }
        sum += row;
    }
    sum
}

/// Raw truncated lattice sum
///   E*(tau,s) = pi^{-s} Gamma(s) [ v^s zeta(2s) + v^s sum_{1<=c<=R} sum_{|d|<=R} |c tau + d|^{-2s} ].
///
/// Requires s > 1 (absolute convergence). The box truncation leaves a tail
/// of order radius^{2-2s}.
pub fn e_star_lattice(tau: TauPoint, s: SpectralParam, radius: i64) -> Result<f64> {
    let sv = s.s_spec;
    if !(sv > 1.0) {
        return Err(Error::domain(
            "e_star_lattice",
            format!("lattice sum needs s > 1, got {sv}; use the Fourier route instead"),
        ));
    }
    if radius < 1 {
        return Err(Error::domain("e_star_lattice", "radius must be positive"));
    }
    let e = tau.v.powf(sv) * (specfun::zeta(2.0 * sv)? + lattice_sum(tau, sv, radius));
    Ok(PI.powf(-sv) * specfun::gamma(sv)? * e)
}

/// Lattice sum with the O(1/R) and O(1/R^2) truncation tails removed by
/// Richardson extrapolation over radii (R, 2R, 4R).
pub fn e_star_lattice_extrapolated(tau: TauPoint, s: SpectralParam, base_radius: i64) -> Result<f64> {
    let v1 = e_star_lattice(tau, s, base_radius)?;
    let v2 = e_star_lattice(tau, s, 2 * base_radius)?;
    let v4 = e_star_lattice(tau, s, 4 * base_radius)?;
    Ok((8.0 * v4 - 6.0 * v2 + v1) / 3.0)
}

/// Fourier route:
///   E*(tau,s) = v^s zeta*(2s) + v^{1-s} zeta*(2s-1)
///             + 4 sqrt(v) sum_{n>=1} sigma*_{s-1/2}(n) K_{s-1/2}(2 pi n v) cos(2 pi n u).
///
/// Valid for all real s away from the constant-term poles s in {0, 1/2, 1};
/// the K-Bessel tail is exponentially small beyond n ~ 1/v.
pub fn e_star_fourier(tau: TauPoint, s: SpectralParam, n_terms: i64) -> Result<f64> {
    let sv = s.s_spec;
    let (u, v) = (tau.u, tau.v);
    let mut total = v.powf(sv) * specfun::zeta_star(2.0 * sv)?
        + v.powf(1.0 - sv) * specfun::zeta_star(2.0 * sv - 1.0)?;
    let nu = sv - 0.5;
    for n in 1..=n_terms {
        let t = 2.0 * PI * n as f64 * v;
        if t > 700.0 {
            break;
        }
        let term = 4.0 * v.sqrt()
            * arith::sigma_star(nu, n)?
            * specfun::bessel_k(nu, t)?
            * (2.0 * PI * n as f64 * u).cos();
        total += term;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Appendix integrals and constant terms
// ---------------------------------------------------------------------------

/// The four closed forms at s = 1 behind the m-th Fourier coefficient,
/// with alpha = 2 pi |m| v:
///   I_m(v,1)  = e^{-a}/a
///   J_m(v,1)  = e^{-a}(1/a + 1/a^2)
///   I'_m(v,1) = e^{a}(-Ei(-2a))/a - e^{-a}(log(a/2) + gamma)/a
///   J'_m(v,1) = e^{a} Ei(-2a)(1/a - 1/a^2) + e^{-a}(2 - (log(a/2)+gamma)(1+a))/a^2
#[derive(Debug, Clone, Copy)]
pub struct AppendixIntegrals {
    pub i_m1: f64,
    pub j_m1: f64,
    pub i_m1_prime: f64,
    pub j_m1_prime: f64,
}

pub fn appendix_integrals(v: f64, m: i64) -> Result<AppendixIntegrals> {
    if !(v > 0.0) || m == 0 {
        return Err(Error::domain("appendix_integrals", "need v > 0 and m != 0"));
    }
    let a = 2.0 * PI * m.abs() as f64 * v;
    let ea = (-a).exp();
    let g = specfun::EULER_GAMMA;
    // e^{a} (-Ei(-2a)) = e^{-a} * [e^{2a} E1(2a)], overflow-free
    let e1s = specfun::e1_scaled(2.0 * a)?;
    let i_m1 = ea / a;
    let j_m1 = ea * (1.0 / a + 1.0 / (a * a));
    let i_m1_prime = ea / a * (e1s - ((a / 2.0).ln() + g));
    let j_m1_prime =
        ea * (-e1s * (1.0 / a - 1.0 / (a * a)) + (2.0 - ((a / 2.0).ln() + g) * (1.0 + a)) / (a * a));
    Ok(AppendixIntegrals { i_m1, j_m1, i_m1_prime, j_m1_prime })
}

/// I_m(v,s) = int_1^inf e^{-2 pi |m| v r} (r^2-1)^{s-1} dr by quadrature,
/// for the general-s assembly of E2. The (r^2-1)^{s-1} endpoint is
/// integrable for s > 0 and handled adaptively.
pub fn i_m_general(v: f64, m: i64, s: f64, rel_tol: f64) -> Result<f64> {
    if !(v > 0.0) || m == 0 || s <= 0.0 {
        return Err(Error::domain("i_m_general", "need v > 0, m != 0, s > 0"));
    }
    let a = 2.0 * PI * m.abs() as f64 * v;
    let f = move |r: f64| (-a * r).exp() * (r * r - 1.0).powf(s - 1.0);
    Ok(quad::adaptive_upper_inf(f, 1.0, 0.0, rel_tol).value)
}

/// J_m(v,s) = int_1^inf e^{-2 pi |m| v r} (r^2-1)^{s-1} r dr.
pub fn j_m_general(v: f64, m: i64, s: f64, rel_tol: f64) -> Result<f64> {
    if !(v > 0.0) || m == 0 || s <= 0.0 {
        return Err(Error::domain("j_m_general", "need v > 0, m != 0, s > 0"));
    }
    let a = 2.0 * PI * m.abs() as f64 * v;
    let f = move |r: f64| (-a * r).exp() * (r * r - 1.0).powf(s - 1.0) * r;
    Ok(quad::adaptive_upper_inf(f, 1.0, 0.0, rel_tol).value)
}

/// Closed constant terms at s = 1:
///   c0_check       = pi/6 - 1/(2v)
///   c0_check_prime = (pi/6)(24 zeta'(-1) + gamma - 1 + log(4 pi v))
///                  + (1/(2v))(-gamma + log(4 pi v))
#[derive(Debug, Clone, Copy)]
pub struct ConstantTerm {
    pub c0_check: f64,
    pub c0_check_prime: f64,
}

pub fn constant_term(v: f64, constants: &Constants) -> Result<ConstantTerm> {
    if !(v > 0.0) {
        return Err(Error::domain("constant_term", "need v > 0"));
    }
    let g = constants.euler_gamma;
    let lv = (4.0 * PI * v).ln();
    Ok(ConstantTerm {
        c0_check: PI / 6.0 - 1.0 / (2.0 * v),
        c0_check_prime: (PI / 6.0) * (24.0 * constants.zeta_prime_neg1 + g - 1.0 + lv)
            + (1.0 / (2.0 * v)) * (-g + lv),
    })
}

/// The v-derivative of the Eisenstein constant term at general s:
///   c0_check(v,s) = s v^{s-1} zeta*(2s) + (1-s) v^{-s} zeta*(2s-1).
///
/// At s = 1 the pole of zeta*(2s-1) is cancelled by the (1-s) prefactor;
/// the limit -1/(2v) is substituted analytically there.
pub fn c0_check_at(v: f64, s: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::domain("c0_check_at", "need v > 0"));
    }
    let first = s * v.powf(s - 1.0) * specfun::zeta_star(2.0 * s)?;
    let second = if s == 1.0 {
        -1.0 / (2.0 * v)
    } else {
        (1.0 - s) * v.powf(-s) * specfun::zeta_star(2.0 * s - 1.0)?
    };
    Ok(first + second)
}

// ---------------------------------------------------------------------------
// Coefficients at s = 1
// ---------------------------------------------------------------------------

/// a(v,1,m): the m-th Fourier coefficient of E2(tau,1).
pub fn coeff_a(v: f64, m: i64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::domain("coeff_a", "need v > 0"));
    }
    Ok(match m {
        m if m > 0 => divisor_profile(m)?.sigma as f64,
        0 => -1.0 / 24.0 + 1.0 / (8.0 * PI * v),
        _ => 0.0,
    })
}

/// a'(v,1,m): the m-th Fourier coefficient of the s-derivative of E2 at s = 1.
///
/// For m > 0 the sigma-derivative term enters with the analytic sign,
/// sigma(m) sigma'(m)/sigma(m) = 2 sum_{d|m} d log d - sigma(m) log m.
pub fn coeff_a_prime(v: f64, m: i64, constants: &Constants) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::domain("coeff_a_prime", "need v > 0"));
    }
    if m > 0 {
        let p = divisor_profile(m)?;
        let sigma = p.sigma as f64;
        let mut dlogd = 0.0;
        for &d in &p.divisors {
            dlogd += d as f64 * (d as f64).ln();
        }
        return Ok(sigma / (4.0 * PI * m as f64 * v) + 2.0 * dlogd - sigma * (m as f64).ln());
    }
    if m == 0 {
        let g = constants.euler_gamma;
        let lv = (4.0 * PI * v).ln();
        return Ok(-(1.0 / 24.0) * (24.0 * constants.zeta_prime_neg1 + g - 1.0 + lv)
            - (1.0 / (8.0 * PI * v)) * (-g + lv));
    }
    let am = (-m) as f64;
    let sigma = divisor_profile(m)?.sigma as f64;
    let x = 4.0 * PI * am * v;
    let ei = specfun::exp_integral_ei(-x)?;
    Ok(sigma * (ei + (-x).exp() / x))
}

/// (A(v,1,m), A'(v,1,m)) of the modified series:
///   A = 12 a,  A' = -48(zeta'(-1)/zeta(-1) + 1/2) a + 12 a'.
pub fn coeff_big_a_and_prime(v: f64, m: i64, constants: &Constants) -> Result<(f64, f64)> {
    let a = coeff_a(v, m)?;
    let ap = coeff_a_prime(v, m, constants)?;
    let big_a = 12.0 * a;
    let big_a_prime = -48.0 * (constants.zeta_log_deriv_neg1 + 0.5) * a + 12.0 * ap;
    Ok((big_a, big_a_prime))
}

// ---------------------------------------------------------------------------
// E2 evaluation routes
// ---------------------------------------------------------------------------

/// E2(tau,s) assembled from the Fourier display
///   E2 = -(1/4pi)( c0_check(v,s)
///        + sum_{m>0} [(s/v) c_m I_m - 2 pi m c_m (I_m + J_m)] e(mu)
///        + sum_{m<0} [(s/v) c_m I_m + 2 pi |m| c_m (I_m - J_m)] e(mu) ),
/// with I_m, J_m by quadrature. Returns (real, imaginary) parts.
pub fn e2_fourier_closed(tau: TauPoint, s: SpectralParam, n_terms: i64) -> Result<(f64, f64)> {
    let sv = s.s_spec;
    let (u, v) = (tau.u, tau.v);
    let gamma_s = specfun::gamma(sv)?;
    let mut re = c0_check_at(v, sv)?;
    let mut im = 0.0;
    for n in 1..=n_terms {
        for m in [n, -n] {
            let am = m.abs() as f64;
            let alpha = 2.0 * PI * am * v;
            if alpha > 700.0 {
                continue;
            }
            let c = 2.0 * arith::sigma_star(sv - 0.5, m)? * (v * am * PI).powf(sv)
                / (gamma_s * am.sqrt());
            let i_val = i_m_general(v, m, sv, 1e-12)?;
            let j_val = j_m_general(v, m, sv, 1e-12)?;
            let coef = if m > 0 {
                (sv / v) * c * i_val - 2.0 * PI * am * c * (i_val + j_val)
            } else {
                (sv / v) * c * i_val + 2.0 * PI * am * c * (i_val - j_val)
            };
            let phase = 2.0 * PI * m as f64 * u;
            re += coef * phase.cos();
            im += coef * phase.sin();
        }
    }
    Ok((-re / (4.0 * PI), -im / (4.0 * PI)))
}

/// E2(tau,s) by central differences of the Fourier-route E*:
///   E2 = (-1/4pi)(d_v + i d_u) E*(tau,s).
/// Returns (real, imaginary) parts; the imaginary part is the u-derivative.
pub fn e2_numeric(tau: TauPoint, s: SpectralParam, n_terms: i64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::domain("e2_numeric", "need h > 0"));
    }
    let dv = (e_star_fourier(TauPoint::new(tau.u, tau.v + h)?, s, n_terms)?
        - e_star_fourier(TauPoint::new(tau.u, tau.v - h)?, s, n_terms)?)
        / (2.0 * h);
    let du = (e_star_fourier(TauPoint::new(tau.u + h, tau.v)?, s, n_terms)?
        - e_star_fourier(TauPoint::new(tau.u - h, tau.v)?, s, n_terms)?)
        / (2.0 * h);
    Ok((-dv / (4.0 * PI), -du / (4.0 * PI)))
}

/// Trapezoid extraction of the m-th u-Fourier mode of a 1-periodic function
/// given as u -> (re, im). Spectrally accurate for smooth periodic data.
pub fn extract_fourier_mode<F>(f: F, m: i64, nodes: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 0..nodes {
        let u = k as f64 / nodes as f64;
        let (fr, fi) = f(u)?;
        let phase = -2.0 * PI * m as f64 * u;
        let (c, s) = (phase.cos(), phase.sin());
        re += fr * c - fi * s;
        im += fr * s + fi * c;
    }
    Ok((re / nodes as f64, im / nodes as f64))
}

// ---------------------------------------------------------------------------
// Coefficient table
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CoeffEntry {
    pub a: f64,
    pub a_prime: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "A_prime")]
    pub big_a_prime: f64,
}

/// Table of (a, a', A, A') for m in [-m_max, m_max] at fixed v.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CoefficientTable {
    pub v: f64,
    pub entries: BTreeMap<i64, CoeffEntry>,
    pub constants: Constants,
}

impl CoefficientTable {
    pub fn compute(v: f64, m_max: i64, constants: &Constants) -> Result<Self> {
        if m_max < 1 {
            return Err(Error::domain("CoefficientTable", "m_max must be >= 1"));
        }
        let mut entries = BTreeMap::new();
        for m in -m_max..=m_max {
            let a = coeff_a(v, m)?;
            let a_prime = coeff_a_prime(v, m, constants)?;
            let (big_a, big_a_prime) = coeff_big_a_and_prime(v, m, constants)?;
            entries.insert(m, CoeffEntry { a, a_prime, big_a, big_a_prime });
        }
        Ok(CoefficientTable { v, entries, constants: *constants })
    }

    /// CSV with the fixed header "m,a,a_prime,A,A_prime".
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,a,a_prime,A,A_prime\n");
        for (m, e) in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                m, e.a, e.a_prime, e.big_a, e.big_a_prime
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> Constants {
        Constants::compute()
    }

    #[test]
    fn coeff_a_three_cases() {
        assert_eq!(coeff_a(1.0, 6).unwrap(), 12.0);
        assert_eq!(coeff_a(1.0, -3).unwrap(), 0.0);
        let a0 = coeff_a(1.0, 0).unwrap();
        assert!((a0 - (-1.0 / 24.0 + 1.0 / (8.0 * PI))).abs() < 1e-16);
    }

    #[test]
    fn coeff_a_prime_positive_m() {
        // m = 1, v = 1: sigma'(1) = 0, so a' = 1/(4 pi)
        let v = coeff_a_prime(1.0, 1, &consts()).unwrap();
        assert!((v - 1.0 / (4.0 * PI)).abs() < 1e-15, "{v}");
    }

    #[test]
    fn coeff_a_prime_negative_m() {
        // m = -1, v = 1: Ei(-4 pi) + e^{-4 pi}/(4 pi)
        let x = 4.0 * PI;
        let expect = specfun::exp_integral_ei(-x).unwrap() + (-x).exp() / x;
        let got = coeff_a_prime(1.0, -1, &consts()).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-13);
    }

    #[test]
    fn coeff_a_prime_zero_vs_c0_prime() {
        // a'(v,1,0) = -(1/4pi) c0_check_prime(v,1)
        let c = consts();
        for &v in &[0.5, 1.0, 2.0] {
            let ap = coeff_a_prime(v, 0, &c).unwrap();
            let ct = constant_term(v, &c).unwrap();
            assert!(
                (ap + ct.c0_check_prime / (4.0 * PI)).abs() < 1e-14,
                "v = {v}"
            );
        }
    }

    #[test]
    fn big_a_values() {
        let c = consts();
        let (a, ap) = coeff_big_a_and_prime(1.0, 6, &c).unwrap();
        assert_eq!(a, 144.0);
        assert!(ap.is_finite());
        // A'(1,1,1) = 576 zeta'(-1) - 24 + 3/pi
        let (_, ap1) = coeff_big_a_and_prime(1.0, 1, &c).unwrap();
        let expect = 576.0 * c.zeta_prime_neg1 - 24.0 + 3.0 / PI;
        assert!((ap1 - expect).abs() < 1e-10, "{ap1} vs {expect}");
        assert!((ap1 + 118.327_649_112_908_36).abs() < 1e-9, "{ap1}");
    }

    #[test]
    fn big_a_prime_negative_m_matches_display() {
        // m < 0: A' = 12 sigma(|m|)(Ei(-4 pi |m| v) + e^{-4 pi |m| v}/(4 pi |m| v))
        let c = consts();
        let (v, m) = (1.0, -2i64);
        let x = 4.0 * PI * 2.0;
        let expect = 12.0 * 3.0 * (specfun::exp_integral_ei(-x).unwrap() + (-x).exp() / x);
        let (_, ap) = coeff_big_a_and_prime(v, m, &c).unwrap();
        assert!(((ap - expect) / expect).abs() < 1e-13);
    }

    #[test]
    fn decay_bound_for_negative_m() {
        // |a'(v,1,m)| <= sigma(|m|) e^{-4 pi |m| v} (1 + 1/(4 pi |m| v))
        let c = consts();
        for m in [-1i64, -2, -3, -5] {
            for &v in &[0.25, 0.5, 1.0] {
                let am = (-m) as f64;
                let x = 4.0 * PI * am * v;
                let bound = divisor_profile(m).unwrap().sigma as f64 * (-x).exp() * (1.0 + 1.0 / x);
                let got = coeff_a_prime(v, m, &c).unwrap().abs();
                assert!(got <= bound * (1.0 + 1e-12), "m={m}, v={v}");
            }
        }
    }

    #[test]
    fn appendix_closed_forms_basic() {
        // v = 1, m = 1: alpha = 2 pi, I = e^{-2 pi}/(2 pi)
        let a = appendix_integrals(1.0, 1).unwrap();
        let alpha = 2.0 * PI;
        assert!((a.i_m1 - (-alpha).exp() / alpha).abs() < 1e-18);
        // I - J = -e^{-alpha}/alpha^2 at (v, m) = (1, 3)
        let b = appendix_integrals(1.0, 3).unwrap();
        let alpha3 = 6.0 * PI;
        let expect = -(-alpha3).exp() / (alpha3 * alpha3);
        assert!(((b.i_m1 - b.j_m1) - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn constant_term_values() {
        let c = consts();
        let ct = constant_term(1.0, &c).unwrap();
        assert!((ct.c0_check - (PI / 6.0 - 0.5)).abs() < 1e-16);
        // continuation route at s = 1 agrees to zeta-engine accuracy
        let lim = c0_check_at(1.0, 1.0).unwrap();
        assert!(((lim - ct.c0_check) / ct.c0_check).abs() < 1e-13);
    }

    #[test]
    fn constant_term_derivative_vs_finite_difference() {
        let c = consts();
        for &v in &[0.5, 1.0, 2.0] {
            let closed = constant_term(v, &c).unwrap().c0_check_prime;
            let h = 1e-4;
            let fd = (c0_check_at(v, 1.0 + h).unwrap() - c0_check_at(v, 1.0 - h).unwrap())
                / (2.0 * h);
            assert!(
                ((closed - fd) / closed).abs() < 1e-5,
                "v = {v}: {closed} vs {fd}"
            );
        }
    }

    #[test]
    fn e_star_fourier_symmetry() {
        let tau = TauPoint::new(0.2, 1.4).unwrap();
        for &s in &[0.3f64, 0.45] {
            let a = e_star_fourier(tau, SpectralParam::new(s).unwrap(), 40).unwrap();
            let b = e_star_fourier(tau, SpectralParam::new(1.0 - s).unwrap(), 40).unwrap();
            assert!(((a - b) / a).abs() < 1e-9, "s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn e_star_large_v_constant_term_dominates() {
        let tau = TauPoint::new(0.0, 8.0).unwrap();
        let s = SpectralParam::new(1.5).unwrap();
        let full = e_star_fourier(tau, s, 40).unwrap();
        let constant = 8.0f64.powf(1.5) * specfun::zeta_star(3.0).unwrap()
            + 8.0f64.powf(-0.5) * specfun::zeta_star(2.0).unwrap();
        assert!(((full - constant) / full).abs() < 1e-10);
    }

    #[test]
    fn e_star_lattice_requires_s_above_one() {
        let tau = TauPoint::new(0.0, 1.0).unwrap();
        assert!(e_star_lattice(tau, SpectralParam::new(0.9).unwrap(), 50).is_err());
    }

    #[test]
    fn lattice_vs_fourier_at_s_three_halves() {
        let tau = TauPoint::new(0.0, 1.0).unwrap();
        let s = SpectralParam::new(1.5).unwrap();
        let lat = e_star_lattice_extrapolated(tau, s, 125).unwrap();
        let fou = e_star_fourier(tau, s, 40).unwrap();
        assert!(((lat - fou) / fou).abs() < 1e-6, "{lat} vs {fou}");
    }

    #[test]
    fn lattice_u_periodicity() {
        let s = SpectralParam::new(1.5).unwrap();
        let a = e_star_lattice_extrapolated(TauPoint::new(0.2, 1.3).unwrap(), s, 100).unwrap();
        let b = e_star_lattice_extrapolated(TauPoint::new(1.2, 1.3).unwrap(), s, 100).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn lattice_modular_inversion() {
        // tau -> -1/tau at tau = 0.1 + 1.1i, raw radius 800 per contract
        let s = SpectralParam::new(1.5).unwrap();
        let (u, v) = (0.1, 1.1);
        let norm = u * u + v * v;
        let a = e_star_lattice(TauPoint::new(u, v).unwrap(), s, 800).unwrap();
        let b = e_star_lattice(TauPoint::new(-u / norm, v / norm).unwrap(), s, 800).unwrap();
        assert!((a - b).abs() < 1e-5 * a.abs(), "{a} vs {b}");
    }

    #[test]
    fn e2_routes_agree() {
        let tau = TauPoint::new(0.1, 1.2).unwrap();
        let s = SpectralParam::new(1.4).unwrap();
        let (cr, ci) = e2_fourier_closed(tau, s, 12).unwrap();
        let (nr, ni) = e2_numeric(tau, s, 30, 1e-6).unwrap();
        assert!(((cr - nr) / cr).abs() < 1e-4, "re: {cr} vs {nr}");
        assert!(((ci - ni) / ci).abs() < 1e-4, "im: {ci} vs {ni}");
    }

    #[test]
    fn e2_fourier_mode_tends_to_coeff_a() {
        // extract modes of E2(tau, s) at s close to 1 and compare sigma(m)
        let s = SpectralParam::new(1.0005).unwrap();
        let v = 1.0;
        for m in [1i64, 2] {
            let (re, im) = extract_fourier_mode(
                |u| e2_fourier_closed(TauPoint::new(u, v)?, s, 6),
                m,
                256,
            )
            .unwrap();
            let scaled = re / (-2.0 * PI * m as f64 * v).exp();
            let target = coeff_a(v, m).unwrap();
            assert!(
                ((scaled - target) / target).abs() < 1e-3,
                "m = {m}: {scaled} vs {target}"
            );
            assert!(im.abs() < 1e-6, "imaginary part {im}");
        }
    }

    #[test]
    fn coefficient_table_consistency() {
        let c = consts();
        let table = CoefficientTable::compute(1.0, 6, &c).unwrap();
        assert_eq!(table.entries.len(), 13);
        for (&m, e) in &table.entries {
            assert_eq!(e.big_a, 12.0 * e.a, "m = {m}");
            let want = -48.0 * (c.zeta_log_deriv_neg1 + 0.5) * e.a + 12.0 * e.a_prime;
            assert!((e.big_a_prime - want).abs() < 1e-12, "m = {m}");
            if m < 0 {
                assert_eq!(e.a, 0.0);
            }
        }
        let csv = table.to_csv();
        assert!(csv.starts_with("m,a,a_prime,A,A_prime\n"));
    }
}
