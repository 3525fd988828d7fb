//! Boundary (cusp) part of the Green function: the B and I integrals in the
//! (s, t) parametrization, the summed kernels with corrected zeroth
//! coefficient, the three summation lemmata, and the log-T cancellation
//! behind finiteness of the m = 0 boundary integral.
//!
//! Coordinates: t = sqrt(y1 y2), s = sqrt(y1/y2). The ratio coordinate s
//! is unrelated to the Eisenstein spectral variable.

use crate::arith;
use crate::error::{Error, Result};
use crate::green::SurfacePoint;
use crate::quad;
use crate::specfun;
use std::f64::consts::PI;

/// Arguments of the boundary integrals B(v,s;b,c) and I(v,s;b,c).
#[derive(Debug, Clone, Copy)]
pub struct BoundaryParams {
    pub v: f64,
    pub s_ratio: f64,
    pub b: i64,
    pub c: i64,
}

impl BoundaryParams {
    pub fn new(v: f64, s_ratio: f64, b: i64, c: i64) -> Result<Self> {
        if !(v > 0.0 && s_ratio > 0.0) {
            return Err(Error::domain("BoundaryParams", "v and s_ratio must be positive"));
        }
        Ok(BoundaryParams { v, s_ratio, b, c })
    }

    fn beta(&self) -> f64 {
        let w = self.b as f64 / self.s_ratio + self.c as f64 * self.s_ratio;
        PI * self.v * w * w
    }
}

/// B(v,s;b,c) = int_1^inf e^{-beta r} r^{-3/2} dr with beta = pi v (b/s + c s)^2,
/// in closed form: 2 e^{-beta} - 2 sqrt(pi beta) erfc(sqrt(beta)).
pub fn b_integral(p: &BoundaryParams) -> f64 {
    let beta = p.beta();
    if beta == 0.0 {
        return 2.0;
    }
    2.0 * (-beta).exp() - 2.0 * (PI * beta).sqrt() * specfun::erfc(beta.sqrt())
}

/// The same integral by adaptive quadrature, kept as the dual route.
pub fn b_integral_quadrature(p: &BoundaryParams, rel_tol: f64) -> f64 {
    let beta = p.beta();
    quad::adaptive_upper_inf(move |r: f64| (-beta * r).exp() * r.powf(-1.5), 1.0, 0.0, rel_tol)
        .value
}

/// I(v,s;b,c) = 4 pi sqrt(v) min(|b/s|, |c s|) if -bc > 0, else 0.
pub fn i_term(p: &BoundaryParams) -> f64 {
    if -p.b * p.c <= 0 {
        return 0.0;
    }
    let bs = (p.b as f64 / p.s_ratio).abs();
    let cs = (p.c as f64 * p.s_ratio).abs();
    4.0 * PI * p.v.sqrt() * bs.min(cs)
}

/// xi-check(v,z;b,c) = (t/sqrt(v)) (B(v,s;b,c) - I(v,s;b,c)).
pub fn xi_check(v: f64, z: &SurfacePoint, b: i64, c: i64) -> Result<f64> {
    let p = BoundaryParams::new(v, z.s_ratio(), b, c)?;
    Ok(z.t() / v.sqrt() * (b_integral(&p) - i_term(&p)))
}

/// Xi-check(v,z,m) = (1/2) sum over the 2 tau(|m|) pairs (b,c) with -bc = m.
pub fn xi_check_sum(v: f64, z: &SurfacePoint, m: i64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("xi_check_sum", "m must be nonzero; use xi_check_zero_plus"));
    }
    let mut total = 0.0;
    for e in arith::divisors(m)? {
        for (b, c) in [(e, -m / e), (-e, m / e)] {
            total += xi_check(v, z, b, c)?;
        }
    }
    Ok(0.5 * total)
}

fn theta_tail(coef: f64) -> f64 {
    // sum_{n >= 1} e^{-coef n^2} / n^2, Gaussian decay
    let mut total = 0.0;
    for n in 1..200_000u64 {
        let nf = n as f64;
        let term = (-coef * nf * nf).exp() / (nf * nf);
        total += term;
        if term < 1e-19 * total.max(1e-300) {
            break;
        }
    }
    total
}

/// Xi-check(v,z,0) in the Poisson-summed closed form:
///   2 Xi-check(v,z,0) = -2t/sqrt(v) + t(s + 1/s)(1/v + (2/pi) zeta(2))
///     - (2t/pi)((1/s) sum_b e^{-pi s^2 b^2/v}/b^2 + s sum_c e^{-pi c^2/(s^2 v)}/c^2).
pub fn xi_check_zero(v: f64, z: &SurfacePoint) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::domain("xi_check_zero", "need v > 0"));
    }
    let (t, s) = (z.t(), z.s_ratio());
    let zeta2 = specfun::zeta(2.0)?;
    let doubled = -2.0 * t / v.sqrt()
        + t * (s + 1.0 / s) * (1.0 / v + (2.0 / PI) * zeta2)
        - (2.0 * t / PI)
            * ((1.0 / s) * theta_tail(PI * s * s / v) + s * theta_tail(PI / (s * s * v)));
    Ok(0.5 * doubled)
}

/// The modular completion: Xi-check-plus(v,z,0) = Xi-check(v,z,0) - t(s + 1/s)/(2v).
pub fn xi_check_zero_plus(v: f64, z: &SurfacePoint) -> Result<f64> {
    let (t, s) = (z.t(), z.s_ratio());
    Ok(xi_check_zero(v, z)? - t * (s + 1.0 / s) / (2.0 * v))
}

/// Left side of the min-lemma, sum_{-bc=m} int_0^inf min(|b/s|, |c s|) ds/s,
/// by quadrature; equals 4 tau(m) sqrt(m).
pub fn lemma_min_integral(m: i64) -> Result<f64> {
    if m <= 0 {
        return Err(Error::domain("lemma_min_integral", "m must be positive"));
    }
    let mut total = 0.0;
    for e in arith::divisors(m)? {
        for (b, c) in [(e, -m / e), (-e, m / e)] {
            let (bf, cf) = ((b as f64).abs(), (c as f64).abs());
            let crossing = (bf / cf).sqrt();
            // below the crossing min = |c| s, integrand min/s bounded
            let low = quad::adaptive(
                move |s: f64| (bf / s).min(cf * s) / s,
                0.0,
                crossing,
                0.0,
                1e-11,
            )
            .value;
            // above: substitute w = 1/s
            let high = quad::adaptive(
                move |w: f64| {
                    if w == 0.0 {
                        return bf;
                    }
                    (bf * w).min(cf / w) / w
                },
                0.0,
                1.0 / crossing,
                0.0,
                1e-11,
            )
            .value;
            total += low + high;
        }
    }
    Ok(total)
}

/// Both sides of the B-integral lemmata.
#[derive(Debug, Clone, Copy)]
pub struct BoundLemma {
    /// sum_{-bc=m} int_0^inf B(v,s;b,c) ds/s by quadrature.
    pub lhs: f64,
    /// The lemma bound: 2 tau(m)/(2 sqrt(m v)) for m > 0, and
    /// 2 tau(|m|)(e^{-4 pi |m| v}/(2 sqrt(|m| v)) + 2 pi sqrt(|m| v) Ei(-4 pi |m| v))
    /// for m < 0.
    pub rhs: f64,
}

pub fn lemma_b_bounds(m: i64, v: f64) -> Result<BoundLemma> {
    if m == 0 || !(v > 0.0) {
        return Err(Error::domain("lemma_b_bounds", "need m != 0 and v > 0"));
    }
    let mut lhs = 0.0;
    for e in arith::divisors(m)? {
        for (b, c) in [(e, -m / e), (-e, m / e)] {
            // substitute s = e^phi; the integrand decays super-exponentially
            let f = move |phi: f64| {
                let p = BoundaryParams { v, s_ratio: phi.exp(), b, c };
                b_integral(&p)
            };
            lhs += quad::adaptive(f, -8.0, 8.0, 0.0, 1e-9).value;
        }
    }
    let am = m.abs() as f64;
    let tau = arith::divisor_profile(m)?.tau as f64;
    let rhs = if m > 0 {
        2.0 * tau / (2.0 * (am * v).sqrt())
    } else {
        let x = 4.0 * PI * am * v;
        let ei = if x > 700.0 { 0.0 } else { specfun::exp_integral_ei(-x)? };
        2.0 * tau * ((-x).exp() / (2.0 * (am * v).sqrt()) + 2.0 * PI * (am * v).sqrt() * ei)
    };
    Ok(BoundLemma { lhs, rhs })
}

/// The cusp integrals of the finiteness proof, evaluated at growing cutoffs.
///
/// For each T the value I_0(T)/b^2 - I_b(T) with b = 1 is returned, where
///   I_0(T) = int_{K2}^{T} int_{K1}^inf y2 dy1 dy2/(y1 y2)^2
///   I_b(T) = int_{K2}^{T} [e^{-c K1}/K1 + c Ei(-c K1)] dy2/y2,
///            c = pi b^2/(v y2).
/// Both grow like (1/K1) log T; the difference converges, which is the
/// cancellation making the m = 0 boundary integral finite.
pub fn cusp_cancellation_check(v: f64, k1: f64, k2: f64, t_list: &[f64]) -> Result<Vec<f64>> {
    if !(v > 0.0 && k1 > 1.0 && k2 > 1.0) {
        return Err(Error::domain("cusp_cancellation_check", "need v > 0 and K1, K2 > 1"));
    }
    let mut prev = k2;
    for &t in t_list {
        if t <= prev {
            return Err(Error::domain(
                "cusp_cancellation_check",
                "T values must be increasing and above K2",
            ));
        }
        prev = t;
    }
    let b = 1.0f64;
    let mut out = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let i0 = quad::adaptive(move |y2: f64| 1.0 / (k1 * y2), k2, t, 0.0, 1e-11).value;
        let ib = quad::adaptive(
            move |y2: f64| {
                let c = PI * b * b / (v * y2);
                let x = c * k1;
                let ei = if x > 700.0 { 0.0 } else { specfun::exp_integral_ei(-x).unwrap_or(0.0) };
                ((-x).exp() / k1 + c * ei) / y2
            },
            k2,
            t,
            0.0,
            1e-11,
        )
        .value;
        out.push(i0 / (b * b) - ib);
    }
    Ok(out)
}

/// I'(T) = int_{K1<y1} int_{K2<y2<T} t dy1 dy2/(y1 y2)^2 by quadrature;
/// converges to (4/sqrt(K1))(1/sqrt(K2)) as T grows.
pub fn cusp_t_integral(k1: f64, k2: f64, t: f64) -> f64 {
    // factorized: int_{K1}^inf y1^{-3/2} dy1 * int_{K2}^{T} y2^{-3/2} dy2
    let first = quad::adaptive_upper_inf(|y: f64| y.powf(-1.5), k1, 0.0, 1e-11).value;
    let second = quad::adaptive(|y: f64| y.powf(-1.5), k2, t, 0.0, 1e-11).value;
    first * second
}

// ---------------------------------------------------------------------------
// Configurable boundary cutoff and the mode integrals
// ---------------------------------------------------------------------------

/// Smooth cutoff in the boundary-distance coordinate t: identically 0 for
/// t <= t_off, identically 1 for t >= t_on, C-infinity in between.
#[derive(Debug, Clone, Copy)]
pub struct RhoCutoff {
    pub t_off: f64,
    pub t_on: f64,
}

impl Default for RhoCutoff {
    fn default() -> Self {
        RhoCutoff { t_off: 1.5, t_on: 2.0 }
    }
}

impl RhoCutoff {
    pub fn new(t_off: f64, t_on: f64) -> Result<Self> {
        if !(t_off > 0.0 && t_on > t_off) {
            return Err(Error::Config("need 0 < t_off < t_on".into()));
        }
        Ok(RhoCutoff { t_off, t_on })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = (t - self.t_off) / (self.t_on - self.t_off);
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let g = (-1.0 / x).exp();
        let h = (-1.0 / (1.0 - x)).exp();
        g / (g + h)
    }
}

/// The m-th boundary-mode integral int rho(t) Xi-check(v,z,m) dmu for m != 0.
///
/// In the (x1, x2, s, t) coordinates the measure is 2 dx1 dx2 ds dt/(s t^3)
/// and the integrand is t times a function of s, so the integral factorizes:
///   [int rho(t) 2 dt/t^2] * (1/(2 sqrt v)) sum_{-bc=m} int_0^inf (B - I) ds/s.
/// The s-integral is finite by the summation lemmata; no accuracy claim is
/// attached beyond that finiteness.
pub fn f_rho_mode(v: f64, m: i64, rho: &RhoCutoff) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain(
            "f_rho_mode",
            "m = 0 has no convergent mode integral; see cusp_cancellation_check",
        ));
    }
    if !(v > 0.0) {
        return Err(Error::domain("f_rho_mode", "need v > 0"));
    }
    let rho_copy = *rho;
    let t_factor =
        quad::adaptive_upper_inf(move |t: f64| rho_copy.eval(t) * 2.0 / (t * t), rho.t_off, 0.0, 1e-10)
            .value;
    let mut s_factor = 0.0;
    for e in arith::divisors(m)? {
        for (b, c) in [(e, -m / e), (-e, m / e)] {
            let b_part = quad::adaptive(
                move |phi: f64| b_integral(&BoundaryParams { v, s_ratio: phi.exp(), b, c }),
                -8.0,
                8.0,
                0.0,
                1e-9,
            )
            .value;
            let i_part = if m > 0 {
                // int_0^inf 4 pi sqrt(v) min(|b/s|, |cs|) ds/s = 8 pi sqrt(v |bc|)
                8.0 * PI * (v * (b * c).abs() as f64).sqrt()
            } else {
                0.0
            };
            s_factor += b_part - i_part;
        }
    }
    Ok(t_factor * s_factor / (2.0 * v.sqrt()))
}
