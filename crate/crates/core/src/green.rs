//! Kudla's Green function on the product of two modular curves and the
//! integrals I_m attached to the Hecke correspondence T(m).
//!
//! The kernel is xi(v,z,M) = -Ei(-2 pi v R(z,M)) with the majorant
//!   R(z,M) = |a + c z1 + b z2 + d z1 z2|^2 / (2 y1 y2),   M = (a b; c d),
//! which vanishes exactly on the divisor attached to M and reduces to the
//! diagonal-matrix and anti-diagonal special cases. Three routes to the
//! integral are provided: the closed form, a reduced 2-D hyperbolic
//! quadrature, and Monte Carlo over the fundamental domain squared.
//!
//! Normalization: `big_xi` is (1/2) sum over all integer matrices of
//! determinant m, as displayed. M and -M carry the same kernel, and the
//! unfolding that produces the closed form counts each +-pair once; the
//! integral routes therefore average (1/2) * big_xi so that closed,
//! reduced and Monte Carlo values all converge to the same number.

use crate::arith::{self, LatticeMatrix};
use crate::error::{Error, Result};
use crate::quad;
use crate::specfun;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// A point (z1, z2) on the product of two upper half-planes.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SurfacePoint {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl SurfacePoint {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self> {
        if !(y1 > 0.0 && y2 > 0.0) {
            return Err(Error::domain("SurfacePoint", "both imaginary parts must be positive"));
        }
        Ok(SurfacePoint { x1, y1, x2, y2 })
    }

    /// t = sqrt(y1 y2), the boundary distance coordinate.
    pub fn t(&self) -> f64 {
        (self.y1 * self.y2).sqrt()
    }

    /// s = sqrt(y1/y2), the boundary ratio coordinate.
    pub fn s_ratio(&self) -> f64 {
        (self.y1 / self.y2).sqrt()
    }
}

/// Truncation, quadrature and sampling parameters.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct QuadratureSpec {
    /// Lattice box truncation for `big_xi` (entry bound).
    pub radius: i64,
    /// Hyperbolic radial cutoff of the reduced integral.
    pub r_max: f64,
    /// Node count for Fourier-mode extraction oracles.
    pub nodes: u32,
    pub mc_samples: u64,
    pub seed: u64,
    /// Relative tolerance for the deterministic integral routes.
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radius: 200,
            r_max: 12.0,
            nodes: 256,
            mc_samples: 1_000_000,
            seed: 1,
            tol: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radius <= 0 || !(self.r_max > 0.0) || self.nodes == 0 || self.mc_samples == 0
            || !(self.tol > 0.0)
        {
            return Err(Error::Config("QuadratureSpec fields must all be positive".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Kernel
// ---------------------------------------------------------------------------

/// R(z, M) = |a + c z1 + b z2 + d z1 z2|^2 / (2 y1 y2), nonnegative and
/// zero exactly on the divisor of M.
pub fn majorant_r(z: &SurfacePoint, m: &LatticeMatrix) -> f64 {
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    let re = a + c * z.x1 + b * z.x2 + d * (z.x1 * z.x2 - z.y1 * z.y2);
    let im = c * z.y1 + b * z.y2 + d * (z.x1 * z.y2 + z.x2 * z.y1);
    (re * re + im * im) / (2.0 * z.y1 * z.y2)
}

/// xi(v,z,M) = int_1^inf e^{-2 pi v R u} du/u = -Ei(-2 pi v R), positive
/// and decreasing in R. Errors when R = 0 (the point lies on the cycle).
pub fn xi_kernel(v: f64, z: &SurfacePoint, m: &LatticeMatrix) -> Result<f64> {
    let r = majorant_r(z, m);
    if r == 0.0 {
        return Err(Error::Singular { what: format!("M = {m} at z = ({}, {}; {}, {})", z.x1, z.y1, z.x2, z.y2) });
    }
    let x = 2.0 * PI * v * r;
    if x > 700.0 {
        return Ok(0.0);
    }
    Ok(-specfun::exp_integral_ei(-x)?)
}

/// Value of the truncated automorphic sum together with a convergence
/// estimate (the contribution of entries beyond radius/2).
#[derive(Debug, Clone, Copy)]
pub struct XiSum {
    pub value: f64,
    pub tail_estimate: f64,
}

/// Xi(v,z,m) truncated to the entry box: (1/2) sum over all M with
/// det M = m and max entry <= radius of xi(v,z,M).
pub fn big_xi(v: f64, z: &SurfacePoint, m: i64, radius: i64) -> Result<XiSum> {
    if !(v > 0.0) {
        return Err(Error::domain("big_xi", "need v > 0"));
    }
    let mut total = 0.0;
    let mut inner = 0.0;
    let half = radius / 2;
    for mat in arith::enumerate_lattice(m, radius)? {
        let term = xi_kernel(v, z, &mat)?;
        total += term;
        if mat.a.abs() <= half && mat.b.abs() <= half && mat.c.abs() <= half && mat.d.abs() <= half
        {
            inner += term;
        }
    }
    Ok(XiSum { value: 0.5 * total, tail_estimate: 0.5 * (total - inner) })
}

/// Xi(v,z,m) truncated by kernel size instead of entry size: every matrix
/// with R(z,M) <= R_c is included, where R_c is set so the largest omitted
/// kernel value is below e^{-margin} relative to the leading scale.
///
/// Enumeration windows: with F = a + c z1 + b z2 + d z1 z2 and its
/// z2-conjugate G (resp. z1-conjugate G'), one has
///   |G|^2 = |G'|^2 = |F|^2 + 4 y1 y2 det M,
///   F - G = 2i y2 (b + d z1),  F - G' = 2i y1 (c + d z2),
/// so |F| <= P and |G| <= P' bound d, then c and b, then a; the windows
/// are necessary conditions, hence the enumeration is exhaustive.
pub fn xi_sum_cutoff(v: f64, z: &SurfacePoint, m: i64, margin: f64) -> Result<f64> {
    if !(v > 0.0) || m == 0 {
        return Err(Error::domain("xi_sum_cutoff", "need v > 0 and m != 0"));
    }
    let r_floor = if m < 0 { -2.0 * m as f64 } else { 0.0 };
    let r_c = r_floor + margin / (2.0 * PI * v);
    let yy = z.y1 * z.y2;
    let p2 = 2.0 * yy * r_c;
    let q2 = p2 + 4.0 * yy * m as f64;
    if q2 < 0.0 {
        return Ok(0.0);
    }
    let w = p2.sqrt() + q2.sqrt();
    let dmax = (w / (2.0 * yy)).floor() as i64;
    let wc = w / (2.0 * z.y1);
    let wb = w / (2.0 * z.y2);
    let mut total = 0.0;
    let add_term = |mat: &LatticeMatrix, total: &mut f64| -> Result<()> {
        let r = majorant_r(z, mat);
        if r == 0.0 {
            return Err(Error::Singular {
                what: format!("M = {mat} at z = ({}, {}; {}, {})", z.x1, z.y1, z.x2, z.y2),
            });
        }
        if r <= r_c {
            let x = 2.0 * PI * v * r;
            if x <= 700.0 {
                *total += -specfun::exp_integral_ei(-x)?;
            }
        }
        Ok(())
    };
    for d in -dmax..=dmax {
        let c_lo = (-d as f64 * z.x2 - wc).ceil() as i64;
        let c_hi = (-d as f64 * z.x2 + wc).floor() as i64;
        let b_lo = (-d as f64 * z.x1 - wb).ceil() as i64;
        let b_hi = (-d as f64 * z.x1 + wb).floor() as i64;
        if d == 0 {
            // determinant forces bc = -m; a ranges over the |F| <= P window
            for e in arith::divisors(m)? {
                for (b, c) in [(e, -m / e), (-e, m / e)] {
                    if b < b_lo || b > b_hi || c < c_lo || c > c_hi {
                        continue;
                    }
                    let g_re = c as f64 * z.x1 + b as f64 * z.x2;
                    let g_im = c as f64 * z.y1 + b as f64 * z.y2;
                    if g_im * g_im > p2 {
                        continue;
                    }
                    let half_w = (p2 - g_im * g_im).sqrt();
                    let a_lo = (-g_re - half_w).ceil() as i64;
                    let a_hi = (-g_re + half_w).floor() as i64;
                    for a in a_lo..=a_hi {
                        add_term(&LatticeMatrix::new(a, b, c, 0), &mut total)?;
                    }
                }
            }
        } else {
            for c in c_lo..=c_hi {
                for b in b_lo..=b_hi {
                    let num = m + b * c;
                    if num % d != 0 {
                        continue;
                    }
                    add_term(&LatticeMatrix::new(num / d, b, c, d), &mut total)?;
                }
            }
        }
    }
    Ok(0.5 * total)
}

// ---------------------------------------------------------------------------
// Integral routes
// ---------------------------------------------------------------------------

/// Closed form of the Green integral:
///   I_m = sigma(m) (pi/3) / (2 v m)                                   (m > 0)
///   I_m = sigma(|m|) (pi/3) (1/(2 v |m|)) (e^{-4 pi v |m|}
///         + 4 pi v |m| Ei(-4 pi |m| v))                               (m < 0)
pub fn green_integral_closed(v: f64, m: i64) -> Result<f64> {
    if !(v > 0.0) || m == 0 {
        return Err(Error::domain("green_integral_closed", "need v > 0 and m != 0"));
    }
    let am = m.abs() as f64;
    let sigma = arith::sigma(m)?;
    if m > 0 {
        Ok(sigma * (PI / 3.0) / (2.0 * v * am))
    } else {
        let x = 4.0 * PI * v * am;
        let ei = specfun::exp_integral_ei(-x)?;
        Ok(sigma * (PI / 3.0) * (1.0 / (2.0 * v * am)) * ((-x).exp() + x * ei))
    }
}

/// The reduced 2-D integral in hyperbolic polar coordinates:
///   m > 0: 2 pi int_0^{r_max} -Ei(-2 pi v m (cosh r - 1)) sinh r dr = 1/(v m)
///   m < 0: the (cosh r + 1) variant.
///
/// The r -> 0 endpoint of the m > 0 case has an integrable log singularity;
/// the leading term is integrated analytically on [0, r0].
pub fn reduced_integral_quadrature(v: f64, m: i64, spec: &QuadratureSpec) -> Result<f64> {
    if !(v > 0.0) || m == 0 {
        return Err(Error::domain("reduced_integral_quadrature", "need v > 0 and m != 0"));
    }
    spec.validate()?;
    let am = m.abs() as f64;
    let c = 2.0 * PI * v * am;
    let shift = if m > 0 { -1.0 } else { 1.0 };
    // exponent at the cutoff; beyond r_max the integrand is e^{-y}-small
    let y_max = c * (spec.r_max.cosh() + shift);
    let tail_bound = if y_max > 700.0 {
        0.0
    } else {
        2.0 * PI * (-y_max).exp() * (1.0 / y_max + 1.0) / c
    };
    let expected_scale = if m > 0 { 1.0 / (v * am) } else { (-2.0 * c).exp() / (v * am) };
    if tail_bound > spec.tol * expected_scale {
        return Err(Error::Accuracy {
            op: "reduced_integral_quadrature",
            msg: format!("tail bound {tail_bound:.3e} at r_max = {} exceeds tol", spec.r_max),
        });
    }
    let effective_rmax = spec.r_max.min(((50.0 / c) - shift).max(2.0).acosh());
    let integrand = move |r: f64| -> f64 {
        let x = c * (r.cosh() + shift);
        if x <= 0.0 || x > 700.0 {
            return 0.0;
        }
        -specfun::exp_integral_ei(-x).unwrap_or(0.0) * r.sinh()
    };
    if m > 0 {
        let r0 = 1e-3;
        // on [0, r0]: -Ei(-c(cosh r - 1)) ~ -gamma - log(pi v m) - 2 log r
        let g = specfun::EULER_GAMMA;
        let head = 0.5 * r0 * r0 * (-g - (PI * v * am).ln() + 1.0) - r0 * r0 * r0.ln();
        let body = quad::adaptive(integrand, r0, effective_rmax, 0.0, spec.tol * 1e-2).value;
        Ok(2.0 * PI * (head + body))
    } else {
        let body = quad::adaptive(integrand, 0.0, effective_rmax, 0.0, spec.tol * 1e-2).value;
        Ok(2.0 * PI * body)
    }
}

/// The reduced route assembled into the full integral:
///   I_m = (1/2) [sum_{n^2 | |m|} psi(|m|/n^2)] (pi/3) I'_m,
/// where the bracket equals sigma(|m|).
pub fn green_integral_reduced(v: f64, m: i64, spec: &QuadratureSpec) -> Result<f64> {
    let reduced = reduced_integral_quadrature(v, m, spec)?;
    let am = m.abs();
    let mut index_sum = 0i64;
    let mut n = 1i64;
    while n * n <= am {
        if am % (n * n) == 0 {
            index_sum += arith::divisor_profile(am / (n * n))?.psi_index;
        }
        n += 1;
    }
    Ok(0.5 * index_sum as f64 * (PI / 3.0) * reduced)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

const MC_SHARDS: u64 = 64;
/// Kernel cutoff margin: omitted terms are below e^{-34} of the local scale.
const MC_MARGIN: f64 = 34.0;

fn sample_fundamental_point(rng: &mut ChaCha12Rng) -> (f64, f64) {
    // x = sin(theta) with theta uniform on [-pi/6, pi/6] gives the
    // 1/sqrt(1-x^2) marginal; y = y_min/(1-U) the 1/y^2 conditional.
    // Jointly this is exactly the normalized hyperbolic measure on the
    // fundamental domain |x| <= 1/2, |z| >= 1 including the full cusp.
    let theta = rng.gen_range(-PI / 6.0..PI / 6.0);
    let x = theta.sin();
    let y_min = theta.cos();
    let u: f64 = rng.gen_range(0.0..1.0);
    (x, y_min / (1.0 - u))
}

/// Monte Carlo integral of the Green function over the fundamental domain
/// squared. Deterministic for a fixed seed: samples are split across a
/// fixed number of counter-seeded streams and reduced in stream order.
pub fn green_integral_monte_carlo(v: f64, m: i64, spec: &QuadratureSpec) -> Result<McEstimate> {
    if !(v > 0.0) || m == 0 {
        return Err(Error::domain("green_integral_monte_carlo", "need v > 0 and m != 0"));
    }
    spec.validate()?;
    let base = spec.mc_samples / MC_SHARDS;
    let rem = spec.mc_samples % MC_SHARDS;
    let shard_results: Vec<(f64, f64, u64)> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
            rng.set_stream(shard);
            let count = base + u64::from(shard < rem);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..count {
                // resample if the point lands exactly on a cycle (measure zero)
                let mut attempts = 0;
                let value = loop {
                    let (x1, y1) = sample_fundamental_point(&mut rng);
                    let (x2, y2) = sample_fundamental_point(&mut rng);
                    let z = SurfacePoint { x1, y1, x2, y2 };
                    match xi_sum_cutoff(v, &z, m, MC_MARGIN) {
                        Ok(x) => break 0.5 * x,
                        Err(Error::Singular { .. }) if attempts < 100 => attempts += 1,
                        Err(e) => return Err(e),
                    }
                };
                sum += value;
                sumsq += value * value;
            }
            Ok((sum, sumsq, count))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut n = 0u64;
    for (s, q, c) in shard_results {
        sum += s;
        sumsq += q;
        n += c;
    }
    let vol = PI / 3.0;
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sumsq - sum * sum / nf) / (nf - 1.0)).max(0.0);
    Ok(McEstimate {
        estimate: vol * vol * mean,
        std_error: vol * vol * (var / nf).sqrt(),
        samples: n,
    })
}

/// Serialized record of one Green-integral evaluation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GreenResult {
    pub m: i64,
    pub v: f64,
    pub method: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    pub spec: QuadratureSpec,
}
