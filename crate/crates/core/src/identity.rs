//! Faltings heights of the Hecke correspondences T(m), the volume constant,
//! and the assembly of the main identity
//!
//!   ht(T(m)) + (18/pi^2) I_m(v) = A'(v,1,m),   m != 0.
//!
//! With the analytic sign of the sigma-derivative the two sides agree
//! exactly; the residual of the closed-form route is pure floating error.

use crate::eisenstein;
use crate::error::{Error, Result};
use crate::green::{self, QuadratureSpec};
use crate::specfun::Constants;
use std::f64::consts::PI;

/// Evaluation route for the Green integral inside the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Reduced,
    Mc,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "reduced" => Ok(Method::Reduced),
            "mc" => Ok(Method::Mc),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Reduced => "reduced",
            Method::Mc => "mc",
        })
    }
}

/// Per-(m, v) record of both sides of the main identity.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityReport {
    pub m: i64,
    pub v: f64,
    pub method: Method,
    pub height: f64,
    pub green_closed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub green_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_std_error: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

impl IdentityReport {
    /// CSV row matching the header `m,v,method,height,green,lhs,rhs,abs_residual,rel_residual`;
    /// the green column carries the value the lhs was assembled from.
    pub fn csv_header() -> &'static str {
        "m,v,method,height,green,lhs,rhs,abs_residual,rel_residual"
    }

    pub fn to_csv_row(&self) -> String {
        let green = self.green_numeric.unwrap_or(self.green_closed);
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.m,
            self.v,
            self.method,
            self.height,
            green,
            self.lhs,
            self.rhs,
            self.abs_residual,
            self.rel_residual
        )
    }
}

/// Faltings height of T(m):
///   ht(T(m)) = 0 for m < 0, and for m > 0
///   ht(T(m)) = 576 sigma(m)((1/2) zeta(-1) + zeta'(-1))
///            + 24 sum_{d|m} d log d - 12 sigma(m) log m.
///
/// The display groups the log terms under one divisor sum whose second
/// summand is d-independent; the grouping above is the one the main
/// identity reproduces exactly.
pub fn faltings_height(m: i64, constants: &Constants) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain(
            "faltings_height",
            "the height of T(0) is not defined by the closed formula",
        ));
    }
    if m < 0 {
        return Ok(0.0);
    }
    let profile = crate::arith::divisor_profile(m)?;
    let sigma = profile.sigma as f64;
    let mut dlogd = 0.0;
    for &d in &profile.divisors {
        dlogd += d as f64 * (d as f64).ln();
    }
    Ok(576.0 * sigma * (0.5 * constants.zeta_neg1 + constants.zeta_prime_neg1) + 24.0 * dlogd
        - 12.0 * sigma * (m as f64).ln())
}

/// (18/pi^2)(pi/3)^2, which must equal 2: the self-intersection number of
/// the metrized line bundle against the volume normalization.
pub fn volume_constant_check() -> f64 {
    (18.0 / (PI * PI)) * (PI / 3.0) * (PI / 3.0)
}

/// Verify ht(T(m)) + (18/pi^2) I_m(v) = A'(v,1,m) with the chosen route
/// for I_m.
pub fn verify_main_identity(
    m: i64,
    v: f64,
    method: Method,
    spec: &QuadratureSpec,
    constants: &Constants,
) -> Result<IdentityReport> {
    if m == 0 {
        return Err(Error::domain(
            "verify_main_identity",
            "m = 0 is excluded: the boundary constant term has no closed evaluation",
        ));
    }
    if !(v > 0.0) {
        return Err(Error::domain("verify_main_identity", "need v > 0"));
    }
    let height = faltings_height(m, constants)?;
    let green_closed = green::green_integral_closed(v, m)?;
    let (green_numeric, mc_std_error) = match method {
        Method::Closed => (None, None),
        Method::Reduced => (Some(green::green_integral_reduced(v, m, spec)?), None),
        Method::Mc => {
            let est = green::green_integral_monte_carlo(v, m, spec)?;
            (Some(est.estimate), Some(est.std_error))
        }
    };
    let c = constants.c_vol;
    let lhs = height + c * green_numeric.unwrap_or(green_closed);
    let (_, rhs) = eisenstein::coeff_big_a_and_prime(v, m, constants)?;
    let abs_residual = (lhs - rhs).abs();
    let rel_residual = abs_residual / rhs.abs().max(f64::MIN_POSITIVE);
    Ok(IdentityReport {
        m,
        v,
        method,
        height,
        green_closed,
        green_numeric,
        mc_std_error,
        lhs,
        rhs,
        abs_residual,
        rel_residual,
    })
}

/// A'(v,1,0) from the corollary display: the predicted (not independently
/// verified) constant-term intersection number,
///   -12 [ 3 zeta'(-1) - 1/8 + gamma/24 + (1/24) log(4 pi v)
///         + (1/(8 pi v))(-48 zeta'(-1) - gamma + 2 + log(4 pi v)) ].
pub fn predicted_constant_term(v: f64, constants: &Constants) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::domain("predicted_constant_term", "need v > 0"));
    }
    let zp = constants.zeta_prime_neg1;
    let g = constants.euler_gamma;
    let lv = (4.0 * PI * v).ln();
    Ok(-12.0
        * (3.0 * zp - 0.125 + g / 24.0 + lv / 24.0
            + (1.0 / (8.0 * PI * v)) * (-48.0 * zp - g + 2.0 + lv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::QuadratureSpec;

    fn consts() -> Constants {
        Constants::compute()
    }

    #[test]
    fn height_cases() {
        let c = consts();
        assert_eq!(faltings_height(-5, &c).unwrap(), 0.0);
        assert!(faltings_height(0, &c).is_err());
        // m = 1: 576(zeta'(-1) - 1/24), log terms vanish
        let h1 = faltings_height(1, &c).unwrap();
        let want = 576.0 * (c.zeta_prime_neg1 - 1.0 / 24.0);
        assert!((h1 - want).abs() < 1e-12);
        assert!((h1 + 119.282_578_771_459_7).abs() < 1e-9, "{h1}");
    }

    #[test]
    fn height_m2_against_identity() {
        // independent check: ht(2) = A'(v,1,2) - c I_2(v) for any v
        let c = consts();
        let h2 = faltings_height(2, &c).unwrap();
        for &v in &[0.5, 1.0, 3.0] {
            let (_, ap) = eisenstein::coeff_big_a_and_prime(v, 2, &c).unwrap();
            let i2 = green::green_integral_closed(v, 2).unwrap();
            assert!((h2 - (ap - c.c_vol * i2)).abs() < 1e-10, "v = {v}");
        }
        // direct expansion
        let direct = 576.0 * 3.0 * (-1.0 / 24.0 + c.zeta_prime_neg1) + 24.0 * 2.0 * 2f64.ln()
            - 12.0 * 3.0 * 2f64.ln();
        assert!((h2 - direct).abs() < 1e-12);
    }

    #[test]
    fn volume_constant() {
        assert!((volume_constant_check() - 2.0).abs() < 1e-14);
        // 18/pi^2 consistent with 2 (12/4pi)^2
        let c = 2.0 * (12.0 / (4.0 * PI)) * (12.0 / (4.0 * PI));
        assert!((c - 18.0 / (PI * PI)).abs() < 1e-14);
        // vol(Gamma_0(6)) = psi(6) pi/3 = 4 pi
        let psi6 = crate::arith::divisor_profile(6).unwrap().psi_index as f64;
        assert!((psi6 * PI / 3.0 - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn identity_closed_examples() {
        let c = consts();
        let spec = QuadratureSpec::default();
        for (m, v) in [(1i64, 1.0), (-1, 1.0), (4, 0.5)] {
            let rep = verify_main_identity(m, v, Method::Closed, &spec, &c).unwrap();
            assert!(
                rep.rel_residual < 1e-10,
                "m={m}, v={v}: rel {}",
                rep.rel_residual
            );
        }
        // m = -1, v = 1: lhs = c * I and equals 12(Ei(-4pi) + e^{-4pi}/(4pi))
        let rep = verify_main_identity(-1, 1.0, Method::Closed, &spec, &c).unwrap();
        assert_eq!(rep.height, 0.0);
        let x = 4.0 * PI;
        let want = 12.0 * (crate::specfun::exp_integral_ei(-x).unwrap() + (-x).exp() / x);
        assert!(((rep.lhs - want) / want).abs() < 1e-12);
    }

    #[test]
    fn identity_rejects_m_zero() {
        let c = consts();
        assert!(verify_main_identity(0, 1.0, Method::Closed, &QuadratureSpec::default(), &c).is_err());
    }

    #[test]
    fn identity_v_independence_of_residual() {
        // d/dv (lhs - rhs) = 0: both sides carry the same v-dependence
        let c = consts();
        let spec = QuadratureSpec::default();
        for m in [2i64, -3] {
            let h = 1e-4;
            let f = |v: f64| {
                let r = verify_main_identity(m, v, Method::Closed, &spec, &c).unwrap();
                r.lhs - r.rhs
            };
            let deriv = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
            assert!(deriv.abs() < 1e-6, "m = {m}: {deriv}");
        }
    }

    #[test]
    fn predicted_constant_term_two_routes() {
        // the corollary display must equal the remark combination at m = 0
        let c = consts();
        for &v in &[0.25, 0.5, 1.0, 2.0, 7.0] {
            let corollary = predicted_constant_term(v, &c).unwrap();
            let (_, remark) = eisenstein::coeff_big_a_and_prime(v, 0, &c).unwrap();
            assert!(
                (corollary - remark).abs() < 1e-10,
                "v = {v}: {corollary} vs {remark}"
            );
        }
    }

    #[test]
    fn predicted_constant_term_large_v_growth() {
        // the 1/(8 pi v) block dies off; the log-growing part remains
        let c = consts();
        let big = predicted_constant_term(1e6, &c).unwrap();
        let without_cusp_block = -12.0
            * (3.0 * c.zeta_prime_neg1 - 0.125 + c.euler_gamma / 24.0
                + (4.0 * PI * 1e6f64).ln() / 24.0);
        assert!((big - without_cusp_block).abs() < 1e-4);
    }

    #[test]
    fn report_serialization() {
        let c = consts();
        let rep =
            verify_main_identity(3, 1.0, Method::Closed, &QuadratureSpec::default(), &c).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"method\":\"closed\""));
        assert!(!json.contains("green_numeric"));
        let row = rep.to_csv_row();
        assert_eq!(row.split(',').count(), 9);
        assert!(IdentityReport::csv_header().starts_with("m,v,method"));
    }
}
