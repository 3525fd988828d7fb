//! The acceptance checks: every headline property of the library, each with
//! its tolerance pinned, runnable as a batch. The CLI `selftest` command and
//! the acceptance test suite both drive this module.

use crate::arith;
use crate::boundary;
use crate::eisenstein::{self, SpectralParam, TauPoint};
use crate::error::Result;
use crate::green::{self, QuadratureSpec, SurfacePoint};
use crate::identity::{self, Method};
use crate::quad;
use crate::specfun::Constants;
use std::f64::consts::PI;
use std::time::Instant;

#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

struct Checker {
    outcomes: Vec<CheckOutcome>,
}

impl Checker {
    fn run(
        &mut self,
        id: &'static str,
        name: &'static str,
        f: impl FnOnce() -> Result<(bool, String)>,
    ) {
        let start = Instant::now();
        let (passed, detail) = match f() {
            Ok(pair) => pair,
            Err(e) => (false, format!("error: {e}")),
        };
        self.outcomes.push(CheckOutcome {
            id,
            name,
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
}

/// Run the full acceptance suite. `quick` skips the Monte Carlo criterion.
pub fn run_all(quick: bool) -> Vec<CheckOutcome> {
    let constants = Constants::compute();
    let mut checker = Checker { outcomes: Vec::new() };

    checker.run("C1", "main identity, closed routes", || {
        let started = Instant::now();
        let spec = QuadratureSpec::default();
        let mut worst = 0.0f64;
        for am in 1..=12i64 {
            for m in [am, -am] {
                for &v in &[0.25, 0.5, 1.0, 2.0, 4.0] {
                    let rep = identity::verify_main_identity(m, v, Method::Closed, &spec, &constants)?;
                    worst = worst.max(rep.rel_residual);
                }
            }
        }
        let elapsed = started.elapsed().as_secs_f64();
        Ok((
            worst < 1e-10 && elapsed < 1.0,
            format!("max rel residual {worst:.3e} over 120 cells in {elapsed:.3}s (tol 1e-10, < 1s)"),
        ))
    });

    checker.run("C2", "green integral, reduced route", || {
        let spec = QuadratureSpec::default();
        let mut worst_pos = 0.0f64;
        for &m in &[1i64, 2, 5] {
            for &v in &[0.5, 1.0, 2.0] {
                let got = green::reduced_integral_quadrature(v, m, &spec)?;
                worst_pos = worst_pos.max((got * v * m as f64 - 1.0).abs());
            }
        }
        let mut worst_neg = 0.0f64;
        for &m in &[-1i64, -2, -5] {
            for &v in &[0.5, 1.0, 2.0] {
                let assembled = green::green_integral_reduced(v, m, &spec)?;
                let closed = green::green_integral_closed(v, m)?;
                worst_neg = worst_neg.max(((assembled - closed) / closed).abs());
            }
        }
        Ok((
            worst_pos < 1e-4 && worst_neg < 1e-4,
            format!("positive-m max |vm I' - 1| = {worst_pos:.3e}, negative-m max rel = {worst_neg:.3e} (tol 1e-4)"),
        ))
    });

    if quick {
        checker.outcomes.push(CheckOutcome {
            id: "C3",
            name: "green integral, Monte Carlo",
            passed: true,
            detail: "skipped (quick mode)".into(),
            seconds: 0.0,
        });
    } else {
        checker.run("C3", "green integral, Monte Carlo", || {
            let spec = QuadratureSpec { mc_samples: 1_000_000, seed: 1, ..Default::default() };
            let mut lines = Vec::new();
            let mut ok = true;
            for m in [1i64, -1] {
                let est = green::green_integral_monte_carlo(1.0, m, &spec)?;
                let closed = green::green_integral_closed(1.0, m)?;
                let dev = (est.estimate - closed).abs();
                let within_se = dev <= 3.0 * est.std_error;
                let within_tenth = dev / closed.abs() <= 0.10;
                ok &= within_se && within_tenth;
                lines.push(format!(
                    "m={m}: {:.6e} +- {:.1e} vs {:.6e} ({:.2} se, {:.2}%)",
                    est.estimate,
                    est.std_error,
                    closed,
                    dev / est.std_error,
                    100.0 * dev / closed.abs()
                ));
            }
            let a = green::green_integral_monte_carlo(1.0, 1, &spec)?;
            let b = green::green_integral_monte_carlo(1.0, 1, &spec)?;
            let deterministic = a.estimate.to_bits() == b.estimate.to_bits();
            ok &= deterministic;
            lines.push(format!("seed-fixed reruns bit-identical: {deterministic}"));
            Ok((ok, lines.join("; ")))
        });
    }

    checker.run("C4", "eisenstein two-route agreement", || {
        let s = SpectralParam::new(1.5)?;
        let mut worst = 0.0f64;
        for &(u, v) in &[(0.0, 1.0), (0.2, 1.1), (-0.3, 0.8), (0.4, 1.5), (0.1, 2.2)] {
            let tau = TauPoint::new(u, v)?;
            let lat = eisenstein::e_star_lattice_extrapolated(tau, s, 250)?;
            let fou = eisenstein::e_star_fourier(tau, s, 40)?;
            worst = worst.max(((lat - fou) / fou).abs());
        }
        Ok((worst < 1e-6, format!("max rel deviation {worst:.3e} on 5-point grid (tol 1e-6)")))
    });

    checker.run("C5", "functional-equation symmetry", || {
        let mut worst = 0.0f64;
        for &s in &[0.3f64, 0.45] {
            for &(u, v) in &[(0.2, 1.4), (0.0, 0.9), (-0.35, 1.7)] {
                let tau = TauPoint::new(u, v)?;
                let a = eisenstein::e_star_fourier(tau, SpectralParam::new(s)?, 40)?;
                let b = eisenstein::e_star_fourier(tau, SpectralParam::new(1.0 - s)?, 40)?;
                worst = worst.max(((a - b) / a).abs());
            }
        }
        Ok((worst < 1e-9, format!("max rel asymmetry {worst:.3e} (tol 1e-9)")))
    });

    checker.run("C6", "appendix closed forms vs quadrature", || {
        let mut worst = 0.0f64;
        for &v in &[0.5, 1.0] {
            for &m in &[1i64, 2, 3] {
                let closed = eisenstein::appendix_integrals(v, m)?;
                let a = 2.0 * PI * m as f64 * v;
                let qi = quad::adaptive_upper_inf(move |r: f64| (-a * r).exp(), 1.0, 0.0, 1e-11).value;
                let qj =
                    quad::adaptive_upper_inf(move |r: f64| (-a * r).exp() * r, 1.0, 0.0, 1e-11).value;
                let qip = quad::adaptive_upper_inf(
                    move |r: f64| (-a * r).exp() * (r * r - 1.0).ln(),
                    1.0,
                    0.0,
                    1e-11,
                )
                .value;
                let qjp = quad::adaptive_upper_inf(
                    move |r: f64| (-a * r).exp() * (r * r - 1.0).ln() * r,
                    1.0,
                    0.0,
                    1e-11,
                )
                .value;
                for (have, want) in [
                    (closed.i_m1, qi),
                    (closed.j_m1, qj),
                    (closed.i_m1_prime, qip),
                    (closed.j_m1_prime, qjp),
                ] {
                    worst = worst.max(((have - want) / want).abs());
                }
            }
        }
        Ok((worst < 1e-8, format!("max rel deviation {worst:.3e} on 6-cell grid (tol 1e-8)")))
    });

    checker.run("C7", "constant term and its s-derivative", || {
        let mut worst_value = 0.0f64;
        let mut worst_deriv = 0.0f64;
        for &v in &[0.5, 1.0, 2.0] {
            let ct = eisenstein::constant_term(v, &constants)?;
            let lim = eisenstein::c0_check_at(v, 1.0)?;
            worst_value = worst_value.max(((lim - ct.c0_check) / ct.c0_check).abs());
            let h = 1e-4;
            let fd = (eisenstein::c0_check_at(v, 1.0 + h)? - eisenstein::c0_check_at(v, 1.0 - h)?)
                / (2.0 * h);
            worst_deriv = worst_deriv.max(((fd - ct.c0_check_prime) / ct.c0_check_prime).abs());
        }
        Ok((
            worst_value < 1e-12 && worst_deriv < 1e-5,
            format!("value rel {worst_value:.3e} (tol 1e-12), derivative rel {worst_deriv:.3e} (tol 1e-5)"),
        ))
    });

    checker.run("C8", "divisor identities", || {
        for m in 1..=10_000i64 {
            let mut s = 0i64;
            let mut n = 1i64;
            while n * n <= m {
                if m % (n * n) == 0 {
                    s += arith::divisor_profile(m / (n * n))?.psi_index;
                }
                n += 1;
            }
            if s != arith::divisor_profile(m)?.sigma {
                return Ok((false, format!("sigma(m) != sum psi(m/n^2) at m = {m}")));
            }
        }
        for m in 1..=200i64 {
            for mm in [m, -m] {
                let count = arith::enumerate_cosets(mm)?.len() as i64;
                if count != arith::divisor_profile(mm)?.sigma {
                    return Ok((false, format!("coset count mismatch at m = {mm}")));
                }
            }
        }
        Ok((true, "sigma = sum psi exact to 10^4; coset counts = sigma to 200".into()))
    });

    checker.run("C9", "sigma-derivative sign", || {
        let h = 1e-6;
        let mut worst = 0.0f64;
        for m in 1..=50i64 {
            let fd =
                (arith::sigma_star(0.5 + h, m)? - arith::sigma_star(0.5 - h, m)?) / (2.0 * h);
            let an = arith::sigma_star_prime_half(m)?;
            worst = worst.max(((fd - an) / an.abs().max(1e-12)).abs());
        }
        // negative test: the opposite sign must break the main identity
        let mut flipped_residuals = Vec::new();
        for m in [2i64, 6, 12] {
            let v = 1.0;
            let profile = arith::divisor_profile(m)?;
            let sigma = profile.sigma as f64;
            let mut dlogd = 0.0;
            for &d in &profile.divisors {
                dlogd += d as f64 * (d as f64).ln();
            }
            let a_prime_flipped =
                sigma / (4.0 * PI * m as f64 * v) + (sigma * (m as f64).ln() - 2.0 * dlogd);
            let a = sigma;
            let rhs_flipped =
                -48.0 * (constants.zeta_log_deriv_neg1 + 0.5) * a + 12.0 * a_prime_flipped;
            let lhs = identity::faltings_height(m, &constants)?
                + constants.c_vol * green::green_integral_closed(v, m)?;
            flipped_residuals.push(((lhs - rhs_flipped) / rhs_flipped).abs());
        }
        let all_break = flipped_residuals.iter().all(|r| *r > 1e-6);
        Ok((
            worst < 1e-6 && all_break,
            format!(
                "finite-difference max rel {worst:.3e} (tol 1e-6); flipped-sign residuals {:?} all > 1e-6: {all_break}",
                flipped_residuals.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>()
            ),
        ))
    });

    checker.run("C10", "boundary lemmata", || {
        let mut worst_min = 0.0f64;
        for m in 1..=50i64 {
            let got = boundary::lemma_min_integral(m)?;
            let want = 4.0 * arith::divisor_profile(m)?.tau as f64 * (m as f64).sqrt();
            worst_min = worst_min.max(((got - want) / want).abs());
        }
        let mut bounds_ok = true;
        for am in 1..=10i64 {
            for m in [am, -am] {
                for &v in &[0.25, 1.0, 4.0] {
                    let lemma = boundary::lemma_b_bounds(m, v)?;
                    if !(lemma.lhs > 0.0 && lemma.lhs <= lemma.rhs * (1.0 + 1e-6)) {
                        bounds_ok = false;
                    }
                }
            }
        }
        let vals = boundary::cusp_cancellation_check(1.0, 2.0, 2.0, &[10.0, 100.0, 1000.0, 10000.0])?;
        let d1 = (vals[1] - vals[0]).abs();
        let d2 = (vals[2] - vals[1]).abs();
        let d3 = (vals[3] - vals[2]).abs();
        let halves = d2 <= d1 / 2.0 && d3 <= d2 / 2.0;
        Ok((
            worst_min < 1e-8 && bounds_ok && halves,
            format!(
                "min-lemma max rel {worst_min:.3e} (tol 1e-8); bounds hold: {bounds_ok}; cancellation diffs {d1:.2e} -> {d2:.2e} -> {d3:.2e} halve: {halves}"
            ),
        ))
    });

    checker.run("C11", "volume consistency", || {
        let dev = (identity::volume_constant_check() - 2.0).abs();
        Ok((dev < 1e-14, format!("|(18/pi^2)(pi/3)^2 - 2| = {dev:.3e} (tol 1e-14)")))
    });

    checker.run("C12", "Green-sum invariance under generators", || {
        let v = 1.0;
        let m = 2;
        let radius = 60;
        let z = SurfacePoint::new(0.1, 1.3, -0.2, 0.9)?;
        let base = green::big_xi(v, &z, m, radius)?.value;
        let shifted =
            green::big_xi(v, &SurfacePoint::new(1.1, 1.3, -0.2, 0.9)?, m, radius)?.value;
        let norm = 0.1f64 * 0.1 + 1.3 * 1.3;
        let inverted = green::big_xi(
            v,
            &SurfacePoint::new(-0.1 / norm, 1.3 / norm, -0.2, 0.9)?,
            m,
            radius,
        )?
        .value;
        let d_shift = (base - shifted).abs();
        let d_inv = (base - inverted).abs();
        Ok((
            d_shift < 1e-3 && d_inv < 1e-3,
            format!("translation move {d_shift:.3e}, inversion move {d_inv:.3e} (tol 1e-3)"),
        ))
    });

    // supplementary constant check: zeta'(-1) against the literature value
    checker.run("X1", "zeta'(-1) literature cross-check", || {
        let dev = (constants.zeta_prime_neg1 + 0.165_421_143_7).abs();
        Ok((
            dev < 1e-10,
            format!("zeta'(-1) = {:.12} (|dev| = {dev:.3e}, tol 1e-10)", constants.zeta_prime_neg1),
        ))
    });

    checker.outcomes
}

/// Render outcomes as one pass/fail line per criterion.
pub fn format_lines(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "[{}] {} - {}: {} ({:.2}s)\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail,
            o.seconds
        ));
    }
    out
}
