//! Multiplicative arithmetic functions and determinant-m matrix combinatorics.
//!
//! Conventions:
//! - sigma(m) = sum of positive divisors of |m|, tau(m) = their count,
//!   psi(m) = m * prod_{p|m} (1 + 1/p) (the index of Gamma_0(m)).
//! - sigma(m) = sum_{n^2 | m} psi(m/n^2), an exact integer identity used by
//!   the Green-integral assembly.
//! - sigma*_nu(n) = |n|^nu sum_{d | |n|} d^{-2 nu} = sigma*_{-nu}(n); its
//!   analytic nu-derivative at 1/2 is (2 sum d log d - sigma log m)/sqrt(m).
//!   The derivative sign follows the calculus derivative (verified against
//!   finite differences), which is also the sign that closes the height
//!   identity.

use crate::error::{Error, Result};

/// 2x2 integer matrix (a b; c d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct LatticeMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl LatticeMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        LatticeMatrix { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }
}

impl std::fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Divisor data of a nonzero integer m (computed on |m|).
#[derive(Debug, Clone, serde::Serialize)]
pub struct DivisorProfile {
    pub m: i64,
    /// Sorted positive divisors of |m|.
    pub divisors: Vec<i64>,
    pub sigma: i64,
    pub tau: i64,
    /// psi(|m|) = |m| prod_{p | |m|} (1 + 1/p).
    pub psi_index: i64,
}

fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    debug_assert!(n > 0);
    let mut out = Vec::new();
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors_from_factorization(factors: &[(i64, u32)]) -> Vec<i64> {
    let mut divs = vec![1i64];
    for &(p, e) in factors {
        let len = divs.len();
        let mut pk = 1i64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Positive divisors of |m|, sorted.
pub fn divisors(m: i64) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::domain("divisors", "m must be nonzero"));
    }
    Ok(divisors_from_factorization(&factorize(m.abs())))
}

pub fn divisor_profile(m: i64) -> Result<DivisorProfile> {
    if m == 0 {
        return Err(Error::domain("divisor_profile", "m must be nonzero"));
    }
    let am = m.abs();
    let factors = factorize(am);
    let divisors = divisors_from_factorization(&factors);
    let sigma = divisors.iter().sum();
    let tau = divisors.len() as i64;
    let mut psi = am;
    for &(p, _) in &factors {
        psi = psi / p * (p + 1);
    }
    Ok(DivisorProfile { m, divisors, sigma, tau, psi_index: psi })
}

/// sigma(|m|) as f64, a convenience for the analytic modules.
pub fn sigma(m: i64) -> Result<f64> {
    Ok(divisor_profile(m)?.sigma as f64)
}

/// sigma*_nu(n) = |n|^nu sum_{d | |n|} d^{-2 nu}.
pub fn sigma_star(nu: f64, n: i64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("sigma_star", "n must be nonzero"));
    }
    let an = n.abs() as f64;
    let mut sum = 0.0;
    for &d in &divisors(n)? {
        sum += (d as f64).powf(-2.0 * nu);
    }
    Ok(an.powf(nu) * sum)
}

/// Analytic nu-derivative of sigma*_nu(m) at nu = 1/2:
/// (2 sum_{d|m} d log d - sigma(m) log m) / sqrt(m).
pub fn sigma_star_prime_half(m: i64) -> Result<f64> {
    if m <= 0 {
        return Err(Error::domain("sigma_star_prime_half", "m must be positive"));
    }
    let profile = divisor_profile(m)?;
    let mut dlogd = 0.0;
    for &d in &profile.divisors {
        dlogd += d as f64 * (d as f64).ln();
    }
    let mf = m as f64;
    Ok((2.0 * dlogd - profile.sigma as f64 * mf.ln()) / mf.sqrt())
}

/// Upper-triangular coset representatives (a b; 0 d), ad = m, d > 0,
/// 0 <= b < d. Exactly sigma(|m|) of them.
pub fn enumerate_cosets(m: i64) -> Result<Vec<LatticeMatrix>> {
    if m == 0 {
        return Err(Error::domain("enumerate_cosets", "m must be nonzero"));
    }
    let mut out = Vec::new();
    for &d in &divisors(m)? {
        let a = m / d; // d > 0, a carries the sign of m
        for b in 0..d {
            out.push(LatticeMatrix::new(a, b, 0, d));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All integer matrices with det = m and max(|a|,|b|,|c|,|d|) <= radius,
/// in lexicographic (a, b, c, d) order.
pub fn enumerate_lattice(m: i64, radius: i64) -> Result<Vec<LatticeMatrix>> {
    if m == 0 {
        return Err(Error::domain("enumerate_lattice", "m must be nonzero"));
    }
    if radius <= 0 {
        return Err(Error::domain("enumerate_lattice", "radius must be positive"));
    }
    let mut out = Vec::new();
    for a in -radius..=radius {
        for d in -radius..=radius {
            let k = a * d - m; // need bc = k
            if k == 0 {
                // b = 0 or c = 0
                for c in -radius..=radius {
                    out.push(LatticeMatrix::new(a, 0, c, d));
                }
                for b in -radius..=radius {
                    if b != 0 {
                        out.push(LatticeMatrix::new(a, b, 0, d));
                    }
                }
            } else {
                let ak = k.abs();
                let mut e = 1i64;
                while e * e <= ak {
                    if ak % e == 0 {
                        let f = ak / e;
                        let mut pairs = vec![(e, k / e)];
                        if f != e {
                            pairs.push((f, k / f));
                        }
                        for (b0, c0) in pairs {
                            if b0 > radius || c0.abs() > radius {
                                continue;
                            }
                            out.push(LatticeMatrix::new(a, b0, c0, d));
                            out.push(LatticeMatrix::new(a, -b0, -c0, d));
                        }
                    }
                    e += 1;
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_of_six() {
        let p = divisor_profile(6).unwrap();
        assert_eq!(p.divisors, vec![1, 2, 3, 6]);
        assert_eq!(p.sigma, 12);
        assert_eq!(p.tau, 4);
        assert_eq!(p.psi_index, 12);
    }

    #[test]
    fn profile_of_four_and_rankin_identity() {
        let p = divisor_profile(4).unwrap();
        assert_eq!(p.sigma, 7);
        // sigma(4) = psi(4) + psi(1)
        assert_eq!(
            p.sigma,
            divisor_profile(4).unwrap().psi_index + divisor_profile(1).unwrap().psi_index
        );
    }

    #[test]
    fn profile_of_one_and_negative() {
        let p = divisor_profile(1).unwrap();
        assert_eq!((p.sigma, p.tau, p.psi_index), (1, 1, 1));
        let q = divisor_profile(-12).unwrap();
        assert_eq!(q.sigma, 28);
        assert!(divisor_profile(0).is_err());
    }

    #[test]
    fn rankin_identity_on_range() {
        // sigma(m) = sum_{n^2 | m} psi(m/n^2)
        for m in 1..=500i64 {
            let mut s = 0;
            let mut n = 1;
            while n * n <= m {
                if m % (n * n) == 0 {
                    s += divisor_profile(m / (n * n)).unwrap().psi_index;
                }
                n += 1;
            }
            assert_eq!(s, divisor_profile(m).unwrap().sigma, "m = {m}");
        }
    }

    #[test]
    fn sigma_star_values() {
        assert!((sigma_star(0.5, 4).unwrap() - 3.5).abs() < 1e-15);
        assert!((sigma_star(0.5, 1).unwrap() - 1.0).abs() < 1e-15);
        let a = sigma_star(0.3, 6).unwrap();
        let b = sigma_star(-0.3, 6).unwrap();
        assert!((a - b).abs() < 1e-14 * a.abs());
        assert!(sigma_star(0.5, 0).is_err());
    }

    #[test]
    fn sigma_star_half_times_sqrt_is_sigma() {
        for m in 1..=1000i64 {
            let lhs = (m as f64).sqrt() * sigma_star(0.5, m).unwrap();
            let sig = divisor_profile(m).unwrap().sigma as f64;
            assert!(((lhs - sig) / sig).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn sigma_star_prime_half_examples() {
        assert_eq!(sigma_star_prime_half(1).unwrap(), 0.0);
        let v = sigma_star_prime_half(2).unwrap();
        let expect = 2f64.ln() / 2f64.sqrt();
        assert!(((v - expect) / expect).abs() < 1e-14, "{v}");
        assert!(sigma_star_prime_half(0).is_err());
        assert!(sigma_star_prime_half(-3).is_err());
    }

    #[test]
    fn sigma_star_prime_half_matches_finite_differences() {
        let h = 1e-6;
        for m in 2..=50i64 {
            let fd = (sigma_star(0.5 + h, m).unwrap() - sigma_star(0.5 - h, m).unwrap())
                / (2.0 * h);
            let an = sigma_star_prime_half(m).unwrap();
            let denom = an.abs().max(1e-12);
            assert!(((fd - an) / denom).abs() < 1e-6, "m = {m}: {fd} vs {an}");
        }
    }

    #[test]
    fn cosets_small_cases() {
        assert_eq!(enumerate_cosets(1).unwrap(), vec![LatticeMatrix::new(1, 0, 0, 1)]);
        let two = enumerate_cosets(2).unwrap();
        assert_eq!(two.len(), 3);
        assert!(two.contains(&LatticeMatrix::new(1, 0, 0, 2)));
        assert!(two.contains(&LatticeMatrix::new(1, 1, 0, 2)));
        assert!(two.contains(&LatticeMatrix::new(2, 0, 0, 1)));
        assert_eq!(enumerate_cosets(4).unwrap().len(), 7);
    }

    #[test]
    fn coset_count_is_sigma() {
        for m in [-20i64, -7, -1, 1, 2, 3, 12, 36, 100, 200] {
            let cosets = enumerate_cosets(m).unwrap();
            let sig = divisor_profile(m).unwrap().sigma as usize;
            assert_eq!(cosets.len(), sig, "m = {m}");
            for mat in &cosets {
                assert_eq!(mat.det(), m);
                assert!(mat.d > 0 && mat.b >= 0 && mat.b < mat.d);
            }
        }
    }

    #[test]
    fn lattice_enumeration_matches_brute_force() {
        for m in [1i64, 2, -1, -3, 4] {
            for radius in [1i64, 2, 3] {
                let fast = enumerate_lattice(m, radius).unwrap();
                let mut brute = Vec::new();
                for a in -radius..=radius {
                    for b in -radius..=radius {
                        for c in -radius..=radius {
                            for d in -radius..=radius {
                                if a * d - b * c == m {
                                    brute.push(LatticeMatrix::new(a, b, c, d));
                                }
                            }
                        }
                    }
                }
                brute.sort_unstable();
                assert_eq!(fast, brute, "m = {m}, radius = {radius}");
            }
        }
    }

    #[test]
    fn lattice_unit_determinant_contains_generators() {
        let l = enumerate_lattice(1, 1).unwrap();
        for mat in [
            LatticeMatrix::new(1, 0, 0, 1),
            LatticeMatrix::new(-1, 0, 0, -1),
            LatticeMatrix::new(0, -1, 1, 0),
            LatticeMatrix::new(0, 1, -1, 0),
        ] {
            assert!(l.contains(&mat));
        }
        for mat in &l {
            assert_eq!(mat.det(), 1);
        }
    }

    #[test]
    fn lattice_count_monotone_in_radius() {
        let mut prev = 0;
        for radius in 1..=8 {
            let n = enumerate_lattice(2, radius).unwrap().len();
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn lattice_superset_of_cosets() {
        let lat = enumerate_lattice(2, 2).unwrap();
        for mat in enumerate_cosets(2).unwrap() {
            assert!(lat.contains(&mat), "missing {mat}");
        }
    }
}
