//! Incomplete and complete elliptic integrals of the first kind.
//!
//! Conventions: the second argument t is the modulus, so the integrand is
//! 1/√((1−x²)(1−t²x²)) and internal Carlson calls use the parameter m = t².

use num_complex::Complex64;

use super::carlson::carlson_rf;
use super::EllipticError;

/// K(z,t) = ∫₀ᶻ dx/√((1−x²)(1−t²x²)) = z·R_F(1−z², 1−t²z², 1).
///
/// Valid on the principal branch; points with z² real and ≥ 1 (or t²z² real
/// and ≥ 1) sit on a branch cut and are reported as ambiguous instead of
/// being resolved silently. The degenerate modulus t = 0 is allowed, where
/// the integral collapses to arcsin.
pub fn elliptic_k_incomplete(z: Complex64, t: f64) -> Result<Complex64, EllipticError> {
    if !(0.0..1.0).contains(&t) {
        return Err(EllipticError::ModulusOutOfRange { t });
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let one = Complex64::new(1.0, 0.0);
    let u = one - z * z;
    let v = one - (t * t) * z * z;
    for w in [u, v] {
        if w.im == 0.0 && w.re < 0.0 {
            return Err(EllipticError::BranchAmbiguity { z });
        }
    }
    Ok(z * carlson_rf(u, v, one)?)
}

/// Complete integral K(t) = K(1,t), real for t ∈ (0,1).
pub fn elliptic_k(t: f64) -> Result<f64, EllipticError> {
    Ok(elliptic_k_incomplete(Complex64::new(1.0, 0.0), t)?.re)
}

/// μ(t) = (π/2)·K(√(1−t²))/K(t).
pub fn mu(t: f64) -> Result<f64, EllipticError> {
    if !(0.0 < t && t < 1.0) {
        return Err(EllipticError::ModulusOutOfRange { t });
    }
    let complement = (1.0 - t * t).sqrt();
    Ok(std::f64::consts::FRAC_PI_2 * elliptic_k(complement)? / elliptic_k(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Adaptive Simpson quadrature of the Legendre form
    /// ∫₀^φ dθ/√(1−t²sin²θ); substituting x = sinθ removes the endpoint
    /// singularity of the defining integral, so plain adaptivity suffices.
    fn k_by_quadrature(z: f64, t: f64) -> f64 {
        let phi = z.asin();
        let f = |theta: f64| 1.0 / (1.0 - (t * theta.sin()).powi(2)).sqrt();
        adaptive_simpson(&f, 0.0, phi, 1e-13, 40)
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let whole = simpson(f, a, b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            adaptive_simpson(f, a, m, tol / 2.0, depth - 1)
                + adaptive_simpson(f, m, b, tol / 2.0, depth - 1)
        }
    }

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }

    #[test]
    fn degenerate_modulus_reduces_to_arcsin() {
        for &z in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let v = elliptic_k_incomplete(c(z, 0.0), 0.0).unwrap();
            assert!((v.re - z.asin()).abs() < 1e-12, "z = {z}");
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn arcsin_special_value_pi_over_six() {
        let v = elliptic_k_incomplete(c(0.5, 0.0), 0.0).unwrap();
        assert!((v.re - std::f64::consts::PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn vanishes_at_zero_and_is_odd() {
        let t = 2.0 / 3.0;
        assert_eq!(elliptic_k_incomplete(c(0.0, 0.0), t).unwrap(), c(0.0, 0.0));
        for &(re, im) in &[(0.3, 0.1), (0.5, -0.4), (0.0, 0.8)] {
            let z = c(re, im);
            let plus = elliptic_k_incomplete(z, t).unwrap();
            let minus = elliptic_k_incomplete(-z, t).unwrap();
            assert!((plus + minus).norm() < 1e-12);
        }
    }

    #[test]
    fn complete_integral_matches_quadrature() {
        let got = elliptic_k(2.0 / 3.0).unwrap();
        let want = k_by_quadrature(1.0, 2.0 / 3.0);
        assert!((got - want).abs() < 1e-10, "got {got}, quadrature {want}");
        // And the frozen reference value.
        assert!((got - 1.8096674954865885).abs() < 1e-13);
    }

    #[test]
    fn incomplete_integral_matches_quadrature_inside_disk() {
        let t = 2.0 / 3.0;
        for &z in &[0.2, 0.45, 0.8] {
            let got = elliptic_k_incomplete(c(z, 0.0), t).unwrap();
            let want = k_by_quadrature(z, t);
            assert!((got.re - want).abs() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn complex_argument_reference_value() {
        // Frozen from high-precision evaluation of F(arcsin z | m).
        let v = elliptic_k_incomplete(c(0.5, 0.2), 2.0 / 3.0).unwrap();
        assert!((v - c(0.5130543680507565, 0.2392944972743094)).norm() < 1e-12);
    }

    #[test]
    fn complete_integral_positive_and_increasing_in_the_modulus() {
        let mut prev = 0.0;
        for k in 1..20 {
            let t = k as f64 / 20.0;
            let v = elliptic_k(t).unwrap();
            assert!(v > prev, "K({t}) = {v} not increasing");
            prev = v;
        }
        // K(0+) = π/2 from below.
        assert!(elliptic_k(0.01).unwrap() > std::f64::consts::FRAC_PI_2 - 1e-3);
    }

    #[test]
    fn mu_symmetry_point() {
        let v = mu(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn mu_reciprocal_identity() {
        for &t in &[0.3f64, 0.5, 2.0 / 3.0, 0.9] {
            let complement = (1.0 - t * t).sqrt();
            let product = mu(t).unwrap() * mu(complement).unwrap();
            let want = std::f64::consts::FRAC_PI_2.powi(2);
            assert!((product - want).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn branch_ambiguity_reported() {
        assert!(matches!(
            elliptic_k_incomplete(c(1.2, 0.0), 2.0 / 3.0),
            Err(EllipticError::BranchAmbiguity { .. })
        ));
        assert!(matches!(
            elliptic_k_incomplete(c(0.5, 0.0), 1.5),
            Err(EllipticError::ModulusOutOfRange { .. })
        ));
    }
}
