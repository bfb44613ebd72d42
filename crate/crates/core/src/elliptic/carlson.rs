//! Carlson's symmetric elliptic integral R_F by argument duplication.

use num_complex::Complex64;

use super::EllipticError;

const MAX_DUPLICATIONS: usize = 120;

/// R_F(x,y,z) = ½∫₀^∞ dt/√((t+x)(t+y)(t+z)) on the principal branch.
///
/// Arguments must lie in the cut plane ℂ∖(−∞,0) with at most one of them
/// zero; negative real arguments are rejected rather than silently assigned
/// a branch. The duplication iteration contracts the arguments toward their
/// mean, then a degree-7 Taylor kernel finishes; relative error is well
/// below 1e-12 across the working range.
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64, EllipticError> {
    for &arg in &[x, y, z] {
        if arg.im == 0.0 && arg.re < 0.0 {
            return Err(EllipticError::BranchCut { arg });
        }
    }
    let zeros = [x, y, z].iter().filter(|a| a.norm() == 0.0).count();
    if zeros > 1 {
        return Err(EllipticError::TooManyZeros);
    }

    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * 1e-16f64).powf(-1.0 / 6.0)
        * [(a0 - x).norm(), (a0 - y).norm(), (a0 - z).norm()]
            .into_iter()
            .fold(0.0, f64::max);

    let (mut xm, mut ym, mut zm, mut am) = (x, y, z, a0);
    let mut four_m = 1.0f64;
    let mut converged = false;
    for _ in 0..MAX_DUPLICATIONS {
        if q / four_m <= am.norm() {
            converged = true;
            break;
        }
        let sx = xm.sqrt();
        let sy = ym.sqrt();
        let sz = zm.sqrt();
        let lambda = sx * sy + sy * sz + sz * sx;
        xm = (xm + lambda) * 0.25;
        ym = (ym + lambda) * 0.25;
        zm = (zm + lambda) * 0.25;
        am = (am + lambda) * 0.25;
        four_m *= 4.0;
    }
    if !converged {
        return Err(EllipticError::RfNoConvergence);
    }

    let denom = am * four_m;
    let big_x = (a0 - x) / denom;
    let big_y = (a0 - y) / denom;
    let big_z = -big_x - big_y;
    let e2 = big_x * big_y - big_z * big_z;
    let e3 = big_x * big_y * big_z;
    // DLMF 19.36.1 truncation.
    let series = Complex64::new(1.0, 0.0) - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
        - 3.0 / 44.0 * e2 * e3
        - 5.0 / 208.0 * e2 * e2 * e2
        + 3.0 / 104.0 * e3 * e3
        + e2 * e2 * e3 / 16.0;
    Ok(series / am.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equal_arguments_reduce_to_inverse_sqrt() {
        // RF(x,x,x) = x^{-1/2}
        let v = carlson_rf(c(4.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lemniscatic_value() {
        // RF(0,1,1) = π/2
        let v = carlson_rf(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v - c(std::f64::consts::FRAC_PI_2, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn quadrature_cross_checks() {
        // Frozen from adaptive quadrature of the defining integral.
        let v = carlson_rf(c(1.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).unwrap();
        assert!((v - c(0.6850858166334359, 0.0)).norm() < 1e-12);

        let w = carlson_rf(c(1.0, 1.0), c(2.0, 0.0), c(4.0, -0.5)).unwrap();
        assert!((w - c(0.6619591459537772, -0.0536670076012066)).norm() < 1e-12);

        // RF(0, 1-t², 1) = K(t) at t = 2/3.
        let k = carlson_rf(c(0.0, 0.0), c(5.0 / 9.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((k - c(1.8096674954865885, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn homogeneity_under_positive_scaling() {
        let mut rng = SplitMix64::new(67);
        for _ in 0..20 {
            let x = c(rng.uniform_in(0.1, 3.0), rng.uniform_in(-1.0, 1.0));
            let y = c(rng.uniform_in(0.1, 3.0), rng.uniform_in(-1.0, 1.0));
            let z = c(rng.uniform_in(0.1, 3.0), rng.uniform_in(-1.0, 1.0));
            let lambda = rng.uniform_in(0.2, 5.0);
            let lhs = carlson_rf(x * lambda, y * lambda, z * lambda).unwrap();
            let rhs = carlson_rf(x, y, z).unwrap() / lambda.sqrt();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_negative_real_and_double_zero() {
        assert!(matches!(
            carlson_rf(c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
            Err(EllipticError::BranchCut { .. })
        ));
        assert!(matches!(
            carlson_rf(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            Err(EllipticError::TooManyZeros)
        ));
    }
}
