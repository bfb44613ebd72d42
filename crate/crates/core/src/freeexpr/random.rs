//! Seeded generators of random polynomial free maps for the check suites.

use num_complex::Complex64;

use super::ast::{FreeExpr, FreeMapHandle};
use crate::rng::SplitMix64;

/// Random polynomial map M(ℂ)^g → M(ℂ)^h: each component is a sum of
/// `terms` random words of length ≤ max_degree with coefficients of modulus
/// ≤ 1. Constant terms are excluded so maps stay comparable across sizes.
pub fn random_polynomial_map(
    rng: &mut SplitMix64,
    g: usize,
    co_arity: usize,
    max_degree: usize,
    terms: usize,
) -> FreeMapHandle {
    let components = (0..co_arity)
        .map(|_| random_component(rng, g, max_degree, terms))
        .collect();
    FreeMapHandle::new(g, components).expect("generated components stay within arity")
}

/// Random polynomial self-map fixing the origin with an invertible linear
/// part: x_j ↦ c_j·x_j + higher-order words, |c_j| bounded away from 0.
pub fn random_self_map_fixing_zero(
    rng: &mut SplitMix64,
    g: usize,
    max_degree: usize,
    terms: usize,
) -> FreeMapHandle {
    let components = (0..g)
        .map(|j| {
            let phase = rng.uniform_in(0.0, std::f64::consts::TAU);
            let modulus = rng.uniform_in(0.5, 2.0);
            let linear =
                FreeExpr::scaled(Complex64::from_polar(modulus, phase), FreeExpr::Var(j + 1));
            let mut parts = vec![linear];
            for _ in 0..terms {
                let len = 2 + rng.below(max_degree.max(2) - 1);
                parts.push(random_word(rng, g, len));
            }
            FreeExpr::sum(parts)
        })
        .collect();
    FreeMapHandle::new(g, components).expect("generated components stay within arity")
}

fn random_component(rng: &mut SplitMix64, g: usize, max_degree: usize, terms: usize) -> FreeExpr {
    let parts = (0..terms.max(1))
        .map(|_| {
            let len = 1 + rng.below(max_degree.max(1));
            random_word(rng, g, len)
        })
        .collect();
    FreeExpr::sum(parts)
}

fn random_word(rng: &mut SplitMix64, g: usize, len: usize) -> FreeExpr {
    let coeff = rng.complex().scale(0.5);
    let letters = (0..len).map(|_| FreeExpr::Var(1 + rng.below(g))).collect();
    FreeExpr::scaled(coeff, FreeExpr::product(letters))
}

trait ComplexScale {
    fn scale(self, s: f64) -> Complex64;
}

impl ComplexScale for Complex64 {
    fn scale(self, s: f64) -> Complex64 {
        Complex64::new(self.re * s, self.im * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::MatrixTuple;

    #[test]
    fn generated_maps_are_polynomial_and_seeded() {
        let mut a = SplitMix64::new(99);
        let mut b = SplitMix64::new(99);
        let fa = random_polynomial_map(&mut a, 2, 2, 3, 4);
        let fb = random_polynomial_map(&mut b, 2, 2, 3, 4);
        assert_eq!(fa, fb);
        assert!(fa.is_polynomial());
    }

    #[test]
    fn self_maps_fix_origin() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..5 {
            let f = random_self_map_fixing_zero(&mut rng, 2, 3, 2);
            assert!(f.fixes_origin().unwrap());
            assert_eq!(f.arity(), f.co_arity());
        }
    }

    #[test]
    fn words_have_no_constant_term() {
        let mut rng = SplitMix64::new(13);
        let f = random_polynomial_map(&mut rng, 2, 1, 3, 5);
        let at_zero = f.evaluate_map(&MatrixTuple::zero(2, 2)).unwrap();
        assert!(at_zero.max_frobenius_norm() < 1e-15);
    }
}
