//! Seedable PRNG used by every randomized probe and sampler.
//!
//! Reports must be reproducible from a seed alone, in any language, so the
//! generator is pinned here by its algorithm rather than by a library name.
//! It is SplitMix64 (Steele–Lea–Flood): 64-bit state `s`, and each draw does
//!
//! ```text
//! s += 0x9E3779B97F4A7C15
//! z  = s
//! z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! Uniform doubles in [0,1) take the top 53 bits: `(out >> 11) * 2^-53`.
//! Complex samples are `re + i·im` with both parts uniform in [-1,1).

use num_complex::Complex64;

use crate::linalg::{CMatrix, MatrixTuple};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0,1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo,hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0,n).
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.uniform() * n as f64) as usize % n
    }

    /// Complex with Re and Im uniform in [-1,1).
    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.uniform_in(-1.0, 1.0), self.uniform_in(-1.0, 1.0))
    }

    /// n×n matrix with entries from [`Self::complex`].
    pub fn matrix(&mut self, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| self.complex())
    }

    /// Random Hermitian n×n matrix (symmetrized random matrix).
    pub fn hermitian(&mut self, n: usize) -> CMatrix {
        let m = self.matrix(n);
        m.hermitian_part()
    }

    /// g-tuple of random n×n matrices.
    pub fn tuple(&mut self, g: usize, n: usize) -> MatrixTuple {
        MatrixTuple::new((0..g).map(|_| self.matrix(n)).collect())
            .expect("random square components of equal size")
    }

    /// Random n×n unitary from the QR factorization of a random matrix,
    /// with the phase convention that R has positive diagonal.
    pub fn unitary(&mut self, n: usize) -> CMatrix {
        loop {
            if let Ok((q, _)) = self.matrix(n).qr() {
                return q;
            }
        }
    }
}
