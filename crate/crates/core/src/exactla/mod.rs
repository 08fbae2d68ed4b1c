//! Exact linear algebra over ℚ: rational numbers, dense matrices, ranks,
//! kernels, solves and quotient spaces. Nothing here uses floating point.

mod elim;
mod matrix;
mod rational;

pub use elim::{
    echelon, quotient_space, rank, rank_kernel_image, right_inverse, solve, solve_many, Echelon, QuotientSpace,
    RankKernelImage,
};
pub use matrix::RationalMatrix;
pub use rational::{ParseRationalError, Rational};

use rand::Rng;

/// A vector with independent uniform integer entries in `-5..=5`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::from_int(rng.gen_range(-5..=5))).collect()
}
