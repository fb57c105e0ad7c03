//! Arithmetic functions, Gaussian binomials, coset counts, Gauss sums over
//! symmetric matrices, and Cohen's function. Every counting formula has a
//! brute-force counterpart.

pub mod cohen;
pub mod counting;
pub mod gauss;
pub mod multiplicative;

pub use cohen::{cohen_h, discriminant_split, is_fundamental_discriminant, DiscriminantSplit};
pub use counting::{coset_count, coset_count_bruteforce, g_p_count, lattice_multiplicities, CosetKind};
pub use gauss::{gauss_sum, gauss_sum_bruteforce};
pub use multiplicative::{bernoulli, divisors, g_k, is_prime, kronecker, mobius, ord_p, sigma, zeta_one_minus};
