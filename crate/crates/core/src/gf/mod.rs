//! Finite-field arithmetic and the linear algebra built on it.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{is_prime, prime_power_parts, smallest_prime_power_at_least, Elem, Field, FIELD_BUDGET};
pub use matrix::{cauchy_matrix, circulant_from_row, circulant_polynomial, rank, solve, Mat, Solution};
pub use poly::{common_root_exists, gcd, Poly};
