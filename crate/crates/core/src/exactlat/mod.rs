//! Exact linear algebra over Z, Q and prime fields.

mod field;
mod lattice;
mod matrix;
pub mod primes;

pub use field::{
    kernel_over, mod_p_kernel, mod_p_rank, mod_p_row_basis, mod_p_solve, pivot_columns, rank_over, rational_kernel,
    rational_rank, Base,
};
pub use lattice::{
    column_hnf, column_hnf_with_transform, determinantal_content, kernel_lattice, smith_invariants, solve_integer,
    LatticeBasis,
};
pub use matrix::{decimal, IntegerMatrix};
pub use primes::{is_prime, prime_divisors, Prime};
