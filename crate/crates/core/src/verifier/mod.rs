//! Exact checks of explicit system families and the number theory behind
//! them: Mersenne and Fermat primality, minimal solutions of
//! `x^2 + 1 = 5^(2k+1) y^2`, and the binomial expansion of `(x + 1)^M`.
//!
//! Nothing here uses tolerances; every witness is re-checked against its
//! system with big-integer arithmetic.

mod binomial;
mod families;
mod pell;
mod primes;

use thiserror::Error;

pub use binomial::{binomial_identity_check, binomial_tail, MAX_BINOMIAL_EXPONENT};
pub use families::{
    family_system, family_witness, thm4_solution, uncond_all_solutions, uncond_solution, Family,
    FamilyWitness,
};
pub use pell::{pell_minimal, pell_next, PellSolution, MAX_PELL_K};
pub use primes::{is_prime_u64, lucas_lehmer, mersenne_is_prime, Primality};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("Lucas-Lehmer needs an odd prime exponent, got {0}")]
    InvalidExponent(u64),
    #[error("{family}: parameter {param} outside the supported range {min}..={max}")]
    ParamOutOfRange {
        family: Family,
        param: u32,
        min: u32,
        max: u32,
    },
    #[error("2^{0} - 1 is not prime")]
    NotMersennePrime(u32),
    #[error("2^(2^{0}) + 1 is not prime")]
    NotFermatPrime(u32),
    #[error("{what} is above the limit {limit}")]
    Budget { what: String, limit: u64 },
    #[error("{family}({param}): {detail}")]
    Mismatch {
        family: Family,
        param: u32,
        detail: String,
    },
    #[error("invalid Pell solution: {0}")]
    InvalidPell(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}
