use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::VerifyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Prime,
    Composite,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        self == Primality::Prime
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `k mod (2^p - 1)` by folding the high bits onto the low ones.
fn reduce_mersenne(mut k: BigUint, p: u64, modulus: &BigUint) -> BigUint {
    while k.bits() > p {
        k = (&k & modulus) + (&k >> p);
    }
    if &k == modulus {
        BigUint::zero()
    } else {
        k
    }
}

/// Lucas-Lehmer test of `2^p - 1` for an odd prime `p`: `s_0 = 4`,
/// `s_{i+1} = s_i^2 - 2`, prime iff `s_{p-2} = 0` modulo `2^p - 1`.
pub fn lucas_lehmer(p: u64) -> Result<Primality, VerifyError> {
    if p < 3 || !is_prime_u64(p) {
        return Err(VerifyError::InvalidExponent(p));
    }
    let modulus = (BigUint::one() << p) - 1u32;
    let two = BigUint::from(2u32);
    let mut s = BigUint::from(4u32);
    for _ in 0..p - 2 {
        let mut sq = &s * &s;
        if sq < two {
            sq += &modulus;
        }
        s = reduce_mersenne(sq - &two, p, &modulus);
    }
    Ok(if s.is_zero() {
        Primality::Prime
    } else {
        Primality::Composite
    })
}

/// Whether `2^n - 1` is prime, for any `n`.
pub fn mersenne_is_prime(n: u32) -> bool {
    match n {
        0 | 1 => false,
        2 => true,
        _ if !is_prime_u64(n as u64) => false,
        _ => lucas_lehmer(n as u64)
            .map(Primality::is_prime)
            .unwrap_or(false),
    }
}
