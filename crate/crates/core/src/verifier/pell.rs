use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::VerifyError;

/// Largest `k` accepted by [`pell_minimal`]; the exponent `5^k` grows fast.
pub const MAX_PELL_K: u32 = 8;

/// A solution of `x^2 + 1 = 5^(2k+1) y^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub k: u32,
    pub x: BigUint,
    pub y: BigUint,
}

impl PellSolution {
    /// `5^(2k+1)`.
    pub fn modulus(&self) -> BigUint {
        num_traits::pow(BigUint::from(5u32), 2 * self.k as usize + 1)
    }

    pub fn is_valid(&self) -> bool {
        &self.x * &self.x + 1u32 == self.modulus() * &self.y * &self.y
    }

    fn checked(self) -> Result<Self, VerifyError> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(VerifyError::InvalidPell(format!(
                "k={} x={} y={}",
                self.k, self.x, self.y
            )))
        }
    }
}

/// `(a + b sqrt5)^e` by repeated squaring in `Z[sqrt5]`.
pub(crate) fn power_of_unit(a: &BigUint, b: &BigUint, mut e: u64) -> (BigUint, BigUint) {
    let mul = |(p, q): (&BigUint, &BigUint), (r, s): (&BigUint, &BigUint)| {
        (p * r + q * s * 5u32, p * s + q * r)
    };
    let (mut ra, mut rb) = (BigUint::one(), BigUint::zero());
    let (mut ba, mut bb) = (a.clone(), b.clone());
    while e > 0 {
        if e & 1 == 1 {
            (ra, rb) = mul((&ra, &rb), (&ba, &bb));
        }
        e >>= 1;
        if e > 0 {
            (ba, bb) = mul((&ba, &bb), (&ba, &bb));
        }
    }
    (ra, rb)
}

/// Minimal solution: with `(2 + sqrt5)^(5^k) = a + b sqrt5`, `x = a` and
/// `y = b / 5^k`.
///
/// `2a` and `2b` are the terms `s_j`, `t_j` at `j = 5^k` of the integer
/// sequences with `u_{j+1} = 4 u_j + u_{j-1}`, `s_0 = 2, s_1 = 4`,
/// `t_0 = 0, t_1 = 2`; this computes them by doubling.
pub fn pell_minimal(k: u32) -> Result<PellSolution, VerifyError> {
    if k > MAX_PELL_K {
        return Err(VerifyError::Budget {
            what: format!("k = {k}"),
            limit: MAX_PELL_K as u64,
        });
    }
    let exponent = 5u64.pow(k);
    let (a, b) = power_of_unit(&BigUint::from(2u32), &BigUint::one(), exponent);
    let (y, rem) = b.div_rem(&BigUint::from(exponent));
    if !rem.is_zero() {
        return Err(VerifyError::InvalidPell(format!("5^{k} does not divide b")));
    }
    PellSolution { k, x: a, y }.checked()
}

/// Next solution with `x^2 - N y^2 = -1`, `N = 5^(2k+1)`: the coordinates of
/// `(x + y sqrtN)^3`.
pub fn pell_next(sol: &PellSolution) -> Result<PellSolution, VerifyError> {
    let sol = sol.clone().checked()?;
    let n = sol.modulus();
    let (x, y) = (&sol.x, &sol.y);
    let x2 = x * x;
    let ny2 = &n * y * y;
    let next_x = x * (&x2 + &ny2 * 3u32);
    let next_y = y * (&x2 * 3u32 + &ny2);
    PellSolution {
        k: sol.k,
        x: next_x,
        y: next_y,
    }
    .checked()
}
