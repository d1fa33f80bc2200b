use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::VerifyError;

pub const MAX_BINOMIAL_EXPONENT: u64 = 1 << 13;

/// `C(m, 0), ..., C(m, m)`.
pub(crate) fn binomial_row(m: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..m {
        c = c * (m - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// `sum_{k=2..m} C(m, k) x^(k-2)` by Horner's rule.
pub fn binomial_tail(m: u64, x: &BigUint) -> BigUint {
    let row = binomial_row(m);
    let mut acc = BigUint::zero();
    for k in (2..=m as usize).rev() {
        acc = acc * x + &row[k];
    }
    acc
}

/// Checks `(x + 1)^m = 1 + m x + x^2 sum_{k=2..m} C(m, k) x^(k-2)` exactly.
pub fn binomial_identity_check(m: u64, x: &BigUint) -> Result<bool, VerifyError> {
    if m == 0 || m > MAX_BINOMIAL_EXPONENT {
        return Err(VerifyError::Budget {
            what: format!("exponent {m}"),
            limit: MAX_BINOMIAL_EXPONENT,
        });
    }
    let lhs = num_traits::pow(x + 1u32, m as usize);
    let rhs = BigUint::one() + x * m + x * x * binomial_tail(m, x);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows() {
        let r = binomial_row(4);
        assert_eq!(r, [1u32, 4, 6, 4, 1].map(BigUint::from));
        assert_eq!(binomial_row(0), vec![BigUint::one()]);
    }

    #[test]
    fn small_identity() {
        // 256 = 1 + 4*3 + 9*27
        assert_eq!(binomial_tail(4, &BigUint::from(3u32)), BigUint::from(27u32));
        assert!(binomial_identity_check(4, &BigUint::from(3u32)).unwrap());
        for m in 1..40 {
            assert!(binomial_identity_check(m, &BigUint::zero()).unwrap());
            assert!(binomial_identity_check(m, &BigUint::from(7u32)).unwrap());
        }
    }

    #[test]
    fn mersenne_shaped() {
        let m = 1u64 << 7;
        assert!(binomial_identity_check(m, &BigUint::from(m - 1)).unwrap());
    }

    #[test]
    fn guard() {
        assert!(binomial_identity_check(0, &BigUint::one()).is_err());
        assert!(binomial_identity_check(MAX_BINOMIAL_EXPONENT + 1, &BigUint::one()).is_err());
    }
}
