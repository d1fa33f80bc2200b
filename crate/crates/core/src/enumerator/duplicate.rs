use num_traits::One;

use crate::system::{Assignment, SystemError};

/// `y` is a duplicate of `x` when every equation of `E_n` that `x` satisfies
/// is also satisfied by `y`. Checked directly, atom by atom, without building
/// either type.
pub fn is_duplicate(y: &Assignment, x: &Assignment, n: usize) -> Result<bool, SystemError> {
    for a in [x, y] {
        if a.len() != n {
            return Err(SystemError::LengthMismatch {
                expected: n,
                got: a.len(),
            });
        }
    }
    let (x, y) = (x.values(), y.values());
    for i in 0..n {
        if x[i].is_one() && !y[i].is_one() {
            return Ok(false);
        }
        for j in i..n {
            let xs = &x[i] + &x[j];
            let xp = &x[i] * &x[j];
            let ys = &y[i] + &y[j];
            let yp = &y[i] * &y[j];
            for k in 0..n {
                if xs == x[k] && ys != y[k] {
                    return Ok(false);
                }
                if xp == x[k] && yp != y[k] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::type_of;
    use proptest::prelude::*;

    fn t(v: &[u64]) -> Assignment {
        Assignment::from_u64s(v)
    }

    #[test]
    fn small_cases() {
        assert!(is_duplicate(&t(&[3, 1]), &t(&[3, 1]), 2).unwrap());
        assert!(!is_duplicate(&t(&[1]), &t(&[0]), 1).unwrap());
        assert!(is_duplicate(&t(&[5]), &t(&[2]), 1).unwrap());
        assert!(is_duplicate(&t(&[1]), &t(&[2]), 1).unwrap());
        assert!(is_duplicate(&t(&[1]), &t(&[2, 3]), 1).is_err());
    }

    #[test]
    fn zero_tuple_has_no_other_duplicate() {
        for n in 1..=3usize {
            let zero = t(&vec![0; n]);
            let mut others = 0;
            crate::solver::for_each_point(n, 3, |p| {
                if p.iter().any(|&v| v != 0) && is_duplicate(&t(p), &zero, n).unwrap() {
                    others += 1;
                }
                true
            });
            assert_eq!(others, 0, "n = {n}");
        }
    }

    fn arb_tuple(n: usize) -> impl Strategy<Value = Assignment> {
        proptest::collection::vec(0u64..=4, n).prop_map(|v| Assignment::from_u64s(&v))
    }

    fn arb_triple() -> impl Strategy<Value = (usize, Assignment, Assignment, Assignment)> {
        (1usize..=3).prop_flat_map(|n| (Just(n), arb_tuple(n), arb_tuple(n), arb_tuple(n)))
    }

    proptest! {
        #[test]
        fn preorder((n, a, b, c) in arb_triple()) {
            prop_assert!(is_duplicate(&a, &a, n).unwrap());
            if is_duplicate(&b, &a, n).unwrap() && is_duplicate(&c, &b, n).unwrap() {
                prop_assert!(is_duplicate(&c, &a, n).unwrap());
            }
        }

        #[test]
        fn agrees_with_type_containment((n, x, y, _) in arb_triple()) {
            let tx = type_of(&x, n).unwrap();
            let ty = type_of(&y, n).unwrap();
            prop_assert_eq!(is_duplicate(&y, &x, n).unwrap(), tx.is_subset_of(&ty));
        }
    }
}
