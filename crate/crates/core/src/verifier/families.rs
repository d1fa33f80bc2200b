use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::binomial::{binomial_row, binomial_tail};
use super::pell::{pell_minimal, PellSolution};
use super::primes::{is_prime_u64, mersenne_is_prime};
use super::VerifyError;
use crate::system::{Assignment, Atom, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Thm2,
    Thm3,
    Thm4,
    Uncond,
    Intro1,
    Intro2,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Thm2,
        Family::Thm3,
        Family::Thm4,
        Family::Uncond,
        Family::Intro1,
        Family::Intro2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Thm2 => "thm2",
            Family::Thm3 => "thm3",
            Family::Thm4 => "thm4",
            Family::Uncond => "uncond",
            Family::Intro1 => "intro1",
            Family::Intro2 => "intro2",
        }
    }

    /// Supported parameter range, inclusive.
    pub fn param_range(self) -> (u32, u32) {
        match self {
            Family::Thm2 => (2, 13),
            Family::Thm3 => (1, 4),
            Family::Thm4 => (1, 4),
            Family::Uncond => (1, 12),
            Family::Intro1 => (3, 20),
            Family::Intro2 => (2, 20),
        }
    }

    /// Number of variables of the system for parameter `n`.
    pub fn var_count(self, n: u32) -> usize {
        let n = n as usize;
        match self {
            Family::Thm2 => n + 8,
            Family::Thm3 => n + 6,
            Family::Thm4 => n + 10,
            Family::Uncond => n + 5,
            Family::Intro1 | Family::Intro2 => n,
        }
    }

    fn check_param(self, n: u32) -> Result<(), VerifyError> {
        let (min, max) = self.param_range();
        if n < min || n > max {
            return Err(VerifyError::ParamOutOfRange {
                family: self,
                param: n,
                min,
                max,
            });
        }
        match self {
            Family::Thm2 if !mersenne_is_prime(n) => Err(VerifyError::NotMersennePrime(n)),
            Family::Thm3 if !is_prime_u64((1u64 << (1u64 << n)) + 1) => {
                Err(VerifyError::NotFermatPrime(n))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::UnknownFamily(s.to_string()))
    }
}

/// A checked solution of a family system together with its expected maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyWitness {
    pub family: Family,
    pub param: u32,
    pub system: System,
    pub solution: Assignment,
    pub claimed_max: BigUint,
}

fn squaring_chain(n: usize) -> impl Iterator<Item = Atom> {
    (1..=n).map(|i| Atom::mul(i, i, i + 1))
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// `base^(2^(i-1))` for `i = 1..=count`.
fn square_tower(base: BigUint, count: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count);
    let mut cur = base;
    for _ in 0..count {
        let next = &cur * &cur;
        out.push(std::mem::replace(&mut cur, next));
    }
    out
}

fn build(family: Family, n: usize, atoms: impl IntoIterator<Item = Atom>) -> System {
    System::new(family.var_count(n as u32), atoms).expect("family atoms stay within range")
}

pub fn family_system(family: Family, n: u32) -> Result<System, VerifyError> {
    family.check_param(n)?;
    let m = n as usize;
    let x = |i: usize| m + i;
    let atoms: Vec<Atom> = match family {
        Family::Thm2 => squaring_chain(m)
            .chain([
                Atom::unit(x(2)),
                Atom::add(x(3), x(2), x(4)),
                Atom::add(x(4), x(2), x(5)),
                Atom::add(x(5), x(2), 1),
                Atom::mul(x(5), x(5), x(6)),
                Atom::mul(x(6), x(7), x(8)),
                Atom::add(x(8), 1, x(1)),
            ])
            .collect(),
        Family::Thm3 => squaring_chain(m)
            .chain([
                Atom::unit(x(2)),
                Atom::add(1, x(2), x(3)),
                Atom::add(x(3), x(2), x(4)),
                Atom::add(x(1), x(2), x(5)),
                Atom::mul(x(4), x(6), x(5)),
            ])
            .collect(),
        Family::Thm4 => squaring_chain(m)
            .chain([
                Atom::mul(1, x(1), x(2)),
                Atom::unit(x(3)),
                Atom::add(x(3), x(3), x(4)),
                Atom::add(x(4), x(4), x(5)),
                Atom::add(x(5), x(3), 1),
                Atom::mul(x(6), x(6), x(7)),
                Atom::mul(x(8), x(8), x(9)),
                Atom::add(x(9), x(3), x(10)),
                Atom::mul(x(2), x(7), x(10)),
            ])
            .collect(),
        Family::Uncond => squaring_chain(m)
            .chain([
                Atom::unit(x(2)),
                Atom::add(x(3), x(2), 1),
                Atom::add(x(4), x(2), x(3)),
                Atom::mul(x(4), x(5), x(1)),
            ])
            .collect(),
        Family::Intro1 => [Atom::unit(1), Atom::add(1, 1, 2)]
            .into_iter()
            .chain((2..m).map(|i| Atom::mul(i, i, i + 1)))
            .collect(),
        Family::Intro2 => [Atom::add(1, 1, 2), Atom::mul(1, 1, 2)]
            .into_iter()
            .chain((2..m).map(|i| Atom::mul(i, i, i + 1)))
            .collect(),
    };
    Ok(build(family, m, atoms))
}

/// The largest coordinate the family is stated to reach, computed from its
/// closed form rather than from the witness vector.
fn claimed_max(family: Family, n: u32) -> Result<BigUint, VerifyError> {
    let e = n as u64;
    Ok(match family {
        Family::Thm2 => pow2(e << e),
        Family::Thm3 => num_traits::pow(pow2(1 << e) - 1u32, 1 << e) + 1u32,
        Family::Thm4 => {
            let p = pell_minimal(1 << (n - 1))?;
            &p.x * &p.x + 1u32
        }
        Family::Uncond => num_traits::pow(pow2(1 << e) + 2u32, 1 << e),
        Family::Intro1 => pow2(1 << (e - 2)),
        Family::Intro2 => pow2(1 << (e - 1)),
    })
}

fn thm2_solution(n: u32) -> Vec<BigUint> {
    let e = n as u64;
    let big_m = pow2(e);
    let m_exp = 1u64 << e;
    let mut v = square_tower(big_m.clone(), n as usize + 1);
    let q = &big_m - 1u32;
    let top = v[n as usize].clone();
    v.push(BigUint::one());
    v.push(&big_m - 3u32);
    v.push(&big_m - 2u32);
    v.push(q.clone());
    v.push(&q * &q);
    v.push(BigUint::one() + binomial_tail(m_exp, &q));
    v.push(top - &big_m);
    v
}

fn thm3_solution(n: u32) -> Vec<BigUint> {
    let m_exp = 1u64 << n;
    let two_m = pow2(m_exp);
    let f = &two_m + 1u32;
    let a = &two_m - 1u32;
    let mut v = square_tower(a.clone(), n as usize + 1);
    let x5 = num_traits::pow(a, m_exp as usize) + 1u32;
    let row = binomial_row(m_exp);
    let fi = BigInt::from(f.clone());
    let mut sum = BigInt::zero();
    for (k, c) in row.iter().enumerate().skip(1) {
        let term = BigInt::from(c.clone())
            * num_traits::pow(fi.clone(), k - 1)
            * num_traits::pow(BigInt::from(-2), m_exp as usize - k);
        sum += term;
    }
    let x6 = (sum + BigInt::one())
        .to_biguint()
        .expect("quotient is positive");
    v.extend([BigUint::one(), two_m, f, x5, x6]);
    v
}

/// The witness for family `thm4` built from any solution of the matching
/// Pell equation (`k = 2^(n-1)`).
pub fn thm4_solution(n: u32, pell: &PellSolution) -> Result<Assignment, VerifyError> {
    Family::Thm4.check_param(n)?;
    let k = 1u32 << (n - 1);
    if pell.k != k || !pell.is_valid() {
        return Err(VerifyError::InvalidPell(format!(
            "need a valid solution with k = {k}"
        )));
    }
    let mut v = square_tower(BigUint::from(5u32), n as usize + 1);
    v.push(BigUint::from(5u32) * &v[n as usize]);
    v.extend([BigUint::one(), BigUint::from(2u32), BigUint::from(4u32)]);
    let (x, y) = (&pell.x, &pell.y);
    v.extend([y.clone(), y * y, x.clone(), x * x, x * x + 1u32]);
    Ok(Assignment::new(v))
}

/// The solution of the `uncond` system with `x_{n+4} = d`, if `d` is
/// admissible.
pub fn uncond_solution(n: u32, d: &BigUint) -> Option<Assignment> {
    if d.is_zero() {
        return None;
    }
    let x1 = d + 2u32;
    let mut v = square_tower(x1, n as usize + 1);
    let top = &v[n as usize];
    if !(top % d).is_zero() {
        return None;
    }
    let x5 = top / d;
    v.extend([BigUint::one(), d + 1u32, d.clone(), x5]);
    Some(Assignment::new(v))
}

/// Every solution of the `uncond` system, ordered by `x_{n+4}`. These are
/// exactly the divisors `d` of `2^(2^n)`.
pub fn uncond_all_solutions(n: u32) -> Result<Vec<Assignment>, VerifyError> {
    if !(1..=4).contains(&n) {
        return Err(VerifyError::ParamOutOfRange {
            family: Family::Uncond,
            param: n,
            min: 1,
            max: 4,
        });
    }
    let system = family_system(Family::Uncond, n)?;
    let mut out = Vec::new();
    for j in 0..=(1u64 << n) {
        let sol = uncond_solution(n, &pow2(j)).ok_or_else(|| VerifyError::Mismatch {
            family: Family::Uncond,
            param: n,
            detail: format!("2^{j} does not yield a solution"),
        })?;
        if !system.satisfies(&sol).unwrap_or(false) {
            return Err(VerifyError::Mismatch {
                family: Family::Uncond,
                param: n,
                detail: format!("solution with d = 2^{j} fails the system"),
            });
        }
        out.push(sol);
    }
    Ok(out)
}

/// Builds the family system and its closed-form solution and checks both
/// that the solution satisfies the system and that its largest coordinate
/// equals the claimed maximum.
pub fn family_witness(family: Family, n: u32) -> Result<FamilyWitness, VerifyError> {
    let system = family_system(family, n)?;
    let solution = match family {
        Family::Thm2 => Assignment::new(thm2_solution(n)),
        Family::Thm3 => Assignment::new(thm3_solution(n)),
        Family::Thm4 => thm4_solution(n, &pell_minimal(1 << (n - 1))?)?,
        Family::Uncond => uncond_solution(n, &pow2(1 << n)).expect("2^(2^n) is admissible"),
        Family::Intro1 => {
            let mut v = vec![BigUint::one()];
            v.extend(square_tower(BigUint::from(2u32), n as usize - 1));
            Assignment::new(v)
        }
        Family::Intro2 => Assignment::new(square_tower(BigUint::from(2u32), n as usize)),
    };
    let mismatch = |detail: String| VerifyError::Mismatch {
        family,
        param: n,
        detail,
    };
    if solution.len() != system.n() {
        return Err(mismatch(format!(
            "witness has {} coordinates, system has {}",
            solution.len(),
            system.n()
        )));
    }
    if !system
        .satisfies(&solution)
        .map_err(|e| mismatch(e.to_string()))?
    {
        let failing: Vec<String> = system
            .atoms()
            .iter()
            .filter(|a| !a.holds(solution.values()))
            .map(|a| a.to_string())
            .collect();
        return Err(mismatch(format!("witness violates {}", failing.join(", "))));
    }
    let claimed_max = claimed_max(family, n)?;
    if solution.max_coordinate() != claimed_max {
        return Err(mismatch(
            "largest coordinate differs from the closed form".to_string(),
        ));
    }
    Ok(FamilyWitness {
        family,
        param: n,
        system,
        solution,
        claimed_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_in_box, to_u64_tuple, SolveBudget};

    fn u64s(a: &Assignment) -> Vec<u64> {
        to_u64_tuple(a).unwrap()
    }

    #[test]
    fn thm2_smallest() {
        let w = family_witness(Family::Thm2, 2).unwrap();
        assert_eq!(w.system.n(), 10);
        assert_eq!(w.system.len(), 9);
        assert_eq!(u64s(&w.solution), vec![4, 16, 256, 1, 1, 2, 3, 9, 28, 252]);
        assert_eq!(w.claimed_max, BigUint::from(256u32));
    }

    #[test]
    fn thm2_solution_is_unique_for_n2() {
        let s = family_system(Family::Thm2, 2).unwrap();
        let sols = solve_in_box(&s, &SolveBudget::new(256)).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0], family_witness(Family::Thm2, 2).unwrap().solution);
    }

    #[test]
    fn thm2_larger_exponents() {
        for n in [3u32, 5, 7, 13] {
            let w = family_witness(Family::Thm2, n).unwrap();
            assert_eq!(w.claimed_max.bits(), (n as u64) * (1 << n) + 1);
        }
        assert_eq!(
            family_witness(Family::Thm2, 11),
            Err(VerifyError::NotMersennePrime(11))
        );
        assert!(matches!(
            family_witness(Family::Thm2, 17),
            Err(VerifyError::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn thm3_values() {
        let w = family_witness(Family::Thm3, 1).unwrap();
        assert_eq!(u64s(&w.solution), vec![3, 9, 1, 4, 5, 10, 2]);
        assert_eq!(w.claimed_max, BigUint::from(10u32));
        for n in 2..=4 {
            family_witness(Family::Thm3, n).unwrap();
        }
        let w = family_witness(Family::Thm3, 2).unwrap();
        assert_eq!(w.claimed_max, BigUint::from(15u32.pow(4) + 1));
    }

    #[test]
    fn thm4_values() {
        let w = family_witness(Family::Thm4, 1).unwrap();
        assert_eq!(w.system.n(), 11);
        assert_eq!(w.claimed_max, BigUint::from(465_125u32));
        assert_eq!(
            u64s(&w.solution),
            vec![5, 25, 125, 1, 2, 4, 61, 3721, 682, 465_124, 465_125]
        );
        for n in 2..=3 {
            family_witness(Family::Thm4, n).unwrap();
        }
    }

    #[test]
    fn thm4_accepts_larger_pell_solutions() {
        let s = family_system(Family::Thm4, 1).unwrap();
        let next = super::super::pell_next(&pell_minimal(1).unwrap()).unwrap();
        let a = thm4_solution(1, &next).unwrap();
        assert!(s.satisfies(&a).unwrap());
        assert!(a.max_coordinate() > BigUint::from(465_125u32));
        let wrong_k = pell_minimal(0).unwrap();
        assert!(thm4_solution(1, &wrong_k).is_err());
    }

    #[test]
    fn uncond_values() {
        let w = family_witness(Family::Uncond, 1).unwrap();
        assert_eq!(u64s(&w.solution), vec![6, 36, 1, 5, 4, 9]);
        assert_eq!(w.claimed_max, BigUint::from(36u32));
        for n in 2..=6 {
            family_witness(Family::Uncond, n).unwrap();
        }
    }

    #[test]
    fn uncond_enumeration_matches_solver() {
        assert_eq!(uncond_all_solutions(1).unwrap().len(), 3);
        assert_eq!(uncond_all_solutions(2).unwrap().len(), 5);
        assert_eq!(uncond_all_solutions(4).unwrap().len(), 17);
        for n in 1..=2 {
            let s = family_system(Family::Uncond, n).unwrap();
            let bound = (2u64 + (1 << (1 << n))).pow(1 << n);
            let mut found = solve_in_box(&s, &SolveBudget::new(bound)).unwrap();
            let mut expected = uncond_all_solutions(n).unwrap();
            found.sort_by_key(u64s);
            expected.sort_by_key(u64s);
            assert_eq!(found, expected);
        }
    }

    #[test]
    fn intro_families() {
        let w = family_witness(Family::Intro1, 4).unwrap();
        assert_eq!(u64s(&w.solution), vec![1, 2, 4, 16]);
        let w = family_witness(Family::Intro2, 3).unwrap();
        assert_eq!(u64s(&w.solution), vec![2, 4, 16]);
        assert!(family_witness(Family::Intro2, 1).is_err());
        for n in 3..=10 {
            family_witness(Family::Intro1, n).unwrap();
            family_witness(Family::Intro2, n).unwrap();
        }
    }

    #[test]
    fn intro_solution_sets() {
        let s = family_system(Family::Intro1, 4).unwrap();
        let sols = solve_in_box(&s, &SolveBudget::new(16)).unwrap();
        assert_eq!(
            sols,
            vec![family_witness(Family::Intro1, 4).unwrap().solution]
        );

        let s = family_system(Family::Intro2, 3).unwrap();
        let sols = solve_in_box(&s, &SolveBudget::new(16)).unwrap();
        assert_eq!(
            sols.iter().map(u64s).collect::<Vec<_>>(),
            vec![vec![0, 0, 0], vec![2, 4, 16]]
        );
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("thm9".parse::<Family>().is_err());
    }
}
