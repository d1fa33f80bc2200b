//! Sparse multivariate polynomials with exact integer coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// Polynomial in `x_1 ... x_vars`. Zero coefficients are never stored and
/// every exponent vector has length `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Polynomial::zero(vars);
        p.add_term(vec![0; vars], c.into());
        p
    }

    /// `x_index`, 1-based.
    pub fn var(vars: usize, index: usize) -> Self {
        assert!(index >= 1 && index <= vars, "x{index} outside 1..={vars}");
        let mut e = vec![0; vars];
        e[index - 1] = 1;
        let mut p = Polynomial::zero(vars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Polynomial::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Same polynomial viewed over `vars >= self.vars` variables.
    pub fn with_vars(&self, vars: usize) -> Self {
        assert!(vars >= self.vars, "cannot drop variables");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(vars, 0);
                (e, c.clone())
            })
            .collect();
        Polynomial { vars, terms }
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Polynomial::constant(self.vars, 1);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Splits into `(P, Q)` with non-negative coefficients and `self = P - Q`.
    pub fn split_signs(&self) -> (Polynomial, Polynomial) {
        let mut pos = Polynomial::zero(self.vars);
        let mut neg = Polynomial::zero(self.vars);
        for (e, c) in &self.terms {
            if c.is_negative() {
                neg.terms.insert(e.clone(), -c);
            } else {
                pos.terms.insert(e.clone(), c.clone());
            }
        }
        (pos, neg)
    }

    /// Evaluates at a point given as integers. Extra trailing coordinates are
    /// ignored.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert!(point.len() >= self.vars, "point has too few coordinates");
        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += term;
        }
        total
    }

    pub fn eval_nat(&self, point: &[BigUint]) -> BigInt {
        let ints: Vec<BigInt> = point.iter().map(|v| BigInt::from(v.clone())).collect();
        self.eval(&ints)
    }

    /// Small-point evaluation used by exhaustive searches; `None` on overflow.
    pub fn eval_i128(&self, point: &[u64]) -> Option<i128> {
        let mut total: i128 = 0;
        for (e, c) in &self.terms {
            let mut term: i128 = i128::try_from(c).ok()?;
            for (&x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = term.checked_mul(x as i128)?;
                }
            }
            total = total.checked_add(term)?;
        }
        Some(total)
    }

    /// Exact zero test at a natural point, with an overflow-free fast path.
    pub fn vanishes_at(&self, point: &[u64]) -> bool {
        match self.eval_i128(point) {
            Some(v) => v == 0,
            None => {
                let big: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
                self.eval(&big).is_zero()
            }
        }
    }

    /// Terms in printing order: higher total degree first, then larger
    /// exponent vector first.
    pub fn ordered_terms(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_cmp(b.0, a.0));
        v
    }
}

fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn binop(a: &Polynomial, b: &Polynomial, sign: i8) -> Polynomial {
    let vars = a.vars.max(b.vars);
    let mut out = a.with_vars(vars);
    for (e, c) in b.with_vars(vars).terms {
        out.add_term(e, if sign < 0 { -c } else { c });
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        binop(self, rhs, 1)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        binop(self, rhs, -1)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let vars = self.vars.max(rhs.vars);
        let a = self.with_vars(vars);
        let b = rhs.with_vars(vars);
        let mut out = Polynomial::zero(vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.ordered_terms().into_iter().enumerate() {
            let magnitude = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{k}", i + 1)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
