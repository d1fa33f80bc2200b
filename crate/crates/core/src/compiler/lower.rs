use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::CompileError;
use crate::poly::Exponents;
use crate::system::{satisfies, Assignment, Atom, System, VarIndex};
use crate::Polynomial;

/// How an auxiliary variable is computed from earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxStep {
    /// `v = 1`
    One,
    /// `v + v = v`, which only 0 satisfies.
    Zero,
    Sum(VarIndex, VarIndex),
    Product(VarIndex, VarIndex),
}

/// A system for `D = 0`. Variables `1..=p` are the polynomial's variables;
/// variable `p + 1 + i` is defined by `aux_plan[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationResult {
    pub polynomial: Polynomial,
    pub system: System,
    pub p: usize,
    pub aux_plan: Vec<AuxStep>,
}

impl CompilationResult {
    pub fn n(&self) -> usize {
        self.system.n()
    }
}

struct Lowering {
    p: usize,
    atoms: Vec<Atom>,
    plan: Vec<AuxStep>,
    constants: HashMap<BigUint, usize>,
    products: HashMap<Exponents, usize>,
    unit: usize,
    zero: usize,
}

impl Lowering {
    fn new(p: usize) -> Self {
        let mut l = Lowering {
            p,
            atoms: Vec::new(),
            plan: Vec::new(),
            constants: HashMap::new(),
            products: HashMap::new(),
            unit: 0,
            zero: 0,
        };
        l.unit = l.fresh(AuxStep::One);
        l.zero = l.fresh(AuxStep::Zero);
        l.constants.insert(BigUint::one(), l.unit);
        l
    }

    fn fresh(&mut self, step: AuxStep) -> usize {
        self.plan.push(step);
        let v = self.p + self.plan.len();
        self.atoms.push(match step {
            AuxStep::One => Atom::unit(v),
            AuxStep::Zero => Atom::add(v, v, v),
            AuxStep::Sum(a, b) => Atom::add(a.get(), b.get(), v),
            AuxStep::Product(a, b) => Atom::mul(a.get(), b.get(), v),
        });
        v
    }

    fn sum(&mut self, a: usize, b: usize) -> usize {
        self.fresh(AuxStep::Sum(VarIndex::new(a), VarIndex::new(b)))
    }

    fn product(&mut self, a: usize, b: usize) -> usize {
        self.fresh(AuxStep::Product(VarIndex::new(a), VarIndex::new(b)))
    }

    /// Double-and-add from 1, reading `c` from its top bit down.
    fn constant(&mut self, c: &BigUint) -> usize {
        if c.is_zero() {
            return self.zero;
        }
        if let Some(&v) = self.constants.get(c) {
            return v;
        }
        let mut value = BigUint::one();
        let mut var = self.unit;
        for bit in (0..c.bits() - 1).rev() {
            value <<= 1;
            var = match self.constants.get(&value) {
                Some(&v) => v,
                None => {
                    let v = self.sum(var, var);
                    self.constants.insert(value.clone(), v);
                    v
                }
            };
            if c.bit(bit) {
                value += 1u32;
                var = match self.constants.get(&value) {
                    Some(&v) => v,
                    None => {
                        let v = self.sum(var, self.unit);
                        self.constants.insert(value.clone(), v);
                        v
                    }
                };
            }
        }
        var
    }

    /// Left-to-right product of the variables of a non-constant monomial.
    fn monomial(&mut self, e: &[u32]) -> usize {
        let factors: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k as usize))
            .collect();
        let mut prefix = vec![0u32; e.len()];
        prefix[factors[0] - 1] = 1;
        let mut acc = factors[0];
        for &f in &factors[1..] {
            prefix[f - 1] += 1;
            acc = match self.products.get(&prefix) {
                Some(&v) => v,
                None => {
                    let v = self.product(acc, f);
                    self.products.insert(prefix.clone(), v);
                    v
                }
            };
        }
        acc
    }

    fn term(&mut self, e: &[u32], magnitude: &BigUint) -> usize {
        if e.iter().all(|&k| k == 0) {
            return self.constant(magnitude);
        }
        let m = self.monomial(e);
        if magnitude.is_one() {
            m
        } else {
            let c = self.constant(magnitude);
            self.product(c, m)
        }
    }

    /// Pairwise (tree-shaped) sum; the zero variable for no terms.
    fn balanced_sum(&mut self, mut vars: Vec<usize>) -> usize {
        if vars.is_empty() {
            return self.zero;
        }
        while vars.len() > 1 {
            let mut next = Vec::with_capacity(vars.len().div_ceil(2));
            for pair in vars.chunks(2) {
                next.push(match pair {
                    [a, b] => self.sum(*a, *b),
                    [a] => *a,
                    _ => unreachable!(),
                });
            }
            vars = next;
        }
        vars[0]
    }

    fn side(&mut self, side: &Polynomial) -> usize {
        let terms: Vec<(Exponents, BigUint)> = side
            .ordered_terms()
            .into_iter()
            .map(|(e, c)| (e.clone(), c.magnitude().clone()))
            .collect();
        let vars: Vec<usize> = terms.iter().map(|(e, c)| self.term(e, c)).collect();
        self.balanced_sum(vars)
    }
}

/// Lowers `D = 0` to a system.
///
/// `D` is split as `P - Q` with non-negative coefficients. Auxiliaries hold 1,
/// 0 (via `z + z = z`), constants built by doubling and adding 1, monomials as
/// product chains, and `P`, `Q` as balanced sums; the closing equation
/// `u_P + z = u_Q` forces `P = Q`. Every auxiliary is a function of the
/// variables before it, so each root of `D` extends in exactly one way.
///
/// Variables of `D` with degree 0 stay unconstrained.
pub fn compile_to_system(d: &Polynomial) -> Result<CompilationResult, CompileError> {
    if d.is_zero() {
        return Err(CompileError::ZeroPolynomial);
    }
    let p = d.vars();
    let (pos, neg) = d.split_signs();
    let mut l = Lowering::new(p);
    let u_pos = l.side(&pos);
    let u_neg = l.side(&neg);
    let zero = l.zero;
    l.atoms.push(Atom::add(u_pos, zero, u_neg));
    let n = p + l.plan.len();
    let system = System::new(n, l.atoms)?;
    Ok(CompilationResult {
        polynomial: d.clone(),
        system,
        p,
        aux_plan: l.plan,
    })
}

/// Evaluates the auxiliary plan on a root of the polynomial.
pub fn extend_witness(
    r: &CompilationResult,
    base: &Assignment,
) -> Result<Assignment, CompileError> {
    if base.len() != r.p {
        return Err(CompileError::BaseLength {
            expected: r.p,
            got: base.len(),
        });
    }
    if !r.polynomial.eval_nat(base.values()).is_zero() {
        return Err(CompileError::NotARoot(base.to_string()));
    }
    let mut values: Vec<BigUint> = base.values().to_vec();
    for step in &r.aux_plan {
        let v = match *step {
            AuxStep::One => BigUint::one(),
            AuxStep::Zero => BigUint::zero(),
            AuxStep::Sum(a, b) => &values[a.slot()] + &values[b.slot()],
            AuxStep::Product(a, b) => &values[a.slot()] * &values[b.slot()],
        };
        values.push(v);
    }
    let full = Assignment::new(values);
    debug_assert!(satisfies(&full, &r.system).unwrap_or(false));
    Ok(full)
}
