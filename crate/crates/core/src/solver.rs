//! Bounded solving of systems, and the oracle-driven procedures that find all
//! solutions of a polynomial equation (or a height bound for them) given a
//! decision procedure for solvability.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::Polynomial;
use crate::system::{Assignment, Atom, System, SystemError, VarIndex};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Distinct from an empty result: the search was cut short.
    #[error("budget exhausted after {nodes} search nodes ({found} solutions found so far)")]
    BudgetExhausted { nodes: u64, found: usize },
    #[error("x{0} has no upper bound and is not determined by propagation")]
    UnboundedBranch(usize),
    #[error("polynomial must mention at least one variable")]
    NoVariables,
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveBudget {
    /// Inclusive upper edge of the box `[0, bound]^n`.
    pub bound: u64,
    /// Stop after this many solutions.
    pub cap: Option<usize>,
    /// Maximum number of branching nodes.
    pub node_limit: Option<u64>,
}

impl SolveBudget {
    pub fn new(bound: u64) -> Self {
        SolveBudget {
            bound,
            cap: None,
            node_limit: None,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }
}

/// Per-variable override of the box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Upto(BigUint),
    Fixed(BigUint),
    /// Must be forced by propagation; branching on it is an error.
    Unbounded,
}

/// All solutions of `s` in `[0, bound]^n`, in increasing lexicographic order.
pub fn solve_in_box(s: &System, budget: &SolveBudget) -> Result<Vec<Assignment>, SolveError> {
    Solver::new(s).solve(budget)
}

/// Backtracking over variables in ascending index order, with forward
/// propagation to a fixpoint after every choice.
#[derive(Debug, Clone)]
pub struct Solver<'a> {
    system: &'a System,
    domains: Vec<Option<Domain>>,
    propagate: bool,
}

struct Search {
    nodes: u64,
    node_limit: Option<u64>,
    cap: Option<usize>,
    found: Vec<Assignment>,
}

enum Step {
    Holds,
    Conflict,
    Force(usize, BigUint),
    Pending,
}

impl<'a> Solver<'a> {
    pub fn new(system: &'a System) -> Self {
        Solver {
            system,
            domains: vec![None; system.n()],
            propagate: true,
        }
    }

    pub fn domain(mut self, var: VarIndex, domain: Domain) -> Result<Self, SolveError> {
        if var.get() > self.system.n() {
            return Err(SystemError::IndexOutOfRange {
                index: var.get(),
                n: self.system.n(),
            }
            .into());
        }
        self.domains[var.slot()] = Some(domain);
        Ok(self)
    }

    pub fn pin(self, var: VarIndex, value: BigUint) -> Result<Self, SolveError> {
        self.domain(var, Domain::Fixed(value))
    }

    /// Turns forward propagation off; atoms are then only checked once all
    /// their variables are assigned. Used to cross-check pruning.
    pub fn without_propagation(mut self) -> Self {
        self.propagate = false;
        self
    }

    pub fn solve(&self, budget: &SolveBudget) -> Result<Vec<Assignment>, SolveError> {
        let n = self.system.n();
        let default_upper = BigUint::from(budget.bound);
        let mut uppers: Vec<Option<BigUint>> = Vec::with_capacity(n);
        let mut values: Vec<Option<BigUint>> = vec![None; n];
        for (slot, d) in self.domains.iter().enumerate() {
            match d {
                None => uppers.push(Some(default_upper.clone())),
                Some(Domain::Upto(u)) => uppers.push(Some(u.clone())),
                Some(Domain::Unbounded) => uppers.push(None),
                Some(Domain::Fixed(v)) => {
                    uppers.push(Some(v.clone()));
                    values[slot] = Some(v.clone());
                }
            }
        }
        let mut search = Search {
            nodes: 0,
            node_limit: budget.node_limit,
            cap: budget.cap,
            found: Vec::new(),
        };
        if search.cap == Some(0) {
            return Ok(Vec::new());
        }
        if self.fixpoint(&mut values, &uppers) {
            self.descend(values, &uppers, &mut search)?;
        }
        Ok(search.found)
    }

    fn descend(
        &self,
        values: Vec<Option<BigUint>>,
        uppers: &[Option<BigUint>],
        search: &mut Search,
    ) -> Result<(), SolveError> {
        let Some(slot) = values.iter().position(Option::is_none) else {
            search.found.push(Assignment::new(
                values.into_iter().map(Option::unwrap).collect(),
            ));
            return Ok(());
        };
        let upper = uppers[slot]
            .as_ref()
            .ok_or(SolveError::UnboundedBranch(slot + 1))?;
        let mut v = BigUint::zero();
        while &v <= upper {
            search.nodes += 1;
            if search.node_limit.is_some_and(|limit| search.nodes > limit) {
                return Err(SolveError::BudgetExhausted {
                    nodes: search.nodes - 1,
                    found: search.found.len(),
                });
            }
            let mut child = values.clone();
            child[slot] = Some(v.clone());
            if self.fixpoint(&mut child, uppers) {
                self.descend(child, uppers, search)?;
                if search.cap.is_some_and(|cap| search.found.len() >= cap) {
                    return Ok(());
                }
            }
            v += 1u32;
        }
        Ok(())
    }

    /// Returns false on conflict.
    fn fixpoint(&self, values: &mut [Option<BigUint>], uppers: &[Option<BigUint>]) -> bool {
        loop {
            let mut changed = false;
            for atom in self.system.atoms() {
                match examine(atom, values, self.propagate) {
                    Step::Holds | Step::Pending => {}
                    Step::Conflict => return false,
                    Step::Force(slot, v) => {
                        if uppers[slot].as_ref().is_some_and(|u| &v > u) {
                            return false;
                        }
                        values[slot] = Some(v);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

fn examine(atom: &Atom, values: &[Option<BigUint>], propagate: bool) -> Step {
    let idx = atom.indices();
    let mut unknown: Vec<usize> = idx
        .iter()
        .map(|v| v.slot())
        .filter(|&s| values[s].is_none())
        .collect();
    unknown.sort_unstable();
    unknown.dedup();
    match unknown.len() {
        0 => {
            let val = |v: VarIndex| values[v.slot()].as_ref().expect("assigned");
            let holds = match *atom {
                Atom::Unit(k) => val(k).is_one(),
                Atom::Add(i, j, k) => val(i) + val(j) == *val(k),
                Atom::Mul(i, j, k) => val(i) * val(j) == *val(k),
            };
            if holds {
                Step::Holds
            } else {
                Step::Conflict
            }
        }
        1 if propagate => solve_single(atom, unknown[0], values),
        _ => Step::Pending,
    }
}

/// Solves `atom` for its only unassigned variable `slot`.
fn solve_single(atom: &Atom, slot: usize, values: &[Option<BigUint>]) -> Step {
    let known = |v: VarIndex| values[v.slot()].clone().expect("known variable");
    match *atom {
        Atom::Unit(_) => Step::Force(slot, BigUint::one()),
        Atom::Add(i, j, k) => {
            // (lhs_count - rhs_count) * v = R - L
            let mut coef: i32 = 0;
            let mut lhs = BigInt::zero();
            for term in [i, j] {
                if term.slot() == slot {
                    coef += 1;
                } else {
                    lhs += BigInt::from(known(term));
                }
            }
            let rhs = if k.slot() == slot {
                coef -= 1;
                BigInt::zero()
            } else {
                BigInt::from(known(k))
            };
            let diff = rhs - lhs;
            if coef == 0 {
                return if diff.is_zero() {
                    Step::Pending
                } else {
                    Step::Conflict
                };
            }
            let coef = BigInt::from(coef);
            let (q, r) = diff.div_rem(&coef);
            if !r.is_zero() || q.is_negative() {
                return Step::Conflict;
            }
            Step::Force(slot, q.to_biguint().expect("non-negative"))
        }
        Atom::Mul(i, j, k) => {
            let mut lhs_count = 0;
            let mut product = BigUint::one();
            for term in [i, j] {
                if term.slot() == slot {
                    lhs_count += 1;
                } else {
                    product *= known(term);
                }
            }
            if k.slot() == slot {
                match lhs_count {
                    0 => Step::Force(slot, product),
                    // v * c = v
                    1 if product.is_one() => Step::Pending,
                    1 => Step::Force(slot, BigUint::zero()),
                    // v * v = v has two roots
                    _ => Step::Pending,
                }
            } else {
                let target = known(k);
                match lhs_count {
                    1 if product.is_zero() => {
                        if target.is_zero() {
                            Step::Pending
                        } else {
                            Step::Conflict
                        }
                    }
                    1 => {
                        let (q, r) = target.div_rem(&product);
                        if r.is_zero() {
                            Step::Force(slot, q)
                        } else {
                            Step::Conflict
                        }
                    }
                    _ => {
                        let root = target.sqrt();
                        if &root * &root == target {
                            Step::Force(slot, root)
                        } else {
                            Step::Conflict
                        }
                    }
                }
            }
        }
    }
}

/// All roots of `d` in `[0, bound]^p`, lexicographically ordered.
pub fn polynomial_roots_in_box(d: &Polynomial, bound: u64) -> Vec<Vec<u64>> {
    let mut roots = Vec::new();
    for_each_point(d.vars(), bound, |point| {
        if d.vanishes_at(point) {
            roots.push(point.to_vec());
        }
        true
    });
    roots
}

/// Odometer over `[0, bound]^dim` in lexicographic order. The visitor returns
/// false to stop early.
pub(crate) fn for_each_point(dim: usize, bound: u64, mut visit: impl FnMut(&[u64]) -> bool) {
    let mut point = vec![0u64; dim];
    loop {
        if !visit(&point) {
            return;
        }
        let mut pos = dim;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if point[pos] < bound {
                point[pos] += 1;
                break;
            }
            point[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

/// Decides whether a polynomial equation `D = 0` has a solution in naturals.
/// Implementations must always return.
pub trait Oracle {
    fn decide(&self, equation: &Polynomial) -> Answer;
}

impl<F: Fn(&Polynomial) -> Answer> Oracle for F {
    fn decide(&self, equation: &Polynomial) -> Answer {
        self(equation)
    }
}

/// Answers YES iff a root exists with every coordinate `<= bound`.
///
/// A NO from this oracle is only truthful when the caller knows that every
/// root it could be asked about lies inside the search box. No total correct
/// decision procedure for all equations exists; this is a stand-in for
/// experiments on equations with known small roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedSearchOracle {
    pub bound: u64,
}

impl BoundedSearchOracle {
    pub fn new(bound: u64) -> Self {
        BoundedSearchOracle { bound }
    }
}

impl Oracle for BoundedSearchOracle {
    fn decide(&self, equation: &Polynomial) -> Answer {
        let mut hit = false;
        for_each_point(equation.vars(), self.bound, |point| {
            hit = equation.vanishes_at(point);
            !hit
        });
        if hit {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

/// `(m + y - (x_1 + ... + x_p))^2 + d^2` with `y = x_{p+1}`. Solvable iff `d`
/// has a root whose coordinate sum is at least `m`.
pub fn padded_equation(d: &Polynomial, m: u64) -> Polynomial {
    let p = d.vars();
    let vars = p + 1;
    let mut slack = &Polynomial::constant(vars, m) + &Polynomial::var(vars, vars);
    for i in 1..=p {
        slack = &slack - &Polynomial::var(vars, i);
    }
    &slack.square() + &d.with_vars(vars).square()
}

/// First `m` (starting from 0, at most `max_m` when given) at which the
/// oracle rejects the padded equation.
fn first_rejection(
    d: &Polynomial,
    oracle: &impl Oracle,
    max_m: Option<u64>,
) -> Result<Option<u64>, SolveError> {
    if d.vars() == 0 {
        return Err(SolveError::NoVariables);
    }
    let mut m = 0u64;
    loop {
        if max_m.is_some_and(|limit| m > limit) {
            return Ok(None);
        }
        if oracle.decide(&padded_equation(d, m)) == Answer::No {
            return Ok(Some(m));
        }
        m += 1;
    }
}

fn roots_below(d: &Polynomial, m: u64) -> Vec<Assignment> {
    match m.checked_sub(1) {
        None => Vec::new(),
        Some(bound) => polynomial_roots_in_box(d, bound)
            .into_iter()
            .map(|r| Assignment::from_u64s(&r))
            .collect(),
    }
}

/// Queries the oracle for `m = 0, 1, 2, ...` and, on the first NO, returns
/// every root with all coordinates below `m`.
///
/// Does not return while the oracle keeps answering YES; this happens for
/// equations with infinitely many roots.
pub fn find_all_conditional(
    d: &Polynomial,
    oracle: &impl Oracle,
) -> Result<Vec<Assignment>, SolveError> {
    let m = first_rejection(d, oracle, None)?.expect("unbounded loop only stops on NO");
    Ok(roots_below(d, m))
}

/// Like [`find_all_conditional`] but gives up (returns `None`) after `max_m`.
pub fn find_all_conditional_within(
    d: &Polynomial,
    oracle: &impl Oracle,
    max_m: u64,
) -> Result<Option<Vec<Assignment>>, SolveError> {
    Ok(first_rejection(d, oracle, Some(max_m))?.map(|m| roots_below(d, m)))
}

/// The `m` of the first NO answer. With a sound oracle and finitely many
/// roots it exceeds the height of every root.
pub fn bound_conditional(d: &Polynomial, oracle: &impl Oracle) -> Result<u64, SolveError> {
    Ok(first_rejection(d, oracle, None)?.expect("unbounded loop only stops on NO"))
}

pub fn bound_conditional_within(
    d: &Polynomial,
    oracle: &impl Oracle,
    max_m: u64,
) -> Result<Option<u64>, SolveError> {
    first_rejection(d, oracle, Some(max_m))
}

/// Converts solver output to plain integers when every entry fits.
pub fn to_u64_tuple(a: &Assignment) -> Option<Vec<u64>> {
    a.values().iter().map(ToPrimitive::to_u64).collect()
}
