//! Translation between polynomial equations and systems.
//!
//! - [`parse_poly`] reads `x1^2 - 3*x2*(x1 + 1)`-style text.
//! - [`compile_to_system`] lowers `D = 0` to a system whose natural solutions
//!   project exactly onto the roots of `D`, each with a unique extension.
//! - [`dioph`] goes the other way: one equation, a sum of squared residuals.
//! - [`build_sn`] pads a graph system so that its unique solution encodes
//!   `g(n) + 1` in a system over exactly `n` variables.

mod expr;
mod lower;
mod sn;

use thiserror::Error;

use crate::system::{Atom, System, SystemError};
use crate::Polynomial;

pub use expr::{parse_poly, parse_poly_expr, PolyExpr};
pub use lower::{compile_to_system, extend_witness, AuxStep, CompilationResult};
pub use sn::{build_sn, sn_layout, SnLayout};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("position {position}: exponent must be a non-negative integer literal")]
    ExponentNotLiteral { position: usize },
    #[error("the zero polynomial holds everywhere and is not compiled")]
    ZeroPolynomial,
    #[error("an empty system has no equation form")]
    EmptySystem,
    #[error("base tuple has {got} values, expected {expected}")]
    BaseLength { expected: usize, got: usize },
    #[error("base tuple {0} is not a root of the polynomial")]
    NotARoot(String),
    #[error("the graph system needs at least 3 variables, got {0}")]
    PhiTooSmall(usize),
    #[error("n = {n} is below the minimum {min} for a graph system over {s} variables")]
    TargetTooSmall { n: usize, min: usize, s: usize },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Sum of squared residuals of the atoms of `s`; over the naturals it has
/// exactly the solutions of `s`.
pub fn dioph(s: &System) -> Result<Polynomial, CompileError> {
    if s.is_empty() {
        return Err(CompileError::EmptySystem);
    }
    let n = s.n();
    let x = |v: crate::VarIndex| Polynomial::var(n, v.get());
    let mut total = Polynomial::zero(n);
    for atom in s.atoms() {
        let residual = match *atom {
            Atom::Unit(k) => &x(k) - &Polynomial::constant(n, 1),
            Atom::Add(i, j, k) => &(&x(i) + &x(j)) - &x(k),
            Atom::Mul(i, j, k) => &(&x(i) * &x(j)) - &x(k),
        };
        total = &total + &residual.square();
    }
    Ok(total)
}
