//! Workbench for finite systems of equations `x_k = 1`, `x_i + x_j = x_k`,
//! `x_i * x_j = x_k` over the natural numbers.
//!
//! - [`system`]: atoms, systems, assignments and their text format
//! - [`poly`]: sparse integer polynomials
//! - [`solver`]: bounded solving and oracle-parameterized procedures
//! - [`enumerator`]: the duplicate relation and limit streams for the bound functions
//! - [`compiler`]: polynomial equations to systems and back
//! - [`verifier`]: exact checks of explicit system families
//! - [`cli`]: the `singlefold` command-line front end

pub mod cli;
pub mod compiler;
pub mod enumerator;
pub mod poly;
pub mod solver;
pub mod system;
pub mod verifier;

pub use poly::Polynomial;
pub use system::{
    parse_system, satisfies, type_of, Assignment, Atom, System, SystemError, VarIndex,
};
