use std::ops::Range;

use super::CompileError;
use crate::system::{Atom, System};

/// Variable positions (1-based) in the output of [`build_sn`].
///
/// `1..=s` are the graph system's own variables (`x_1` is the argument,
/// `x_2` the value), followed by the padding block of `z_i = 1` equations,
/// the counter `t_1 ... t_h` with `h = n / 2`, and finally `w`, `y`, `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnLayout {
    pub s: usize,
    pub n: usize,
    pub padding: Range<usize>,
    pub counter: Range<usize>,
    pub w: usize,
    pub y: usize,
    pub u: usize,
}

pub fn sn_layout(s: usize, n: usize) -> Result<SnLayout, CompileError> {
    if s < 3 {
        return Err(CompileError::PhiTooSmall(s));
    }
    let min = 6 + 2 * s;
    if n < min {
        return Err(CompileError::TargetTooSmall { n, min, s });
    }
    let half = n / 2;
    let pad = n - half - 3 - s;
    let padding = s + 1..s + 1 + pad;
    let counter = padding.end..padding.end + half;
    let w = counter.end;
    Ok(SnLayout {
        s,
        n,
        padding,
        counter,
        w,
        y: w + 1,
        u: w + 2,
    })
}

/// Pads a system `phi(x_1, x_2, ...)` describing the graph of some `g` into a
/// system over exactly `n` variables whose solutions have `x_1 = n` and
/// `u = x_2 + 1 = g(n) + 1`.
///
/// The counter chain gives `t_i = i`, so `w = 2 * (n / 2)`; then `y` is 0 or 1
/// by parity and `x_1 = w + y = n`. The number of solutions is that of `phi`
/// with `x_1 = n`.
pub fn build_sn(phi: &System, n: usize) -> Result<System, CompileError> {
    let layout = sn_layout(phi.n(), n)?;
    let mut atoms: Vec<Atom> = phi.atoms().to_vec();
    atoms.extend(layout.padding.clone().map(Atom::unit));
    let t = |i: usize| layout.counter.start + i - 1;
    let half = layout.counter.len();
    atoms.push(Atom::unit(t(1)));
    atoms.push(Atom::add(t(1), t(1), t(2)));
    for i in 2..half {
        atoms.push(Atom::add(t(i), t(1), t(i + 1)));
    }
    atoms.push(Atom::add(t(half), t(half), layout.w));
    atoms.push(Atom::add(layout.w, layout.y, 1));
    if n.is_multiple_of(2) {
        atoms.push(Atom::add(layout.y, layout.y, layout.y));
    } else {
        atoms.push(Atom::unit(layout.y));
    }
    atoms.push(Atom::add(2, t(1), layout.u));
    Ok(System::new(n, atoms)?)
}
