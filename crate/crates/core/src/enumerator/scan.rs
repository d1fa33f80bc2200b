use rayon::prelude::*;

use super::{EnumError, Mode, ScanConfig};
use crate::system::{all_atoms, Atom};

#[derive(Clone, Copy)]
enum Kind {
    Unit,
    Add,
    Mul,
}

/// Every tuple of the box `[0, m]^n` with its type stored as a bitset over
/// the canonical atoms of `E_n`. Tuples are numbered in lexicographic order.
#[derive(Debug, Clone)]
pub struct TypeTable {
    n: usize,
    m: u64,
    words: usize,
    masks: Vec<u64>,
    max_coord: Vec<u64>,
}

impl TypeTable {
    pub fn new(n: usize, m: u64, config: &ScanConfig) -> Result<Self, EnumError> {
        if n == 0 {
            return Err(EnumError::ZeroVariables);
        }
        let side = u128::from(m) + 1;
        let tuples = side.checked_pow(n as u32).unwrap_or(u128::MAX);
        if tuples > config.max_box_tuples {
            return Err(EnumError::BoxTooLarge {
                n,
                m,
                tuples,
                limit: config.max_box_tuples,
            });
        }
        let atoms: Vec<(Kind, usize, usize, usize)> = all_atoms(n)
            .into_iter()
            .map(|a| match a {
                Atom::Unit(k) => (Kind::Unit, k.slot(), 0, 0),
                Atom::Add(i, j, k) => (Kind::Add, i.slot(), j.slot(), k.slot()),
                Atom::Mul(i, j, k) => (Kind::Mul, i.slot(), j.slot(), k.slot()),
            })
            .collect();
        let words = atoms.len().div_ceil(64);
        let count = tuples as usize;
        let mut masks = vec![0u64; count * words];
        let mut max_coord = Vec::with_capacity(count);
        let mut point = vec![0u64; n];
        for idx in 0..count {
            let row = &mut masks[idx * words..(idx + 1) * words];
            for (bit, &(kind, i, j, k)) in atoms.iter().enumerate() {
                let (xi, xj, xk) = (point[i] as u128, point[j] as u128, point[k] as u128);
                let holds = match kind {
                    Kind::Unit => xi == 1,
                    Kind::Add => xi + xj == xk,
                    Kind::Mul => xi * xj == xk,
                };
                if holds {
                    row[bit / 64] |= 1 << (bit % 64);
                }
            }
            max_coord.push(point.iter().copied().max().unwrap_or(0));
            // advance odometer
            for pos in (0..n).rev() {
                if point[pos] < m {
                    point[pos] += 1;
                    break;
                }
                point[pos] = 0;
            }
        }
        Ok(TypeTable {
            n,
            m,
            words,
            masks,
            max_coord,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.max_coord.len()
    }

    pub fn is_empty(&self) -> bool {
        self.max_coord.is_empty()
    }

    pub fn mask(&self, idx: usize) -> &[u64] {
        &self.masks[idx * self.words..(idx + 1) * self.words]
    }

    pub fn max_coord(&self, idx: usize) -> u64 {
        self.max_coord[idx]
    }

    /// Coordinates of tuple `idx`.
    pub fn tuple(&self, mut idx: usize) -> Vec<u64> {
        let side = self.m as usize + 1;
        let mut out = vec![0u64; self.n];
        for pos in (0..self.n).rev() {
            out[pos] = (idx % side) as u64;
            idx /= side;
        }
        out
    }

    /// Whether tuple `y` satisfies every atom in `mask`.
    fn satisfies(&self, mask: &[u64], y: usize) -> bool {
        mask.iter().zip(self.mask(y)).all(|(a, b)| a & !b == 0)
    }

    /// Is `y` a duplicate of `x`?
    pub fn duplicates(&self, y: usize, x: usize) -> bool {
        self.satisfies(self.mask(x), y)
    }

    fn is_lonely(&self, x: usize) -> bool {
        !(0..self.len()).any(|y| y != x && self.duplicates(y, x))
    }
}

fn run<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers <= 1 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// `beta(n, m)` for `kappa = 2`: the largest max-coordinate among tuples of
/// the box that have no duplicate in the box other than themselves.
pub fn beta2(n: usize, m: u64, config: &ScanConfig) -> Result<u64, EnumError> {
    let table = TypeTable::new(n, m, config)?;
    Ok(run(config.workers, || {
        (0..table.len())
            .into_par_iter()
            .filter(|&x| table.is_lonely(x))
            .map(|x| table.max_coord(x))
            .max()
            .unwrap_or(0)
    }))
}

/// `beta(n, m)` for a finite `kappa >= 2`.
///
/// A set `A` of box tuples with `1 <= |A| < kappa` is the exact solution set
/// (within the box) of some system iff it is the solution set of the
/// intersection of the types of its members. The answer is the largest value,
/// over such sets, of the smallest max-coordinate inside the set.
pub fn beta_kappa(n: usize, m: u64, kappa: u32, config: &ScanConfig) -> Result<u64, EnumError> {
    Mode::Kappa(kappa).validate()?;
    let table = TypeTable::new(n, m, config)?;
    let size = table.len();
    let max_set = (kappa - 1) as usize;
    let subsets = subset_count(size as u128, max_set.min(size) as u128);
    if subsets > config.max_subsets {
        return Err(EnumError::TooManySubsets {
            subsets,
            limit: config.max_subsets,
        });
    }
    Ok(run(config.workers, || {
        (0..size)
            .into_par_iter()
            .map(|first| {
                let mut best = 0u64;
                let mut members = vec![first];
                let mut mask = table.mask(first).to_vec();
                extend_sets(&table, max_set, &mut members, &mut mask, &mut best);
                best
            })
            .max()
            .unwrap_or(0)
    }))
}

/// Depth-first over index-increasing sets starting with `members`.
fn extend_sets(
    table: &TypeTable,
    max_set: usize,
    members: &mut Vec<usize>,
    mask: &mut Vec<u64>,
    best: &mut u64,
) {
    let value = members
        .iter()
        .map(|&y| table.max_coord(y))
        .min()
        .unwrap_or(0);
    // Supersets can only lower the value.
    if value <= *best {
        return;
    }
    if qualifies(table, members, mask) {
        *best = value;
    }
    if members.len() == max_set {
        return;
    }
    let last = *members.last().expect("non-empty");
    for next in last + 1..table.len() {
        let saved = mask.clone();
        for (w, b) in mask.iter_mut().zip(table.mask(next)) {
            *w &= b;
        }
        members.push(next);
        extend_sets(table, max_set, members, mask, best);
        members.pop();
        *mask = saved;
    }
}

fn qualifies(table: &TypeTable, members: &[usize], mask: &[u64]) -> bool {
    (0..table.len()).all(|y| members.contains(&y) || !table.satisfies(mask, y))
}

/// `sum_{s=1..r} C(total, s)`, saturating.
fn subset_count(total: u128, r: u128) -> u128 {
    let mut sum = 0u128;
    let mut c = 1u128;
    for s in 1..=r {
        c = c.saturating_mul(total - s + 1) / s;
        sum = sum.saturating_add(c);
    }
    sum
}

/// Box approximation for `omega1`: a tuple is dropped when it has a duplicate
/// with strictly smaller max-coordinate; the answer is the largest
/// max-coordinate among the kept tuples.
pub fn beta_omega1(n: usize, m: u64, config: &ScanConfig) -> Result<u64, EnumError> {
    let table = TypeTable::new(n, m, config)?;
    Ok(run(config.workers, || {
        (0..table.len())
            .into_par_iter()
            .filter(|&x| {
                let h = table.max_coord(x);
                !(0..table.len()).any(|y| table.max_coord(y) < h && table.duplicates(y, x))
            })
            .map(|x| table.max_coord(x))
            .max()
            .unwrap_or(0)
    }))
}

/// Dispatch on mode; `kappa(2)` uses the pairwise scan.
pub fn beta(n: usize, m: u64, mode: Mode, config: &ScanConfig) -> Result<u64, EnumError> {
    match mode.validate()? {
        Mode::Kappa(2) => beta2(n, m, config),
        Mode::Kappa(k) => beta_kappa(n, m, k, config),
        Mode::Omega1 => beta_omega1(n, m, config),
    }
}
