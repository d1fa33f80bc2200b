//! Atomic equations over the naturals and finite systems of them.
//!
//! `E_n` is the set of all equations `x_k = 1`, `x_i + x_j = x_k` and
//! `x_i * x_j = x_k` with `i, j, k` in `1..=n`. Addition and multiplication
//! commute, so an atom is always stored with `i <= j`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: variable index 0 is not allowed (indices start at 1)")]
    ZeroIndex { line: usize },
    #[error("header declares n = {header} but index {max_index} is used")]
    HeaderTooSmall { header: usize, max_index: usize },
    #[error("variable x{index} is out of range for a system over {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("assignment has {got} values, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a system needs at least one variable")]
    NoVariables,
}

/// 1-based variable index, `x_1 ... x_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(u32);

impl VarIndex {
    /// Panics on 0.
    pub fn new(index: usize) -> Self {
        Self::try_new(index).expect("variable indices start at 1")
    }

    pub fn try_new(index: usize) -> Option<Self> {
        if index == 0 {
            return None;
        }
        u32::try_from(index).ok().map(VarIndex)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Position in a 0-based value slice.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// One equation of `E_n`. Variant order (unit, add, mul) followed by the
/// indices gives the total order used to sort systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Unit(VarIndex),
    Add(VarIndex, VarIndex, VarIndex),
    Mul(VarIndex, VarIndex, VarIndex),
}

impl Atom {
    pub fn unit(k: usize) -> Self {
        Atom::Unit(VarIndex::new(k))
    }

    pub fn add(i: usize, j: usize, k: usize) -> Self {
        let (i, j) = (i.min(j), i.max(j));
        Atom::Add(VarIndex::new(i), VarIndex::new(j), VarIndex::new(k))
    }

    pub fn mul(i: usize, j: usize, k: usize) -> Self {
        let (i, j) = (i.min(j), i.max(j));
        Atom::Mul(VarIndex::new(i), VarIndex::new(j), VarIndex::new(k))
    }

    /// Same atom with `i <= j`.
    pub fn canonical(self) -> Self {
        match self {
            Atom::Unit(_) => self,
            Atom::Add(i, j, k) if i > j => Atom::Add(j, i, k),
            Atom::Mul(i, j, k) if i > j => Atom::Mul(j, i, k),
            _ => self,
        }
    }

    pub fn max_index(&self) -> usize {
        match *self {
            Atom::Unit(k) => k.get(),
            Atom::Add(i, j, k) | Atom::Mul(i, j, k) => i.get().max(j.get()).max(k.get()),
        }
    }

    pub fn indices(&self) -> Vec<VarIndex> {
        match *self {
            Atom::Unit(k) => vec![k],
            Atom::Add(i, j, k) | Atom::Mul(i, j, k) => vec![i, j, k],
        }
    }

    /// Exact check against a value slice; `values[0]` is `x_1`.
    pub fn holds(&self, values: &[BigUint]) -> bool {
        match *self {
            Atom::Unit(k) => values[k.slot()].is_one(),
            Atom::Add(i, j, k) => &values[i.slot()] + &values[j.slot()] == values[k.slot()],
            Atom::Mul(i, j, k) => &values[i.slot()] * &values[j.slot()] == values[k.slot()],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Unit(k) => write!(f, "{k} = 1"),
            Atom::Add(i, j, k) => write!(f, "{i} + {j} = {k}"),
            Atom::Mul(i, j, k) => write!(f, "{i} * {j} = {k}"),
        }
    }
}

/// All canonical atoms of `E_n`, in sorted order.
pub fn all_atoms(n: usize) -> Vec<Atom> {
    let mut atoms = Vec::with_capacity(canonical_atom_count(n));
    for k in 1..=n {
        atoms.push(Atom::unit(k));
    }
    for i in 1..=n {
        for j in i..=n {
            for k in 1..=n {
                atoms.push(Atom::add(i, j, k));
            }
        }
    }
    for i in 1..=n {
        for j in i..=n {
            for k in 1..=n {
                atoms.push(Atom::mul(i, j, k));
            }
        }
    }
    atoms
}

/// `n + 2 * n * n(n+1)/2`.
pub fn canonical_atom_count(n: usize) -> usize {
    n + 2 * n * (n * (n + 1) / 2)
}

/// Tuple of naturals indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<BigUint>);

impl Assignment {
    pub fn new(values: Vec<BigUint>) -> Self {
        Assignment(values)
    }

    pub fn from_u64s(values: &[u64]) -> Self {
        Assignment(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_values(self) -> Vec<BigUint> {
        self.0
    }

    pub fn get(&self, var: VarIndex) -> &BigUint {
        &self.0[var.slot()]
    }

    /// Largest coordinate; zero for the empty tuple.
    pub fn max_coordinate(&self) -> BigUint {
        self.0.iter().max().cloned().unwrap_or_default()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Canonical finite subset of `E_n`. Two systems are equal iff they have the
/// same `n` and the same atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct System {
    n: usize,
    atoms: Vec<Atom>,
}

impl System {
    pub fn new(n: usize, atoms: impl IntoIterator<Item = Atom>) -> Result<Self, SystemError> {
        if n == 0 {
            return Err(SystemError::NoVariables);
        }
        let set: BTreeSet<Atom> = atoms.into_iter().map(Atom::canonical).collect();
        if let Some(bad) = set.iter().find(|a| a.max_index() > n) {
            return Err(SystemError::IndexOutOfRange {
                index: bad.max_index(),
                n,
            });
        }
        Ok(System {
            n,
            atoms: set.into_iter().collect(),
        })
    }

    pub fn empty(n: usize) -> Result<Self, SystemError> {
        System::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.binary_search(&atom.canonical()).is_ok()
    }

    /// Atom-set inclusion. `n` is not compared.
    pub fn is_subset_of(&self, other: &System) -> bool {
        self.atoms.iter().all(|a| other.contains(a))
    }

    pub fn satisfies(&self, a: &Assignment) -> Result<bool, SystemError> {
        satisfies(a, self)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for atom in &self.atoms {
            writeln!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl FromStr for System {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_system(s)
    }
}

pub fn satisfies(a: &Assignment, s: &System) -> Result<bool, SystemError> {
    if a.len() != s.n {
        return Err(SystemError::LengthMismatch {
            expected: s.n,
            got: a.len(),
        });
    }
    Ok(s.atoms.iter().all(|atom| atom.holds(a.values())))
}

/// The largest subset of `E_n` satisfied by `a`.
pub fn type_of(a: &Assignment, n: usize) -> Result<System, SystemError> {
    if a.len() != n {
        return Err(SystemError::LengthMismatch {
            expected: n,
            got: a.len(),
        });
    }
    let atoms = all_atoms(n)
        .into_iter()
        .filter(|atom| atom.holds(a.values()));
    System::new(n, atoms)
}

/// Parses the line format
///
/// ```text
/// n 3          # optional, may only enlarge n
/// x1 = 1
/// x1 + x1 = x2
/// x2 * x2 = x3
/// ```
pub fn parse_system(text: &str) -> Result<System, SystemError> {
    let mut header: Option<usize> = None;
    let mut atoms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('n') {
            if rest.starts_with(char::is_whitespace) {
                if header.is_some() {
                    return Err(syntax(line_no, "duplicate `n` header"));
                }
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| syntax(line_no, "expected `n <count>`"))?;
                header = Some(n);
                continue;
            }
        }
        atoms.push(parse_atom(line, line_no)?);
    }
    let max_index = atoms.iter().map(Atom::max_index).max().unwrap_or(0);
    let n = match header {
        Some(h) if h < max_index => {
            return Err(SystemError::HeaderTooSmall {
                header: h,
                max_index,
            })
        }
        Some(h) => h,
        None => max_index,
    };
    System::new(n, atoms)
}

fn syntax(line: usize, message: &str) -> SystemError {
    SystemError::Syntax {
        line,
        message: message.to_string(),
    }
}

fn parse_atom(line: &str, line_no: usize) -> Result<Atom, SystemError> {
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = compact
        .split_once('=')
        .ok_or_else(|| syntax(line_no, "expected `=`"))?;
    if rhs.contains('=') {
        return Err(syntax(line_no, "more than one `=`"));
    }
    if rhs == "1" {
        let k = parse_var(lhs, line_no)?;
        return Ok(Atom::unit(k));
    }
    let k = parse_var(rhs, line_no)?;
    let (op, (a, b)) = if let Some(parts) = lhs.split_once('+') {
        ('+', parts)
    } else if let Some(parts) = lhs.split_once('*') {
        ('*', parts)
    } else {
        return Err(syntax(
            line_no,
            "expected `x<i> + x<j>`, `x<i> * x<j>` or `x<k> = 1`",
        ));
    };
    let i = parse_var(a, line_no)?;
    let j = parse_var(b, line_no)?;
    Ok(if op == '+' {
        Atom::add(i, j, k)
    } else {
        Atom::mul(i, j, k)
    })
}

fn parse_var(token: &str, line_no: usize) -> Result<usize, SystemError> {
    let digits = token
        .strip_prefix('x')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .ok_or_else(|| SystemError::Syntax {
            line: line_no,
            message: format!("expected a variable `x<index>`, found `{token}`"),
        })?;
    let index: usize = digits
        .parse()
        .map_err(|_| syntax(line_no, "variable index too large"))?;
    if index == 0 {
        return Err(SystemError::ZeroIndex { line: line_no });
    }
    if index > u32::MAX as usize {
        return Err(syntax(line_no, "variable index too large"));
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tuple(v: &[u64]) -> Assignment {
        Assignment::from_u64s(v)
    }

    fn first_intro(n: usize) -> System {
        let mut atoms = vec![Atom::unit(1), Atom::add(1, 1, 2)];
        atoms.extend((2..n).map(|i| Atom::mul(i, i, i + 1)));
        System::new(n, atoms).unwrap()
    }

    fn second_intro(n: usize) -> System {
        let mut atoms = vec![Atom::add(1, 1, 2), Atom::mul(1, 1, 2)];
        atoms.extend((2..n).map(|i| Atom::mul(i, i, i + 1)));
        System::new(n, atoms).unwrap()
    }

    #[test]
    fn parses_unit_and_add() {
        let s = parse_system("x1 = 1\nx1 + x1 = x2").unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.atoms(), &[Atom::unit(1), Atom::add(1, 1, 2)]);
    }

    #[test]
    fn mul_is_canonicalized() {
        let s = parse_system("x2 * x1 = x3").unwrap();
        assert_eq!(
            s.atoms(),
            &[Atom::Mul(
                VarIndex::new(1),
                VarIndex::new(2),
                VarIndex::new(3)
            )]
        );
    }

    #[test]
    fn parses_mersenne_system_text() {
        // n = 2 instance of the Mersenne-exponent family, written by hand.
        let text = "\
            # squaring chain\n\
            x1 * x1 = x2\n\
            x2 * x2 = x3\n\
            x4 = 1\n\
            x5 + x4 = x6\n\
            x6 + x4 = x7\n\
            x7 + x4 = x1\n\
            x7 * x7 = x8\n\
            x8 * x9 = x10\n\
            x10 + x1 = x3\n";
        let s = parse_system(text).unwrap();
        assert_eq!(s.n(), 10);
        assert_eq!(s.len(), 9);
        let with_dup = format!("{text}x1*x1=x2\nx4=1\n");
        assert_eq!(parse_system(&with_dup).unwrap(), s);
    }

    #[test]
    fn header_enlarges_n() {
        let s = parse_system("n 5\nx1 = 1").unwrap();
        assert_eq!(s.n(), 5);
        assert_eq!(
            parse_system("n 1\nx2 = 1"),
            Err(SystemError::HeaderTooSmall {
                header: 1,
                max_index: 2
            })
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_system("x1 = 1\n\nx0 = 1"),
            Err(SystemError::ZeroIndex { line: 3 })
        );
        match parse_system("x1 = 1\nx1 - x2 = x3") {
            Err(SystemError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_system("y1 = 1"),
            Err(SystemError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_system("x1 + x2"),
            Err(SystemError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn empty_text_has_no_variables() {
        assert_eq!(parse_system("# nothing\n"), Err(SystemError::NoVariables));
        assert!(parse_system("n 3\n").unwrap().is_empty());
    }

    #[test]
    fn intro_solutions_satisfy() {
        assert!(satisfies(&tuple(&[1, 2, 4, 16, 256]), &first_intro(5)).unwrap());
        assert!(satisfies(&tuple(&[0, 0, 0]), &second_intro(3)).unwrap());
        assert!(satisfies(&tuple(&[2, 4, 16]), &second_intro(3)).unwrap());
        let s = System::new(2, [Atom::add(1, 1, 2)]).unwrap();
        assert!(!satisfies(&tuple(&[1, 3]), &s).unwrap());
        assert_eq!(
            satisfies(&tuple(&[1]), &s),
            Err(SystemError::LengthMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn atom_counts() {
        assert_eq!(all_atoms(1).len(), 3);
        assert_eq!(all_atoms(2).len(), 14);
        assert_eq!(canonical_atom_count(1), 3);
        assert_eq!(canonical_atom_count(2), 14);
        for n in 1..6 {
            assert_eq!(all_atoms(n).len(), canonical_atom_count(n));
            let sorted: BTreeSet<_> = all_atoms(n).into_iter().collect();
            assert_eq!(sorted.len(), canonical_atom_count(n));
        }
    }

    #[test]
    fn type_of_small_tuples() {
        let zero = type_of(&tuple(&[0, 0]), 2).unwrap();
        assert!(zero.atoms().iter().all(|a| !matches!(a, Atom::Unit(_))));
        assert_eq!(zero.len(), 12);

        assert!(type_of(&tuple(&[2]), 1).unwrap().is_empty());

        let t = type_of(&tuple(&[1, 2]), 2).unwrap();
        assert_eq!(
            t.atoms(),
            &[
                Atom::unit(1),
                Atom::add(1, 1, 2),
                Atom::mul(1, 1, 1),
                Atom::mul(1, 2, 2)
            ]
        );
    }

    #[test]
    fn systems_differing_in_n_are_distinct() {
        let a = System::new(2, [Atom::unit(1)]).unwrap();
        let b = System::new(3, [Atom::unit(1)]).unwrap();
        assert_ne!(a, b);
        assert!(a.is_subset_of(&b));
    }

    fn arb_atom(n: usize) -> impl Strategy<Value = Atom> {
        prop_oneof![
            (1..=n).prop_map(Atom::unit),
            (1..=n, 1..=n, 1..=n).prop_map(|(i, j, k)| Atom::add(i, j, k)),
            (1..=n, 1..=n, 1..=n).prop_map(|(i, j, k)| Atom::mul(i, j, k)),
        ]
    }

    fn arb_system() -> impl Strategy<Value = System> {
        (1usize..6)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec(arb_atom(n), 0..12)))
            .prop_map(|(n, atoms)| System::new(n, atoms).unwrap())
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(s in arb_system()) {
            let text = s.to_string();
            let back = parse_system(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn tuple_satisfies_its_type(values in proptest::collection::vec(0u64..6, 1..4)) {
            let a = tuple(&values);
            let t = type_of(&a, values.len()).unwrap();
            prop_assert!(satisfies(&a, &t).unwrap());
        }

        #[test]
        fn satisfaction_is_monotone(s in arb_system(), seed in proptest::collection::vec(0u64..5, 5)) {
            let a = tuple(&seed[..s.n()]);
            // Any subset of a satisfied system is satisfied.
            let half = System::new(s.n(), s.atoms().iter().copied().step_by(2)).unwrap();
            prop_assert!(half.is_subset_of(&s));
            if satisfies(&a, &s).unwrap() {
                prop_assert!(satisfies(&a, &half).unwrap());
            }
        }
    }
}
