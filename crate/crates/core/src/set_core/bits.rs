//! Fixed-width bit sets used for programs, statements and statement sets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Width of every bit set in this crate.
pub const WIDTH: usize = 64;

/// Iterator over the set bits of a word, ascending.
#[derive(Clone, Copy, Debug)]
pub struct Ones(u64);

impl Iterator for Ones {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Ones {}

pub fn ones(bits: u64) -> Ones {
    Ones(bits)
}

/// Mask with the low `n` bits set.
pub fn low_mask(n: usize) -> u64 {
    if n >= WIDTH {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Canonical order on index sets: cardinality first, then lexicographic on
/// the ascending element lists.
pub fn canonical_cmp(a: u64, b: u64) -> Ordering {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal if a == b => Ordering::Equal,
        Ordering::Equal => {
            // equal sizes: the set owning the lowest differing element is smaller
            let d = (a ^ b).trailing_zeros();
            if a >> d & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        o => o,
    }
}

/// All submasks of `set`, starting at the empty mask.
pub fn submasks(set: u64) -> impl Iterator<Item = u64> {
    let mut sub = 0u64;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        sub = sub.wrapping_sub(set) & set;
        done = sub == 0;
        Some(cur)
    })
}

/// Scatters the low bits of `compact` onto the set bits of `pattern`.
pub fn deposit(mut compact: u64, pattern: u64) -> u64 {
    let mut out = 0;
    for i in ones(pattern) {
        if compact == 0 {
            break;
        }
        if compact & 1 == 1 {
            out |= 1 << i;
        }
        compact >>= 1;
    }
    out
}

fn write_list(f: &mut fmt::Formatter<'_>, bits: u64) -> fmt::Result {
    f.write_str("[")?;
    for (k, i) in ones(bits).enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{i}")?;
    }
    f.write_str("]")
}

/// A declarative program: the set of states in which it holds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Program(u64);

impl Program {
    pub const EMPTY: Program = Program(0);

    pub fn from_bits(bits: u64) -> Self {
        Program(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, state: usize) -> bool {
        state < WIDTH && self.0 >> state & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn states(self) -> Ones {
        ones(self.0)
    }

    pub fn intersect(self, other: Program) -> Program {
        Program(self.0 & other.0)
    }

    pub fn is_subset(self, other: Program) -> bool {
        self.0 & !other.0 == 0
    }
}

impl TryFrom<Vec<usize>> for Program {
    type Error = String;

    fn try_from(states: Vec<usize>) -> Result<Self, String> {
        let mut bits = 0u64;
        for s in states {
            if s >= WIDTH {
                return Err(format!("state {s} exceeds the {WIDTH}-state limit"));
            }
            bits |= 1 << s;
        }
        Ok(Program(bits))
    }
}

impl From<Program> for Vec<usize> {
    fn from(p: Program) -> Self {
        p.states().collect()
    }
}

impl Ord for Program {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self.0, other.0)
    }
}

impl PartialOrd for Program {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.states().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A set of vocabulary indices, i.e. a candidate statement.
///
/// Whether it is actually a statement (non-empty joint truth-set) depends on
/// the environment; see [`crate::Environment::is_statement`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Statement(u64);

impl Statement {
    pub const EMPTY: Statement = Statement(0);

    pub fn from_bits(bits: u64) -> Self {
        Statement(bits)
    }

    /// Builds a statement from program indices; duplicates collapse.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self, String> {
        let mut bits = 0u64;
        for i in indices {
            if i >= WIDTH {
                return Err(format!(
                    "program index {i} exceeds the {WIDTH}-program limit"
                ));
            }
            bits |= 1 << i;
        }
        Ok(Statement(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> Ones {
        ones(self.0)
    }

    pub fn contains(self, index: usize) -> bool {
        index < WIDTH && self.0 >> index & 1 == 1
    }

    pub fn union(self, other: Statement) -> Statement {
        Statement(self.0 | other.0)
    }

    /// `self` is a completion of `x`: it contains every program of `x`.
    pub fn is_completion_of(self, x: Statement) -> bool {
        x.0 & !self.0 == 0
    }
}

/// True iff `y` is a completion (superset) of `x`.
pub fn is_completion(y: Statement, x: Statement) -> bool {
    y.is_completion_of(x)
}

impl TryFrom<Vec<usize>> for Statement {
    type Error = String;

    fn try_from(v: Vec<usize>) -> Result<Self, String> {
        Statement::from_indices(v)
    }
}

impl From<Statement> for Vec<usize> {
    fn from(s: Statement) -> Self {
        s.indices().collect()
    }
}

impl Ord for Statement {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self.0, other.0)
    }
}

impl PartialOrd for Statement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, self.0)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, self.0)
    }
}

/// A set of statements of one materialised language, as a mask over the
/// language's canonical indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct StmtSet(pub u64);

impl StmtSet {
    pub const EMPTY: StmtSet = StmtSet(0);

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < WIDTH && self.0 >> i & 1 == 1
    }

    pub fn iter(self) -> Ones {
        ones(self.0)
    }

    pub fn is_subset(self, other: StmtSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: StmtSet) -> bool {
        self.is_subset(other) && self != other
    }
}

impl std::ops::BitAnd for StmtSet {
    type Output = StmtSet;
    fn bitand(self, rhs: StmtSet) -> StmtSet {
        StmtSet(self.0 & rhs.0)
    }
}

impl std::ops::BitOr for StmtSet {
    type Output = StmtSet;
    fn bitor(self, rhs: StmtSet) -> StmtSet {
        StmtSet(self.0 | rhs.0)
    }
}
