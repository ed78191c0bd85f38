use std::fmt;

use super::bits::Statement;

/// A materialised set of statements in canonical order (an `E_x` or `E_X`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExtensionSet {
    members: Vec<Statement>,
}

impl ExtensionSet {
    pub(crate) fn from_sorted(members: Vec<Statement>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ExtensionSet { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, l: Statement) -> bool {
        self.members.binary_search(&l).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Statement> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Statement] {
        &self.members
    }

    pub fn is_subset(&self, other: &ExtensionSet) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}

impl fmt::Display for ExtensionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}
