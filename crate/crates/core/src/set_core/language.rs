use std::collections::HashMap;
use std::sync::Arc;

use super::bits::{low_mask, Statement, StmtSet};
use super::environment::Environment;
use crate::error::{Error, Result};

/// A fully materialised language with the completion order precomputed.
///
/// Statements are indexed in canonical order; sets of statements are
/// [`StmtSet`] masks over those indices, so the language may hold at most
/// 64 statements (and the `max_language` guard).
#[derive(Debug)]
pub struct Language {
    env: Environment,
    statements: Vec<Statement>,
    index: HashMap<Statement, usize>,
    up: Vec<StmtSet>,
    full: StmtSet,
}

impl PartialEq for Language {
    fn eq(&self, other: &Self) -> bool {
        self.env == other.env
    }
}

impl Eq for Language {}

impl Language {
    pub fn build(env: Environment) -> Result<Arc<Language>> {
        let statements = env.enumerate_language()?;
        let limit = env.guards().max_language;
        if statements.len() > limit {
            return Err(Error::TaskSpaceTooLarge(format!(
                "language has {} statements, guard is {limit}",
                statements.len()
            )));
        }
        let n = statements.len();
        let index = statements
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        let up = statements
            .iter()
            .map(|&x| {
                let mut m = 0u64;
                for (j, &y) in statements.iter().enumerate() {
                    if y.is_completion_of(x) {
                        m |= 1 << j;
                    }
                }
                StmtSet(m)
            })
            .collect();
        Ok(Arc::new(Language {
            env,
            statements,
            index,
            up,
            full: StmtSet(low_mask(n)),
        }))
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn statement(&self, i: usize) -> Statement {
        self.statements[i]
    }

    pub fn index_of(&self, l: Statement) -> Result<usize> {
        self.index.get(&l).copied().ok_or(Error::NotAStatement(l))
    }

    /// The whole language as a set.
    pub fn full(&self) -> StmtSet {
        self.full
    }

    /// Extension of the statement at index `i`.
    pub fn up(&self, i: usize) -> StmtSet {
        self.up[i]
    }

    /// `|E_x|` for the statement at index `i`.
    pub fn ext_size(&self, i: usize) -> usize {
        self.up[i].len()
    }

    /// Extension of a set of statements.
    pub fn extension_of(&self, set: StmtSet) -> StmtSet {
        set.iter().fold(StmtSet::EMPTY, |acc, i| acc | self.up[i])
    }

    /// Indices of statements sharing no completion with statement `i`.
    pub fn incompatible(&self, i: usize) -> StmtSet {
        let ui = self.up[i];
        let mut m = 0u64;
        for (j, &uj) in self.up.iter().enumerate() {
            if (uj & ui).is_empty() {
                m |= 1 << j;
            }
        }
        StmtSet(m)
    }

    pub fn set_of(&self, members: &[Statement]) -> Result<StmtSet> {
        let mut m = 0u64;
        for &l in members {
            m |= 1 << self.index_of(l)?;
        }
        Ok(StmtSet(m))
    }

    pub fn members(&self, set: StmtSet) -> Vec<Statement> {
        set.iter().map(|i| self.statements[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env2_language_masks() {
        let env = Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]]).unwrap();
        let lang = Language::build(env).unwrap();
        assert_eq!(lang.len(), 6);
        // [], [0], [1], [2], [0,2], [1,2]
        assert_eq!(lang.up(0), lang.full());
        assert_eq!(lang.up(3), StmtSet(0b111000));
        assert_eq!(lang.ext_size(1), 2);
        assert_eq!(lang.incompatible(1), StmtSet(0b100100));
        let both = lang
            .set_of(&[lang.statement(3), lang.statement(2)])
            .unwrap();
        assert_eq!(lang.extension_of(both), StmtSet(0b111100));
    }

    #[test]
    fn language_guard() {
        let env = Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]])
            .unwrap()
            .with_guards(crate::Guards {
                max_language: 5,
                ..Default::default()
            });
        assert!(matches!(
            Language::build(env),
            Err(Error::TaskSpaceTooLarge(_))
        ));
    }
}
