use serde::{Deserialize, Serialize};

use super::bits::{self, low_mask, submasks, Program, Statement, WIDTH};
use super::extension::ExtensionSet;
use crate::error::{Error, Result};

/// Size limits for the exponential paths. Exceeding one is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Guards {
    /// Largest vocabulary for which `2^|v|` subsets are enumerated.
    pub max_vocabulary: usize,
    /// Largest truth-set for inclusion-exclusion counting.
    pub max_truth_set: usize,
    /// Largest language for which tasks are materialised as bit sets.
    pub max_language: usize,
    /// Largest state count accepted by the full-powerset constructor.
    pub max_powerset_states: usize,
}

impl Guards {
    pub const HARD: Guards = Guards {
        max_vocabulary: WIDTH,
        max_truth_set: WIDTH,
        max_language: WIDTH,
        max_powerset_states: 6,
    };

    pub fn check(&self) -> Result<()> {
        let pairs = [
            (
                "max_vocabulary",
                self.max_vocabulary,
                Self::HARD.max_vocabulary,
            ),
            (
                "max_truth_set",
                self.max_truth_set,
                Self::HARD.max_truth_set,
            ),
            ("max_language", self.max_language, Self::HARD.max_language),
            (
                "max_powerset_states",
                self.max_powerset_states,
                Self::HARD.max_powerset_states,
            ),
        ];
        for (name, value, max) in pairs {
            if value > max {
                return Err(Error::GuardConflict { name, value, max });
            }
        }
        Ok(())
    }
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_vocabulary: 24,
            max_truth_set: 24,
            max_language: 64,
            max_powerset_states: 4,
        }
    }
}

/// Switches for the two readings the definitions leave open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Semantics {
    /// The empty statement belongs to the language, true in every state.
    pub include_empty_statement: bool,
    /// Tasks with no correct output belong to the task space.
    pub allow_empty_outputs: bool,
}

impl Default for Semantics {
    fn default() -> Self {
        Semantics {
            include_empty_statement: true,
            allow_empty_outputs: true,
        }
    }
}

/// A finite set of states together with a vocabulary of declarative
/// programs over them. The vocabulary is kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Environment {
    state_count: usize,
    vocabulary: Vec<Program>,
    guards: Guards,
    semantics: Semantics,
}

impl Environment {
    pub fn new(state_count: usize, programs: Vec<Program>) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::NoStates);
        }
        if state_count > WIDTH {
            return Err(Error::StateOutOfRange {
                state: state_count - 1,
                state_count: WIDTH,
            });
        }
        if programs.len() > WIDTH {
            return Err(Error::VocabularyTooLarge {
                size: programs.len(),
                limit: WIDTH,
            });
        }
        let universe = low_mask(state_count);
        for p in &programs {
            if p.bits() & !universe != 0 {
                let state = bits::ones(p.bits() & !universe).next().unwrap_or(0);
                return Err(Error::StateOutOfRange { state, state_count });
            }
        }
        let mut vocabulary = programs;
        vocabulary.sort();
        if let Some(w) = vocabulary.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateProgram(w[0].to_string()));
        }
        Ok(Environment {
            state_count,
            vocabulary,
            guards: Guards::default(),
            semantics: Semantics::default(),
        })
    }

    /// Builds an environment from explicit state lists.
    pub fn from_state_sets<S: AsRef<[usize]>>(state_count: usize, programs: &[S]) -> Result<Self> {
        let mut out = Vec::with_capacity(programs.len());
        for p in programs {
            let mut bits = 0u64;
            for &s in p.as_ref() {
                if s >= state_count {
                    return Err(Error::StateOutOfRange {
                        state: s,
                        state_count,
                    });
                }
                bits |= 1 << s;
            }
            out.push(Program::from_bits(bits));
        }
        Environment::new(state_count, out)
    }

    pub fn with_guards(mut self, guards: Guards) -> Self {
        self.guards = guards;
        self
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn vocabulary(&self) -> &[Program] {
        &self.vocabulary
    }

    pub fn guards(&self) -> &Guards {
        &self.guards
    }

    pub fn semantics(&self) -> &Semantics {
        &self.semantics
    }

    /// All states, as a program true everywhere.
    pub fn universe(&self) -> Program {
        Program::from_bits(low_mask(self.state_count))
    }

    fn vocabulary_mask(&self) -> u64 {
        low_mask(self.vocabulary.len())
    }

    /// Validates and canonicalises a list of program indices.
    pub fn statement<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<Statement> {
        let len = self.vocabulary.len();
        let mut bits = 0u64;
        for index in indices {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
            bits |= 1 << index;
        }
        Ok(Statement::from_bits(bits))
    }

    fn check_indices(&self, l: Statement) -> Result<()> {
        let stray = l.bits() & !self.vocabulary_mask();
        if stray != 0 {
            return Err(Error::IndexOutOfRange {
                index: stray.trailing_zeros() as usize,
                len: self.vocabulary.len(),
            });
        }
        Ok(())
    }

    fn truth_set_unchecked(&self, l: Statement) -> Program {
        l.indices()
            .fold(self.universe(), |acc, i| acc.intersect(self.vocabulary[i]))
    }

    /// States in which every program of `l` holds. The empty statement holds
    /// everywhere.
    pub fn truth_set(&self, l: Statement) -> Result<Program> {
        self.check_indices(l)?;
        Ok(self.truth_set_unchecked(l))
    }

    fn is_statement_unchecked(&self, l: Statement) -> bool {
        if l.is_empty() {
            return self.semantics.include_empty_statement;
        }
        !self.truth_set_unchecked(l).is_empty()
    }

    /// Membership in the language: non-empty joint truth-set.
    pub fn is_statement(&self, l: Statement) -> Result<bool> {
        self.check_indices(l)?;
        Ok(self.is_statement_unchecked(l))
    }

    pub(crate) fn require_statement(&self, l: Statement) -> Result<()> {
        if self.is_statement(l)? {
            Ok(())
        } else {
            Err(Error::NotAStatement(l))
        }
    }

    fn check_vocabulary_guard(&self) -> Result<()> {
        let size = self.vocabulary.len();
        if size > self.guards.max_vocabulary {
            return Err(Error::VocabularyTooLarge {
                size,
                limit: self.guards.max_vocabulary,
            });
        }
        Ok(())
    }

    /// Every statement, in canonical order.
    pub fn enumerate_language(&self) -> Result<Vec<Statement>> {
        self.check_vocabulary_guard()?;
        let mut out: Vec<Statement> = submasks(self.vocabulary_mask())
            .map(Statement::from_bits)
            .filter(|&l| self.is_statement_unchecked(l))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Every completion of `x` that is a statement, materialised.
    pub fn extension(&self, x: Statement) -> Result<ExtensionSet> {
        self.require_statement(x)?;
        self.check_vocabulary_guard()?;
        let free = self.vocabulary_mask() & !x.bits();
        let mut members: Vec<Statement> = submasks(free)
            .map(|z| x.union(Statement::from_bits(z)))
            .filter(|&y| self.is_statement_unchecked(y))
            .collect();
        members.sort();
        Ok(ExtensionSet::from_sorted(members))
    }

    /// `|E_x|` by enumerating completions.
    pub fn extension_size_enumerated(&self, x: Statement) -> Result<u128> {
        Ok(self.extension(x)?.len() as u128)
    }

    /// `|E_x|` by inclusion-exclusion over the states of `x`'s truth-set,
    /// without enumerating completions.
    pub fn extension_size(&self, x: Statement) -> Result<u128> {
        self.require_statement(x)?;
        let truth = self.truth_set_unchecked(x);
        if truth.len() > self.guards.max_truth_set {
            return Err(Error::TruthSetTooLarge {
                size: truth.len(),
                limit: self.guards.max_truth_set,
            });
        }
        let outside: Vec<Program> = (0..self.vocabulary.len())
            .filter(|&i| !x.contains(i))
            .map(|i| self.vocabulary[i])
            .collect();
        // completions of x true in state s: x plus any subset of the remaining
        // programs containing s; E_x is the union over s in truth(x)
        let mut positive: u128 = 0;
        let mut negative: u128 = 0;
        for s in submasks(truth.bits()).skip(1) {
            let free = outside.iter().filter(|p| p.bits() & s == s).count();
            let term = 1u128 << free;
            if s.count_ones() % 2 == 1 {
                positive += term;
            } else {
                negative += term;
            }
        }
        Ok(positive - negative)
    }

    /// Union of the extensions of `xs`.
    pub fn extension_of_set(&self, xs: &[Statement]) -> Result<ExtensionSet> {
        let mut members = Vec::new();
        for &x in xs {
            members.extend(self.extension(x)?.iter());
        }
        members.sort();
        members.dedup();
        Ok(ExtensionSet::from_sorted(members))
    }

    /// Equivalence as extension equality.
    pub fn equivalent(&self, x: Statement, y: Statement) -> Result<bool> {
        Ok(self.extension(x)? == self.extension(y)?)
    }

    /// The same vocabulary listed as state sets, in canonical order.
    pub fn programs_as_lists(&self) -> Vec<Vec<usize>> {
        self.vocabulary
            .iter()
            .map(|p| p.states().collect())
            .collect()
    }
}

/// Every environment with `1..=max_states` states and a vocabulary of
/// `1..=max_vocabulary` distinct programs (the empty program included),
/// ordered by state count, vocabulary size, then canonical program choice.
pub fn small_environments(
    max_states: usize,
    max_vocabulary: usize,
) -> impl Iterator<Item = Environment> {
    (1..=max_states.min(6)).flat_map(move |n| {
        let mut programs: Vec<Program> = (0..1u64 << n).map(Program::from_bits).collect();
        programs.sort();
        let count = programs.len();
        let mut masks: Vec<u64> = (1..1u64 << count)
            .filter(|m| m.count_ones() as usize <= max_vocabulary)
            .collect();
        masks.sort_by(|&a, &b| bits::canonical_cmp(a, b));
        masks.into_iter().map(move |m| {
            let chosen = bits::ones(m).map(|i| programs[i]).collect();
            Environment::new(n, chosen).expect("distinct programs over n states")
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env2() -> Environment {
        Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]]).unwrap()
    }

    fn st(env: &Environment, ix: &[usize]) -> Statement {
        env.statement(ix.iter().copied()).unwrap()
    }

    #[test]
    fn small_environment_counts() {
        // one state: {∅}, {{0}}, {∅,{0}}; two states: 2^4 - 1 vocabularies
        assert_eq!(small_environments(1, 4).count(), 3);
        assert_eq!(small_environments(2, 4).count(), 3 + 15);
        assert_eq!(small_environments(3, 4).count(), 18 + 8 + 28 + 56 + 70);
        assert!(small_environments(3, 4).all(|e| e.vocabulary().len() <= 4));
    }

    #[test]
    fn constructor_examples() {
        assert_eq!(env2().vocabulary().len(), 3);
        assert!(matches!(
            Environment::from_state_sets(2, &[vec![0], vec![0]]),
            Err(Error::DuplicateProgram(_))
        ));
        let e = Environment::from_state_sets(1, &[vec![0], vec![]]).unwrap();
        assert_eq!(e.vocabulary(), &[Program::EMPTY, Program::from_bits(1)]);
        assert!(matches!(
            Environment::from_state_sets(2, &[vec![2]]),
            Err(Error::StateOutOfRange { state: 2, .. })
        ));
        assert_eq!(Environment::new(0, vec![]), Err(Error::NoStates));
    }

    #[test]
    fn vocabulary_is_canonicalised() {
        let e = Environment::from_state_sets(2, &[vec![0, 1], vec![1], vec![0]]).unwrap();
        assert_eq!(e, env2());
    }

    #[test]
    fn truth_sets() {
        let e = env2();
        assert_eq!(e.truth_set(st(&e, &[0, 2])).unwrap().bits(), 0b01);
        assert_eq!(e.truth_set(Statement::EMPTY).unwrap().bits(), 0b11);
        assert!(e.truth_set(st(&e, &[0, 1])).unwrap().is_empty());
        assert!(matches!(
            e.truth_set(Statement::from_bits(0b1000)),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn statement_membership() {
        let e = env2();
        assert!(e.is_statement(st(&e, &[0, 2])).unwrap());
        assert!(!e.is_statement(st(&e, &[0, 1])).unwrap());
        assert!(e.is_statement(Statement::EMPTY).unwrap());
        let strict = env2().with_semantics(Semantics {
            include_empty_statement: false,
            ..Semantics::default()
        });
        assert!(!strict.is_statement(Statement::EMPTY).unwrap());
    }

    #[test]
    fn extension_examples() {
        let e = env2();
        let shown = |x: &[usize]| e.extension(st(&e, x)).unwrap().to_string();
        assert_eq!(shown(&[2]), "{[2],[0,2],[1,2]}");
        assert_eq!(shown(&[0, 2]), "{[0,2]}");
        assert_eq!(e.extension(Statement::EMPTY).unwrap().len(), 6);
        assert!(matches!(
            e.extension(st(&e, &[0, 1])),
            Err(Error::NotAStatement(_))
        ));
    }

    #[test]
    fn extension_size_examples() {
        let e = env2();
        assert_eq!(e.extension_size(st(&e, &[2])).unwrap(), 3);
        assert_eq!(e.extension_size(st(&e, &[0])).unwrap(), 2);
        assert_eq!(e.extension_size(Statement::EMPTY).unwrap(), 6);
        let strict = env2().with_semantics(Semantics {
            include_empty_statement: false,
            ..Semantics::default()
        });
        assert_eq!(strict.extension_size(st(&strict, &[2])).unwrap(), 3);
        assert!(strict.extension_size(Statement::EMPTY).is_err());
    }

    #[test]
    fn truth_set_guard_is_an_error() {
        let e = Environment::from_state_sets(3, &[vec![0, 1, 2]])
            .unwrap()
            .with_guards(Guards {
                max_truth_set: 2,
                ..Guards::default()
            });
        assert_eq!(
            e.extension_size(Statement::EMPTY),
            Err(Error::TruthSetTooLarge { size: 3, limit: 2 })
        );
    }

    #[test]
    fn vocabulary_guard_is_an_error() {
        let programs: Vec<Vec<usize>> = (0..5).map(|s| vec![s]).collect();
        let e = Environment::from_state_sets(5, &programs)
            .unwrap()
            .with_guards(Guards {
                max_vocabulary: 4,
                ..Guards::default()
            });
        assert!(matches!(
            e.enumerate_language(),
            Err(Error::VocabularyTooLarge { size: 5, limit: 4 })
        ));
    }

    #[test]
    fn extension_of_sets() {
        let e = env2();
        let u = e.extension_of_set(&[st(&e, &[2]), st(&e, &[1])]).unwrap();
        assert_eq!(u.to_string(), "{[1],[2],[0,2],[1,2]}");
        assert!(e.extension_of_set(&[]).unwrap().is_empty());
        assert_eq!(e.extension_of_set(&[Statement::EMPTY]).unwrap().len(), 6);
    }

    #[test]
    fn equivalence_is_extension_equality() {
        let e = env2();
        let x = st(&e, &[0]);
        assert!(e.equivalent(x, x).unwrap());
        assert!(!e.equivalent(x, st(&e, &[0, 2])).unwrap());
        assert!(!e.equivalent(st(&e, &[1]), st(&e, &[2])).unwrap());
    }

    #[test]
    fn language_listing() {
        let e = env2();
        let l: Vec<String> = e
            .enumerate_language()
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(l, ["[]", "[0]", "[1]", "[2]", "[0,2]", "[1,2]"]);
        let two = Environment::from_state_sets(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(two.enumerate_language().unwrap().len(), 3);
        let none = Environment::new(2, vec![]).unwrap();
        assert_eq!(none.enumerate_language().unwrap(), vec![Statement::EMPTY]);
    }
}
