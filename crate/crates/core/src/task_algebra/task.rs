use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::set_core::{ExtensionSet, Language, Statement, StmtSet};

/// A v-task: inputs and the correct outputs among their completions.
#[derive(Clone, Debug)]
pub struct Task {
    lang: Arc<Language>,
    inputs: StmtSet,
    outputs: StmtSet,
    outputs_ext: StmtSet,
}

impl PartialEq for Task {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs && self.outputs == other.outputs && self.same_language(other)
    }
}

impl Eq for Task {}

/// The correct policies of a task, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicySet {
    pub members: Vec<Statement>,
    pub set: StmtSet,
}

impl PolicySet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, l: Statement) -> bool {
        self.members.binary_search(&l).is_ok()
    }
}

/// Result of one inference step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inference {
    pub output: Statement,
    pub correct: bool,
}

impl Task {
    /// Validates `⟨inputs, outputs⟩` against the language.
    pub fn new(lang: &Arc<Language>, inputs: &[Statement], outputs: &[Statement]) -> Result<Task> {
        let i = lang.set_of(inputs)?;
        let o = lang.set_of(outputs)?;
        Task::from_sets(lang, i, o)
    }

    pub fn from_sets(lang: &Arc<Language>, inputs: StmtSet, outputs: StmtSet) -> Result<Task> {
        let universe = lang.full();
        for s in [inputs, outputs] {
            if !s.is_subset(universe) {
                let stray = (s.0 & !universe.0).trailing_zeros() as usize;
                return Err(Error::IndexOutOfRange {
                    index: stray,
                    len: lang.len(),
                });
            }
        }
        if inputs.is_empty() {
            return Err(Error::EmptyInputs);
        }
        if inputs == universe {
            return Err(Error::InputsNotStrictSubset);
        }
        let ext = lang.extension_of(inputs);
        if let Some(o) = (outputs & StmtSet(!ext.0)).iter().next() {
            return Err(Error::OutputsNotInExtension(lang.statement(o)));
        }
        if outputs == ext {
            return Err(Error::OutputsNotStrict);
        }
        if outputs.is_empty() && !lang.env().semantics().allow_empty_outputs {
            return Err(Error::EmptyOutputs);
        }
        Ok(Task::from_parts(lang, inputs, outputs, ext))
    }

    pub(crate) fn from_parts(
        lang: &Arc<Language>,
        inputs: StmtSet,
        outputs: StmtSet,
        outputs_ext: StmtSet,
    ) -> Task {
        Task {
            lang: Arc::clone(lang),
            inputs,
            outputs,
            outputs_ext,
        }
    }

    pub fn language(&self) -> &Arc<Language> {
        &self.lang
    }

    pub fn same_language(&self, other: &Task) -> bool {
        Arc::ptr_eq(&self.lang, &other.lang) || *self.lang == *other.lang
    }

    pub fn input_set(&self) -> StmtSet {
        self.inputs
    }

    pub fn output_set(&self) -> StmtSet {
        self.outputs
    }

    /// `E_I` as an index set.
    pub fn outputs_ext_set(&self) -> StmtSet {
        self.outputs_ext
    }

    pub fn inputs(&self) -> Vec<Statement> {
        self.lang.members(self.inputs)
    }

    pub fn correct_outputs(&self) -> Vec<Statement> {
        self.lang.members(self.outputs)
    }

    /// `E_I`: every completion of some input.
    pub fn outputs(&self) -> ExtensionSet {
        ExtensionSet::from_sorted(self.lang.members(self.outputs_ext))
    }

    pub(crate) fn is_correct_index(&self, pi: usize) -> bool {
        self.outputs_ext & self.lang.up(pi) == self.outputs
    }

    pub fn is_correct_policy(&self, pi: Statement) -> Result<bool> {
        Ok(self.is_correct_index(self.lang.index_of(pi)?))
    }

    pub(crate) fn correct_policy_set(&self) -> StmtSet {
        let mut m = 0u64;
        for i in 0..self.lang.len() {
            if self.is_correct_index(i) {
                m |= 1 << i;
            }
        }
        StmtSet(m)
    }

    pub fn correct_policies(&self) -> PolicySet {
        let set = self.correct_policy_set();
        PolicySet {
            members: self.lang.members(set),
            set,
        }
    }

    /// Completes `input` under `pi`, choosing uniformly (seeded) among the
    /// admissible completions.
    pub fn infer(&self, pi: Statement, input: Statement, seed: u64) -> Result<Inference> {
        let p = self.lang.index_of(pi)?;
        let i = self
            .lang
            .index_of(input)
            .ok()
            .filter(|&i| self.inputs.contains(i))
            .ok_or(Error::InputNotInTask(input))?;
        let choices: Vec<usize> = (self.lang.up(i) & self.lang.up(p)).iter().collect();
        if choices.is_empty() {
            return Err(Error::NoOutput(input));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = choices[rng.gen_range(0..choices.len())];
        Ok(Inference {
            output: self.lang.statement(e),
            correct: self.outputs.contains(e),
        })
    }

    /// `self ⊏ omega`: strictly fewer inputs and no extra correct outputs.
    pub fn is_child_of(&self, omega: &Task) -> Result<bool> {
        if !self.same_language(omega) {
            return Err(Error::EnvironmentMismatch);
        }
        Ok(self.inputs.is_strict_subset(omega.inputs) && self.outputs.is_subset(omega.outputs))
    }

    /// Length of the longest strictly ascending parent chain above this task.
    ///
    /// Any task has the parent `⟨I ∪ {x}, O⟩` for `x ∉ I` as long as
    /// `I ∪ {x} ≠ L`, and every parent step adds at least one input, so the
    /// longest chain adds inputs one at a time until `|I| = |L| - 1`.
    pub fn hierarchy_level(&self) -> usize {
        self.lang.len() - 1 - self.inputs.len()
    }

    /// Canonical text encoding, e.g. `I=[[2]];O=[[0,2]]`.
    pub fn encode(&self) -> String {
        let list = |v: Vec<Statement>| {
            let items: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            format!("[{}]", items.join(","))
        };
        format!(
            "I={};O={}",
            list(self.inputs()),
            list(self.correct_outputs())
        )
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// `alpha ⊏ omega`.
pub fn is_child(alpha: &Task, omega: &Task) -> Result<bool> {
    alpha.is_child_of(omega)
}
