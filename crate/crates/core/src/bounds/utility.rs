use std::sync::Arc;

use crate::error::{Error, Result};
use crate::set_core::{low_mask, Environment, Guards, Language, Program, Statement, StmtSet};
use crate::task_algebra::Task;

/// Utility of a task: the weakness gap between its weakest correct policy
/// and its correct outputs.
pub fn utility(task: &Task) -> Result<u64> {
    utility_witness(task).map(|(u, _)| u)
}

/// Utility together with the weakest correct policy attaining it
/// (canonically smallest on ties).
pub fn utility_witness(task: &Task) -> Result<(u64, Statement)> {
    let lang = task.language();
    let policies = task.correct_policies();
    let best = policies
        .set
        .iter()
        .max_by(|&a, &b| lang.ext_size(a).cmp(&lang.ext_size(b)).then(b.cmp(&a)))
        .ok_or(Error::NoCorrectPolicy)?;
    let u = lang.ext_size(best) - task.output_set().len();
    Ok((u as u64, lang.statement(best)))
}

/// Environment whose vocabulary is every program over `state_count` states.
pub fn full_powerset_vocabulary(state_count: usize) -> Result<Environment> {
    full_powerset_vocabulary_with(state_count, Guards::default())
}

pub fn full_powerset_vocabulary_with(state_count: usize, guards: Guards) -> Result<Environment> {
    if state_count == 0 {
        return Err(Error::NoStates);
    }
    if state_count > guards.max_powerset_states || state_count > Guards::HARD.max_powerset_states {
        return Err(Error::StateSpaceTooLarge {
            size: state_count,
            limit: guards
                .max_powerset_states
                .min(Guards::HARD.max_powerset_states),
        });
    }
    let programs = (0..1u64 << state_count).map(Program::from_bits).collect();
    Ok(Environment::new(state_count, programs)?.with_guards(guards))
}

/// A task over the full-powerset vocabulary, instantiable in any
/// sub-vocabulary by restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UninstantiatedTask {
    base: Task,
}

impl UninstantiatedTask {
    pub fn new(base: Task) -> Result<Self> {
        let env = base.language().env();
        let expected = 1usize << env.state_count().min(63);
        if env.state_count() >= 63 || env.vocabulary().len() != expected {
            return Err(Error::InvalidVocabulary(format!(
                "an uninstantiated task needs all {} programs over {} states",
                expected,
                env.state_count()
            )));
        }
        Ok(UninstantiatedTask { base })
    }

    pub fn base(&self) -> &Task {
        &self.base
    }

    pub fn language(&self) -> &Arc<Language> {
        self.base.language()
    }

    pub fn env(&self) -> &Environment {
        self.base.language().env()
    }

    /// Mask of `vocabulary` over the powerset's program indices.
    pub fn vocabulary_mask(&self, vocabulary: &[Program]) -> Result<u64> {
        let all = self.env().vocabulary();
        let mut mask = 0u64;
        for p in vocabulary {
            let i = all
                .binary_search(p)
                .map_err(|_| Error::InvalidVocabulary(format!("{p} is not a program here")))?;
            if mask >> i & 1 == 1 {
                return Err(Error::InvalidVocabulary(format!("{p} listed twice")));
            }
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// The programs selected by a mask over the powerset's program indices.
    pub fn vocabulary_of(&self, mask: u64) -> Vec<Program> {
        let all = self.env().vocabulary();
        crate::set_core::ones(mask & low_mask(all.len()))
            .map(|i| all[i])
            .collect()
    }

    /// Restricts the task to `vocabulary`: the inputs expressible there, and
    /// the correct outputs expressible there that complete a kept input.
    pub fn instantiate(&self, vocabulary: &[Program]) -> Result<Task> {
        let mask = self.vocabulary_mask(vocabulary)?;
        let env = Environment::new(self.env().state_count(), vocabulary.to_vec())?
            .with_guards(*self.env().guards())
            .with_semantics(*self.env().semantics());
        // program index in P -> index in the sub-vocabulary (order preserving)
        let mut remap = [usize::MAX; 64];
        for (k, i) in crate::set_core::ones(mask).enumerate() {
            remap[i] = k;
        }
        let translate = |l: Statement| -> Option<Statement> {
            if l.bits() & !mask != 0 {
                return None;
            }
            Some(Statement::from_bits(
                l.indices().fold(0u64, |m, i| m | 1 << remap[i]),
            ))
        };
        let inputs: Vec<Statement> = self
            .base
            .inputs()
            .into_iter()
            .filter_map(translate)
            .collect();
        if inputs.is_empty() {
            return Err(Error::EmptyInstantiation);
        }
        let lang = Language::build(env)?;
        let input_set = lang.set_of(&inputs)?;
        let ext = lang.extension_of(input_set);
        let outputs: Vec<Statement> = self
            .base
            .correct_outputs()
            .into_iter()
            .filter_map(translate)
            .collect();
        let mut output_set = StmtSet::EMPTY;
        for o in outputs {
            let i = lang.index_of(o)?;
            if ext.contains(i) {
                output_set = output_set | StmtSet(1 << i);
            }
        }
        Task::from_sets(&lang, input_set, output_set)
    }
}
