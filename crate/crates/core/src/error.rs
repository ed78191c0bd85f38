use thiserror::Error;

use crate::set_core::Statement;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // environment construction
    #[error("state count must be at least 1")]
    NoStates,
    #[error("state {state} is out of range for an environment with {state_count} states")]
    StateOutOfRange { state: usize, state_count: usize },
    #[error("program {0} appears more than once in the vocabulary")]
    DuplicateProgram(String),
    #[error("program index {index} out of range for a vocabulary of {len} programs")]
    IndexOutOfRange { index: usize, len: usize },

    // guards
    #[error("vocabulary of {size} programs exceeds the enumeration guard of {limit}")]
    VocabularyTooLarge { size: usize, limit: usize },
    #[error("truth-set of {size} states exceeds the inclusion-exclusion guard of {limit}")]
    TruthSetTooLarge { size: usize, limit: usize },
    #[error("task space too large: {0}")]
    TaskSpaceTooLarge(String),
    #[error("state space of {size} states exceeds the powerset guard of {limit}")]
    StateSpaceTooLarge { size: usize, limit: usize },

    // statements
    #[error("{0} is not a statement of this language")]
    NotAStatement(Statement),

    // tasks
    #[error("a task needs at least one input")]
    EmptyInputs,
    #[error("inputs must be a strict subset of the language")]
    InputsNotStrictSubset,
    #[error("correct output {0} is not a completion of any input")]
    OutputsNotInExtension(Statement),
    #[error("correct outputs must be a strict subset of the outputs")]
    OutputsNotStrict,
    #[error("empty correct-output sets are disabled")]
    EmptyOutputs,
    #[error("{0} is not an input of this task")]
    InputNotInTask(Statement),
    #[error("the policy admits no completion of input {0}")]
    NoOutput(Statement),
    #[error("tasks belong to different environments")]
    EnvironmentMismatch,

    // learning
    #[error("the task has no correct policy")]
    NoCorrectPolicy,
    #[error("proxy has no unique maximum among {0} correct policies")]
    AmbiguousMaximum(usize),
    #[error("unknown proxy {0:?}")]
    UnknownProxy(String),

    // uninstantiated tasks
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
    #[error("no input survives the restriction to this vocabulary")]
    EmptyInstantiation,

    // harness
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("guard {name} = {value} exceeds the hard maximum {max}")]
    GuardConflict {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error("refusing to write an empty report")]
    EmptyReport,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VocabularyTooLarge { .. }
            | Error::TruthSetTooLarge { .. }
            | Error::TaskSpaceTooLarge(_)
            | Error::StateSpaceTooLarge { .. } => 3,
            Error::Invariant(_) => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
