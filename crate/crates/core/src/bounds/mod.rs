//! Utility of an abstraction layer and checks of the bounds built on it.

mod utility;
mod verify;

pub use utility::{
    full_powerset_vocabulary, full_powerset_vocabulary_with, utility, utility_witness,
    UninstantiatedTask,
};
pub use verify::{
    all_tasks, bounded_family, compare_vocabularies, compare_vocabularies_with, verify_upper_bound,
    verify_utility_maximal_at_p, CandidateRow, Counterexample, MaximalityCheck, Monotonicity,
    Outcome, PolicyRow, PowersetContext, Prob, RankEntry, Recipe, ReportMeta, Restriction,
    Selection, SweepSummary, UpperBoundReport, UtilityReport, UtilityRow, VocabInfo,
    MAX_CONTEXT_PROGRAMS,
};
