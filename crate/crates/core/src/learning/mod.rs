//! Proxies, learning by proxy maximisation, and generalisation.

mod efficiency;
mod generalization;
mod learn;
mod proxy;

pub use efficiency::{
    sample_efficiency, sample_efficiency_matrices, sample_efficiency_with, Efficiency,
};
pub use generalization::{
    correct_policy_count, gen_cmp, generalization_probability, generalization_probability_mc,
    policy_count_formula, GeneralizationTable, McEstimate, MAX_EXHAUSTIVE_CHECKS,
};
pub use learn::{evaluate_generalization, learn, learn_with};
pub use proxy::{random_proxy, simplicity_cmp, weakness_cmp, Proxy};
