//! Environments, declarative programs, statements and extensions.

mod bits;
mod environment;
mod extension;
mod io;
mod language;

pub use bits::{
    canonical_cmp, deposit, is_completion, low_mask, ones, submasks, Ones, Program, Statement,
    StmtSet, WIDTH,
};
pub use environment::{small_environments, Environment, Guards, Semantics};
pub use extension::ExtensionSet;
pub(crate) use io::json_error;
pub use io::{
    environment_hash, environment_to_json, load_environment, parse_environment, EnvironmentFile,
};
pub use language::Language;
