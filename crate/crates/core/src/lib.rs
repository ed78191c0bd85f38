//! Finite, exhaustively checkable models of enactive task learning.
//!
//! An [`Environment`] is a set of states with a vocabulary of declarative
//! programs. Statements are sets of programs with a common true state; tasks
//! pair inputs with the correct completions of those inputs; proxies pick a
//! policy among the correct ones; utility measures how weak the best policy
//! an abstraction layer allows can be.

pub mod bounds;
pub mod error;
pub mod exec;
pub mod harness;
pub mod learning;
pub mod set_core;
pub mod task_algebra;

pub use error::{Error, Result};
pub use exec::Exec;
pub use set_core::{Environment, ExtensionSet, Guards, Language, Program, Semantics, Statement};
pub use task_algebra::{Task, TaskSpace};

/// Crate version, recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
