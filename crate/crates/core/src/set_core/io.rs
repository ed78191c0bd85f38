//! Environment files: `{"states": n, "vocabulary": [[states...], ...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::environment::Environment;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentFile {
    pub states: usize,
    pub vocabulary: Vec<Vec<usize>>,
}

impl From<&Environment> for EnvironmentFile {
    fn from(env: &Environment) -> Self {
        EnvironmentFile {
            states: env.state_count(),
            vocabulary: env.programs_as_lists(),
        }
    }
}

impl EnvironmentFile {
    /// Validates into an environment. The flag reports whether the program
    /// order differed from canonical order.
    pub fn into_environment(self) -> Result<(Environment, bool)> {
        let mut given = self.vocabulary;
        for p in &mut given {
            p.sort_unstable();
            p.dedup();
        }
        let env = Environment::from_state_sets(self.states, &given)?;
        let reordered = env.programs_as_lists() != given;
        Ok((env, reordered))
    }
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_environment(text: &str) -> Result<Environment> {
    let file: EnvironmentFile = serde_json::from_str(text).map_err(json_error)?;
    let (env, reordered) = file.into_environment()?;
    if reordered {
        log::warn!("vocabulary reordered into canonical order");
    }
    Ok(env)
}

pub fn load_environment(path: &Path) -> Result<Environment> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_environment(&text)
}

pub fn environment_to_json(env: &Environment) -> String {
    serde_json::to_string(&EnvironmentFile::from(env)).expect("environment serialises")
}

/// Short content hash of the canonical environment encoding.
pub fn environment_hash(env: &Environment) -> String {
    let digest = Sha256::digest(environment_to_json(env).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
