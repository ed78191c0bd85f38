//! Task files:
//! `{"env": <path or inline environment>, "inputs": [[...]...], "outputs": [[...]...]}`.

use serde::{Deserialize, Serialize};
use std::path::Path;

use super::task::Task;
use crate::error::{Error, Result};
use crate::set_core::{
    json_error, load_environment, Environment, EnvironmentFile, Language, Statement,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvSource {
    Path(String),
    Inline(EnvironmentFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFile {
    pub env: EnvSource,
    pub inputs: Vec<Vec<usize>>,
    pub outputs: Vec<Vec<usize>>,
}

impl TaskFile {
    pub fn from_task(task: &Task) -> Self {
        let lists = |v: Vec<Statement>| v.into_iter().map(Vec::from).collect();
        TaskFile {
            env: EnvSource::Inline(EnvironmentFile::from(task.language().env())),
            inputs: lists(task.inputs()),
            outputs: lists(task.correct_outputs()),
        }
    }

    /// Resolves the environment (relative paths against `base`) and
    /// re-validates the task.
    pub fn resolve(
        &self,
        base: &Path,
        env_settings: impl Fn(Environment) -> Environment,
    ) -> Result<Task> {
        let env = match &self.env {
            EnvSource::Path(p) => load_environment(&base.join(p))?,
            EnvSource::Inline(f) => f.clone().into_environment()?.0,
        };
        let env = env_settings(env);
        let stmts = |lists: &[Vec<usize>]| -> Result<Vec<Statement>> {
            lists
                .iter()
                .map(|ix| env.statement(ix.iter().copied()))
                .collect()
        };
        let inputs = stmts(&self.inputs)?;
        let outputs = stmts(&self.outputs)?;
        let lang = Language::build(env)?;
        Task::new(&lang, &inputs, &outputs)
    }
}

pub fn parse_task(text: &str, base: &Path) -> Result<Task> {
    let file: TaskFile = serde_json::from_str(text).map_err(json_error)?;
    file.resolve(base, |e| e)
}

pub fn load_task(path: &Path) -> Result<Task> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_task(&text, path.parent().unwrap_or(Path::new(".")))
}

pub fn task_to_json(task: &Task) -> String {
    serde_json::to_string(&TaskFile::from_task(task)).expect("task serialises")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_round_trip() {
        let text = r#"{"env": {"states": 2, "vocabulary": [[0],[1],[0,1]]},
                       "inputs": [[2]], "outputs": [[2,0]]}"#;
        let t = parse_task(text, Path::new(".")).unwrap();
        assert_eq!(t.encode(), "I=[[2]];O=[[0,2]]");
        let again = parse_task(&task_to_json(&t), Path::new(".")).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn path_reference_and_revalidation() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("env.json"),
            r#"{"states":2,"vocabulary":[[0],[1],[0,1]]}"#,
        )
        .unwrap();
        let ok = r#"{"env": "env.json", "inputs": [[2]], "outputs": [[0,2]]}"#;
        assert!(parse_task(ok, dir.path()).is_ok());
        let bad = r#"{"env": "env.json", "inputs": [[2]], "outputs": [[0]]}"#;
        assert!(matches!(
            parse_task(bad, dir.path()),
            Err(Error::OutputsNotInExtension(_))
        ));
    }
}
