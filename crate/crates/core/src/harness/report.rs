//! Report rows and atomic CSV/JSON output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::{ExperimentConfig, Format};
use crate::error::{Error, Result};

/// One report line. Columns, in order:
///
/// | column | meaning |
/// |---|---|
/// | `experiment` | experiment kind |
/// | `row` | deterministic row index |
/// | `env_hash` | environment content hash |
/// | `states`, `vocabulary`, `language` | `\|Φ\|`, `\|v\|`, `\|L_v\|` |
/// | `task_space` | `\|Γ_v\|`, exact |
/// | `seed` | run seed, if any |
/// | `task_id`, `task` | task identifier and canonical encoding |
/// | `child` | example (child) task a policy was learned from |
/// | `proxy`, `against` | proxy used, and the one compared with |
/// | `candidate` | candidate vocabulary, for the bound experiments |
/// | `policy` | learned or selected policy |
/// | `extension_size` | `\|E_policy\|` |
/// | `generalized` | policy correct for the parent task |
/// | `utility` | task utility |
/// | `probability` | exact probability as `num/den` |
/// | `best_probability` | highest probability among all candidates |
/// | `score` | integer result (policy count, sample efficiency) |
/// | `outcome` | verdict or error text |
/// | `wall_ms` | elapsed time, 0 unless timing is recorded |
/// | `config_hash`, `version` | provenance |
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub row: u64,
    pub env_hash: String,
    pub states: usize,
    pub vocabulary: usize,
    pub language: usize,
    pub task_space: String,
    pub seed: Option<u64>,
    pub task_id: String,
    pub task: String,
    pub child: String,
    pub proxy: String,
    pub against: String,
    pub candidate: String,
    pub policy: String,
    pub extension_size: Option<u64>,
    pub generalized: Option<bool>,
    pub utility: Option<u64>,
    pub probability: String,
    pub best_probability: String,
    pub score: Option<i64>,
    pub outcome: String,
    pub wall_ms: u64,
    pub config_hash: String,
    pub version: String,
}

/// Fixed CSV header.
pub const CSV_HEADER: &str = "experiment,row,env_hash,states,vocabulary,language,task_space,seed,task_id,task,child,proxy,against,candidate,policy,extension_size,generalized,utility,probability,best_probability,score,outcome,wall_ms,config_hash,version";

pub fn render(rows: &[ReportRow], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialise");
            s.push('\n');
            Ok(s)
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so the target is either untouched or complete.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn write_report(rows: &[ReportRow], path: &Path, format: Format) -> Result<()> {
    write_atomic(path, &render(rows, format)?)
}

/// Header written next to a report (`<report>.meta.json`): enough to
/// reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct ReportMeta {
    pub version: String,
    pub experiment: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub rows: usize,
    pub config: String,
}

impl ReportMeta {
    pub fn new(config: &ExperimentConfig, rows: usize) -> Self {
        ReportMeta {
            version: crate::VERSION.to_string(),
            experiment: config.kind.name().to_string(),
            config_hash: config.hash(),
            seeds: config.seeds.clone(),
            rows,
            config: config.to_toml(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("meta serialises");
        s.push('\n');
        s
    }
}
