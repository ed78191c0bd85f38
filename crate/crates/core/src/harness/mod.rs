//! Reproducible experiment driver: configs, runners and reports.

mod config;
mod experiment;
mod report;

use std::path::{Path, PathBuf};

pub use config::{
    load_config, parse_config, BoundsConfig, EnumerateConfig, EnvironmentForm, EnvironmentSpec,
    ExperimentConfig, Format, Kind, LearnConfig, OutputConfig, SampleConfig,
};
pub use experiment::{derive_child, environments, run_experiment, RunOutput};
pub use report::{render, write_atomic, write_report, ReportMeta, ReportRow, CSV_HEADER};

use crate::error::{Error, Result};

/// Writes the report, its `.meta.json` sidecar and any attachments. A path
/// of `-` prints the report alone to standard output.
pub fn emit(config: &ExperimentConfig, out: &RunOutput, path: &str, format: Format) -> Result<()> {
    let body = render(&out.rows, format)?;
    if path == "-" {
        print!("{body}");
        return Ok(());
    }
    let path = Path::new(path);
    write_atomic(path, &body)?;
    write_atomic(
        &sidecar(path, "meta.json"),
        &ReportMeta::new(config, out.rows.len()).to_json(),
    )?;
    for (suffix, contents) in &out.attachments {
        write_atomic(&sidecar(path, suffix), contents)?;
    }
    Ok(())
}

/// `report.csv` + `meta.json` -> `report.csv.meta.json`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    path.with_file_name(name)
}

/// Dumps what is needed to reproduce an invariant violation into a fresh
/// directory under `root`, and returns it.
pub fn dump_repro(config: &ExperimentConfig, error: &Error, root: &Path) -> Result<PathBuf> {
    let dir = root.join(format!("weakform-repro-{}", config.hash()));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    write_atomic(&dir.join("config.toml"), &config.to_toml())?;
    let note = format!(
        "version: {}\nexperiment: {}\nconfig_hash: {}\nerror: {error}\nrerun: weakform {} --config config.toml\n",
        crate::VERSION,
        config.kind,
        config.hash(),
        config.kind,
    );
    write_atomic(&dir.join("error.txt"), &note)?;
    Ok(dir)
}
