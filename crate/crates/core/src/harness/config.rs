//! Experiment configuration files (TOML).
//!
//! Every field has an explicit default and [`ExperimentConfig::to_toml`]
//! writes all of them back, so a resolved config is self-describing and
//! round-trips byte for byte.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::learning::Proxy;
use crate::set_core::{Guards, Semantics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Enumerate,
    Learn,
    CompareProxies,
    Utility,
    VerifyBound,
    SampleGen,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::Enumerate,
        Kind::Learn,
        Kind::CompareProxies,
        Kind::Utility,
        Kind::VerifyBound,
        Kind::SampleGen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Enumerate => "enumerate",
            Kind::Learn => "learn",
            Kind::CompareProxies => "compare-proxies",
            Kind::Utility => "utility",
            Kind::VerifyBound => "verify-bound",
            Kind::SampleGen => "sample-gen",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format `{s}` (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Report path; `-` writes to standard output.
    pub path: String,
    pub format: Format,
    /// Fill the `wall_ms` column. Off by default: timings break byte
    /// reproducibility.
    pub record_timing: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: "-".into(),
            format: Format::Csv,
            record_timing: false,
        }
    }
}

/// Where environments come from. Exactly one form must be given:
/// `file`, `states` + `vocabulary`, `powerset`, or
/// `sweep_states` + `sweep_vocabulary`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vocabulary: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub powerset: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_vocabulary: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentForm {
    File,
    Inline,
    Powerset,
    Sweep,
}

impl EnvironmentSpec {
    pub fn form(&self) -> Result<EnvironmentForm> {
        let forms = [
            (
                EnvironmentForm::File,
                self.file.is_some(),
                self.file.is_some(),
            ),
            (
                EnvironmentForm::Inline,
                self.states.is_some() || self.vocabulary.is_some(),
                self.states.is_some() && self.vocabulary.is_some(),
            ),
            (
                EnvironmentForm::Powerset,
                self.powerset.is_some(),
                self.powerset.is_some(),
            ),
            (
                EnvironmentForm::Sweep,
                self.sweep_states.is_some() || self.sweep_vocabulary.is_some(),
                self.sweep_states.is_some() && self.sweep_vocabulary.is_some(),
            ),
        ];
        let given: Vec<_> = forms.iter().filter(|f| f.1).collect();
        match given.as_slice() {
            [(form, _, true)] => Ok(*form),
            [(EnvironmentForm::Inline, _, false)] => Err(Error::Config(
                "environment: `states` and `vocabulary` go together".into(),
            )),
            [(EnvironmentForm::Sweep, _, false)] => Err(Error::Config(
                "environment: `sweep_states` and `sweep_vocabulary` go together".into(),
            )),
            [] => Err(Error::Config("environment: no source given".into())),
            _ => Err(Error::Config(
                "environment: give exactly one of file, states+vocabulary, powerset, sweep".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnumerateConfig {
    /// Refuse task spaces with more tasks than this.
    pub limit: u64,
}

impl Default for EnumerateConfig {
    fn default() -> Self {
        EnumerateConfig { limit: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    /// Tasks drawn per seed and environment.
    pub count: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { count: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LearnConfig {
    /// Parent tasks drawn per seed and environment.
    pub trials: u64,
    /// Inputs kept in each child.
    pub child_inputs: usize,
    /// Break proxy ties by canonical order instead of failing.
    pub tie_break: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            trials: 10,
            child_inputs: 1,
            tie_break: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    /// Task file over the powerset vocabulary; empty means the task family
    /// below.
    pub task: String,
    /// Family bounds on `|I|` and `|O|`; 0 means unbounded.
    pub max_inputs: usize,
    pub max_outputs: usize,
    /// Candidate vocabularies as lists of programs; empty means every
    /// subset of the powerset.
    pub candidates: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seeds: Vec<u64>,
    /// `weakness`, `simplicity`, `random:<seed>`, `table:<path>`, or bare
    /// `random` for one random proxy per run seed.
    pub proxies: Vec<String>,
    pub output: OutputConfig,
    pub environment: EnvironmentSpec,
    pub guards: Guards,
    pub semantics: Semantics,
    pub enumerate: EnumerateConfig,
    pub sample: SampleConfig,
    pub learn: LearnConfig,
    pub bounds: BoundsConfig,
    /// Directory relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

// what a file may leave out
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Option<Kind>,
    seeds: Option<Vec<u64>>,
    proxies: Option<Vec<String>>,
    #[serde(default)]
    output: OutputConfig,
    environment: Option<EnvironmentSpec>,
    #[serde(default)]
    guards: RawGuards,
    #[serde(default)]
    semantics: RawSemantics,
    #[serde(default)]
    enumerate: EnumerateConfig,
    #[serde(default)]
    sample: SampleConfig,
    #[serde(default)]
    learn: LearnConfig,
    #[serde(default)]
    bounds: BoundsConfig,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGuards {
    max_vocabulary: Option<usize>,
    max_truth_set: Option<usize>,
    max_language: Option<usize>,
    max_powerset_states: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSemantics {
    include_empty_statement: Option<bool>,
    allow_empty_outputs: Option<bool>,
}

fn toml_error(text: &str, e: toml::de::Error) -> Error {
    let (line, column) = match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (0, 0),
    };
    Error::Parse {
        line,
        column,
        message: e.message().to_string(),
    }
}

/// Parses and validates a configuration document. `kind` is the subcommand;
/// a `kind` in the document must agree with it.
pub fn parse_config(text: &str, kind: Option<Kind>) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let kind = match (raw.kind, kind) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Config(format!(
                "config is for `{a}` but `{b}` was requested"
            )))
        }
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(Error::Config("no experiment kind given".into())),
    };
    let d = Guards::default();
    let guards = Guards {
        max_vocabulary: raw.guards.max_vocabulary.unwrap_or(d.max_vocabulary),
        max_truth_set: raw.guards.max_truth_set.unwrap_or(d.max_truth_set),
        max_language: raw.guards.max_language.unwrap_or(d.max_language),
        max_powerset_states: raw
            .guards
            .max_powerset_states
            .unwrap_or(d.max_powerset_states),
    };
    let s = Semantics::default();
    let semantics = Semantics {
        include_empty_statement: raw
            .semantics
            .include_empty_statement
            .unwrap_or(s.include_empty_statement),
        allow_empty_outputs: raw
            .semantics
            .allow_empty_outputs
            .unwrap_or(s.allow_empty_outputs),
    };
    let config = ExperimentConfig {
        kind,
        seeds: raw.seeds.unwrap_or_else(|| vec![0]),
        proxies: raw
            .proxies
            .unwrap_or_else(|| vec!["weakness".into(), "simplicity".into()]),
        output: raw.output,
        environment: raw
            .environment
            .ok_or_else(|| Error::Config("missing [environment] section".into()))?,
        guards,
        semantics,
        enumerate: raw.enumerate,
        sample: raw.sample,
        learn: raw.learn,
        bounds: raw.bounds,
        base_dir: PathBuf::from("."),
    };
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path, kind: Option<Kind>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut config = parse_config(&text, kind)?;
    config.base_dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    Ok(config)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.guards.check()?;
        for p in &self.proxies {
            if p != "random" {
                Proxy::validate_name(p)?;
            }
        }
        self.environment.form()?;
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds: at least one seed is needed".into()));
        }
        // TOML integers are signed
        if let Some(s) = self.seeds.iter().find(|&&s| s > i64::MAX as u64) {
            return Err(Error::Config(format!("seed {s} is above {}", i64::MAX)));
        }
        if self.learn.child_inputs == 0 {
            return Err(Error::Config(
                "learn.child_inputs must be at least 1".into(),
            ));
        }
        match self.kind {
            Kind::Learn if self.proxies.is_empty() => {
                Err(Error::Config("learn needs at least one proxy".into()))
            }
            Kind::CompareProxies if self.proxies.len() < 2 => Err(Error::Config(
                "compare-proxies needs at least two proxies".into(),
            )),
            _ => Ok(()),
        }
    }

    /// The fully resolved document.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Hash of [`ExperimentConfig::to_toml`] with the output path and format
    /// blanked, so the same experiment hashes alike wherever it is written.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output.path = "-".into();
        c.output.format = Format::Csv;
        let digest = Sha256::digest(c.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn resolve_path(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Proxies for one run seed, with bare `random` bound to it.
    pub fn proxies_for(&self, seed: u64) -> Result<Vec<Proxy>> {
        self.proxies
            .iter()
            .map(|p| match p.as_str() {
                "random" => Ok(Proxy::Random { seed }),
                other => match other.strip_prefix("table:") {
                    Some(path) => {
                        let path = self.resolve_path(path);
                        Proxy::load_table(&path).map_err(|e| match e {
                            Error::Io(m) => Error::Config(m),
                            e => e,
                        })
                    }
                    None => Proxy::parse(other),
                },
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[environment]\npowerset = 2\n";

    #[test]
    fn minimal_config_lists_defaults() {
        let c = parse_config(MINIMAL, Some(Kind::Enumerate)).unwrap();
        let text = c.to_toml();
        for key in [
            "kind = \"enumerate\"",
            "seeds = [0]",
            "max_vocabulary = 24",
            "allow_empty_outputs = true",
            "record_timing = false",
            "limit = 100000",
            "child_inputs = 1",
            "candidates = []",
        ] {
            assert!(text.contains(key), "{key} missing from\n{text}");
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let c = parse_config(MINIMAL, Some(Kind::Learn)).unwrap();
        let once = c.to_toml();
        let again = parse_config(&once, None).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_toml(), once);
        assert_eq!(again.hash(), c.hash());
    }

    #[test]
    fn unknown_proxy() {
        let text = "proxies = [\"shortest\"]\n[environment]\npowerset = 2\n";
        assert_eq!(
            parse_config(text, Some(Kind::Learn)),
            Err(Error::UnknownProxy("shortest".into()))
        );
    }

    #[test]
    fn guard_above_hard_limit() {
        let text = "[environment]\npowerset = 2\n[guards]\nmax_language = 65\n";
        assert_eq!(
            parse_config(text, Some(Kind::Enumerate)),
            Err(Error::GuardConflict {
                name: "max_language",
                value: 65,
                max: 64
            })
        );
    }

    #[test]
    fn parse_error_position() {
        let text = "seeds = [1]\n[environment]\npowerset = \"two\"\n";
        match parse_config(text, Some(Kind::Enumerate)) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 12)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config("[environment]\nbogus = 1\n", Some(Kind::Enumerate)),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn environment_forms() {
        let bad = [
            "[environment]\n",
            "[environment]\nstates = 2\n",
            "[environment]\npowerset = 2\nfile = \"e.json\"\n",
            "[environment]\nsweep_states = 2\n",
        ];
        for text in bad {
            assert!(matches!(
                parse_config(text, Some(Kind::Enumerate)),
                Err(Error::Config(_))
            ));
        }
    }

    #[test]
    fn kind_must_agree() {
        let text = "kind = \"learn\"\n[environment]\npowerset = 2\n";
        assert!(parse_config(text, Some(Kind::Learn)).is_ok());
        assert!(matches!(
            parse_config(text, Some(Kind::Utility)),
            Err(Error::Config(_))
        ));
    }
}
