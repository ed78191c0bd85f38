use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set_core::{json_error, Environment, Language, Statement};

/// A binary relation on statements used as a stand-in objective when picking
/// a policy. `less(a, b)` reads "a < b"; learning maximises it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proxy {
    /// `a < b` iff `|E_a| < |E_b|`.
    Weakness,
    /// `a < b` iff `a` has more programs than `b`.
    Simplicity,
    /// A fixed pseudo-random relation.
    Random { seed: u64 },
    /// An explicit relation: the listed pairs are exactly the true ones.
    Table {
        source: String,
        pairs: BTreeSet<(Statement, Statement)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Proxy {
    /// Parses `weakness | simplicity | random:<seed> | table:<path>`.
    pub fn parse(spec: &str) -> Result<Proxy> {
        match spec {
            "weakness" => return Ok(Proxy::Weakness),
            "simplicity" => return Ok(Proxy::Simplicity),
            _ => {}
        }
        if let Some(seed) = spec.strip_prefix("random:") {
            return seed
                .parse()
                .map(|seed| Proxy::Random { seed })
                .map_err(|_| Error::UnknownProxy(spec.to_string()));
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return Proxy::load_table(Path::new(path));
        }
        Err(Error::UnknownProxy(spec.to_string()))
    }

    /// Checks the name without touching the filesystem.
    pub fn validate_name(spec: &str) -> Result<()> {
        let ok = matches!(spec, "weakness" | "simplicity")
            || spec
                .strip_prefix("random:")
                .is_some_and(|s| s.parse::<u64>().is_ok())
            || spec.strip_prefix("table:").is_some_and(|p| !p.is_empty());
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownProxy(spec.to_string()))
        }
    }

    pub fn load_table(path: &Path) -> Result<Proxy> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Proxy::parse_table(&text, &path.display().to_string())
    }

    /// Table files: `{"pairs": [[[0], [0, 2]], ...]}`, each pair `(a, b)`
    /// meaning `a < b`.
    pub fn parse_table(text: &str, source: &str) -> Result<Proxy> {
        let file: TableFile = serde_json::from_str(text).map_err(json_error)?;
        let mut pairs = BTreeSet::new();
        for (a, b) in file.pairs {
            let a = Statement::from_indices(a).map_err(Error::Config)?;
            let b = Statement::from_indices(b).map_err(Error::Config)?;
            pairs.insert((a, b));
        }
        Ok(Proxy::Table {
            source: source.to_string(),
            pairs,
        })
    }

    pub fn name(&self) -> String {
        match self {
            Proxy::Weakness => "weakness".into(),
            Proxy::Simplicity => "simplicity".into(),
            Proxy::Random { seed } => format!("random:{seed}"),
            Proxy::Table { source, .. } => format!("table:{source}"),
        }
    }

    /// `a < b` under this proxy, for statements of `lang`.
    pub fn less(&self, lang: &Language, a: Statement, b: Statement) -> Result<bool> {
        Ok(match self {
            Proxy::Weakness => lang.ext_size(lang.index_of(a)?) < lang.ext_size(lang.index_of(b)?),
            Proxy::Simplicity => simplicity_cmp(a, b),
            Proxy::Random { seed } => random_bit(*seed, a, b),
            Proxy::Table { pairs, .. } => pairs.contains(&(a, b)),
        })
    }

    /// The relation over `lang` as rows of bits: bit `j` of row `i` is
    /// `statement(i) < statement(j)`.
    pub fn matrix(&self, lang: &Language) -> Vec<u64> {
        let n = lang.len();
        (0..n)
            .map(|i| {
                let a = lang.statement(i);
                (0..n).fold(0u64, |row, j| {
                    let b = lang.statement(j);
                    let bit = match self {
                        Proxy::Weakness => lang.ext_size(i) < lang.ext_size(j),
                        Proxy::Simplicity => simplicity_cmp(a, b),
                        Proxy::Random { seed } => random_bit(*seed, a, b),
                        Proxy::Table { pairs, .. } => pairs.contains(&(a, b)),
                    };
                    row | u64::from(bit) << j
                })
            })
            .collect()
    }
}

impl fmt::Display for Proxy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn random_bit(seed: u64, a: Statement, b: Statement) -> bool {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&a.bits().to_le_bytes());
    key[16..24].copy_from_slice(&b.bits().to_le_bytes());
    ChaCha8Rng::from_seed(key).gen()
}

/// `l1 <_w l2` iff `|E_l1| < |E_l2|`, using inclusion-exclusion counts.
pub fn weakness_cmp(env: &Environment, l1: Statement, l2: Statement) -> Result<bool> {
    Ok(env.extension_size(l1)? < env.extension_size(l2)?)
}

/// Cardinality baseline: `l1 < l2` iff `l1` uses more programs, so the
/// maximum is the shortest statement.
pub fn simplicity_cmp(l1: Statement, l2: Statement) -> bool {
    l1.len() > l2.len()
}

pub fn random_proxy(seed: u64) -> Proxy {
    Proxy::Random { seed }
}
