//! Probability that a statement generalises to a uniformly drawn task.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::set_core::{submasks, Language, Statement, StmtSet};
use crate::task_algebra::{count_tasks_with, TaskSpace};

/// Most `task × statement` checks [`GeneralizationTable::exhaustive`] will run.
pub const MAX_EXHAUSTIVE_CHECKS: u128 = 1 << 34;

/// Per-statement counts of tasks the statement is a correct policy for,
/// over a shared denominator `|Γ_v|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizationTable {
    statements: Vec<Statement>,
    numerators: Vec<BigUint>,
    denominator: BigUint,
}

fn pow2(k: usize) -> u128 {
    1u128 << k
}

/// Number of tasks having the statement at `index` as a correct policy.
///
/// For fixed `I` the only candidate is `O = E_I ∩ E_l`, which is valid unless
/// `E_I ⊆ E_l`, i.e. unless `I ⊆ E_l` (and, without empty outputs, unless
/// `E_I ∩ E_l = ∅`).
pub fn correct_policy_count(lang: &Language, index: usize) -> u128 {
    let allow_empty = lang.env().semantics().allow_empty_outputs;
    let incompatible = if allow_empty {
        0
    } else {
        lang.incompatible(index).len()
    };
    policy_count_formula(lang.len(), lang.ext_size(index), incompatible, allow_empty)
}

/// [`correct_policy_count`] from the raw sizes: language size `n`, extension
/// size `e`, and the number of statements sharing no completion with the
/// policy (only used without empty outputs).
pub fn policy_count_formula(n: usize, e: usize, incompatible: usize, allow_empty: bool) -> u128 {
    let inputs = pow2(n) - 2;
    let inside = pow2(e) - 1 - u128::from(e == n);
    let mut count = inputs - inside;
    if !allow_empty {
        count -= pow2(incompatible) - 1;
    }
    count
}

impl GeneralizationTable {
    /// Closed-form numerators plus the class-counted denominator.
    pub fn counted(lang: &Language) -> Self {
        GeneralizationTable::counted_with(lang, Exec::default())
    }

    pub fn counted_with(lang: &Language, exec: Exec) -> Self {
        let numerators = (0..lang.len())
            .map(|i| BigUint::from(correct_policy_count(lang, i)))
            .collect();
        GeneralizationTable {
            statements: lang.statements().to_vec(),
            numerators,
            denominator: count_tasks_with(lang, exec),
        }
    }

    /// Scans every task of `Γ_v` and tests every statement against it.
    pub fn exhaustive(lang: &Language, exec: Exec) -> Result<Self> {
        let n = lang.len();
        if n >= 40 || pow2(n) * pow2(n) * n as u128 > MAX_EXHAUSTIVE_CHECKS {
            return Err(Error::TaskSpaceTooLarge(format!(
                "exhaustive scan of a {n}-statement language"
            )));
        }
        let allow_empty = lang.env().semantics().allow_empty_outputs;
        let last = (1u64 << n) - 1;
        let (counts, total) = exec.fold_range(
            last,
            || (vec![0u64; n], 0u64),
            |(mut counts, mut total), raw| {
                let inputs = raw + 1;
                if inputs == last {
                    return (counts, total);
                }
                let ext = lang.extension_of(StmtSet(inputs));
                for o in submasks(ext.0) {
                    if o == ext.0 || (o == 0 && !allow_empty) {
                        continue;
                    }
                    total += 1;
                    for (l, c) in counts.iter_mut().enumerate() {
                        if ext.0 & lang.up(l).0 == o {
                            *c += 1;
                        }
                    }
                }
                (counts, total)
            },
            |(mut a, ta), (b, tb)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                (a, ta + tb)
            },
        );
        Ok(GeneralizationTable {
            statements: lang.statements().to_vec(),
            numerators: counts.into_iter().map(BigUint::from).collect(),
            denominator: BigUint::from(total),
        })
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    fn position(&self, l: Statement) -> Result<usize> {
        self.statements
            .binary_search(&l)
            .map_err(|_| Error::NotAStatement(l))
    }

    pub fn numerator(&self, l: Statement) -> Result<&BigUint> {
        Ok(&self.numerators[self.position(l)?])
    }

    pub fn numerators(&self) -> &[BigUint] {
        &self.numerators
    }

    pub fn probability(&self, l: Statement) -> Result<BigRational> {
        let num = self.numerator(l)?.clone();
        if self.denominator.is_zero() {
            return Ok(BigRational::zero());
        }
        Ok(BigRational::new(
            num.into(),
            self.denominator.clone().into(),
        ))
    }

    /// `l1 <_g l2` by index; exact, since the denominator is shared.
    pub fn less_index(&self, i: usize, j: usize) -> bool {
        self.numerators[i] < self.numerators[j]
    }

    pub fn less(&self, l1: Statement, l2: Statement) -> Result<bool> {
        Ok(self.less_index(self.position(l1)?, self.position(l2)?))
    }

    /// CSV with header `statement,numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statement,numerator,denominator\n");
        for (s, n) in self.statements.iter().zip(&self.numerators) {
            out.push_str(&format!("\"{s}\",{n},{}\n", self.denominator));
        }
        out
    }
}

/// Exact probability that `l` is a correct policy for a uniform task.
pub fn generalization_probability(lang: &Language, l: Statement) -> Result<BigRational> {
    let i = lang.index_of(l)?;
    let num = BigUint::from(correct_policy_count(lang, i));
    let den = count_tasks_with(lang, Exec::default());
    if den.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(num.into(), den.into()))
}

/// `l1 <_g l2`.
pub fn gen_cmp(lang: &Language, l1: Statement, l2: Statement) -> Result<bool> {
    let a = lang.index_of(l1)?;
    let b = lang.index_of(l2)?;
    Ok(correct_policy_count(lang, a) < correct_policy_count(lang, b))
}

/// Monte Carlo estimate of a generalisation probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub successes: u64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn p_hat(&self) -> f64 {
        self.successes as f64 / self.samples as f64
    }

    /// Binomial standard error of [`McEstimate::p_hat`].
    pub fn std_error(&self) -> f64 {
        let p = self.p_hat();
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Samples `samples` tasks and counts how often `l` is a correct policy.
pub fn generalization_probability_mc(
    space: &TaskSpace,
    l: Statement,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    let lang: &Arc<Language> = space.language();
    let idx = lang.index_of(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0;
    for _ in 0..samples {
        let t = space.sample_with(&mut rng)?;
        if t.outputs_ext_set() & lang.up(idx) == t.output_set() {
            successes += 1;
        }
    }
    Ok(McEstimate {
        successes,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_core::Environment;

    fn env2() -> Arc<Language> {
        Language::build(Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]]).unwrap())
            .unwrap()
    }

    fn s(ix: &[usize]) -> Statement {
        Statement::from_indices(ix.iter().copied()).unwrap()
    }

    #[test]
    fn env2_counts_match_scan() {
        let l = env2();
        let counted = GeneralizationTable::counted(&l);
        let scanned = GeneralizationTable::exhaustive(&l, Exec::Sequential).unwrap();
        assert_eq!(counted, scanned);
        // frozen from the exhaustive scan
        let nums: Vec<u64> = counted
            .numerators()
            .iter()
            .map(|n| n.try_into().unwrap())
            .collect();
        assert_eq!(nums, [0, 59, 59, 55, 61, 61]);
        assert_eq!(counted.denominator(), &BigUint::from(2330u32));
    }

    #[test]
    fn probability_examples() {
        let l = env2();
        assert!(generalization_probability(&l, s(&[])).unwrap().is_zero());
        let p0 = generalization_probability(&l, s(&[0])).unwrap();
        assert_eq!(p0, BigRational::new(59.into(), 2330.into()));
        assert!(gen_cmp(&l, s(&[]), s(&[0])).unwrap());
        assert!(!gen_cmp(&l, s(&[0]), s(&[0])).unwrap());
        assert!(!gen_cmp(&l, s(&[0]), s(&[])).unwrap());
    }

    #[test]
    fn csv_export() {
        let t = GeneralizationTable::counted(&env2());
        let csv = t.to_csv();
        assert!(csv.starts_with("statement,numerator,denominator\n\"[]\",0,2330\n"));
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn monte_carlo_tracks_exact() {
        let l = env2();
        let space = TaskSpace::new(&l).unwrap();
        let est = generalization_probability_mc(&space, s(&[2]), 20_000, 5).unwrap();
        let exact = 55.0 / 2330.0;
        assert!((est.p_hat() - exact).abs() <= 3.0 * est.std_error().max(1e-3));
    }
}
