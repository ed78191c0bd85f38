//! Vocabulary comparison and the exhaustive checks of the upper-bound recipe.
//!
//! Everything here works in the index space of the full-powerset language
//! `L_P`: a sub-vocabulary `v'` is a mask over `P`, and `L_v'` is the set of
//! `L_P` statements using only programs of `v'`, with `E^v'_x = E^P_x ∩ L_v'`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::utility::{full_powerset_vocabulary_with, utility_witness, UninstantiatedTask};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::learning::policy_count_formula;
use crate::set_core::{
    canonical_cmp, environment_hash, ones, Environment, Guards, Language, Program, Semantics,
    StmtSet,
};
use crate::task_algebra::{count_tasks_with, enumerate_tasks, enumerate_tasks_bounded, Task};

/// Largest powerset (in programs) a context will tabulate every
/// sub-vocabulary of.
pub const MAX_CONTEXT_PROGRAMS: usize = 16;

/// An exact probability `num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Prob {
    pub num: BigUint,
    pub den: BigUint,
}

impl Prob {
    fn cmp_exact(&self, other: &Prob) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// Shown in lowest terms.
impl std::fmt::Display for Prob {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = self.num.gcd(&self.den);
        if g.is_zero() {
            return f.write_str("0/0");
        }
        write!(f, "{}/{}", &self.num / &g, &self.den / &g)
    }
}

/// Per sub-vocabulary data.
#[derive(Clone, Debug)]
pub struct VocabInfo {
    pub mask: u64,
    /// `L_v'` as a set over `L_P`.
    pub expressible: StmtSet,
    /// `|Γ_v'|`.
    pub tasks: BigUint,
}

impl VocabInfo {
    pub fn language_size(&self) -> usize {
        self.expressible.len()
    }
}

/// A task restricted to a sub-vocabulary, in `L_P` indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub vocabulary: u64,
    pub inputs: StmtSet,
    pub outputs: StmtSet,
    pub ext: StmtSet,
    pub expressible: StmtSet,
    /// Whether the restriction is a child of the original task in the
    /// strict sense (strictly fewer inputs).
    pub literal_child: bool,
}

/// Precomputed sub-vocabulary tables for one full-powerset language.
pub struct PowersetContext {
    lang: Arc<Language>,
    infos: Vec<VocabInfo>,
    // rank[mask][i]: position of P(statement i generalises in Γ_v') among all
    // such probabilities, equal values sharing a rank; u32::MAX if i ∉ L_v'
    rank: Vec<Vec<u32>>,
    // slot[mask][i]: index into probs
    slot: Vec<Vec<u32>>,
    probs: Vec<Prob>,
}

impl PowersetContext {
    pub fn for_states(state_count: usize, guards: Guards, semantics: Semantics) -> Result<Self> {
        let env = full_powerset_vocabulary_with(state_count, guards)?.with_semantics(semantics);
        PowersetContext::new(Language::build(env)?, Exec::default())
    }

    pub fn new(lang: Arc<Language>, exec: Exec) -> Result<Self> {
        let env = lang.env();
        let programs = env.vocabulary().len();
        if programs != 1 << env.state_count() {
            return Err(Error::InvalidVocabulary(
                "not a full-powerset language".into(),
            ));
        }
        if programs > MAX_CONTEXT_PROGRAMS {
            return Err(Error::TaskSpaceTooLarge(format!(
                "{programs} programs is too many to tabulate every sub-vocabulary"
            )));
        }
        let masks: Vec<u64> = (0..1u64 << programs).collect();
        let infos: Vec<VocabInfo> = exec.map(&masks, |&mask| {
            let expressible = expressible(&lang, mask);
            let sub = Environment::new(env.state_count(), programs_of(env, mask))
                .expect("sub-vocabulary of a valid environment")
                .with_guards(*env.guards())
                .with_semantics(*env.semantics());
            let sub = Language::build(sub).expect("sub-language fits the guard");
            debug_assert_eq!(sub.len(), expressible.len());
            VocabInfo {
                mask,
                expressible,
                tasks: count_tasks_with(&sub, Exec::Sequential),
            }
        });
        let allow_empty = env.semantics().allow_empty_outputs;
        let mut probs = Vec::new();
        let mut owner = Vec::new();
        for info in &infos {
            let expr = info.expressible;
            for i in expr.iter() {
                let e = (lang.up(i) & expr).len();
                let c = expr
                    .iter()
                    .filter(|&j| (lang.up(i) & lang.up(j) & expr).is_empty())
                    .count();
                let num = policy_count_formula(expr.len(), e, c, allow_empty);
                probs.push(Prob {
                    num: BigUint::from(num),
                    den: info.tasks.clone(),
                });
                owner.push((info.mask as usize, i));
            }
        }
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&a, &b| probs[a].cmp_exact(&probs[b]));
        let mut rank = vec![vec![u32::MAX; lang.len()]; infos.len()];
        let mut slot = vec![vec![u32::MAX; lang.len()]; infos.len()];
        for (k, &(m, i)) in owner.iter().enumerate() {
            slot[m][i] = k as u32;
        }
        let mut r = 0u32;
        for (k, &p) in order.iter().enumerate() {
            if k > 0 && probs[order[k - 1]].cmp_exact(&probs[p]) == Ordering::Less {
                r += 1;
            }
            let (m, i) = owner[p];
            rank[m][i] = r;
        }
        Ok(PowersetContext {
            lang,
            infos,
            rank,
            slot,
            probs,
        })
    }

    pub fn language(&self) -> &Arc<Language> {
        &self.lang
    }

    pub fn info(&self, mask: u64) -> &VocabInfo {
        &self.infos[mask as usize]
    }

    /// Every sub-vocabulary mask, in canonical order (size, then lexicographic).
    pub fn all_vocabularies(&self) -> Vec<u64> {
        let mut v: Vec<u64> = (0..self.infos.len() as u64).collect();
        v.sort_by(|&a, &b| canonical_cmp(a, b));
        v
    }

    /// Mask of the whole powerset.
    pub fn full_vocabulary(&self) -> u64 {
        self.infos.len() as u64 - 1
    }

    pub fn describe_vocabulary(&self, mask: u64) -> String {
        let list: Vec<String> = programs_of(self.lang.env(), mask)
            .iter()
            .map(|p| p.to_string())
            .collect();
        format!("[{}]", list.join(","))
    }

    /// An `L_P` statement written with its programs, e.g. `[{0},{0,1}]`.
    pub fn describe_statement(&self, i: usize) -> String {
        describe_statement(&self.lang, i)
    }

    /// Restricts `rho` to the sub-vocabulary `mask`.
    pub fn restrict(&self, rho: &Task, mask: u64) -> Result<Restriction> {
        let expr = self.infos[mask as usize].expressible;
        let inputs = rho.input_set() & expr;
        if inputs.is_empty() {
            return Err(Error::EmptyInstantiation);
        }
        if inputs == expr {
            return Err(Error::InputsNotStrictSubset);
        }
        let ext = self.lang.extension_of(inputs) & expr;
        let outputs = rho.output_set() & ext;
        if outputs == ext {
            return Err(Error::OutputsNotStrict);
        }
        if outputs.is_empty() && !self.lang.env().semantics().allow_empty_outputs {
            return Err(Error::EmptyOutputs);
        }
        Ok(Restriction {
            vocabulary: mask,
            inputs,
            outputs,
            ext,
            expressible: expr,
            literal_child: inputs.is_strict_subset(rho.input_set()),
        })
    }

    /// Correct policies of a restriction, as `L_P` indices.
    pub fn policies(&self, r: &Restriction) -> StmtSet {
        let mut m = 0u64;
        for i in r.expressible.iter() {
            if self.lang.up(i) & r.ext == r.outputs {
                m |= 1 << i;
            }
        }
        StmtSet(m)
    }

    /// `|E_x|` inside the restriction's language.
    pub fn weakness(&self, r: &Restriction, i: usize) -> usize {
        (self.lang.up(i) & r.expressible).len()
    }

    /// Utility and its weakest witness (canonically smallest on ties).
    pub fn utility(&self, r: &Restriction) -> Option<(u64, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in self.policies(r).iter() {
            let w = self.weakness(r, i);
            if best.is_none_or(|(bw, _)| w > bw) {
                best = Some((w, i));
            }
        }
        best.map(|(w, i)| ((w - r.outputs.len()) as u64, i))
    }

    /// Probability that `L_P` statement `i` generalises in `Γ_v'`.
    pub fn probability(&self, mask: u64, i: usize) -> Option<&Prob> {
        let k = self.slot[mask as usize][i];
        (k != u32::MAX).then(|| &self.probs[k as usize])
    }

    /// Recipe check for one uninstantiated task: pick the utility-maximal
    /// vocabulary, then its weakest correct policy, and ask whether that pair
    /// has the highest generalisation probability among all candidates.
    pub fn upper_bound_outcome(&self, rho: &Task, candidates: &[u64]) -> Outcome {
        self.recipe(rho, candidates).outcome
    }

    /// As [`PowersetContext::upper_bound_outcome`], keeping the selected and
    /// the best pair.
    pub fn recipe(&self, rho: &Task, candidates: &[u64]) -> Recipe {
        let mut selected: Option<(u64, u64, usize)> = None; // (utility, mask, statement)
        let mut best: Option<(u32, u64, usize)> = None; // (rank, mask, statement)
        for &mask in candidates {
            let Ok(r) = self.restrict(rho, mask) else {
                continue;
            };
            let policies = self.policies(&r);
            if policies.is_empty() {
                continue;
            }
            let ranks = &self.rank[mask as usize];
            let mut weakest: Option<(usize, usize)> = None;
            for i in policies.iter() {
                if best.is_none_or(|(b, _, _)| ranks[i] > b) {
                    best = Some((ranks[i], mask, i));
                }
                let w = self.weakness(&r, i);
                if weakest.is_none_or(|(bw, _)| w > bw) {
                    weakest = Some((w, i));
                }
            }
            let (w, i) = weakest.expect("non-empty policy set");
            let u = (w - r.outputs.len()) as u64;
            if selected.is_none_or(|(bu, _, _)| u > bu) {
                selected = Some((u, mask, i));
            }
        }
        let outcome = match (selected, best) {
            (Some((_, m, i)), Some((b, _, _))) if self.rank[m as usize][i] == b => {
                Outcome::Attained
            }
            (Some(_), Some(_)) => Outcome::NotAttained,
            _ => Outcome::NoCandidate,
        };
        Recipe {
            outcome,
            selected,
            best: best.map(|(_, m, i)| (m, i)),
        }
    }

    /// Full report for the recipe check.
    pub fn verify_upper_bound(
        &self,
        rho: &Task,
        candidates: &[u64],
        seeds: &[u64],
        universe: &str,
    ) -> UpperBoundReport {
        let mut rows = Vec::with_capacity(candidates.len());
        let mut pairs: Vec<(usize, usize, u64)> = Vec::new(); // (row, statement, mask)
        let mut selected: Option<(usize, u64, usize)> = None; // (row, utility, statement)
        for (k, &mask) in candidates.iter().enumerate() {
            let info = &self.infos[mask as usize];
            let mut row = CandidateRow {
                candidate: k,
                vocabulary: self.describe_vocabulary(mask),
                language_size: info.language_size(),
                tasks: info.tasks.to_string(),
                utility: None,
                witness: None,
                literal_child: None,
                error: None,
                policies: Vec::new(),
            };
            match self.restrict(rho, mask) {
                Err(e) => row.error = Some(e.to_string()),
                Ok(r) => {
                    row.literal_child = Some(r.literal_child);
                    let policies = self.policies(&r);
                    for i in policies.iter() {
                        let p = self.probability(mask, i).expect("expressible policy");
                        row.policies.push(PolicyRow {
                            policy: self.describe_statement(i),
                            weakness: self.weakness(&r, i),
                            probability: p.to_string(),
                        });
                        pairs.push((k, i, mask));
                    }
                    match self.utility(&r) {
                        None => row.error = Some(Error::NoCorrectPolicy.to_string()),
                        Some((u, w)) => {
                            row.utility = Some(u);
                            row.witness = Some(self.describe_statement(w));
                            if selected.is_none_or(|(_, bu, _)| u > bu) {
                                selected = Some((k, u, w));
                            }
                        }
                    }
                }
            }
            rows.push(row);
        }
        pairs.sort_by(|a, b| {
            let pa = &self.rank[a.2 as usize][a.1];
            let pb = &self.rank[b.2 as usize][b.1];
            pb.cmp(pa).then(a.0.cmp(&b.0)).then(canonical_cmp(
                self.lang.statement(a.1).bits(),
                self.lang.statement(b.1).bits(),
            ))
        });
        let ranking: Vec<RankEntry> = pairs
            .iter()
            .map(|&(k, i, mask)| RankEntry {
                candidate: k,
                policy: self.describe_statement(i),
                probability: self.probability(mask, i).expect("ranked").to_string(),
            })
            .collect();
        let best = pairs
            .first()
            .map(|&(_, i, mask)| (self.rank[mask as usize][i], mask, i));
        let (outcome, selection) = match selected {
            None => (Outcome::NoCandidate, None),
            Some((k, u, w)) => {
                let mask = candidates[k];
                let r = self.rank[mask as usize][w];
                let attained = best.is_some_and(|(b, _, _)| b == r);
                let sel = Selection {
                    candidate: k,
                    vocabulary: self.describe_vocabulary(mask),
                    policy: self.describe_statement(w),
                    utility: u,
                    probability: self.probability(mask, w).expect("selected").to_string(),
                };
                let outcome = if attained {
                    Outcome::Attained
                } else {
                    Outcome::NotAttained
                };
                (outcome, Some(sel))
            }
        };
        UpperBoundReport {
            meta: self.meta(rho, seeds, universe, candidates.len()),
            outcome,
            selected: selection,
            best_probability: best
                .map(|(_, mask, i)| self.probability(mask, i).expect("best").to_string()),
            candidates: rows,
            ranking,
        }
    }

    /// Compares `ε(λ_ρ(P))` with `ε(λ_ρ(v'))` for every sub-vocabulary.
    pub fn utility_maximal_at_p(&self, rho: &Task) -> MaximalityCheck {
        let full = self.full_vocabulary();
        let at_p = self
            .restrict(rho, full)
            .ok()
            .and_then(|r| self.utility(&r))
            .map(|(u, _)| u);
        let mut check = MaximalityCheck {
            holds: true,
            utility_at_p: at_p,
            checked: 0,
            defined: 0,
            exceeding: 0,
            undefined_at_p: 0,
            counterexample: None,
        };
        for mask in self.all_vocabularies() {
            check.checked += 1;
            let Some((u, _)) = self.restrict(rho, mask).ok().and_then(|r| self.utility(&r)) else {
                continue;
            };
            check.defined += 1;
            let violated = match at_p {
                None => {
                    check.undefined_at_p += 1;
                    true
                }
                Some(p) if u > p => {
                    check.exceeding += 1;
                    true
                }
                Some(_) => false,
            };
            if violated {
                check.holds = false;
                if check.counterexample.is_none() {
                    check.counterexample = Some(Counterexample {
                        vocabulary: self.describe_vocabulary(mask),
                        utility: u,
                        utility_at_p: at_p,
                    });
                }
            }
        }
        check
    }

    fn meta(&self, rho: &Task, seeds: &[u64], universe: &str, candidates: usize) -> ReportMeta {
        let env = self.lang.env();
        ReportMeta {
            version: crate::VERSION.to_string(),
            env_hash: environment_hash(env),
            states: env.state_count(),
            guards: *env.guards(),
            semantics: *env.semantics(),
            seeds: seeds.to_vec(),
            task: describe_task(&self.lang, rho),
            candidate_universe: universe.to_string(),
            candidates,
            scope: "exhaustive over the listed candidate vocabularies of a finite state space"
                .to_string(),
        }
    }

    /// Runs the recipe check over many tasks.
    pub fn sweep_upper_bound(&self, rhos: &[Task], candidates: &[u64], exec: Exec) -> SweepSummary {
        let outcomes = exec.map(rhos, |t| self.upper_bound_outcome(t, candidates));
        let mut s = SweepSummary::default();
        for (t, o) in rhos.iter().zip(outcomes) {
            s.checked += 1;
            match o {
                Outcome::Attained => s.passed += 1,
                Outcome::NoCandidate => s.skipped += 1,
                Outcome::NotAttained => {
                    s.failed += 1;
                    if s.first_failure.is_none() {
                        s.first_failure = Some(t.clone());
                    }
                }
            }
        }
        s
    }

    /// Walks every one-program extension `v' ⊂ v' ∪ {p}` where both
    /// restrictions of `rho` are defined and keep the same inputs, and
    /// counts the steps where the weakest correct policy gets stronger.
    pub fn monotonicity(&self, rho: &Task) -> Monotonicity {
        let mut m = Monotonicity::default();
        let programs = self.lang.env().vocabulary().len();
        for small in 0..self.infos.len() as u64 {
            let Ok(rs) = self.restrict(rho, small) else {
                continue;
            };
            let ps = self.policies(&rs);
            let Some(ws) = ps.iter().map(|i| self.weakness(&rs, i)).max() else {
                continue;
            };
            for p in 0..programs {
                let large = small | 1 << p;
                if large == small {
                    continue;
                }
                let Ok(rl) = self.restrict(rho, large) else {
                    continue;
                };
                if rl.inputs != rs.inputs {
                    continue;
                }
                let pl = self.policies(&rl);
                let wl = pl.iter().map(|i| self.weakness(&rl, i)).max();
                m.steps += 1;
                let survived = ps.is_subset(pl);
                m.surviving += u64::from(survived);
                if wl.is_none_or(|w| w < ws) {
                    m.decreases += 1;
                    m.decreases_surviving += u64::from(survived);
                }
            }
        }
        m
    }

    /// Runs the utility-maximality check over many tasks.
    pub fn sweep_utility_maximal(&self, rhos: &[Task], exec: Exec) -> SweepSummary {
        let checks = exec.map(rhos, |t| self.utility_maximal_at_p(t));
        let mut s = SweepSummary::default();
        for (t, c) in rhos.iter().zip(checks) {
            s.checked += 1;
            if c.holds {
                s.passed += 1;
            } else {
                s.failed += 1;
                s.exceeding += u64::from(c.exceeding > 0);
                s.undefined_at_p += u64::from(c.undefined_at_p > 0);
                if s.first_failure.is_none() {
                    s.first_failure = Some(t.clone());
                }
            }
        }
        s
    }
}

fn programs_of(env: &Environment, mask: u64) -> Vec<Program> {
    ones(mask).map(|i| env.vocabulary()[i]).collect()
}

fn expressible(lang: &Language, mask: u64) -> StmtSet {
    let mut m = 0u64;
    for (i, l) in lang.statements().iter().enumerate() {
        if l.bits() & !mask == 0 {
            m |= 1 << i;
        }
    }
    StmtSet(m)
}

fn describe_statement(lang: &Language, i: usize) -> String {
    let env = lang.env();
    let programs: Vec<String> = lang
        .statement(i)
        .indices()
        .map(|p| env.vocabulary()[p].to_string())
        .collect();
    format!("[{}]", programs.join(","))
}

fn describe_task(lang: &Language, t: &Task) -> String {
    let list = |s: StmtSet| {
        let v: Vec<String> = s.iter().map(|i| describe_statement(lang, i)).collect();
        format!("[{}]", v.join(","))
    };
    format!("I={};O={}", list(t.input_set()), list(t.output_set()))
}

/// Compact result of the recipe check; statements index `L_P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub outcome: Outcome,
    /// `(utility, vocabulary mask, policy)` chosen by the recipe.
    pub selected: Option<(u64, u64, usize)>,
    /// `(vocabulary mask, policy)` with the highest probability.
    pub best: Option<(u64, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Attained,
    NotAttained,
    NoCandidate,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Attained => "attained",
            Outcome::NotAttained => "not-attained",
            Outcome::NoCandidate => "no-candidate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportMeta {
    pub version: String,
    pub env_hash: String,
    pub states: usize,
    pub guards: Guards,
    pub semantics: Semantics,
    pub seeds: Vec<u64>,
    pub task: String,
    pub candidate_universe: String,
    pub candidates: usize,
    pub scope: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolicyRow {
    pub policy: String,
    pub weakness: usize,
    pub probability: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateRow {
    pub candidate: usize,
    pub vocabulary: String,
    pub language_size: usize,
    pub tasks: String,
    pub utility: Option<u64>,
    pub witness: Option<String>,
    pub literal_child: Option<bool>,
    pub error: Option<String>,
    pub policies: Vec<PolicyRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub candidate: usize,
    pub vocabulary: String,
    pub policy: String,
    pub utility: u64,
    pub probability: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    pub candidate: usize,
    pub policy: String,
    pub probability: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperBoundReport {
    pub meta: ReportMeta,
    pub outcome: Outcome,
    pub selected: Option<Selection>,
    pub best_probability: Option<String>,
    pub candidates: Vec<CandidateRow>,
    pub ranking: Vec<RankEntry>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

/// Left-aligned columns separated by two spaces.
pub(crate) fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

impl UpperBoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Human-readable rendering of exactly the JSON content.
    pub fn to_text(&self) -> String {
        let m = &self.meta;
        let mut out = aligned(&[
            vec!["version".into(), m.version.clone()],
            vec!["env_hash".into(), m.env_hash.clone()],
            vec!["states".into(), m.states.to_string()],
            vec!["guards".into(), format!("{:?}", m.guards)],
            vec!["semantics".into(), format!("{:?}", m.semantics)],
            vec!["seeds".into(), format!("{:?}", m.seeds)],
            vec!["task".into(), m.task.clone()],
            vec!["candidate_universe".into(), m.candidate_universe.clone()],
            vec!["candidates".into(), m.candidates.to_string()],
            vec!["scope".into(), m.scope.clone()],
            vec!["outcome".into(), self.outcome.to_string()],
            vec!["best_probability".into(), opt(&self.best_probability)],
        ]);
        if let Some(s) = &self.selected {
            out.push_str(&format!(
                "selected  candidate {} vocabulary {} policy {} utility {} probability {}\n",
                s.candidate, s.vocabulary, s.policy, s.utility, s.probability
            ));
        } else {
            out.push_str("selected  -\n");
        }
        out.push_str("\ncandidates\n");
        let mut rows = vec![vec![
            "#".into(),
            "vocabulary".into(),
            "|L|".into(),
            "|tasks|".into(),
            "utility".into(),
            "witness".into(),
            "child".into(),
            "error".into(),
            "policies".into(),
        ]];
        for r in &self.candidates {
            let policies: Vec<String> = r
                .policies
                .iter()
                .map(|p| format!("{}:{}:{}", p.policy, p.weakness, p.probability))
                .collect();
            rows.push(vec![
                r.candidate.to_string(),
                r.vocabulary.clone(),
                r.language_size.to_string(),
                r.tasks.clone(),
                opt(&r.utility),
                opt(&r.witness),
                opt(&r.literal_child),
                opt(&r.error),
                policies.join(" "),
            ]);
        }
        out.push_str(&aligned(&rows));
        out.push_str("\nranking\n");
        let mut rows = vec![vec![
            "candidate".into(),
            "policy".into(),
            "probability".into(),
        ]];
        for e in &self.ranking {
            rows.push(vec![
                e.candidate.to_string(),
                e.policy.clone(),
                e.probability.clone(),
            ]);
        }
        out.push_str(&aligned(&rows));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub vocabulary: String,
    pub utility: u64,
    pub utility_at_p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityCheck {
    pub holds: bool,
    pub utility_at_p: Option<u64>,
    /// Sub-vocabularies visited (all of them).
    pub checked: usize,
    /// Sub-vocabularies where the restricted task has a utility.
    pub defined: usize,
    /// Sub-vocabularies with utility strictly above the one at `P`.
    pub exceeding: usize,
    /// Sub-vocabularies with a utility while the one at `P` is undefined.
    pub undefined_at_p: usize,
    pub counterexample: Option<Counterexample>,
}

/// Counts from [`PowersetContext::monotonicity`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Monotonicity {
    pub steps: u64,
    /// Steps where every correct policy of the smaller vocabulary stays correct.
    pub surviving: u64,
    /// Steps where the largest correct-policy weakness dropped (or no
    /// correct policy was left).
    pub decreases: u64,
    pub decreases_surviving: u64,
}

impl std::ops::AddAssign for Monotonicity {
    fn add_assign(&mut self, o: Self) {
        self.steps += o.steps;
        self.surviving += o.surviving;
        self.decreases += o.decreases;
        self.decreases_surviving += o.decreases_surviving;
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Tasks with no candidate admitting a correct policy.
    pub skipped: u64,
    /// Failures with a strictly larger utility somewhere below `P`.
    pub exceeding: u64,
    /// Failures where `P` itself has no correct policy.
    pub undefined_at_p: u64,
    pub first_failure: Option<Task>,
}

/// One row of a vocabulary comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UtilityRow {
    pub vocabulary: String,
    pub language_size: Option<usize>,
    pub utility: Option<u64>,
    pub witness: Option<String>,
    /// `|E_witness|` and `|O|`, so that `utility = witness_weakness - correct_outputs`.
    pub witness_weakness: Option<usize>,
    pub correct_outputs: Option<usize>,
    pub literal_child: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UtilityReport {
    pub rows: Vec<UtilityRow>,
}

/// Instantiates `rho` in each candidate and measures utility. Failures are
/// recorded per row.
pub fn compare_vocabularies(
    rho: &UninstantiatedTask,
    candidates: &[Vec<Program>],
) -> UtilityReport {
    compare_vocabularies_with(rho, candidates, Exec::default())
}

pub fn compare_vocabularies_with(
    rho: &UninstantiatedTask,
    candidates: &[Vec<Program>],
    exec: Exec,
) -> UtilityReport {
    let rows = exec.map(candidates, |v| {
        let names: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        let mut row = UtilityRow {
            vocabulary: format!("[{}]", names.join(",")),
            language_size: None,
            utility: None,
            witness: None,
            witness_weakness: None,
            correct_outputs: None,
            literal_child: None,
            error: None,
        };
        match rho.instantiate(v) {
            Err(e) => row.error = Some(e.to_string()),
            Ok(task) => {
                let lang = task.language();
                row.language_size = Some(lang.len());
                row.correct_outputs = Some(task.output_set().len());
                row.literal_child = Some(task.input_set().len() < rho.base().input_set().len());
                match utility_witness(&task) {
                    Err(e) => row.error = Some(e.to_string()),
                    Ok((u, w)) => {
                        let wi = lang.index_of(w).expect("witness is a statement");
                        row.utility = Some(u);
                        row.witness = Some(describe_statement(lang, wi));
                        row.witness_weakness = Some(lang.ext_size(wi));
                    }
                }
            }
        }
        row
    });
    UtilityReport { rows }
}

/// Recipe check for one uninstantiated task against explicit candidates.
pub fn verify_upper_bound(
    rho: &UninstantiatedTask,
    candidates: &[Vec<Program>],
) -> Result<UpperBoundReport> {
    let ctx = PowersetContext::new(Arc::clone(rho.language()), Exec::default())?;
    let masks = candidates
        .iter()
        .map(|v| rho.vocabulary_mask(v))
        .collect::<Result<Vec<u64>>>()?;
    Ok(ctx.verify_upper_bound(rho.base(), &masks, &[], "explicit candidate list"))
}

/// Whether no sub-vocabulary beats the full powerset on utility.
pub fn verify_utility_maximal_at_p(rho: &UninstantiatedTask) -> Result<MaximalityCheck> {
    let ctx = PowersetContext::new(Arc::clone(rho.language()), Exec::default())?;
    Ok(ctx.utility_maximal_at_p(rho.base()))
}

/// Tasks of `lang` with at most `max_inputs` inputs and `max_outputs`
/// correct outputs, in canonical task order.
pub fn bounded_family(lang: &Arc<Language>, max_inputs: usize, max_outputs: usize) -> Vec<Task> {
    enumerate_tasks_bounded(lang, max_inputs, max_outputs).collect()
}

/// Every task of a language whose task space is small enough to list.
pub fn all_tasks(lang: &Arc<Language>) -> Result<Vec<Task>> {
    let n = count_tasks_with(lang, Exec::default());
    if n > BigUint::from(50_000_000u64) || n.is_zero() && lang.len() > 1 {
        return Err(Error::TaskSpaceTooLarge(format!("{n} tasks")));
    }
    Ok(enumerate_tasks(lang).collect())
}
