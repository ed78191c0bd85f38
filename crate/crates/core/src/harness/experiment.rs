//! Experiment runners, one per [`Kind`].

use std::sync::Arc;
use std::time::Instant;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{EnvironmentForm, ExperimentConfig, Kind};
use super::report::ReportRow;
use crate::bounds::{
    compare_vocabularies_with, utility_witness, PowersetContext, UninstantiatedTask,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::learning::{
    evaluate_generalization, learn_with, sample_efficiency_matrices, GeneralizationTable, Proxy,
};
use crate::set_core::{
    environment_hash, load_environment, small_environments, Environment, EnvironmentFile, Language,
    Program, StmtSet,
};
use crate::task_algebra::{count_tasks_with, enumerate_tasks, load_task, Task, TaskSpace};

/// Parent draws allowed per learning trial before giving up.
const MAX_PARENT_DRAWS: usize = 1000;

/// Rows plus any extra files (`suffix`, contents) to write beside the report.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub rows: Vec<ReportRow>,
    pub attachments: Vec<(String, String)>,
}

/// Environments named by the config, with its guards and semantics applied.
pub fn environments(config: &ExperimentConfig) -> Result<Vec<Environment>> {
    let spec = &config.environment;
    let envs = match spec.form()? {
        EnvironmentForm::File => {
            let path = config.resolve_path(spec.file.as_deref().expect("file form"));
            vec![load_environment(&path).map_err(|e| match e {
                Error::Io(m) => Error::Config(m),
                e => e,
            })?]
        }
        EnvironmentForm::Inline => {
            let file = EnvironmentFile {
                states: spec.states.expect("inline form"),
                vocabulary: spec.vocabulary.clone().expect("inline form"),
            };
            vec![file.into_environment()?.0]
        }
        EnvironmentForm::Powerset => vec![crate::bounds::full_powerset_vocabulary_with(
            spec.powerset.expect("powerset form"),
            config.guards,
        )?],
        EnvironmentForm::Sweep => {
            let states = spec.sweep_states.expect("sweep form");
            if states > config.guards.max_powerset_states {
                return Err(Error::StateSpaceTooLarge {
                    size: states,
                    limit: config.guards.max_powerset_states,
                });
            }
            small_environments(states, spec.sweep_vocabulary.expect("sweep form")).collect()
        }
    };
    Ok(envs
        .into_iter()
        .map(|e| {
            e.with_guards(config.guards)
                .with_semantics(config.semantics)
        })
        .collect())
}

struct EnvRun {
    lang: Arc<Language>,
    base: ReportRow,
}

impl EnvRun {
    fn new(config: &ExperimentConfig, env: Environment, exec: Exec) -> Result<EnvRun> {
        let lang = Language::build(env)?;
        let env = lang.env();
        let base = ReportRow {
            experiment: config.kind.name().to_string(),
            env_hash: environment_hash(env),
            states: env.state_count(),
            vocabulary: env.vocabulary().len(),
            language: lang.len(),
            task_space: count_tasks_with(&lang, exec).to_string(),
            config_hash: config.hash(),
            version: crate::VERSION.to_string(),
            ..ReportRow::default()
        };
        Ok(EnvRun { lang, base })
    }
}

fn elapsed(config: &ExperimentConfig, start: Instant) -> u64 {
    if config.output.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// Runs the configured experiment. Rows come back in a fixed order whatever
/// the execution strategy.
pub fn run_experiment(config: &ExperimentConfig, exec: Exec) -> Result<RunOutput> {
    config.validate()?;
    let envs = environments(config)?;
    let mut out = match config.kind {
        Kind::Enumerate => run_enumerate(config, envs, exec)?,
        Kind::SampleGen => run_sample(config, envs, exec)?,
        Kind::Learn => run_learn(config, envs, exec)?,
        Kind::CompareProxies => run_compare(config, envs, exec)?,
        Kind::Utility => run_utility(config, envs, exec)?,
        Kind::VerifyBound => run_verify(config, envs, exec)?,
    };
    for (i, r) in out.rows.iter_mut().enumerate() {
        r.row = i as u64;
    }
    if out.rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    Ok(out)
}

fn run_enumerate(
    config: &ExperimentConfig,
    envs: Vec<Environment>,
    exec: Exec,
) -> Result<RunOutput> {
    let mut rows = Vec::new();
    for env in envs {
        let run = EnvRun::new(config, env, exec)?;
        let total: u64 = run
            .base
            .task_space
            .parse()
            .ok()
            .filter(|&n| n <= config.enumerate.limit)
            .ok_or_else(|| {
                Error::TaskSpaceTooLarge(format!(
                    "{} tasks, enumerate.limit is {}",
                    run.base.task_space, config.enumerate.limit
                ))
            })?;
        let tasks: Vec<Task> = enumerate_tasks(&run.lang).collect();
        if tasks.len() as u64 != total {
            return Err(Error::Invariant(format!(
                "enumeration produced {} tasks, counting {total}",
                tasks.len()
            )));
        }
        let indexed: Vec<(usize, Task)> = tasks.into_iter().enumerate().collect();
        rows.extend(exec.map(&indexed, |(k, t)| {
            let start = Instant::now();
            let mut row = run.base.clone();
            row.task_id = k.to_string();
            row.task = t.encode();
            row.score = Some(t.correct_policies().len() as i64);
            match utility_witness(t) {
                Ok((u, w)) => {
                    let i = run.lang.index_of(w).expect("witness is a statement");
                    row.utility = Some(u);
                    row.policy = w.to_string();
                    row.extension_size = Some(run.lang.ext_size(i) as u64);
                }
                Err(e) => row.outcome = e.to_string(),
            }
            row.wall_ms = elapsed(config, start);
            row
        }));
    }
    Ok(RunOutput {
        rows,
        ..RunOutput::default()
    })
}

fn run_sample(config: &ExperimentConfig, envs: Vec<Environment>, exec: Exec) -> Result<RunOutput> {
    let mut rows = Vec::new();
    for env in envs {
        let run = EnvRun::new(config, env, exec)?;
        let space = TaskSpace::new_with(&run.lang, exec)?;
        let per_seed = exec.map(&config.seeds, |&seed| -> Result<Vec<ReportRow>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            for k in 0..config.sample.count {
                let start = Instant::now();
                let t = space.sample_with(&mut rng)?;
                let mut row = run.base.clone();
                row.seed = Some(seed);
                row.task_id = format!("{seed}-{k}");
                row.task = t.encode();
                row.score = Some(t.correct_policies().len() as i64);
                row.wall_ms = elapsed(config, start);
                rows.push(row);
            }
            Ok(rows)
        });
        for r in per_seed {
            rows.extend(r?);
        }
    }
    Ok(RunOutput {
        rows,
        ..RunOutput::default()
    })
}

/// Draws a parent and derives an example set from it: `k` of its inputs,
/// with the parent's correct outputs that complete them. If those fill the
/// whole extension of the kept inputs, the canonically last one is dropped
/// so the child stays a valid task.
pub fn derive_child(space: &TaskSpace, rng: &mut ChaCha8Rng, k: usize) -> Result<(Task, Task)> {
    let lang = space.language();
    for _ in 0..MAX_PARENT_DRAWS {
        let parent = space.sample_with(rng)?;
        let inputs: Vec<usize> = parent.input_set().iter().collect();
        if inputs.len() <= k {
            continue;
        }
        let mut picked: Vec<usize> = index::sample(rng, inputs.len(), k).into_vec();
        picked.sort_unstable();
        let kept = StmtSet(picked.iter().fold(0u64, |m, &p| m | 1 << inputs[p]));
        let ext = lang.extension_of(kept);
        let mut outputs = parent.output_set() & ext;
        if outputs == ext && !outputs.is_empty() {
            let last = 63 - outputs.0.leading_zeros();
            outputs = StmtSet(outputs.0 & !(1 << last));
        }
        if let Ok(child) = Task::from_sets(lang, kept, outputs) {
            if !child.is_child_of(&parent)? {
                return Err(Error::Invariant(format!(
                    "derived {child} is not a child of {parent}"
                )));
            }
            return Ok((parent, child));
        }
    }
    Err(Error::Config(format!(
        "no parent with more than {k} inputs and a valid child in {MAX_PARENT_DRAWS} draws"
    )))
}

fn run_learn(config: &ExperimentConfig, envs: Vec<Environment>, exec: Exec) -> Result<RunOutput> {
    let mut rows = Vec::new();
    for env in envs {
        let run = EnvRun::new(config, env, exec)?;
        let space = TaskSpace::new_with(&run.lang, exec)?;
        let table = GeneralizationTable::counted_with(&run.lang, exec);
        let per_seed = exec.map(&config.seeds, |&seed| -> Result<Vec<ReportRow>> {
            let proxies = config.proxies_for(seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            for trial in 0..config.learn.trials {
                let (parent, child) = derive_child(&space, &mut rng, config.learn.child_inputs)?;
                for proxy in &proxies {
                    let start = Instant::now();
                    let mut row = run.base.clone();
                    row.seed = Some(seed);
                    row.task_id = format!("{seed}-{trial}");
                    row.task = parent.encode();
                    row.child = child.encode();
                    row.proxy = proxy.name();
                    row.utility = crate::bounds::utility(&child).ok();
                    match learn_with(&child, proxy, config.learn.tie_break) {
                        Ok(pi) => {
                            if !child.is_correct_policy(pi)? {
                                return Err(Error::Invariant(format!(
                                    "learned {pi} is not correct for {child}"
                                )));
                            }
                            let i = run.lang.index_of(pi)?;
                            row.policy = pi.to_string();
                            row.extension_size = Some(run.lang.ext_size(i) as u64);
                            row.generalized = Some(evaluate_generalization(pi, &parent));
                            row.probability =
                                format!("{}/{}", table.numerators()[i], table.denominator());
                        }
                        Err(e) => row.outcome = e.to_string(),
                    }
                    row.wall_ms = elapsed(config, start);
                    rows.push(row);
                }
            }
            Ok(rows)
        });
        for r in per_seed {
            rows.extend(r?);
        }
    }
    Ok(RunOutput {
        rows,
        ..RunOutput::default()
    })
}

fn run_compare(config: &ExperimentConfig, envs: Vec<Environment>, exec: Exec) -> Result<RunOutput> {
    // seeds only matter when some proxy takes its seed from the run
    let seeds: Vec<Option<u64>> = if config.proxies.iter().any(|p| p == "random") {
        config.seeds.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let proxy_sets: Vec<(Option<u64>, Vec<Proxy>)> = seeds
        .iter()
        .map(|&s| Ok((s, config.proxies_for(s.unwrap_or(0))?)))
        .collect::<Result<_>>()?;
    let per_env = exec.map(&envs, |env| -> Result<Vec<ReportRow>> {
        let start = Instant::now();
        let run = EnvRun::new(config, env.clone(), Exec::Sequential)?;
        let table = GeneralizationTable::counted_with(&run.lang, Exec::Sequential);
        let n = run.lang.len();
        let mut rows = Vec::new();
        for (seed, proxies) in &proxy_sets {
            let matrices: Vec<Vec<u64>> = proxies.iter().map(|p| p.matrix(&run.lang)).collect();
            for a in 0..proxies.len() {
                for b in a + 1..proxies.len() {
                    let e = sample_efficiency_matrices(n, &table, &matrices[a], &matrices[b]);
                    let mut row = run.base.clone();
                    row.seed = *seed;
                    row.proxy = proxies[a].name();
                    row.against = proxies[b].name();
                    row.score = Some(e.value);
                    row.outcome = format!(
                        "mismatches {} vs {} of {} pairs",
                        e.mismatches_a, e.mismatches_b, e.pairs
                    );
                    row.wall_ms = elapsed(config, start);
                    rows.push(row);
                }
            }
        }
        Ok(rows)
    });
    let mut rows = Vec::new();
    for r in per_env {
        rows.extend(r?);
    }
    Ok(RunOutput {
        rows,
        ..RunOutput::default()
    })
}

fn single_powerset(config: &ExperimentConfig, envs: Vec<Environment>) -> Result<Environment> {
    let mut envs = envs.into_iter();
    let env = match (envs.next(), envs.next()) {
        (Some(e), None) => e,
        _ => {
            return Err(Error::Config(format!(
                "{} needs a single environment",
                config.kind
            )))
        }
    };
    if env.vocabulary().len() != 1 << env.state_count().min(63) {
        return Err(Error::Config(format!(
            "{} needs the full-powerset vocabulary (environment.powerset)",
            config.kind
        )));
    }
    Ok(env)
}

fn bound_tasks(config: &ExperimentConfig, lang: &Arc<Language>) -> Result<(Vec<Task>, bool)> {
    if !config.bounds.task.is_empty() {
        let path = config.resolve_path(&config.bounds.task);
        let t = load_task(&path).map_err(|e| match e {
            Error::Io(m) => Error::Config(m),
            e => e,
        })?;
        if t.language().env().vocabulary() != lang.env().vocabulary() {
            return Err(Error::Config(
                "bounds.task must use the configured powerset vocabulary".into(),
            ));
        }
        let t = Task::from_sets(lang, t.input_set(), t.output_set())?;
        return Ok((vec![t], true));
    }
    let bound = |n: usize| if n == 0 { usize::MAX } else { n };
    let limit = config.enumerate.limit as usize;
    let family = crate::task_algebra::enumerate_tasks_bounded(
        lang,
        bound(config.bounds.max_inputs),
        bound(config.bounds.max_outputs),
    )
    .take(limit.saturating_add(1))
    .collect::<Vec<_>>();
    if family.len() > limit {
        return Err(Error::TaskSpaceTooLarge(format!(
            "task family exceeds enumerate.limit = {limit}"
        )));
    }
    Ok((family, false))
}

fn candidate_programs(
    config: &ExperimentConfig,
    rho: &UninstantiatedTask,
    ctx: Option<&PowersetContext>,
) -> Result<Vec<u64>> {
    if config.bounds.candidates.is_empty() {
        return Ok(match ctx {
            Some(c) => c.all_vocabularies(),
            None => {
                let n = rho.env().vocabulary().len();
                let mut v: Vec<u64> = (0..1u64 << n).collect();
                v.sort_by(|&a, &b| crate::set_core::canonical_cmp(a, b));
                v
            }
        });
    }
    config
        .bounds
        .candidates
        .iter()
        .map(|c| {
            let programs = c
                .iter()
                .map(|states| Program::try_from(states.clone()).map_err(Error::InvalidVocabulary))
                .collect::<Result<Vec<Program>>>()?;
            rho.vocabulary_mask(&programs)
        })
        .collect()
}

fn run_utility(config: &ExperimentConfig, envs: Vec<Environment>, exec: Exec) -> Result<RunOutput> {
    let env = single_powerset(config, envs)?;
    let run = EnvRun::new(config, env, exec)?;
    let (tasks, _) = bound_tasks(config, &run.lang)?;
    let rhos = tasks
        .into_iter()
        .map(UninstantiatedTask::new)
        .collect::<Result<Vec<_>>>()?;
    let masks = match rhos.first() {
        Some(r) => candidate_programs(config, r, None)?,
        None => Vec::new(),
    };
    let per_task = exec.map(&rhos, |rho| -> Result<Vec<ReportRow>> {
        let start = Instant::now();
        let candidates: Vec<Vec<Program>> = masks.iter().map(|&m| rho.vocabulary_of(m)).collect();
        let report = compare_vocabularies_with(rho, &candidates, Exec::Sequential);
        let mut rows = Vec::new();
        for (k, r) in report.rows.into_iter().enumerate() {
            if let (Some(u), Some(w), Some(o)) = (r.utility, r.witness_weakness, r.correct_outputs)
            {
                if u as usize + o != w {
                    return Err(Error::Invariant(format!(
                        "utility {u} of {} does not equal {w} - {o}",
                        r.vocabulary
                    )));
                }
            }
            let mut row = run.base.clone();
            row.task = rho.base().encode();
            row.task_id = k.to_string();
            row.candidate = r.vocabulary;
            row.utility = r.utility;
            row.policy = r.witness.unwrap_or_default();
            row.extension_size = r.witness_weakness.map(|w| w as u64);
            row.score = r.correct_outputs.map(|o| o as i64);
            row.outcome = match (r.error, r.literal_child) {
                (Some(e), _) => e,
                (None, Some(true)) => "child".into(),
                (None, _) => "not-child".into(),
            };
            row.wall_ms = elapsed(config, start);
            rows.push(row);
        }
        Ok(rows)
    });
    let mut rows = Vec::new();
    for (t, r) in per_task.into_iter().enumerate() {
        let mut r = r?;
        for row in &mut r {
            row.task_id = format!("{t}-{}", row.task_id);
        }
        rows.extend(r);
    }
    Ok(RunOutput {
        rows,
        ..RunOutput::default()
    })
}

fn prob(ctx: &PowersetContext, mask: u64, i: usize) -> Result<String> {
    ctx.probability(mask, i)
        .map(ToString::to_string)
        .ok_or_else(|| {
            Error::Invariant(format!("no probability for statement {i} under {mask:#x}"))
        })
}

fn run_verify(config: &ExperimentConfig, envs: Vec<Environment>, exec: Exec) -> Result<RunOutput> {
    let env = single_powerset(config, envs)?;
    let run = EnvRun::new(config, env, exec)?;
    let ctx = PowersetContext::new(Arc::clone(&run.lang), exec)?;
    let (tasks, single) = bound_tasks(config, &run.lang)?;
    let rhos = tasks
        .into_iter()
        .map(UninstantiatedTask::new)
        .collect::<Result<Vec<_>>>()?;
    let Some(first) = rhos.first() else {
        return Ok(RunOutput::default());
    };
    let masks = candidate_programs(config, first, Some(&ctx))?;
    let universe = if config.bounds.candidates.is_empty() {
        "every subset of the powerset vocabulary"
    } else {
        "bounds.candidates"
    };
    let mut attachments = Vec::new();
    if single {
        let rep = ctx.verify_upper_bound(rhos[0].base(), &masks, &config.seeds, universe);
        attachments.push(("bound.json".to_string(), rep.to_json() + "\n"));
        attachments.push(("bound.txt".to_string(), rep.to_text()));
    }
    let results = exec.map(&rhos, |rho| {
        let start = Instant::now();
        let r = ctx.recipe(rho.base(), &masks);
        (r, elapsed(config, start))
    });
    let mut rows = Vec::with_capacity(rhos.len());
    for (t, (r, ms)) in results.into_iter().enumerate() {
        let rho = rhos[t].base();
        let mut row = run.base.clone();
        row.task_id = t.to_string();
        row.task = rho.encode();
        row.outcome = r.outcome.to_string();
        if let Some((mask, i)) = r.best {
            row.best_probability = prob(&ctx, mask, i)?;
        }
        if let Some((u, mask, i)) = r.selected {
            let correct = ctx
                .restrict(rho, mask)
                .is_ok_and(|res| ctx.policies(&res).contains(i));
            if !correct {
                return Err(Error::Invariant(format!(
                    "selected policy {} is not correct under {}",
                    ctx.describe_statement(i),
                    ctx.describe_vocabulary(mask)
                )));
            }
            row.candidate = ctx.describe_vocabulary(mask);
            row.policy = ctx.describe_statement(i);
            row.utility = Some(u);
            row.probability = prob(&ctx, mask, i)?;
        }
        row.wall_ms = ms;
        rows.push(row);
    }
    Ok(RunOutput { rows, attachments })
}
