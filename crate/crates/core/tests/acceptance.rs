//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria 5, 6 and 7 are false as stated at desk scale and are listed in
//! `KNOWN_RED`. They still run in full and print FAIL with a counterexample;
//! the target exits non-zero only when some criterion disagrees with the
//! expectation (a green criterion failing, or a red one starting to pass).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use weakform::bounds::{all_tasks, bounded_family, utility, Monotonicity, PowersetContext};
use weakform::harness::{parse_config, render, run_experiment, Format, Kind};
use weakform::learning::{
    evaluate_generalization, learn, random_proxy, sample_efficiency_matrices,
    sample_efficiency_with, GeneralizationTable, Proxy,
};
use weakform::set_core::{environment_to_json, small_environments};
use weakform::task_algebra::{count_tasks, enumerate_tasks, TaskSpace};
use weakform::{Environment, Exec, Guards, Language, Semantics, Statement, Task};

const KNOWN_RED: [u32; 3] = [5, 6, 7];

const FIXTURE_BUDGET: Duration = Duration::from_secs(1);
const COUNTING_BUDGET: Duration = Duration::from_secs(60);
const TASK_SPACE_BUDGET: Duration = Duration::from_secs(60);
const SAMPLER_BUDGET: Duration = Duration::from_secs(30);
const PROXY_BUDGET: Duration = Duration::from_secs(600);
const RECIPE_BUDGET: Duration = Duration::from_secs(600);
const MAXIMALITY_BUDGET: Duration = Duration::from_secs(300);

const SAMPLER_DRAWS: u64 = 100_000;
const SAMPLER_SIGMAS: f64 = 5.0;
const PROXY_SEEDS: u64 = 100;
const TASK_SPACE_MAX_LANGUAGE: usize = 8;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn timed(budget: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    let detail = format!(
        "{} [{:.2}s of {}s]",
        v.detail,
        took.as_secs_f64(),
        budget.as_secs()
    );
    verdict(v.pass && took <= budget, detail)
}

fn env2() -> Environment {
    Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]]).unwrap()
}

fn st(ix: &[usize]) -> Statement {
    Statement::from_indices(ix.iter().copied()).unwrap()
}

fn bundle_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn fixture() -> Verdict {
    let lang = Language::build(env2()).unwrap();
    let alpha = Task::new(&lang, &[st(&[2])], &[st(&[0, 2])]).unwrap();
    let omega = Task::new(&lang, &[st(&[2]), st(&[1])], &[st(&[0, 2])]).unwrap();
    let pols = alpha.correct_policies().members;
    let learned = learn(&alpha, &Proxy::Weakness).unwrap();
    let u = utility(&alpha).unwrap();
    let generalizes = evaluate_generalization(learned, &omega);
    let pass = pols == [st(&[0]), st(&[0, 2])] && learned == st(&[0]) && u == 1 && generalizes;
    verdict(
        pass,
        format!("policies {pols:?}, learned {learned}, utility {u}, generalizes {generalizes}"),
    )
}

fn counting() -> Verdict {
    let (mut envs, mut statements) = (0, 0);
    for env in small_environments(4, 4) {
        envs += 1;
        for x in env.enumerate_language().unwrap() {
            statements += 1;
            let ie = env.extension_size(x).unwrap();
            let listed = env.extension_size_enumerated(x).unwrap();
            if ie != listed {
                return verdict(
                    false,
                    format!("{env:?} {x}: {ie} by counting, {listed} listed"),
                );
            }
        }
    }
    verdict(
        true,
        format!("{envs} environments, {statements} statements"),
    )
}

/// Environments swept by the task-space and correctness criteria: up to
/// four states and four programs, under both empty-statement settings,
/// keeping those whose language fits.
fn task_space_sweep() -> Vec<Arc<Language>> {
    let mut out = Vec::new();
    for include_empty_statement in [true, false] {
        for env in small_environments(4, 4) {
            let env = env.with_semantics(Semantics {
                include_empty_statement,
                allow_empty_outputs: true,
            });
            let lang = Language::build(env).unwrap();
            if lang.len() <= TASK_SPACE_MAX_LANGUAGE {
                out.push(lang);
            }
        }
    }
    out
}

fn task_space(sweep: &[Arc<Language>]) -> Verdict {
    let mut tasks = 0usize;
    for lang in sweep {
        let counted = count_tasks(lang);
        let listed = enumerate_tasks(lang).count();
        if counted != listed.into() {
            return verdict(
                false,
                format!("{:?}: {counted} counted, {listed} listed", lang.env()),
            );
        }
        tasks += listed;
    }
    verdict(true, format!("{} environments, {tasks} tasks", sweep.len()))
}

fn sampler() -> Verdict {
    let lang = Language::build(env2()).unwrap();
    let space = TaskSpace::new(&lang).unwrap();
    let tasks: Vec<Task> = space.iter().collect();
    let n = tasks.len();
    let index: std::collections::HashMap<String, usize> = tasks
        .iter()
        .enumerate()
        .map(|(i, t)| (t.encode(), i))
        .collect();
    let mut hits = vec![0u64; n];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..SAMPLER_DRAWS {
        hits[index[&space.sample_with(&mut rng).unwrap().encode()]] += 1;
    }
    let p = 1.0 / n as f64;
    let mean = SAMPLER_DRAWS as f64 * p;
    let sd = (SAMPLER_DRAWS as f64 * p * (1.0 - p)).sqrt();
    let worst = hits
        .iter()
        .map(|&h| (h as f64 - mean).abs() / sd)
        .fold(0.0, f64::max);
    verdict(
        worst <= SAMPLER_SIGMAS,
        format!("{n} tasks, worst deviation {worst:.2} sd (limit {SAMPLER_SIGMAS})"),
    )
}

fn proxy_optimality() -> Verdict {
    let mut envs = 0;
    let mut comparisons = 0u64;
    let mut violations = 0u64;
    let mut by_simplicity = 0u64;
    let mut first: Option<serde_json::Value> = None;
    for env in small_environments(3, 4) {
        envs += 1;
        let lang = Language::build(env).unwrap();
        let table = GeneralizationTable::counted(&lang);
        let mut rivals = vec![Proxy::Simplicity];
        rivals.extend((0..PROXY_SEEDS).map(random_proxy));
        for rival in &rivals {
            comparisons += 1;
            let e = sample_efficiency_with(&lang, &table, &Proxy::Weakness, rival);
            if e.value > 0 {
                violations += 1;
                by_simplicity += u64::from(*rival == Proxy::Simplicity);
                if first.is_none() {
                    first = Some(json!({
                        "environment": serde_json::from_str::<serde_json::Value>(&environment_to_json(lang.env())).unwrap(),
                        "proxy": "weakness",
                        "rival": rival.name(),
                        "value": e.value,
                        "mismatches_weakness": e.mismatches_a,
                        "mismatches_rival": e.mismatches_b,
                        "pairs": e.pairs,
                        "generalization_table": table.to_csv(),
                    }));
                }
            }
        }
    }
    let mut detail = format!(
        "{violations} of {comparisons} comparisons over {envs} environments favour the rival \
         ({by_simplicity} of them simplicity)"
    );
    if let Some(c) = first {
        let path = bundle_dir().join("proxy-counterexample.json");
        fs::write(&path, serde_json::to_string_pretty(&c).unwrap() + "\n").unwrap();
        detail += &format!(
            "; smallest: {} vs {} on {} by {}; bundle {}",
            c["proxy"],
            c["rival"],
            c["environment"],
            c["value"],
            path.display()
        );
    }
    verdict(violations == 0, detail)
}

/// Every strict total order on the ENV2 language, scored against weakness.
fn total_orders_on_env2() -> String {
    let lang = Language::build(env2()).unwrap();
    let table = GeneralizationTable::counted(&lang);
    let weak = Proxy::Weakness.matrix(&lang);
    let n = lang.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut orders, mut better, mut best) = (0, 0, i64::MAX);
    loop {
        let mut m = vec![0u64; n];
        for (r, &i) in perm.iter().enumerate() {
            for &j in &perm[r + 1..] {
                m[i] |= 1 << j;
            }
        }
        let v = sample_efficiency_matrices(n, &table, &weak, &m).value;
        orders += 1;
        better += u64::from(v > 0);
        best = best.min(-v);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    format!(
        "{better} of {orders} total orders on ENV2 beat weakness (best by {})",
        -best
    )
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

struct Recipe {
    ctx2: PowersetContext,
    tasks2: Vec<Task>,
    ctx3: PowersetContext,
    tasks3: Vec<Task>,
}

fn recipe_inputs() -> Recipe {
    let ctx2 = PowersetContext::for_states(2, Guards::default(), Semantics::default()).unwrap();
    let tasks2 = all_tasks(ctx2.language()).unwrap();
    let ctx3 = PowersetContext::for_states(3, Guards::default(), Semantics::default()).unwrap();
    let tasks3 = bounded_family(ctx3.language(), 2, 2);
    Recipe {
        ctx2,
        tasks2,
        ctx3,
        tasks3,
    }
}

fn upper_bound(r: &Recipe) -> Verdict {
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, ctx, tasks) in [
        ("2 states", &r.ctx2, &r.tasks2),
        ("3 states, |I|,|O| <= 2", &r.ctx3, &r.tasks3),
    ] {
        let s = ctx.sweep_upper_bound(tasks, &ctx.all_vocabularies(), Exec::default());
        pass &= s.failed == 0;
        let mut line = format!(
            "{name}: {} attained, {} not attained, {} without candidate",
            s.passed, s.failed, s.skipped
        );
        if let Some(t) = s.first_failure {
            let rep =
                ctx.verify_upper_bound(&t, &ctx.all_vocabularies(), &[], "every sub-vocabulary");
            let sel = rep.selected.as_ref().unwrap();
            line += &format!(
                " (e.g. {}: selected {} in {} at {}, best {})",
                rep.meta.task,
                sel.policy,
                sel.vocabulary,
                sel.probability,
                rep.best_probability.as_deref().unwrap_or("-")
            );
            if name == "2 states" {
                let path = bundle_dir().join("recipe-counterexample.txt");
                fs::write(&path, rep.to_text()).unwrap();
                fs::write(path.with_extension("json"), rep.to_json()).unwrap();
            }
        }
        detail.push(line);
    }
    verdict(pass, detail.join("; "))
}

fn describe(ctx: &PowersetContext, t: &Task) -> String {
    let list = |s: weakform::set_core::StmtSet| {
        let v: Vec<String> = s.iter().map(|i| ctx.describe_statement(i)).collect();
        format!("[{}]", v.join(","))
    };
    format!("I={};O={}", list(t.input_set()), list(t.output_set()))
}

fn maximality(r: &Recipe) -> Verdict {
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, ctx, tasks) in [
        ("2 states", &r.ctx2, &r.tasks2),
        ("3 states, |I|,|O| <= 2", &r.ctx3, &r.tasks3),
    ] {
        let s = ctx.sweep_utility_maximal(tasks, Exec::default());
        pass &= s.failed == 0;
        let mut line = format!(
            "{name}: {} hold, {} fail ({} exceeded below P, {} undefined at P)",
            s.passed, s.failed, s.exceeding, s.undefined_at_p
        );
        if let Some(c) = s
            .first_failure
            .as_ref()
            .and_then(|t| ctx.utility_maximal_at_p(t).counterexample.map(|c| (t, c)))
        {
            line += &format!(
                " (e.g. {} in {}: utility {} against {:?} at P)",
                describe(ctx, c.0),
                c.1.vocabulary,
                c.1.utility,
                c.1.utility_at_p
            );
        }
        detail.push(line);
    }
    verdict(pass, detail.join("; "))
}

/// One-program vocabulary growth with the inputs held fixed.
fn monotonicity(r: &Recipe) -> String {
    let mut parts = Vec::new();
    for (name, ctx, tasks) in [
        ("2 states", &r.ctx2, &r.tasks2),
        ("3 states", &r.ctx3, &r.tasks3),
    ] {
        let mut m = Monotonicity::default();
        for t in tasks {
            m += ctx.monotonicity(t);
        }
        parts.push(format!(
            "{name}: {} of {} steps lose weakness, {} of them with every policy surviving",
            m.decreases, m.steps, m.decreases_surviving
        ));
    }
    parts.join("; ")
}

fn correctness(sweep: &[Arc<Language>]) -> Verdict {
    let mut inferences = 0u64;
    let mut witness: Option<String> = None;
    for lang in sweep {
        for (k, t) in enumerate_tasks(lang).enumerate() {
            let pols = t.correct_policies();
            let outputs = t.output_set();
            for input in t.inputs() {
                let i = lang.index_of(input).unwrap();
                for p in 0..lang.len() {
                    let pi = lang.statement(p);
                    let admissible = lang.up(i) & lang.up(p);
                    if pols.contains(pi) {
                        if !admissible.is_subset(outputs) {
                            return verdict(false, format!("{t}: {pi} admits an output outside O"));
                        }
                        if let Ok(inf) = t.infer(pi, input, k as u64) {
                            inferences += 1;
                            if !inf.correct {
                                return verdict(
                                    false,
                                    format!("{t}: {pi} inferred {}", inf.output),
                                );
                            }
                        }
                    } else if witness.is_none() && !pi.is_empty() && !input.is_empty() {
                        if let Some(e) = (admissible & outputs).iter().next() {
                            witness = Some(format!(
                                "{t}: incorrect {pi} completes {input} to correct {}",
                                lang.statement(e)
                            ));
                        }
                    }
                }
            }
        }
    }
    match witness {
        Some(w) => verdict(
            true,
            format!("{inferences} inferences by correct policies stay in O; {w}"),
        ),
        None => verdict(false, "no incorrect policy ever yields a correct output"),
    }
}

fn determinism() -> Verdict {
    let env = "[environment]\nstates = 2\nvocabulary = [[0], [1], [0, 1]]\n";
    let configs = [
        (Kind::Enumerate, env.to_string()),
        (
            Kind::Learn,
            format!("seeds = [3, 4]\n[learn]\ntrials = 5\n{env}"),
        ),
        (
            Kind::CompareProxies,
            format!("seeds = [1, 2]\nproxies = [\"weakness\", \"simplicity\", \"random\"]\n{env}"),
        ),
        (
            Kind::SampleGen,
            "seeds = [7, 8]\n[environment]\npowerset = 2\n".to_string(),
        ),
        (
            Kind::VerifyBound,
            "[environment]\npowerset = 2\n".to_string(),
        ),
    ];
    let mut runs = 0;
    for (kind, text) in &configs {
        let c = parse_config(text, Some(*kind)).unwrap();
        for format in [Format::Csv, Format::Json] {
            let once = |exec| render(&run_experiment(&c, exec).unwrap().rows, format).unwrap();
            let a = once(Exec::default());
            runs += 3;
            if a != once(Exec::default()) || a != once(Exec::Sequential) {
                return verdict(false, format!("{kind} {format:?} differs between runs"));
            }
        }
    }
    verdict(
        true,
        format!(
            "{runs} runs over {} experiments byte-identical",
            configs.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut lines: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut record = |n, name, v: Verdict| {
        println!(
            "criterion {n} {} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        lines.push((n, name, v));
    };
    record(1, "worked fixture", timed(FIXTURE_BUDGET, fixture));
    record(2, "extension counting", timed(COUNTING_BUDGET, counting));
    let sweep = task_space_sweep();
    record(
        3,
        "task-space counting",
        timed(TASK_SPACE_BUDGET, || task_space(&sweep)),
    );
    record(4, "uniform sampler", timed(SAMPLER_BUDGET, sampler));
    record(
        5,
        "weakness is the most sample-efficient proxy",
        timed(PROXY_BUDGET, proxy_optimality),
    );
    println!("  info: {}", total_orders_on_env2());
    let start = Instant::now();
    let r = recipe_inputs();
    let setup = start.elapsed();
    record(
        6,
        "max-utility then max-weakness selection",
        timed(RECIPE_BUDGET.saturating_sub(setup), || upper_bound(&r)),
    );
    record(
        7,
        "utility is maximal at the full vocabulary",
        timed(MAXIMALITY_BUDGET, || maximality(&r)),
    );
    println!("  info: monotonicity {}", monotonicity(&r));
    record(8, "guaranteed correctness", correctness(&sweep));
    record(9, "determinism", determinism());

    let surprises: Vec<u32> = lines
        .iter()
        .filter(|(n, _, v)| v.pass == KNOWN_RED.contains(n))
        .map(|(n, _, _)| *n)
        .collect();
    let passed = lines.iter().filter(|l| l.2.pass).count();
    println!(
        "acceptance: {passed} of {} pass; known unattainable: {KNOWN_RED:?}",
        lines.len()
    );
    if surprises.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected result for criteria {surprises:?}");
        ExitCode::FAILURE
    }
}
