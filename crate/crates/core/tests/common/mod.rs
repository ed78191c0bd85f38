//! Brute-force reference implementations over plain `BTreeSet`s, written
//! straight from the definitions and sharing nothing with the library's bit
//! tricks.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use weakform::{Environment, Statement};

pub type Set = BTreeSet<usize>;
pub type Stmts = BTreeSet<Set>;

pub struct NaiveEnv {
    pub states: usize,
    pub programs: Vec<Set>,
    pub include_empty: bool,
    pub allow_empty_outputs: bool,
}

pub fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    assert!(items.len() < 26, "subset scan too large");
    (0..1u64 << items.len())
        .map(|m| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

impl NaiveEnv {
    pub fn from_env(env: &Environment) -> NaiveEnv {
        NaiveEnv {
            states: env.state_count(),
            programs: env
                .programs_as_lists()
                .into_iter()
                .map(|p| p.into_iter().collect())
                .collect(),
            include_empty: env.semantics().include_empty_statement,
            allow_empty_outputs: env.semantics().allow_empty_outputs,
        }
    }

    pub fn truth(&self, l: &Set) -> Set {
        let mut t: Set = (0..self.states).collect();
        for &p in l {
            t = t.intersection(&self.programs[p]).copied().collect();
        }
        t
    }

    pub fn is_statement(&self, l: &Set) -> bool {
        (self.include_empty || !l.is_empty()) && !self.truth(l).is_empty()
    }

    pub fn language(&self) -> Stmts {
        let idx: Vec<usize> = (0..self.programs.len()).collect();
        subsets(&idx)
            .into_iter()
            .filter(|l| self.is_statement(l))
            .collect()
    }

    pub fn extension(&self, x: &Set) -> Stmts {
        self.language()
            .into_iter()
            .filter(|y| x.is_subset(y))
            .collect()
    }

    pub fn extension_of_set(&self, xs: &Stmts) -> Stmts {
        xs.iter().flat_map(|x| self.extension(x)).collect()
    }

    /// Every valid `(I, O)`.
    pub fn tasks(&self) -> Vec<(Stmts, Stmts)> {
        let lang: Vec<Set> = self.language().into_iter().collect();
        let mut out = Vec::new();
        for inputs in subsets(&lang) {
            if inputs.is_empty() || inputs.len() == lang.len() {
                continue;
            }
            let ext: Vec<Set> = self.extension_of_set(&inputs).into_iter().collect();
            for outputs in subsets(&ext) {
                if outputs.len() == ext.len() || (outputs.is_empty() && !self.allow_empty_outputs) {
                    continue;
                }
                out.push((inputs.clone(), outputs));
            }
        }
        out
    }

    pub fn is_correct(&self, inputs: &Stmts, outputs: &Stmts, pi: &Set) -> bool {
        let ext = self.extension_of_set(inputs);
        let mine = self.extension(pi);
        let meet: Stmts = ext.intersection(&mine).cloned().collect();
        &meet == outputs
    }

    pub fn policies(&self, inputs: &Stmts, outputs: &Stmts) -> Stmts {
        self.language()
            .into_iter()
            .filter(|pi| self.is_correct(inputs, outputs, pi))
            .collect()
    }
}

pub fn to_set(l: Statement) -> Set {
    l.indices().collect()
}

pub fn to_stmts(v: &[Statement]) -> Stmts {
    v.iter().map(|&l| to_set(l)).collect()
}

pub fn to_statement(s: &Set) -> Statement {
    Statement::from_indices(s.iter().copied()).unwrap()
}

/// Longest strictly ascending parent chain above every task, by memoised
/// search over the explicit task list.
pub fn chain_levels(tasks: &[(Stmts, Stmts)]) -> HashMap<(Stmts, Stmts), usize> {
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    // parents have strictly more inputs, so settle larger |I| first
    order.sort_by_key(|&i| std::cmp::Reverse(tasks[i].0.len()));
    let mut level = vec![0usize; tasks.len()];
    for (pos, &i) in order.iter().enumerate() {
        let (ci, co) = &tasks[i];
        let mut best = 0;
        for &j in &order[..pos] {
            let (pi, po) = &tasks[j];
            if ci.len() < pi.len() && ci.is_subset(pi) && co.is_subset(po) {
                best = best.max(level[j] + 1);
            }
        }
        level[i] = best;
    }
    tasks.iter().cloned().zip(level).collect()
}

pub fn env2() -> Environment {
    Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]]).unwrap()
}

pub fn st(ix: &[usize]) -> Statement {
    Statement::from_indices(ix.iter().copied()).unwrap()
}
