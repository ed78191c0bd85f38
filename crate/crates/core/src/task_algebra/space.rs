//! The task space `Γ_v`: exact counting, canonical enumeration and exactly
//! uniform sampling.
//!
//! Counting and sampling group input sets by their extension. `E_I` is an
//! up-set of the completion order whose minimal elements form an antichain
//! `A ⊆ I`, and every `I` with `A ⊆ I ⊆ E_I` has the same extension. So the
//! space decomposes into one class per non-empty antichain `A` (with up-set
//! `U`): `2^(|U|-|A|)` input sets (one fewer when `U = L`, which excludes
//! `I = L`), each carrying `2^|U| - 1` output sets (`- 2` without empty `O`).

use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::task::Task;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::set_core::{deposit, low_mask, ones, Language, StmtSet};

/// One extension class of input sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpClass {
    pub antichain: u64,
    pub upset: u64,
}

/// Most classes a [`TaskSpace`] will hold in memory.
pub const MAX_CLASSES: usize = 1 << 24;

fn comparability(lang: &Language) -> Vec<u64> {
    (0..lang.len())
        .map(|i| {
            let down = (0..lang.len())
                .filter(|&j| lang.up(j).contains(i))
                .fold(0u64, |m, j| m | 1 << j);
            lang.up(i).0 | down
        })
        .collect()
}

/// Visits every non-empty antichain whose smallest index is `first`, in DFS
/// pre-order.
fn visit_antichains<F: FnMut(u64, u64)>(lang: &Language, comp: &[u64], first: usize, f: &mut F) {
    fn go<F: FnMut(u64, u64)>(
        lang: &Language,
        comp: &[u64],
        a: u64,
        u: u64,
        avail: u64,
        f: &mut F,
    ) {
        f(a, u);
        for j in ones(avail) {
            let higher = !low_mask(j + 1);
            go(
                lang,
                comp,
                a | 1 << j,
                u | lang.up(j).0,
                avail & !comp[j] & higher,
                f,
            );
        }
    }
    let n = lang.len();
    let avail = low_mask(n) & !comp[first] & !low_mask(first + 1);
    go(lang, comp, 1 << first, lang.up(first).0, avail, f);
}

/// Input-set count and per-input output-set count for a class.
fn class_counts(lang: &Language, class: UpClass) -> (u128, u128) {
    let u = class.upset.count_ones();
    let a = class.antichain.count_ones();
    let mut inputs = 1u128 << (u - a);
    if class.upset == lang.full().0 {
        inputs -= 1;
    }
    let outputs = if lang.env().semantics().allow_empty_outputs {
        (1u128 << u) - 1
    } else {
        (1u128 << u) - 2
    };
    (inputs, outputs)
}

fn class_weight(lang: &Language, class: UpClass) -> BigUint {
    let (i, o) = class_counts(lang, class);
    match i.checked_mul(o) {
        Some(w) => BigUint::from(w),
        None => BigUint::from(i) * BigUint::from(o),
    }
}

#[derive(Default)]
struct Accum {
    small: u128,
    big: BigUint,
}

impl Accum {
    fn add(&mut self, w: u128) {
        match self.small.checked_add(w) {
            Some(s) => self.small = s,
            None => {
                self.big += BigUint::from(self.small);
                self.small = w;
            }
        }
    }

    fn total(self) -> BigUint {
        self.big + BigUint::from(self.small)
    }
}

/// `|Γ_v|`, exactly.
pub fn count_tasks(lang: &Language) -> BigUint {
    count_tasks_with(lang, Exec::default())
}

pub fn count_tasks_with(lang: &Language, exec: Exec) -> BigUint {
    let comp = comparability(lang);
    let parts = exec.map_range(lang.len(), |first| {
        let mut acc = Accum::default();
        let mut big = BigUint::zero();
        visit_antichains(lang, &comp, first, &mut |a, u| {
            let (i, o) = class_counts(
                lang,
                UpClass {
                    antichain: a,
                    upset: u,
                },
            );
            match i.checked_mul(o) {
                Some(w) => acc.add(w),
                None => big += BigUint::from(i) * BigUint::from(o),
            }
        });
        acc.total() + big
    });
    parts.into_iter().sum()
}

/// `|Γ_v|` by summing `2^|E_I| - 1` over every input set; `O(2^|L|)`.
pub fn count_tasks_by_inputs(lang: &Language, exec: Exec) -> Result<BigUint> {
    let n = lang.len();
    if n > 40 {
        return Err(Error::TaskSpaceTooLarge(format!(
            "{n} statements is too many to sweep every input set"
        )));
    }
    let allow_empty = lang.env().semantics().allow_empty_outputs;
    let last = (1u64 << n) - 1;
    let sum = exec.fold_range(
        last,
        BigUint::zero,
        |mut acc, raw| {
            let i = raw + 1;
            if i == last {
                return acc;
            }
            let e = lang.extension_of(StmtSet(i)).len();
            let per = if allow_empty {
                (1u128 << e) - 1
            } else {
                (1u128 << e) - 2
            };
            acc += BigUint::from(per);
            acc
        },
        |a, b| a + b,
    );
    Ok(sum)
}

/// Lexicographic k-subsets of `0..n` as position lists.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn positions_to_mask(pos: &[usize], support: &[usize]) -> u64 {
    pos.iter().fold(0u64, |m, &p| m | 1 << support[p])
}

/// Streams every task once: by `|I|`, then canonical `I`, then canonical `O`.
pub fn enumerate_tasks(lang: &Arc<Language>) -> impl Iterator<Item = Task> + Send + 'static {
    enumerate_tasks_bounded(lang, usize::MAX, usize::MAX)
}

/// [`enumerate_tasks`] restricted to `|I| <= max_inputs` and
/// `|O| <= max_outputs`, in the same order.
pub fn enumerate_tasks_bounded(
    lang: &Arc<Language>,
    max_inputs: usize,
    max_outputs: usize,
) -> impl Iterator<Item = Task> + Send + 'static {
    let n = lang.len();
    let all: Vec<usize> = (0..n).collect();
    let min_o = usize::from(!lang.env().semantics().allow_empty_outputs);
    let lang = Arc::clone(lang);
    (1..n.max(1).min(max_inputs.saturating_add(1)))
        .flat_map(move |k| Combinations::new(n, k))
        .flat_map(move |ipos| {
            let lang = Arc::clone(&lang);
            let inputs = StmtSet(positions_to_mask(&ipos, &all));
            let ext = lang.extension_of(inputs);
            let support: Vec<usize> = ext.iter().collect();
            let m = support.len();
            (min_o..m.min(max_outputs.saturating_add(1)))
                .flat_map(move |j| Combinations::new(m, j))
                .map(move |opos| {
                    let outputs = StmtSet(positions_to_mask(&opos, &support));
                    Task::from_parts(&lang, inputs, outputs, ext)
                })
        })
}

/// A task space with its extension classes materialised for sampling.
pub struct TaskSpace {
    lang: Arc<Language>,
    classes: Vec<UpClass>,
    cumulative: Vec<BigUint>,
}

impl TaskSpace {
    pub fn new(lang: &Arc<Language>) -> Result<TaskSpace> {
        TaskSpace::new_with(lang, Exec::default())
    }

    pub fn new_with(lang: &Arc<Language>, exec: Exec) -> Result<TaskSpace> {
        let comp = comparability(lang);
        let per_first = exec.map_range(lang.len(), |first| {
            let mut v = Vec::new();
            visit_antichains(lang, &comp, first, &mut |a, u| {
                if v.len() <= MAX_CLASSES {
                    v.push(UpClass {
                        antichain: a,
                        upset: u,
                    });
                }
            });
            v
        });
        let count: usize = per_first.iter().map(Vec::len).sum();
        if count > MAX_CLASSES {
            return Err(Error::TaskSpaceTooLarge(format!(
                "more than {MAX_CLASSES} extension classes"
            )));
        }
        let mut classes = Vec::with_capacity(count);
        let mut cumulative = Vec::with_capacity(count);
        let mut running = BigUint::zero();
        for class in per_first.into_iter().flatten() {
            let w = class_weight(lang, class);
            if w.is_zero() {
                continue;
            }
            running += w;
            classes.push(class);
            cumulative.push(running.clone());
        }
        Ok(TaskSpace {
            lang: Arc::clone(lang),
            classes,
            cumulative,
        })
    }

    pub fn language(&self) -> &Arc<Language> {
        &self.lang
    }

    pub fn total(&self) -> BigUint {
        self.cumulative.last().cloned().unwrap_or_default()
    }

    pub fn classes(&self) -> &[UpClass] {
        &self.classes
    }

    pub fn iter(&self) -> impl Iterator<Item = Task> + Send + 'static {
        enumerate_tasks(&self.lang)
    }

    /// The task at position `r` of the class-ordered listing, `r < total`.
    fn task_at(&self, r: &BigUint) -> Task {
        let k = self.cumulative.partition_point(|c| c <= r);
        let class = self.classes[k];
        let before = if k == 0 {
            BigUint::zero()
        } else {
            self.cumulative[k - 1].clone()
        };
        let rem = r - before;
        let (_, per_input) = class_counts(&self.lang, class);
        let (which_input, which_output) = rem.div_rem(&BigUint::from(per_input));
        let which_input = which_input.to_u64().expect("input offset fits");
        let which_output = which_output.to_u64().expect("output offset fits");
        let free = class.upset & !class.antichain;
        let inputs = StmtSet(class.antichain | deposit(which_input, free));
        let ext = StmtSet(class.upset);
        let offset = u64::from(!self.lang.env().semantics().allow_empty_outputs);
        let outputs = StmtSet(deposit(which_output + offset, ext.0));
        Task::from_parts(&self.lang, inputs, outputs, ext)
    }

    /// A task drawn exactly uniformly from the space.
    pub fn sample_with(&self, rng: &mut ChaCha8Rng) -> Result<Task> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::TaskSpaceTooLarge("the task space is empty".into()));
        }
        let r = rng.gen_biguint_below(&total);
        Ok(self.task_at(&r))
    }

    pub fn sample(&self, seed: u64) -> Result<Task> {
        self.sample_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }
}

/// One uniformly drawn task, reproducible from `seed`.
pub fn sample_task(lang: &Arc<Language>, seed: u64) -> Result<Task> {
    TaskSpace::new(lang)?.sample(seed)
}
