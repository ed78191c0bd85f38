use super::proxy::Proxy;
use crate::error::{Error, Result};
use crate::set_core::Statement;
use crate::task_algebra::Task;

/// Picks the proxy-maximal correct policy of `child`.
///
/// Maximal means no other correct policy is above it. Several maximal
/// policies, or none at all when the relation cycles, are resolved by taking
/// the canonically smallest candidate.
pub fn learn(child: &Task, proxy: &Proxy) -> Result<Statement> {
    learn_with(child, proxy, true)
}

/// As [`learn`]; with `tie_break` off an unresolved choice is an error.
pub fn learn_with(child: &Task, proxy: &Proxy, tie_break: bool) -> Result<Statement> {
    let policies = child.correct_policies().members;
    if policies.is_empty() {
        return Err(Error::NoCorrectPolicy);
    }
    let lang = child.language();
    let mut maximal = Vec::new();
    for &p in &policies {
        let mut dominated = false;
        for &q in &policies {
            if q != p && proxy.less(lang, p, q)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            maximal.push(p);
        }
    }
    let ties = if maximal.is_empty() {
        &policies
    } else {
        &maximal
    };
    if ties.len() > 1 && !tie_break {
        return Err(Error::AmbiguousMaximum(ties.len()));
    }
    Ok(ties[0])
}

/// `pi` generalises to `parent` iff it is one of the parent's correct
/// policies.
pub fn evaluate_generalization(pi: Statement, parent: &Task) -> bool {
    parent.is_correct_policy(pi).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;
    use std::sync::Arc;

    use super::*;
    use crate::set_core::{Environment, Language};

    fn env2() -> Arc<Language> {
        Language::build(Environment::from_state_sets(2, &[vec![0], vec![1], vec![0, 1]]).unwrap())
            .unwrap()
    }

    fn s(ix: &[usize]) -> Statement {
        Statement::from_indices(ix.iter().copied()).unwrap()
    }

    fn task(l: &Arc<Language>, i: &[&[usize]], o: &[&[usize]]) -> Task {
        let i: Vec<_> = i.iter().map(|x| s(x)).collect();
        let o: Vec<_> = o.iter().map(|x| s(x)).collect();
        Task::new(l, &i, &o).unwrap()
    }

    #[test]
    fn learning_examples() {
        let l = env2();
        let child = task(&l, &[&[2]], &[&[0, 2]]);
        assert_eq!(learn(&child, &Proxy::Weakness).unwrap(), s(&[0]));
        assert_eq!(learn(&child, &Proxy::Simplicity).unwrap(), s(&[0]));
        let none = task(&l, &[&[2]], &[&[0, 2], &[1, 2]]);
        assert_eq!(learn(&none, &Proxy::Weakness), Err(Error::NoCorrectPolicy));
    }

    #[test]
    fn equal_weakness_ties_go_to_smaller_encoding() {
        // empty O on input [0]: Π = {[1], [1,2]}; under an empty relation
        // both are maximal
        let l = env2();
        let t = task(&l, &[&[0]], &[]);
        let flat = Proxy::Table {
            source: "empty".into(),
            pairs: BTreeSet::new(),
        };
        assert_eq!(learn(&t, &flat).unwrap(), s(&[1]));
        assert_eq!(
            learn_with(&t, &flat, false),
            Err(Error::AmbiguousMaximum(2))
        );
        assert_eq!(learn_with(&t, &Proxy::Weakness, false).unwrap(), s(&[1]));
    }

    #[test]
    fn cyclic_relation_falls_back_to_canonical_order() {
        let l = env2();
        let t = task(&l, &[&[0]], &[]);
        let pairs = [(s(&[1]), s(&[1, 2])), (s(&[1, 2]), s(&[1]))]
            .into_iter()
            .collect();
        let cyc = Proxy::Table {
            source: "cycle".into(),
            pairs,
        };
        assert_eq!(learn(&t, &cyc).unwrap(), s(&[1]));
        assert!(learn_with(&t, &cyc, false).is_err());
    }

    #[test]
    fn generalisation_examples() {
        let l = env2();
        let parent = task(&l, &[&[2], &[1]], &[&[0, 2]]);
        assert!(evaluate_generalization(s(&[0]), &parent));
        assert!(!evaluate_generalization(s(&[1]), &parent));
        let none = task(&l, &[&[2]], &[&[0, 2], &[1, 2]]);
        for &pi in l.statements() {
            assert!(!evaluate_generalization(pi, &none));
        }
    }
}
