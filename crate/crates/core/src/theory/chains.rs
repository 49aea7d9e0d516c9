use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{pareto_dominates, Matching, Problem};

pub const DEFAULT_MAX_CHAINS: usize = 10_000;

/// Cover relation of Pareto dominance on `set`, as index lists:
/// `up[a]` holds every `b` that dominates `a` with nothing in between.
pub fn dominance_cover(prob: &Problem, set: &[Matching]) -> Vec<Vec<usize>> {
    let n = set.len();
    let dom: Vec<Vec<bool>> = (0..n)
        .map(|b| {
            (0..n)
                .map(|a| pareto_dominates(prob, &set[b], &set[a]))
                .collect()
        })
        .collect();
    (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| dom[b][a] && !(0..n).any(|c| dom[c][a] && dom[b][c]))
                .collect()
        })
        .collect()
}

/// Every maximal chain of `set` under Pareto dominance, worst member first.
/// These are the paths of the cover diagram from a minimal to a maximal
/// element.
pub fn maximal_pareto_chains(
    prob: &Problem,
    set: &BTreeSet<Matching>,
    max_chains: usize,
) -> Result<Vec<Vec<Matching>>> {
    let items: Vec<Matching> = set.iter().cloned().collect();
    let up = dominance_cover(prob, &items);
    let is_bottom: Vec<bool> = (0..items.len())
        .map(|a| !items.iter().any(|b| pareto_dominates(prob, &items[a], b)))
        .collect();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..items.len())
        .rev()
        .filter(|&a| is_bottom[a])
        .map(|a| vec![a])
        .collect();
    while let Some(path) = stack.pop() {
        let last = *path.last().expect("paths are nonempty");
        if up[last].is_empty() {
            if paths.len() == max_chains {
                return Err(Error::GuardExceeded {
                    what: "maximal Pareto chains",
                    limit: max_chains as u128,
                    actual: max_chains as u128 + 1,
                });
            }
            paths.push(path);
            continue;
        }
        for &b in up[last].iter().rev() {
            let mut next = path.clone();
            next.push(b);
            stack.push(next);
        }
    }
    Ok(paths
        .into_iter()
        .map(|p| p.into_iter().map(|k| items[k].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::stable_set_oracle;

    #[test]
    fn chains_cover_every_element_and_are_ordered() {
        let p = fixtures::example2();
        let stable = stable_set_oracle(&p).unwrap();
        let chains = maximal_pareto_chains(&p, &stable, 1000).unwrap();
        let covered: BTreeSet<&Matching> = chains.iter().flatten().collect();
        assert_eq!(covered.len(), stable.len());
        for chain in &chains {
            for w in chain.windows(2) {
                assert!(pareto_dominates(&p, &w[1], &w[0]));
            }
            // maximal: cannot be extended at either end or in the middle
            for nu in &stable {
                if chain.contains(nu) {
                    continue;
                }
                let mut fits = false;
                for pos in 0..=chain.len() {
                    let below = pos == 0 || pareto_dominates(&p, nu, &chain[pos - 1]);
                    let above = pos == chain.len() || pareto_dominates(&p, &chain[pos], nu);
                    fits |= below && above;
                }
                assert!(!fits);
            }
        }
    }

    #[test]
    fn guard_on_chain_count() {
        let p = fixtures::example2();
        let stable = stable_set_oracle(&p).unwrap();
        let total = maximal_pareto_chains(&p, &stable, 1000).unwrap().len();
        assert!(matches!(
            maximal_pareto_chains(&p, &stable, total - 1),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
