use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::mechanisms::ExtensionProfile;
use crate::model::{is_stable, pareto_dominates, Matching, Problem, SchoolId};
use crate::relations::{classify, smo_extend, LowestIndex, PriorityRelation, StudentId};

type Pair = (StudentId, StudentId);

/// A school's priority together with the pairs a chain of stable matchings
/// forces on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedPriority {
    pub base: PriorityRelation,
    pub added: BTreeSet<Pair>,
    /// `base ∪ added`, sorted.
    pub pairs: Vec<Pair>,
    pub asymmetric: bool,
    pub acyclic: bool,
}

impl AugmentedPriority {
    fn new(base: &PriorityRelation, added: BTreeSet<Pair>) -> Self {
        let n = base.ground_size();
        let union: BTreeSet<Pair> = base
            .pairs()
            .iter()
            .copied()
            .chain(added.iter().copied())
            .collect();
        let pairs: Vec<Pair> = union.iter().copied().collect();
        let asymmetric = pairs
            .iter()
            .all(|&(i, j)| i != j && !union.contains(&(j, i)));
        let mut adj = vec![false; n * n];
        for &(i, j) in &pairs {
            adj[i.0 * n + j.0] = true;
        }
        let acyclic = !crate::relations::has_cycle(n, |i, j| adj[i * n + j]);
        Self {
            base: base.clone(),
            added,
            pairs,
            asymmetric,
            acyclic,
        }
    }

    /// The augmented relation. Fails if it is not asymmetric.
    pub fn relation(&self) -> Result<PriorityRelation> {
        PriorityRelation::new(self.base.ground_size(), self.pairs.iter().copied())
    }
}

/// `{(i, j) | mu(i) = s and s P_j mu(j)}`.
pub fn augmentation_pairs(prob: &Problem, mu: &Matching, s: SchoolId) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for i in mu.roster(s) {
        for j in prob.students() {
            if j != i && prob.prefers(j, Some(s), mu.school_of(j)) {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Adds every chain member's augmentation pairs to each school's priority.
///
/// The chain must consist of stable matchings, each Pareto dominating its
/// predecessors. When every priority is a partial order, a cyclic or
/// non-asymmetric result is reported as an invariant failure.
pub fn augment(prob: &Problem, chain: &[Matching]) -> Result<Vec<AugmentedPriority>> {
    for (k, mu) in chain.iter().enumerate() {
        mu.validate(prob)?;
        if !is_stable(prob, mu) {
            return Err(Error::invalid(format!("chain member {k} is not stable")));
        }
    }
    for later in 1..chain.len() {
        for earlier in 0..later {
            if !pareto_dominates(prob, &chain[later], &chain[earlier]) {
                return Err(Error::invalid(format!(
                    "chain member {later} does not Pareto dominate member {earlier}"
                )));
            }
        }
    }
    let partial_orders = prob.all_priorities(|c| c.is_partial_order());
    prob.schools()
        .map(|s| {
            let added = chain
                .iter()
                .flat_map(|mu| augmentation_pairs(prob, mu, s))
                .collect();
            let aug = AugmentedPriority::new(prob.priority(s), added);
            if partial_orders && !(aug.asymmetric && aug.acyclic) {
                return Err(Error::Invariant(format!(
                    "augmented priority at {s} is {} although all priorities are partial orders",
                    if aug.asymmetric {
                        "cyclic"
                    } else {
                        "not asymmetric"
                    }
                )));
            }
            Ok(aug)
        })
        .collect()
}

/// An extension profile under which every chain member is stable, built by
/// extending the augmented priorities with the lowest-index chooser.
pub fn witness_extension(prob: &Problem, chain: &[Matching]) -> Result<ExtensionProfile> {
    let augmented = augment(prob, chain)?;
    let orders = augmented
        .iter()
        .enumerate()
        .map(|(s, aug)| {
            if !aug.acyclic {
                return Err(Error::CyclicRelation {
                    school: Some(SchoolId(s)),
                });
            }
            let rel = aug.relation()?;
            debug_assert!(classify(&rel).acyclic);
            smo_extend(&rel, &mut LowestIndex).map_err(|e| e.at_school(SchoolId(s)))
        })
        .collect::<Result<Vec<_>>>()?;
    ExtensionProfile::new(prob.priorities(), orders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mechanisms::deferred_acceptance;
    use crate::model::{stability_report, stable_set_oracle};
    use crate::relations::{is_extension, TotalOrder};

    fn ids(pairs: &[(usize, usize)]) -> Vec<Pair> {
        pairs
            .iter()
            .map(|&(a, b)| (StudentId(a), StudentId(b)))
            .collect()
    }

    #[test]
    fn example1_school_s_becomes_cyclic() {
        let p = fixtures::example1();
        let mu = fixtures::example1_mu(&p);
        let aug = augment(&p, std::slice::from_ref(&mu)).unwrap();
        assert_eq!(aug[0].pairs, ids(&[(0, 1), (1, 2), (2, 0)]));
        assert!(!aug[0].acyclic);
        assert!(aug[1].acyclic);
        assert!(matches!(
            witness_extension(&p, &[mu]),
            Err(Error::CyclicRelation {
                school: Some(SchoolId(0))
            })
        ));
    }

    #[test]
    fn empty_chain_keeps_base() {
        let p = fixtures::example2();
        let aug = augment(&p, &[]).unwrap();
        for s in p.schools() {
            assert!(aug[s.0].added.is_empty());
            assert_eq!(aug[s.0].relation().unwrap(), *p.priority(s));
        }
    }

    #[test]
    fn rejects_unstable_or_unordered_chains() {
        let p = fixtures::example2();
        let unmatched = Matching::unmatched(&p);
        assert!(matches!(
            augment(&p, &[unmatched]),
            Err(Error::InvalidInput(_))
        ));
        let stable: Vec<Matching> = stable_set_oracle(&p).unwrap().into_iter().collect();
        let mu = &stable[0];
        assert!(matches!(
            augment(&p, &[mu.clone(), mu.clone()]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn total_orders_and_da_return_the_priorities() {
        let p = fixtures::example1();
        let s_order = TotalOrder::new(vec![StudentId(1), StudentId(2), StudentId(0)]).unwrap();
        let total = p
            .with_priorities(vec![s_order.to_relation(), p.priority(SchoolId(1)).clone()])
            .unwrap();
        let da = deferred_acceptance(&total).unwrap();
        let aug = augment(&total, std::slice::from_ref(&da)).unwrap();
        for s in total.schools() {
            assert!(aug[s.0]
                .added
                .iter()
                .all(|&(i, j)| total.priority(s).contains(i, j)));
        }
        let prof = witness_extension(&total, &[da]).unwrap();
        assert_eq!(prof.to_priorities(), total.priorities());
        assert!(is_extension(prof.order(SchoolId(0)), &aug[0].relation().unwrap()).unwrap());
    }

    #[test]
    fn example2_every_stable_matching_has_a_witness() {
        let p = fixtures::example2();
        for mu in stable_set_oracle(&p).unwrap() {
            let prof = witness_extension(&p, std::slice::from_ref(&mu)).unwrap();
            let under = p.with_priorities(prof.to_priorities()).unwrap();
            assert!(stability_report(&under, &mu).unwrap().stable);
        }
    }
}
