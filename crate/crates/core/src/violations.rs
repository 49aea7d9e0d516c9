//! Allowed priority violations: each school may ignore a set of pairs of its
//! priority relation.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::{matching_json, profile_json};
use crate::mechanisms::{deferred_acceptance_with, extend_profile};
use crate::model::{
    enumerate_acceptable_matchings, stability_report, undominated, Matching, MatchingGuard,
    Problem, SchoolId, StabilityReport,
};
use crate::relations::{smo_extend, LowestIndex, PriorityRelation, StudentId, TotalOrder};
use crate::theory::{CheckLimits, CheckReport, Claim};

type Pair = (StudentId, StudentId);

/// `C(s)` for every school. Pairs need not belong to the priority relation;
/// such pairs have no effect.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ViolationSet {
    sets: Vec<BTreeSet<Pair>>,
}

impl ViolationSet {
    pub fn new(prob: &Problem, sets: Vec<Vec<Pair>>) -> Result<Self> {
        if sets.len() != prob.num_schools() {
            return Err(Error::invalid(format!(
                "violation set lists {} schools, expected {}",
                sets.len(),
                prob.num_schools()
            )));
        }
        let n = prob.num_students();
        for &(i, j) in sets.iter().flatten() {
            for k in [i, j] {
                if k.0 >= n {
                    return Err(Error::UnknownStudent(k));
                }
            }
        }
        Ok(Self {
            sets: sets.into_iter().map(|v| v.into_iter().collect()).collect(),
        })
    }

    pub fn empty(prob: &Problem) -> Self {
        Self {
            sets: vec![BTreeSet::new(); prob.num_schools()],
        }
    }

    /// Every pair of every school's priority is allowed.
    pub fn everything(prob: &Problem) -> Self {
        Self {
            sets: prob
                .priorities()
                .iter()
                .map(|r| r.pairs().iter().copied().collect())
                .collect(),
        }
    }

    pub fn at(&self, s: SchoolId) -> &BTreeSet<Pair> {
        &self.sets[s.0]
    }

    pub fn allows(&self, s: SchoolId, i: StudentId, j: StudentId) -> bool {
        self.sets[s.0].contains(&(i, j))
    }

    pub fn is_subset_of(&self, other: &ViolationSet) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.is_subset(b))
    }
}

/// `rel` with the allowed pairs removed.
pub fn effective_priority(rel: &PriorityRelation, allowed: &BTreeSet<Pair>) -> PriorityRelation {
    rel.without(allowed)
}

/// The problem with every school's priority reduced by `c`.
pub fn effective_problem(prob: &Problem, c: &ViolationSet) -> Result<Problem> {
    prob.with_priorities(
        prob.schools()
            .map(|s| effective_priority(prob.priority(s), c.at(s)))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialStabilityReport {
    pub partially_stable: bool,
    pub individually_rational: bool,
    pub wasteful_witnesses: Vec<(StudentId, SchoolId)>,
    /// `(i, j, s)`: `j` holds a seat at `s` that `i` desires, `i` has
    /// priority over `j` there, and the pair is not allowed.
    pub unallowed_violations: Vec<(StudentId, StudentId, SchoolId)>,
    /// Priority violations that `c` permits.
    pub allowed_violations: Vec<(StudentId, StudentId, SchoolId)>,
    /// Stability under the reduced priorities; agrees with the above.
    pub reduced: StabilityReport,
}

/// Partial stability, evaluated from the definition and, separately, as
/// stability under the reduced priorities. Disagreement is an invariant
/// failure.
pub fn partial_stability_report(
    prob: &Problem,
    c: &ViolationSet,
    mu: &Matching,
) -> Result<PartialStabilityReport> {
    mu.validate(prob)?;
    let individually_rational = prob
        .students()
        .all(|i| prob.weakly_prefers(i, mu.school_of(i), None));
    let mut wasteful_witnesses = Vec::new();
    let mut unallowed_violations = Vec::new();
    let mut allowed_violations = Vec::new();
    for s in prob.schools() {
        let free = mu.roster_size(s) < prob.capacity(s);
        for i in prob.students() {
            if !prob.prefers(i, Some(s), mu.school_of(i)) {
                continue;
            }
            if free {
                wasteful_witnesses.push((i, s));
            }
            for j in mu.roster(s) {
                if prob.priority(s).contains(i, j) {
                    if c.allows(s, i, j) {
                        allowed_violations.push((i, j, s));
                    } else {
                        unallowed_violations.push((i, j, s));
                    }
                }
            }
        }
    }
    wasteful_witnesses.sort();
    unallowed_violations.sort();
    allowed_violations.sort();
    let partially_stable =
        individually_rational && wasteful_witnesses.is_empty() && unallowed_violations.is_empty();
    let reduced = stability_report(&effective_problem(prob, c)?, mu)?;
    if reduced.stable != partially_stable {
        return Err(Error::Invariant(format!(
            "partial stability {partially_stable} but stability under reduced priorities {}",
            reduced.stable
        )));
    }
    Ok(PartialStabilityReport {
        partially_stable,
        individually_rational,
        wasteful_witnesses,
        unallowed_violations,
        allowed_violations,
        reduced,
    })
}

pub fn is_partially_stable(prob: &Problem, c: &ViolationSet, mu: &Matching) -> Result<bool> {
    Ok(partial_stability_report(prob, c, mu)?.partially_stable)
}

/// A total order and allowed set whose reduction is `rel`: the order is the
/// lowest-index sequential maximal extension, the allowed set the pairs it
/// adds.
pub fn realize_as_violation_model(rel: &PriorityRelation) -> Result<(TotalOrder, BTreeSet<Pair>)> {
    let order = smo_extend(rel, &mut LowestIndex)?;
    let allowed = order
        .to_relation()
        .pairs()
        .iter()
        .copied()
        .filter(|&(i, j)| !rel.contains(i, j))
        .collect();
    Ok((order, allowed))
}

pub fn partially_stable_set_oracle(
    prob: &Problem,
    c: &ViolationSet,
    guard: MatchingGuard,
) -> Result<BTreeSet<Matching>> {
    let reduced = effective_problem(prob, c)?;
    Ok(enumerate_acceptable_matchings(prob, guard)?
        .filter(|mu| crate::model::is_stable(&reduced, mu))
        .collect())
}

/// Partially stable matchings not Pareto dominated by another one.
pub fn constrained_efficient_set(
    prob: &Problem,
    c: &ViolationSet,
    guard: MatchingGuard,
) -> Result<BTreeSet<Matching>> {
    Ok(undominated(
        prob,
        &partially_stable_set_oracle(prob, c, guard)?,
    ))
}

/// A partially stable matching exists. The report also carries the DA
/// outcome under an extension of the reduced priorities.
pub fn check_corollary7(
    prob: &Problem,
    c: &ViolationSet,
    limits: &CheckLimits,
) -> Result<CheckReport> {
    let claim = Claim::Cor7;
    let set = match partially_stable_set_oracle(prob, c, limits.matchings) {
        Ok(set) => set,
        Err(e @ Error::GuardExceeded { .. }) => return Ok(CheckReport::skipped(claim, prob, &e)),
        Err(e) => return Err(e),
    };
    let reduced = effective_problem(prob, c)?;
    let witness = match extend_profile(reduced.priorities(), &mut LowestIndex) {
        Ok(profile) => Some((deferred_acceptance_with(prob, &profile)?, profile)),
        Err(Error::CyclicRelation { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some((mu, profile)) = &witness {
        if !is_partially_stable(prob, c, mu)? {
            return Ok(CheckReport::counterexample(
                claim,
                prob,
                "DA outcome under an extension of the reduced priorities is not partially stable",
                json!({
                    "matching": matching_json(prob, mu),
                    "profile": profile_json(&reduced, profile),
                    "report": partial_stability_report(prob, c, mu)?,
                }),
            ));
        }
    }
    if set.is_empty() {
        return Ok(CheckReport::counterexample(
            claim,
            prob,
            "no partially stable matching",
            json!({}),
        ));
    }
    Ok(CheckReport::holds(
        claim,
        prob,
        format!(
            "{} partially stable matchings{}",
            set.len(),
            if witness.is_some() {
                "; DA witness partially stable"
            } else {
                ""
            }
        ),
    ))
}
