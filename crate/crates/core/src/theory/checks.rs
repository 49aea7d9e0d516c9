use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{augment, maximal_pareto_chains, witness_extension, CheckLimits, CheckReport, Claim};
use crate::error::{Error, Result};
use crate::io::{matching_json, priorities_names, profile_json};
use crate::mechanisms::da::stable_under_orders;
use crate::mechanisms::{
    deferred_acceptance_with, eadam, enumerate_extension_profiles,
    enumerate_single_tiebreak_profiles, ExtensionProfile,
};
use crate::model::{
    enumerate_acceptable_matchings, is_stable, pareto_dominates, stability_report,
    stable_set_oracle_with, undominated, Matching, Problem,
};
use crate::relations::is_extension;

/// Turns a guard failure into a skipped report.
macro_rules! guarded {
    ($claim:expr, $prob:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e @ Error::GuardExceeded { .. }) => {
                return Ok(CheckReport::skipped($claim, $prob, &e))
            }
            Err(e) => return Err(e),
        }
    };
}

fn matchings_json<'a>(prob: &Problem, set: impl IntoIterator<Item = &'a Matching>) -> Value {
    Value::Array(set.into_iter().map(|mu| matching_json(prob, mu)).collect())
}

/// Individually rational, non-wasteful matchings. Under a total-order
/// profile stability adds only fairness, so these are the candidates for
/// every `S` of an extension profile.
fn fairness_candidates(prob: &Problem, limits: &CheckLimits) -> Result<Vec<Matching>> {
    Ok(enumerate_acceptable_matchings(prob, limits.matchings)?
        .filter(|mu| {
            prob.schools().all(|s| {
                mu.roster_size(s) >= prob.capacity(s)
                    || !prob
                        .students()
                        .any(|i| prob.prefers(i, Some(s), mu.school_of(i)))
            })
        })
        .collect())
}

/// For each profile, its stable set and SOSM set, unioned over the profiles.
/// The first profile supporting each stable matching is kept for witnesses.
struct ProfileUnion {
    stable: BTreeMap<Matching, ExtensionProfile>,
    sosm: BTreeSet<Matching>,
}

fn union_over_profiles(
    prob: &Problem,
    candidates: &[Matching],
    profiles: &[ExtensionProfile],
) -> ProfileUnion {
    let per_profile: Vec<(BTreeSet<Matching>, BTreeSet<Matching>)> = profiles
        .par_iter()
        .map(|prof| {
            let stable: BTreeSet<Matching> = candidates
                .iter()
                .filter(|mu| stable_under_orders(prob, prof.orders(), mu))
                .cloned()
                .collect();
            let sosm = undominated(prob, &stable);
            (stable, sosm)
        })
        .collect();
    let mut out = ProfileUnion {
        stable: BTreeMap::new(),
        sosm: BTreeSet::new(),
    };
    for (prof, (stable, sosm)) in profiles.iter().zip(per_profile) {
        for mu in stable {
            out.stable.entry(mu).or_insert_with(|| prof.clone());
        }
        out.sosm.extend(sosm);
    }
    out
}

/// Every matching stable under some extension profile is stable.
pub fn check_lemma1(prob: &Problem, limits: &CheckLimits) -> Result<CheckReport> {
    let claim = Claim::Lemma1;
    let profiles = guarded!(
        claim,
        prob,
        enumerate_extension_profiles(prob.priorities(), limits.max_profiles)
    );
    let candidates = guarded!(claim, prob, fairness_candidates(prob, limits));
    let union = union_over_profiles(prob, &candidates, &profiles);
    for (mu, prof) in &union.stable {
        if !is_stable(prob, mu) {
            return Ok(CheckReport::counterexample(
                claim,
                prob,
                "a matching stable under an extension profile is not stable",
                json!({
                    "matching": matching_json(prob, mu),
                    "profile": profile_json(prob, prof),
                    "stability": stability_report(prob, mu)?,
                }),
            ));
        }
    }
    Ok(CheckReport::holds(
        claim,
        prob,
        format!(
            "{} profiles; {} matchings stable under some profile, all stable",
            profiles.len(),
            union.stable.len()
        ),
    ))
}

/// The stable set is nonempty.
pub fn check_corollary1(prob: &Problem, limits: &CheckLimits) -> Result<CheckReport> {
    let claim = Claim::Cor1;
    let stable = guarded!(claim, prob, stable_set_oracle_with(prob, limits.matchings));
    if stable.is_empty() {
        return Ok(CheckReport::counterexample(
            claim,
            prob,
            "no stable matching",
            json!({}),
        ));
    }
    Ok(CheckReport::holds(
        claim,
        prob,
        format!("{} stable matchings", stable.len()),
    ))
}

/// The stable set is the union of the stable sets of the extension
/// profiles, and every SOSM is an SOSM under some profile.
pub fn check_corollary2(prob: &Problem, limits: &CheckLimits) -> Result<CheckReport> {
    let claim = Claim::Cor2;
    let profiles = guarded!(
        claim,
        prob,
        enumerate_extension_profiles(prob.priorities(), limits.max_profiles)
    );
    let stable = guarded!(claim, prob, stable_set_oracle_with(prob, limits.matchings));
    let candidates = guarded!(claim, prob, fairness_candidates(prob, limits));
    let sosm = undominated(prob, &stable);
    let union = union_over_profiles(prob, &candidates, &profiles);
    let missing: Vec<&Matching> = stable
        .iter()
        .filter(|mu| !union.stable.contains_key(*mu))
        .collect();
    let extra: Vec<Value> = union
        .stable
        .iter()
        .filter(|(mu, _)| !stable.contains(*mu))
        .map(|(mu, prof)| json!({"matching": matching_json(prob, mu), "profile": profile_json(prob, prof)}))
        .collect();
    let sosm_missing: Vec<&Matching> = sosm.difference(&union.sosm).collect();
    if missing.is_empty() && extra.is_empty() && sosm_missing.is_empty() {
        return Ok(CheckReport::holds(
            claim,
            prob,
            format!(
                "{} profiles; |S| = {} equals the union; {} SOSMs all covered",
                profiles.len(),
                stable.len(),
                sosm.len()
            ),
        ));
    }
    Ok(CheckReport::counterexample(
        claim,
        prob,
        format!(
            "{} stable matchings unsupported by any of {} profiles, {} profile-stable matchings not stable, {} SOSMs uncovered",
            missing.len(),
            profiles.len(),
            extra.len(),
            sosm_missing.len()
        ),
        json!({
            "stable_not_in_union": matchings_json(prob, missing),
            "union_not_stable": extra,
            "sosm_not_in_union": matchings_json(prob, sosm_missing),
        }),
    ))
}

/// Every SOSM is the DA outcome of some single tiebreaking profile.
pub fn check_corollary4(prob: &Problem, limits: &CheckLimits) -> Result<CheckReport> {
    let claim = Claim::Cor4;
    let sosm = undominated(
        prob,
        &guarded!(claim, prob, stable_set_oracle_with(prob, limits.matchings)),
    );
    let profiles: Vec<ExtensionProfile> = guarded!(
        claim,
        prob,
        enumerate_single_tiebreak_profiles(prob.priorities())
    )
    .into_iter()
    .collect();
    let outcomes = profiles
        .par_iter()
        .map(|prof| deferred_acceptance_with(prob, prof))
        .collect::<Result<BTreeSet<Matching>>>()?;
    let missing: Vec<&Matching> = sosm.iter().filter(|mu| !outcomes.contains(*mu)).collect();
    if missing.is_empty() {
        return Ok(CheckReport::holds(
            claim,
            prob,
            format!(
                "{} distinct single tiebreak profiles; all {} SOSMs reached",
                profiles.len(),
                sosm.len()
            ),
        ));
    }
    Ok(CheckReport::counterexample(
        claim,
        prob,
        format!(
            "{} of {} SOSMs reached by no single tiebreak profile ({} profiles)",
            missing.len(),
            sosm.len(),
            profiles.len()
        ),
        json!({
            "sosm_not_reached": matchings_json(prob, missing),
            "single_tiebreak_outcomes": matchings_json(prob, &outcomes),
        }),
    ))
}

/// Outcomes of EADAM from a set of start profiles, each with the first
/// profile producing it.
fn eadam_outcomes(
    prob: &Problem,
    profiles: &[ExtensionProfile],
) -> Result<BTreeMap<Matching, ExtensionProfile>> {
    let results = profiles
        .par_iter()
        .map(|prof| eadam(prob, prof))
        .collect::<Result<Vec<Matching>>>()?;
    let mut out = BTreeMap::new();
    for (prof, mu) in profiles.iter().zip(results) {
        out.entry(mu).or_insert_with(|| prof.clone());
    }
    Ok(out)
}

/// The SOSM set equals the set of EADAM outcomes over all start profiles.
pub fn check_corollary5(prob: &Problem, limits: &CheckLimits) -> Result<CheckReport> {
    let claim = Claim::Cor5;
    let profiles = guarded!(
        claim,
        prob,
        enumerate_extension_profiles(prob.priorities(), limits.max_profiles)
    );
    let sosm = undominated(
        prob,
        &guarded!(claim, prob, stable_set_oracle_with(prob, limits.matchings)),
    );
    let outcomes = eadam_outcomes(prob, &profiles)?;
    let missing: Vec<&Matching> = sosm
        .iter()
        .filter(|mu| !outcomes.contains_key(*mu))
        .collect();
    let extra: Vec<Value> = outcomes
        .iter()
        .filter(|(mu, _)| !sosm.contains(*mu))
        .map(|(mu, prof)| json!({"matching": matching_json(prob, mu), "profile": profile_json(prob, prof)}))
        .collect();
    if missing.is_empty() && extra.is_empty() {
        return Ok(CheckReport::holds(
            claim,
            prob,
            format!(
                "{} profiles; EADAM outcomes equal the {} SOSMs",
                profiles.len(),
                sosm.len()
            ),
        ));
    }
    Ok(CheckReport::counterexample(
        claim,
        prob,
        format!(
            "{} SOSMs never produced, {} EADAM outcomes not SOSMs ({} profiles)",
            missing.len(),
            extra.len(),
            profiles.len()
        ),
        json!({
            "sosm_not_produced": matchings_json(prob, missing),
            "outcome_not_sosm": extra,
        }),
    ))
}

/// SOSMs weakly improving on a stable `mu` are exactly the EADAM outcomes
/// from extensions of the priorities augmented by `mu`.
pub fn check_corollary6(
    prob: &Problem,
    mu: &Matching,
    limits: &CheckLimits,
) -> Result<CheckReport> {
    let claim = Claim::Cor6;
    mu.validate(prob)?;
    if !is_stable(prob, mu) {
        return Err(Error::invalid("matching is not stable"));
    }
    let sosm = undominated(
        prob,
        &guarded!(claim, prob, stable_set_oracle_with(prob, limits.matchings)),
    );
    let lhs: BTreeSet<Matching> = sosm
        .into_iter()
        .filter(|nu| nu == mu || pareto_dominates(prob, nu, mu))
        .collect();
    let augmented = augment(prob, std::slice::from_ref(mu))?;
    let (rhs, profile_count, aug_json) = if augmented.iter().all(|a| a.asymmetric && a.acyclic) {
        let rels = augmented
            .iter()
            .map(|a| a.relation())
            .collect::<Result<Vec<_>>>()?;
        let aug_json = serde_json::to_value(priorities_names(prob, &rels))?;
        let profiles = guarded!(
            claim,
            prob,
            enumerate_extension_profiles(&rels, limits.max_profiles)
        );
        (eadam_outcomes(prob, &profiles)?, profiles.len(), aug_json)
    } else {
        (BTreeMap::new(), 0, Value::Null)
    };
    let rhs_set: BTreeSet<&Matching> = rhs.keys().collect();
    if lhs.iter().collect::<BTreeSet<_>>() == rhs_set {
        return Ok(CheckReport::holds(
            claim,
            prob,
            format!(
                "{} profiles of the augmented priorities; both sides have {} matchings",
                profile_count,
                lhs.len()
            ),
        ));
    }
    Ok(CheckReport::counterexample(
        claim,
        prob,
        format!(
            "sides differ: {} SOSMs weakly improving, {} EADAM outcomes",
            lhs.len(),
            rhs.len()
        ),
        json!({
            "matching": matching_json(prob, mu),
            "augmented_priorities": aug_json,
            "sosm_side": matchings_json(prob, &lhs),
            "eadam_side": rhs
                .iter()
                .map(|(nu, prof)| json!({"matching": matching_json(prob, nu), "profile": profile_json(prob, prof)}))
                .collect::<Vec<_>>(),
        }),
    ))
}

/// Every maximal Pareto chain of stable matchings has acyclic augmented
/// priorities and a common supporting extension profile.
pub fn check_theorem1(prob: &Problem, limits: &CheckLimits) -> Result<CheckReport> {
    let claim = Claim::Thm1;
    let stable = guarded!(claim, prob, stable_set_oracle_with(prob, limits.matchings));
    let chains = guarded!(
        claim,
        prob,
        maximal_pareto_chains(prob, &stable, limits.max_chains)
    );
    let failures = chains
        .par_iter()
        .map(|chain| chain_failure(prob, chain))
        .collect::<Result<Vec<Option<(String, Value)>>>>()?;
    if let Some((detail, witness)) = failures.into_iter().flatten().next() {
        return Ok(CheckReport::counterexample(claim, prob, detail, witness));
    }
    let longest = chains.iter().map(Vec::len).max().unwrap_or(0);
    Ok(CheckReport::holds(
        claim,
        prob,
        format!(
            "{} maximal chains over {} stable matchings, longest {}",
            chains.len(),
            stable.len(),
            longest
        ),
    ))
}

fn chain_failure(prob: &Problem, chain: &[Matching]) -> Result<Option<(String, Value)>> {
    let chain_json = matchings_json(prob, chain);
    let augmented = match augment(prob, chain) {
        Ok(a) => a,
        Err(Error::Invariant(msg)) => return Ok(Some((msg, json!({"chain": chain_json})))),
        Err(e) => return Err(e),
    };
    if let Some(s) = prob.schools().find(|s| !augmented[s.0].acyclic) {
        let aug = &augmented[s.0];
        return Ok(Some((
            format!("augmented priority at {} is cyclic", prob.school_name(s)),
            json!({
                "chain": chain_json,
                "school": prob.school_name(s),
                "augmented_pairs": aug
                    .pairs
                    .iter()
                    .map(|&(i, j)| [prob.student_name(i), prob.student_name(j)])
                    .collect::<Vec<_>>(),
            }),
        )));
    }
    let profile = witness_extension(prob, chain)?;
    for s in prob.schools() {
        let order = profile.order(s);
        if !is_extension(order, &augmented[s.0].relation()?)?
            || !is_extension(order, prob.priority(s))?
        {
            return Ok(Some((
                format!(
                    "witness order at {} does not extend the augmented priority",
                    prob.school_name(s)
                ),
                json!({"chain": chain_json, "profile": profile_json(prob, &profile)}),
            )));
        }
    }
    let under = prob.with_priorities(profile.to_priorities())?;
    for (k, mu) in chain.iter().enumerate() {
        let report = stability_report(&under, mu)?;
        if !report.stable {
            return Ok(Some((
                format!("chain member {k} is not stable under the witness profile"),
                json!({
                    "chain": chain_json,
                    "profile": profile_json(prob, &profile),
                    "member": k,
                    "stability": report,
                }),
            )));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::sosm_set_oracle;
    use crate::theory::Verdict;

    #[test]
    fn example1_verdicts() {
        let p = fixtures::example1();
        let limits = CheckLimits::default();
        assert_eq!(check_lemma1(&p, &limits).unwrap().verdict, Verdict::Holds);
        assert_eq!(
            check_corollary1(&p, &limits).unwrap().verdict,
            Verdict::Holds
        );
        let cor2 = check_corollary2(&p, &limits).unwrap();
        assert_eq!(cor2.verdict, Verdict::Counterexample);
        let mu = matching_json(&p, &fixtures::example1_mu(&p));
        assert!(cor2.witness["stable_not_in_union"]
            .as_array()
            .unwrap()
            .contains(&mu));
        assert_eq!(
            check_theorem1(&p, &limits).unwrap().verdict,
            Verdict::Counterexample
        );
    }

    #[test]
    fn example2_verdicts() {
        let p = fixtures::example2();
        let limits = CheckLimits {
            max_profiles: 10_000,
            ..CheckLimits::default()
        };
        for report in [
            check_lemma1(&p, &limits),
            check_corollary2(&p, &limits),
            check_corollary5(&p, &limits),
            check_theorem1(&p, &limits),
        ] {
            let report = report.unwrap();
            assert_eq!(
                report.verdict,
                Verdict::Holds,
                "{}: {}",
                report.claim,
                report.detail
            );
        }
    }

    #[test]
    fn corollary6_on_sosms_is_a_singleton() {
        let p = fixtures::example2();
        let limits = CheckLimits {
            max_profiles: 10_000,
            ..CheckLimits::default()
        };
        for mu in sosm_set_oracle(&p).unwrap() {
            let report = check_corollary6(&p, &mu, &limits).unwrap();
            assert_eq!(report.verdict, Verdict::Holds, "{}", report.detail);
        }
    }

    #[test]
    fn example2_sosms_all_reached_by_single_tiebreaks() {
        // The SMO tiebreak keeps i1 behind i4 at s3, so the identity rank
        // already yields the profile that produces mu.
        let p = fixtures::example2();
        let report = check_corollary4(&p, &CheckLimits::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Holds, "{}", report.detail);
    }

    #[test]
    fn corollary6_rejects_unstable_input() {
        let p = fixtures::example2();
        assert!(check_corollary6(&p, &Matching::unmatched(&p), &CheckLimits::default()).is_err());
    }

    #[test]
    fn over_guard_is_skipped() {
        let p = fixtures::example2();
        let limits = CheckLimits {
            max_profiles: 10,
            ..CheckLimits::default()
        };
        assert_eq!(
            check_corollary5(&p, &limits).unwrap().verdict,
            Verdict::Skipped
        );
    }
}
