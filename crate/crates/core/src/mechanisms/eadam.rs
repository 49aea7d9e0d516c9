//! EADAM in the round structure of Tang and Yu, run against possibly partial
//! priorities.
//!
//! Round 0 is deferred acceptance under an extension profile. Each later
//! round settles the underdemanded schools of the previous outcome (together
//! with every unmatched student, who sits at the null school), strikes
//! schools from the lists of students whose priority a removed student
//! outranks, and reruns deferred acceptance on what remains. The extension
//! profile is only consulted inside the DA reruns; the strike rule reads the
//! original priorities.

use serde::Serialize;

use super::da::Market;
use super::ExtensionProfile;
use crate::error::{Error, Result};
use crate::model::{Assignment, Matching, Problem, SchoolId};
use crate::relations::{classify, StudentId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EadamConfig {
    /// Repeat the settling step within a round until no further school is
    /// underdemanded, instead of a single pass.
    pub settle_to_fixpoint: bool,
}

/// `student` lost `school` from their list because `because_of`, a removed
/// student who desires `school`, outranks them there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PreferenceDeletion {
    pub student: StudentId,
    pub school: SchoolId,
    pub because_of: StudentId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EadamRound {
    pub round: usize,
    pub settled_schools: Vec<SchoolId>,
    /// Students removed this round with their final assignment.
    pub removed_students: Vec<(StudentId, Assignment)>,
    pub deletions: Vec<PreferenceDeletion>,
    /// DA outcome for the students still present after this round.
    pub matching: Vec<(StudentId, Assignment)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EadamTrace {
    pub rounds: Vec<EadamRound>,
    pub outcome: Matching,
}

impl EadamTrace {
    /// The round-0 deferred acceptance outcome.
    pub fn round_zero(&self) -> Vec<Assignment> {
        self.rounds[0].matching.iter().map(|&(_, a)| a).collect()
    }
}

pub fn eadam(prob: &Problem, start: &ExtensionProfile) -> Result<Matching> {
    eadam_with(prob, start, EadamConfig::default())
}

pub fn eadam_with(
    prob: &Problem,
    start: &ExtensionProfile,
    config: EadamConfig,
) -> Result<Matching> {
    run(prob, start, config, false).map(|t| t.outcome)
}

pub fn eadam_trace(
    prob: &Problem,
    start: &ExtensionProfile,
    config: EadamConfig,
) -> Result<EadamTrace> {
    run(prob, start, config, true)
}

fn run(
    prob: &Problem,
    start: &ExtensionProfile,
    config: EadamConfig,
    record: bool,
) -> Result<EadamTrace> {
    for s in prob.schools() {
        if !classify(prob.priority(s)).acyclic {
            return Err(Error::CyclicRelation { school: Some(s) });
        }
    }
    if !start.extends(prob.priorities()) {
        return Err(Error::invalid(
            "start profile is not an extension of the problem's priorities",
        ));
    }
    let n = prob.num_students();
    let m = prob.num_schools();
    let mut prefs: Vec<Vec<SchoolId>> = prob
        .preferences()
        .iter()
        .map(|p| p.ranked().to_vec())
        .collect();
    let mut student_live = vec![true; n];
    let mut school_live = vec![true; m];
    let mut settled: Vec<Assignment> = vec![None; n];
    let mut rounds = Vec::new();

    let mut current = Market {
        prefs: &prefs,
        capacities: prob.capacities(),
        orders: start.orders(),
        active_students: &student_live,
        active_schools: &school_live,
    }
    .run();
    if record {
        rounds.push(EadamRound {
            round: 0,
            settled_schools: Vec::new(),
            removed_students: Vec::new(),
            deletions: Vec::new(),
            matching: live_matching(&current, &student_live),
        });
    }

    let mut round = 0;
    while student_live.iter().any(|&x| x) || school_live.iter().any(|&x| x) {
        round += 1;
        if round > n + m + 1 {
            return Err(Error::Invariant(format!(
                "EADAM made no progress by round {round}"
            )));
        }

        // Step 1: settle underdemanded schools and the null school.
        let mut settled_schools = Vec::new();
        let mut removed = Vec::new();
        // The first pass counts demand from everyone present, including the
        // students about to leave through the null school.
        let mut demand = student_live.clone();
        for i in 0..n {
            if student_live[i] && current[i].is_none() {
                student_live[i] = false;
                removed.push((StudentId(i), None));
            }
        }
        loop {
            let under: Vec<SchoolId> = (0..m)
                .map(SchoolId)
                .filter(|&s| school_live[s.0])
                .filter(|&s| !(0..n).any(|i| demand[i] && desires(&prefs[i], current[i], s)))
                .collect();
            if under.is_empty() {
                break;
            }
            for &s in &under {
                school_live[s.0] = false;
                for i in 0..n {
                    if student_live[i] && current[i] == Some(s) {
                        student_live[i] = false;
                        removed.push((StudentId(i), Some(s)));
                    }
                }
            }
            settled_schools.extend(under);
            if !config.settle_to_fixpoint {
                break;
            }
            demand.clone_from(&student_live);
        }
        removed.sort();
        settled_schools.sort();
        for &(i, a) in &removed {
            settled[i.0] = a;
        }

        // Step 2: strike schools a removed student desires from the lists of
        // remaining students they outrank there.
        let mut deletions = Vec::new();
        for &(i, a) in &removed {
            for s in prob.schools() {
                if !school_live[s.0] || !prob.prefers(i, Some(s), a) {
                    continue;
                }
                let rel = prob.priority(s);
                for j in 0..n {
                    if student_live[j] && rel.contains(i, StudentId(j)) {
                        if let Some(pos) = prefs[j].iter().position(|&t| t == s) {
                            prefs[j].remove(pos);
                            deletions.push(PreferenceDeletion {
                                student: StudentId(j),
                                school: s,
                                because_of: i,
                            });
                        }
                    }
                }
            }
        }

        // Step 3: rerun DA on the subproblem.
        current = Market {
            prefs: &prefs,
            capacities: prob.capacities(),
            orders: start.orders(),
            active_students: &student_live,
            active_schools: &school_live,
        }
        .run();
        if record {
            rounds.push(EadamRound {
                round,
                settled_schools,
                removed_students: removed,
                deletions,
                matching: live_matching(&current, &student_live),
            });
        }
    }
    let outcome = Matching::new(prob, settled)?;
    Ok(EadamTrace { rounds, outcome })
}

/// `s` appears in the working list strictly above the current assignment.
fn desires(list: &[SchoolId], current: Assignment, s: SchoolId) -> bool {
    for &t in list {
        if Some(t) == current {
            return false;
        }
        if t == s {
            return true;
        }
    }
    false
}

fn live_matching(current: &[Assignment], live: &[bool]) -> Vec<(StudentId, Assignment)> {
    current
        .iter()
        .enumerate()
        .filter(|(i, _)| live[*i])
        .map(|(i, &a)| (StudentId(i), a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mechanisms::{
        deferred_acceptance_with, enumerate_extension_profiles, extend_profile,
    };
    use crate::model::{sosm_set_oracle, weakly_dominates, PreferenceOrder};
    use crate::relations::{LowestIndex, PriorityRelation, TotalOrder};

    #[test]
    fn example2_target_profile_is_a_fixed_point() {
        let p = fixtures::example2();
        let mu = fixtures::example2_mu(&p);
        let target = enumerate_extension_profiles(p.priorities(), 10_000)
            .unwrap()
            .into_iter()
            .find(|prof| fixtures::example2_target_conditions(&p, prof.orders()))
            .unwrap();
        assert_eq!(deferred_acceptance_with(&p, &target).unwrap(), mu);
        assert_eq!(eadam(&p, &target).unwrap(), mu);
    }

    #[test]
    fn example2_every_start_lands_in_sosm_set() {
        let p = fixtures::example2();
        let sosm = sosm_set_oracle(&p).unwrap();
        for prof in enumerate_extension_profiles(p.priorities(), 10_000).unwrap() {
            let out = eadam(&p, &prof).unwrap();
            assert!(sosm.contains(&out), "{out:?}");
            let da = deferred_acceptance_with(&p, &prof).unwrap();
            assert!(weakly_dominates(&p, &out, &da));
        }
    }

    #[test]
    fn rejects_non_extension_start() {
        let p = fixtures::example1();
        let bad = ExtensionProfile::from_orders_unchecked(vec![TotalOrder::identity(3); 2]);
        assert!(matches!(eadam(&p, &bad), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn rejects_cyclic_priorities() {
        let p = fixtures::example1();
        let cyc = PriorityRelation::new(
            3,
            [(0, 1), (1, 2), (2, 0)].map(|(a, b)| (StudentId(a), StudentId(b))),
        )
        .unwrap();
        let bad = p
            .with_priorities(vec![cyc, p.priority(SchoolId(1)).clone()])
            .unwrap();
        let start = ExtensionProfile::from_orders_unchecked(vec![TotalOrder::identity(3); 2]);
        assert!(matches!(
            eadam(&bad, &start),
            Err(Error::CyclicRelation {
                school: Some(SchoolId(0))
            })
        ));
    }

    #[test]
    fn single_school_takes_one_or_two_rounds() {
        let p = Problem::new(
            (0..3).map(|k| format!("i{k}")).collect(),
            vec!["x".into()],
            vec![1],
            vec![PreferenceOrder::new(vec![SchoolId(0)]).unwrap(); 3],
            vec![PriorityRelation::empty(3)],
        )
        .unwrap();
        let start = extend_profile(p.priorities(), &mut LowestIndex).unwrap();
        let trace = eadam_trace(&p, &start, EadamConfig::default()).unwrap();
        let later = trace.rounds.len() - 1;
        assert!((1..=2).contains(&later), "{later} rounds");
        assert_eq!(trace.outcome.school_of(StudentId(0)), Some(SchoolId(0)));
    }

    #[test]
    fn trace_settlements_match_outcome() {
        let p = fixtures::example2();
        for prof in enumerate_extension_profiles(p.priorities(), 10_000)
            .unwrap()
            .into_iter()
            .step_by(53)
        {
            for fixpoint in [false, true] {
                let config = EadamConfig {
                    settle_to_fixpoint: fixpoint,
                };
                let trace = eadam_trace(&p, &prof, config).unwrap();
                assert_eq!(eadam_with(&p, &prof, config).unwrap(), trace.outcome);
                assert_eq!(
                    trace.round_zero(),
                    deferred_acceptance_with(&p, &prof).unwrap().assignment()
                );
                let mut seen = vec![false; p.num_students()];
                for r in &trace.rounds[1..] {
                    for &(i, a) in &r.removed_students {
                        assert!(!seen[i.0]);
                        seen[i.0] = true;
                        assert_eq!(trace.outcome.school_of(i), a);
                    }
                }
                assert!(seen.iter().all(|&x| x));
                assert!(trace.rounds.len() - 1 <= p.num_schools() + 1);
            }
        }
    }

    #[test]
    fn desires_reads_working_list() {
        let list = [SchoolId(2), SchoolId(0)];
        assert!(desires(&list, Some(SchoolId(0)), SchoolId(2)));
        assert!(!desires(&list, Some(SchoolId(2)), SchoolId(0)));
        assert!(desires(&list, None, SchoolId(0)));
        assert!(!desires(&list, None, SchoolId(1)));
    }
}
