use serde::Serialize;

use super::{Matching, Problem, SchoolId};
use crate::error::Result;
use crate::relations::StudentId;

/// Every way a matching fails to be stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub individually_rational: bool,
    /// `(i, s)`: `i` prefers `s` to their assignment and `s` has a free seat.
    pub wasteful_witnesses: Vec<(StudentId, SchoolId)>,
    /// `(i, j, s)`: `j` holds a seat at `s` that `i` weakly desires although
    /// `i` has higher priority at `s`.
    pub violation_witnesses: Vec<(StudentId, StudentId, SchoolId)>,
    pub stable: bool,
}

pub fn stability_report(prob: &Problem, mu: &Matching) -> Result<StabilityReport> {
    mu.validate(prob)?;
    let individually_rational = prob
        .students()
        .all(|i| prob.weakly_prefers(i, mu.school_of(i), None));
    let mut wasteful_witnesses = Vec::new();
    let mut violation_witnesses = Vec::new();
    for s in prob.schools() {
        let roster = mu.roster(s);
        let has_seat = roster.len() < prob.capacity(s);
        let rel = prob.priority(s);
        for i in prob.students() {
            let current = mu.school_of(i);
            if has_seat && prob.prefers(i, Some(s), current) {
                wasteful_witnesses.push((i, s));
            }
            if current == Some(s) || !prob.weakly_prefers(i, Some(s), current) {
                continue;
            }
            for &j in &roster {
                if rel.contains(i, j) {
                    violation_witnesses.push((i, j, s));
                }
            }
        }
    }
    wasteful_witnesses.sort();
    violation_witnesses.sort();
    let stable =
        individually_rational && wasteful_witnesses.is_empty() && violation_witnesses.is_empty();
    Ok(StabilityReport {
        individually_rational,
        wasteful_witnesses,
        violation_witnesses,
        stable,
    })
}

/// Allocation-free stability test. `mu` must already be valid for `prob`.
pub fn is_stable(prob: &Problem, mu: &Matching) -> bool {
    if !prob
        .students()
        .all(|i| prob.weakly_prefers(i, mu.school_of(i), None))
    {
        return false;
    }
    for s in prob.schools() {
        let full = mu.roster_size(s) >= prob.capacity(s);
        let rel = prob.priority(s);
        for i in prob.students() {
            let current = mu.school_of(i);
            if current == Some(s) || !prob.prefers(i, Some(s), current) {
                continue;
            }
            if !full {
                return false;
            }
            let blocked = prob
                .students()
                .any(|j| mu.school_of(j) == Some(s) && rel.contains(i, j));
            if blocked {
                return false;
            }
        }
    }
    true
}

/// `better(i) R_i worse(i)` for every student.
pub fn weakly_dominates(prob: &Problem, better: &Matching, worse: &Matching) -> bool {
    prob.students()
        .all(|i| prob.weakly_prefers(i, better.school_of(i), worse.school_of(i)))
}

/// `better` Pareto dominates `worse`: nobody is worse off and someone is
/// strictly better off.
pub fn pareto_dominates(prob: &Problem, better: &Matching, worse: &Matching) -> bool {
    weakly_dominates(prob, better, worse)
        && prob
            .students()
            .any(|i| prob.prefers(i, better.school_of(i), worse.school_of(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::PreferenceOrder;
    use crate::relations::PriorityRelation;

    fn assign(prob: &Problem, pairs: &[(&str, Option<&str>)]) -> Matching {
        let mut a = vec![None; prob.num_students()];
        for (i, s) in pairs {
            a[prob.student_id(i).unwrap().0] = s.map(|s| prob.school_id(s).unwrap());
        }
        Matching::new(prob, a).unwrap()
    }

    #[test]
    fn example1_mu_is_stable() {
        let p = fixtures::example1();
        let mu = assign(&p, &[("i0", Some("s")), ("i2", Some("s'"))]);
        let r = stability_report(&p, &mu).unwrap();
        assert!(r.stable, "{r:?}");
        assert!(is_stable(&p, &mu));
    }

    #[test]
    fn example1_mu_prime_is_stable() {
        let p = fixtures::example1();
        let mu = assign(&p, &[("i1", Some("s")), ("i2", Some("s'"))]);
        let r = stability_report(&p, &mu).unwrap();
        assert!(r.stable, "{r:?}");
        assert!(r.violation_witnesses.is_empty());
    }

    #[test]
    fn empty_matching_is_wasteful() {
        let p = fixtures::example1();
        let r = stability_report(&p, &Matching::unmatched(&p)).unwrap();
        let i0 = p.student_id("i0").unwrap();
        let s = p.school_id("s").unwrap();
        assert!(r.wasteful_witnesses.contains(&(i0, s)));
        assert!(r.individually_rational);
        assert!(!r.stable);
        assert!(!is_stable(&p, &Matching::unmatched(&p)));
    }

    #[test]
    fn violation_witness_reported() {
        // i2 is unmatched, desires s' and outranks i1 there.
        let p = fixtures::example1();
        let mu = assign(&p, &[("i1", Some("s'")), ("i0", Some("s"))]);
        let r = stability_report(&p, &mu).unwrap();
        let id = |x: &str| p.student_id(x).unwrap();
        assert!(r
            .violation_witnesses
            .contains(&(id("i2"), id("i1"), p.school_id("s'").unwrap())));
        assert!(!r.stable);
        assert!(!is_stable(&p, &mu));
    }

    #[test]
    fn unacceptable_assignment_not_ir() {
        let p = fixtures::example2();
        // i4 only accepts s3
        let mu = assign(&p, &[("i4", Some("s1"))]);
        let r = stability_report(&p, &mu).unwrap();
        assert!(!r.individually_rational);
        assert!(!r.stable);
    }

    #[test]
    fn capacity_violation_is_input_error() {
        let p = fixtures::example1();
        let s = p.school_id("s");
        let bad = Matching::from_vec_unchecked(vec![s, s, None]);
        assert!(stability_report(&p, &bad).is_err());
    }

    #[test]
    fn pareto_examples() {
        let p = fixtures::example1();
        let mu = assign(&p, &[("i0", Some("s")), ("i2", Some("s'"))]);
        assert!(!pareto_dominates(&p, &mu, &mu));

        let single = Problem::new(
            vec!["a".into()],
            vec!["x".into()],
            vec![1],
            vec![PreferenceOrder::new(vec![SchoolId(0)]).unwrap()],
            vec![PriorityRelation::empty(1)],
        )
        .unwrap();
        let top = Matching::new(&single, vec![Some(SchoolId(0))]).unwrap();
        let none = Matching::unmatched(&single);
        assert!(pareto_dominates(&single, &top, &none));
        assert!(!pareto_dominates(&single, &none, &top));
    }
}
