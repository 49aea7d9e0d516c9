use super::ExtensionProfile;
use crate::error::{Error, Result};
use crate::model::{Assignment, Matching, Problem, SchoolId};
use crate::relations::{StudentId, TotalOrder};

/// Student-proposing deferred acceptance. Every school priority must be a
/// total order.
pub fn deferred_acceptance(prob: &Problem) -> Result<Matching> {
    let orders = prob
        .schools()
        .map(|s| {
            TotalOrder::from_relation(prob.priority(s)).ok_or(Error::NotTotalOrder { school: s })
        })
        .collect::<Result<Vec<_>>>()?;
    deferred_acceptance_with(prob, &ExtensionProfile::from_orders_unchecked(orders))
}

/// Deferred acceptance with schools ranking students by `profile`.
pub fn deferred_acceptance_with(prob: &Problem, profile: &ExtensionProfile) -> Result<Matching> {
    if profile.orders().len() != prob.num_schools()
        || profile
            .orders()
            .iter()
            .any(|o| o.len() != prob.num_students())
    {
        return Err(Error::invalid("extension profile does not fit the problem"));
    }
    let prefs: Vec<Vec<SchoolId>> = prob
        .preferences()
        .iter()
        .map(|p| p.ranked().to_vec())
        .collect();
    let market = Market {
        prefs: &prefs,
        capacities: prob.capacities(),
        orders: profile.orders(),
        active_students: &vec![true; prob.num_students()],
        active_schools: &vec![true; prob.num_schools()],
    };
    let mu = Matching::from_vec_unchecked(market.run());
    debug_assert!(stable_under_orders(prob, profile.orders(), &mu));
    Ok(mu)
}

/// A (sub)market for deferred acceptance: working preference lists, and the
/// students and schools still taking part.
pub(crate) struct Market<'a> {
    pub prefs: &'a [Vec<SchoolId>],
    pub capacities: &'a [usize],
    pub orders: &'a [TotalOrder],
    pub active_students: &'a [bool],
    pub active_schools: &'a [bool],
}

impl Market<'_> {
    /// Simultaneous-rounds DA. Inactive students stay unassigned; inactive
    /// schools are skipped in preference lists.
    pub fn run(&self) -> Vec<Assignment> {
        let n = self.prefs.len();
        let m = self.capacities.len();
        let mut next = vec![0usize; n];
        let mut held: Vec<Vec<StudentId>> = vec![Vec::new(); m];
        let mut holding = vec![false; n];
        let mut proposals: Vec<Vec<StudentId>> = vec![Vec::new(); m];
        loop {
            let mut any = false;
            for i in 0..n {
                if !self.active_students[i] || holding[i] {
                    continue;
                }
                let list = &self.prefs[i];
                while next[i] < list.len() && !self.active_schools[list[next[i]].0] {
                    next[i] += 1;
                }
                if let Some(&s) = list.get(next[i]) {
                    proposals[s.0].push(StudentId(i));
                    any = true;
                }
            }
            if !any {
                break;
            }
            for s in 0..m {
                if proposals[s].is_empty() {
                    continue;
                }
                let pool = &mut held[s];
                for &i in &proposals[s] {
                    pool.push(i);
                    holding[i.0] = true;
                }
                proposals[s].clear();
                let order = &self.orders[s];
                pool.sort_by_key(|&i| order.position(i));
                for i in pool.drain(self.capacities[s].min(pool.len())..) {
                    holding[i.0] = false;
                    next[i.0] += 1;
                }
            }
        }
        let mut out = vec![None; n];
        for (s, pool) in held.iter().enumerate() {
            for &i in pool {
                out[i.0] = Some(SchoolId(s));
            }
        }
        out
    }
}

/// Stability of `mu` when school `s` ranks students by `orders[s]`.
pub(crate) fn stable_under_orders(prob: &Problem, orders: &[TotalOrder], mu: &Matching) -> bool {
    if !prob
        .students()
        .all(|i| prob.weakly_prefers(i, mu.school_of(i), None))
    {
        return false;
    }
    for s in prob.schools() {
        let roster = mu.roster(s);
        let worst = roster.iter().map(|&j| orders[s.0].position(j)).max();
        for i in prob.students() {
            let current = mu.school_of(i);
            if current == Some(s) || !prob.prefers(i, Some(s), current) {
                continue;
            }
            if roster.len() < prob.capacity(s) {
                return false;
            }
            if worst.is_some_and(|w| orders[s.0].position(i) < w) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mechanisms::enumerate_extension_profiles;
    use crate::model::{is_stable, sosm_set_oracle, PreferenceOrder};
    use crate::relations::PriorityRelation;

    #[test]
    fn rejects_partial_priorities() {
        let p = fixtures::example1();
        assert!(matches!(
            deferred_acceptance(&p),
            Err(Error::NotTotalOrder {
                school: SchoolId(0)
            })
        ));
    }

    #[test]
    fn single_student_gets_top_choice() {
        let p = Problem::new(
            vec!["a".into()],
            vec!["x".into(), "y".into()],
            vec![1, 1],
            vec![PreferenceOrder::new(vec![SchoolId(1), SchoolId(0)]).unwrap()],
            vec![PriorityRelation::empty(1), PriorityRelation::empty(1)],
        )
        .unwrap();
        let mu = deferred_acceptance(&p).unwrap();
        assert_eq!(mu.school_of(StudentId(0)), Some(SchoolId(1)));
    }

    #[test]
    fn example2_target_profiles_give_mu() {
        let p = fixtures::example2();
        let mu = fixtures::example2_mu(&p);
        for prof in enumerate_extension_profiles(p.priorities(), 10_000).unwrap() {
            let out = deferred_acceptance_with(&p, &prof).unwrap();
            assert_eq!(
                out == mu,
                fixtures::example2_target_conditions(&p, prof.orders()),
                "profile {prof:?}"
            );
        }
    }

    #[test]
    fn da_is_the_unique_sosm_for_total_profiles() {
        let p = fixtures::example2();
        for prof in enumerate_extension_profiles(p.priorities(), 10_000)
            .unwrap()
            .into_iter()
            .step_by(97)
        {
            let total = p.with_priorities(prof.to_priorities()).unwrap();
            let da = deferred_acceptance(&total).unwrap();
            assert!(is_stable(&total, &da));
            assert!(is_stable(&p, &da));
            let sosm = sosm_set_oracle(&total).unwrap();
            assert_eq!(sosm.into_iter().collect::<Vec<_>>(), vec![da]);
        }
    }

    #[test]
    fn profile_shape_checked() {
        let p = fixtures::example2();
        let prof = ExtensionProfile::from_orders_unchecked(vec![TotalOrder::identity(4)]);
        assert!(deferred_acceptance_with(&p, &prof).is_err());
    }
}
