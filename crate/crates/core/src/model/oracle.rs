//! Exhaustive enumeration of matchings and the stable/SOSM set oracles built
//! on it.

use std::collections::BTreeSet;

use super::{is_stable, pareto_dominates, Assignment, Matching, Problem, SchoolId};
use crate::error::{Error, Result};

/// Size limits for matching enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingGuard {
    pub max_students: usize,
    pub max_schools: usize,
}

impl Default for MatchingGuard {
    fn default() -> Self {
        Self {
            max_students: 7,
            max_schools: 5,
        }
    }
}

impl MatchingGuard {
    fn check(&self, prob: &Problem) -> Result<()> {
        if prob.num_students() > self.max_students {
            return Err(Error::GuardExceeded {
                what: "students in matching enumeration",
                limit: self.max_students as u128,
                actual: prob.num_students() as u128,
            });
        }
        if prob.num_schools() > self.max_schools {
            return Err(Error::GuardExceeded {
                what: "schools in matching enumeration",
                limit: self.max_schools as u128,
                actual: prob.num_schools() as u128,
            });
        }
        Ok(())
    }
}

/// Odometer over per-student option lists that skips over-capacity states.
/// Options are listed in increasing order (`None` first), so the output is
/// lexicographically sorted.
pub struct MatchingIter<'a> {
    prob: &'a Problem,
    options: Vec<Vec<Assignment>>,
    digits: Vec<usize>,
    load: Vec<usize>,
    done: bool,
}

impl<'a> MatchingIter<'a> {
    fn new(prob: &'a Problem, options: Vec<Vec<Assignment>>) -> Self {
        let digits = vec![0; options.len()];
        let mut load = vec![0; prob.num_schools()];
        for (opts, &d) in options.iter().zip(&digits) {
            if let Some(s) = opts[d] {
                load[s.0] += 1;
            }
        }
        Self {
            prob,
            options,
            digits,
            load,
            done: false,
        }
    }

    fn feasible(&self) -> bool {
        self.prob
            .schools()
            .all(|s| self.load[s.0] <= self.prob.capacity(s))
    }

    fn advance(&mut self) {
        // Rightmost student is the fastest digit.
        for k in (0..self.digits.len()).rev() {
            if let Some(s) = self.options[k][self.digits[k]] {
                self.load[s.0] -= 1;
            }
            self.digits[k] += 1;
            if self.digits[k] < self.options[k].len() {
                if let Some(s) = self.options[k][self.digits[k]] {
                    self.load[s.0] += 1;
                }
                return;
            }
            self.digits[k] = 0;
            if let Some(s) = self.options[k][0] {
                self.load[s.0] += 1;
            }
        }
        self.done = true;
    }
}

impl Iterator for MatchingIter<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        while !self.done {
            let hit = self.feasible().then(|| {
                Matching::from_vec_unchecked(
                    self.digits
                        .iter()
                        .zip(&self.options)
                        .map(|(&d, opts)| opts[d])
                        .collect(),
                )
            });
            self.advance();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}

/// Every capacity-respecting assignment of students to schools or the
/// outside option, each exactly once, in lexicographic order.
pub fn enumerate_matchings(prob: &Problem) -> Result<MatchingIter<'_>> {
    enumerate_matchings_with(prob, MatchingGuard::default())
}

pub fn enumerate_matchings_with(prob: &Problem, guard: MatchingGuard) -> Result<MatchingIter<'_>> {
    guard.check(prob)?;
    let all: Vec<Assignment> = std::iter::once(None)
        .chain(prob.schools().map(Some))
        .collect();
    Ok(MatchingIter::new(prob, vec![all; prob.num_students()]))
}

/// Capacity-respecting, individually rational matchings only.
pub fn enumerate_acceptable_matchings(
    prob: &Problem,
    guard: MatchingGuard,
) -> Result<MatchingIter<'_>> {
    guard.check(prob)?;
    let options = prob
        .students()
        .map(|i| {
            let mut acceptable: Vec<SchoolId> = prob.preference(i).ranked().to_vec();
            acceptable.sort();
            std::iter::once(None)
                .chain(acceptable.into_iter().map(Some))
                .collect()
        })
        .collect();
    Ok(MatchingIter::new(prob, options))
}

/// `S`: all stable matchings.
pub fn stable_set_oracle(prob: &Problem) -> Result<BTreeSet<Matching>> {
    stable_set_oracle_with(prob, MatchingGuard::default())
}

pub fn stable_set_oracle_with(prob: &Problem, guard: MatchingGuard) -> Result<BTreeSet<Matching>> {
    // Stable matchings are individually rational, so the restricted
    // enumeration loses nothing.
    Ok(enumerate_acceptable_matchings(prob, guard)?
        .filter(|mu| is_stable(prob, mu))
        .collect())
}

/// `f`: stable matchings not Pareto dominated by another stable matching.
pub fn sosm_set_oracle(prob: &Problem) -> Result<BTreeSet<Matching>> {
    sosm_set_oracle_with(prob, MatchingGuard::default())
}

pub fn sosm_set_oracle_with(prob: &Problem, guard: MatchingGuard) -> Result<BTreeSet<Matching>> {
    Ok(undominated(prob, &stable_set_oracle_with(prob, guard)?))
}

/// Members of `set` not Pareto dominated by another member.
pub fn undominated(prob: &Problem, set: &BTreeSet<Matching>) -> BTreeSet<Matching> {
    set.iter()
        .filter(|mu| !set.iter().any(|nu| pareto_dominates(prob, nu, mu)))
        .cloned()
        .collect()
}
