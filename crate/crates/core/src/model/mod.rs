//! School choice problems, matchings, stability predicates and brute-force
//! oracles over the set of all matchings.

mod oracle;
mod stability;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{classify, PriorityRelation, StudentId};

pub use oracle::{
    enumerate_acceptable_matchings, enumerate_matchings, enumerate_matchings_with, sosm_set_oracle,
    sosm_set_oracle_with, stable_set_oracle, stable_set_oracle_with, undominated, MatchingGuard,
    MatchingIter,
};
pub use stability::{
    is_stable, pareto_dominates, stability_report, weakly_dominates, StabilityReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchoolId(pub usize);

impl SchoolId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for SchoolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s#{}", self.0)
    }
}

/// Where a student ends up: a school, or `None` for the outside option.
pub type Assignment = Option<SchoolId>;

/// Acceptable schools, most preferred first. The outside option sits right
/// after the last listed school; unlisted schools are below it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreferenceOrder {
    ranked: Vec<SchoolId>,
}

impl PreferenceOrder {
    pub fn new(ranked: Vec<SchoolId>) -> Result<Self> {
        for (k, s) in ranked.iter().enumerate() {
            if ranked[..k].contains(s) {
                return Err(Error::invalid(format!(
                    "school {s} listed twice in a preference"
                )));
            }
        }
        Ok(Self { ranked })
    }

    pub fn ranked(&self) -> &[SchoolId] {
        &self.ranked
    }

    pub fn is_acceptable(&self, s: SchoolId) -> bool {
        self.ranked.contains(&s)
    }
}

/// A school choice problem `(I, S, P, priorities, q)`. Students and schools
/// are the dense indices of the name vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    students: Vec<String>,
    schools: Vec<String>,
    capacities: Vec<usize>,
    preferences: Vec<PreferenceOrder>,
    priorities: Vec<PriorityRelation>,
    // pref_rank[i][s] is the position of s in P_i; index `schools.len()` is
    // the outside option. Smaller is better.
    pref_rank: Vec<Vec<usize>>,
}

impl Problem {
    pub fn new(
        students: Vec<String>,
        schools: Vec<String>,
        capacities: Vec<usize>,
        preferences: Vec<PreferenceOrder>,
        priorities: Vec<PriorityRelation>,
    ) -> Result<Self> {
        let n = students.len();
        let m = schools.len();
        check_unique(&students, "student")?;
        check_unique(&schools, "school")?;
        if capacities.len() != m {
            return Err(Error::invalid(format!(
                "{} capacities for {m} schools",
                capacities.len()
            )));
        }
        if let Some(k) = capacities.iter().position(|&q| q == 0) {
            return Err(Error::invalid(format!(
                "capacity of school {:?} must be positive",
                schools[k]
            )));
        }
        if preferences.len() != n {
            return Err(Error::invalid(format!(
                "{} preferences for {n} students",
                preferences.len()
            )));
        }
        if priorities.len() != m {
            return Err(Error::invalid(format!(
                "{} priority relations for {m} schools",
                priorities.len()
            )));
        }
        for (i, p) in preferences.iter().enumerate() {
            if let Some(s) = p.ranked.iter().find(|s| s.0 >= m) {
                return Err(Error::invalid(format!(
                    "preference of {:?} lists unknown school {s}",
                    students[i]
                )));
            }
        }
        for (s, rel) in priorities.iter().enumerate() {
            if rel.ground_size() != n {
                return Err(Error::invalid(format!(
                    "priority of school {:?} is over {} students, expected {n}",
                    schools[s],
                    rel.ground_size()
                )));
            }
        }
        let pref_rank = preferences
            .iter()
            .map(|p| {
                let listed = p.ranked.len();
                let mut rank: Vec<usize> = (0..m).map(|s| listed + 1 + s).collect();
                for (k, s) in p.ranked.iter().enumerate() {
                    rank[s.0] = k;
                }
                rank.push(listed);
                rank
            })
            .collect();
        Ok(Self {
            students,
            schools,
            capacities,
            preferences,
            priorities,
            pref_rank,
        })
    }

    /// Same students, schools and preferences under another priority profile.
    pub fn with_priorities(&self, priorities: Vec<PriorityRelation>) -> Result<Self> {
        Self::new(
            self.students.clone(),
            self.schools.clone(),
            self.capacities.clone(),
            self.preferences.clone(),
            priorities,
        )
    }

    pub fn num_students(&self) -> usize {
        self.students.len()
    }

    pub fn num_schools(&self) -> usize {
        self.schools.len()
    }

    pub fn students(&self) -> impl Iterator<Item = StudentId> + Clone {
        (0..self.students.len()).map(StudentId)
    }

    pub fn schools(&self) -> impl Iterator<Item = SchoolId> + Clone {
        (0..self.schools.len()).map(SchoolId)
    }

    pub fn student_names(&self) -> &[String] {
        &self.students
    }

    pub fn school_names(&self) -> &[String] {
        &self.schools
    }

    pub fn student_name(&self, i: StudentId) -> &str {
        &self.students[i.0]
    }

    pub fn school_name(&self, s: SchoolId) -> &str {
        &self.schools[s.0]
    }

    pub fn student_id(&self, name: &str) -> Option<StudentId> {
        self.students.iter().position(|x| x == name).map(StudentId)
    }

    pub fn school_id(&self, name: &str) -> Option<SchoolId> {
        self.schools.iter().position(|x| x == name).map(SchoolId)
    }

    pub fn capacity(&self, s: SchoolId) -> usize {
        self.capacities[s.0]
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn preference(&self, i: StudentId) -> &PreferenceOrder {
        &self.preferences[i.0]
    }

    pub fn preferences(&self) -> &[PreferenceOrder] {
        &self.preferences
    }

    pub fn priority(&self, s: SchoolId) -> &PriorityRelation {
        &self.priorities[s.0]
    }

    pub fn priorities(&self) -> &[PriorityRelation] {
        &self.priorities
    }

    #[inline]
    fn rank_of(&self, i: StudentId, a: Assignment) -> usize {
        let row = &self.pref_rank[i.0];
        match a {
            Some(s) => row[s.0],
            None => row[self.schools.len()],
        }
    }

    /// `a P_i b`.
    #[inline]
    pub fn prefers(&self, i: StudentId, a: Assignment, b: Assignment) -> bool {
        self.rank_of(i, a) < self.rank_of(i, b)
    }

    /// `a R_i b`.
    #[inline]
    pub fn weakly_prefers(&self, i: StudentId, a: Assignment, b: Assignment) -> bool {
        self.rank_of(i, a) <= self.rank_of(i, b)
    }

    /// Whether every school's priority satisfies `pred` on its class.
    pub fn all_priorities(&self, pred: impl Fn(&crate::relations::RelationClass) -> bool) -> bool {
        self.priorities.iter().all(|r| pred(&classify(r)))
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    for (k, name) in names.iter().enumerate() {
        if names[..k].contains(name) {
            return Err(Error::invalid(format!("duplicate {what} {name:?}")));
        }
    }
    Ok(())
}

/// An assignment of every student to a school or the outside option,
/// respecting capacities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    assignment: Vec<Assignment>,
}

impl Matching {
    pub fn new(prob: &Problem, assignment: Vec<Assignment>) -> Result<Self> {
        let mu = Self { assignment };
        mu.validate(prob)?;
        Ok(mu)
    }

    pub fn unmatched(prob: &Problem) -> Self {
        Self {
            assignment: vec![None; prob.num_students()],
        }
    }

    pub(crate) fn from_vec_unchecked(assignment: Vec<Assignment>) -> Self {
        Self { assignment }
    }

    /// Checks size and capacity against `prob`.
    pub fn validate(&self, prob: &Problem) -> Result<()> {
        if self.assignment.len() != prob.num_students() {
            return Err(Error::InvalidMatching(format!(
                "assigns {} students, problem has {}",
                self.assignment.len(),
                prob.num_students()
            )));
        }
        let mut load = vec![0usize; prob.num_schools()];
        for s in self.assignment.iter().flatten() {
            if s.0 >= prob.num_schools() {
                return Err(Error::InvalidMatching(format!("unknown school {s}")));
            }
            load[s.0] += 1;
        }
        for s in prob.schools() {
            if load[s.0] > prob.capacity(s) {
                return Err(Error::InvalidMatching(format!(
                    "school {:?} holds {} students over capacity {}",
                    prob.school_name(s),
                    load[s.0],
                    prob.capacity(s)
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn school_of(&self, i: StudentId) -> Assignment {
        self.assignment[i.0]
    }

    pub fn assignment(&self) -> &[Assignment] {
        &self.assignment
    }

    /// `mu(s)` in index order.
    pub fn roster(&self, s: SchoolId) -> Vec<StudentId> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, a)| **a == Some(s))
            .map(|(i, _)| StudentId(i))
            .collect()
    }

    pub fn roster_size(&self, s: SchoolId) -> usize {
        self.assignment.iter().filter(|a| **a == Some(s)).count()
    }
}
