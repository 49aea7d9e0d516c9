//! JSON file formats. Everything is keyed by student and school names;
//! unknown keys are rejected.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mechanisms::{ExtensionProfile, TiebreakProfile};
use crate::model::{Assignment, Matching, PreferenceOrder, Problem, SchoolId};
use crate::relations::{PriorityRelation, Rank, StudentId, TotalOrder};
use crate::violations::ViolationSet;

pub type NamedPairs = Vec<(String, String)>;

/// On-disk problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub students: Vec<String>,
    pub schools: Vec<String>,
    pub capacities: IndexMap<String, usize>,
    pub preferences: IndexMap<String, Vec<String>>,
    pub priorities: IndexMap<String, NamedPairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violations: Option<IndexMap<String, NamedPairs>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_profile: Option<IndexMap<String, Vec<String>>>,
}

/// A validated instance: the problem plus optional violation set and
/// extension profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub problem: Problem,
    pub violations: Option<ViolationSet>,
    pub extension_profile: Option<ExtensionProfile>,
}

impl Instance {
    pub fn new(problem: Problem) -> Self {
        Self {
            problem,
            violations: None,
            extension_profile: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        let students = file.students.clone();
        let schools = file.schools.clone();
        let names = Names {
            students: &students,
            schools: &schools,
        };
        check_keys(&file.capacities, &schools, "capacities")?;
        check_keys(&file.preferences, &students, "preferences")?;
        check_keys(&file.priorities, &schools, "priorities")?;
        let capacities = schools.iter().map(|s| file.capacities[s]).collect();
        let preferences = students
            .iter()
            .map(|i| {
                let ranked = file.preferences[i]
                    .iter()
                    .map(|s| names.school(s, &format!("preferences.{i}")))
                    .collect::<Result<Vec<_>>>()?;
                PreferenceOrder::new(ranked).map_err(|e| context(e, &format!("preferences.{i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let priorities = schools
            .iter()
            .map(|s| names.relation(&file.priorities[s], &format!("priorities.{s}")))
            .collect::<Result<Vec<_>>>()?;
        let problem = Problem::new(
            students.clone(),
            schools.clone(),
            capacities,
            preferences,
            priorities,
        )?;
        let violations = file
            .violations
            .as_ref()
            .map(|v| names.violations(v, &problem))
            .transpose()?;
        let extension_profile = file
            .extension_profile
            .as_ref()
            .map(|p| profile_from_names(&problem, p, "extension_profile"))
            .transpose()?;
        Ok(Self {
            problem,
            violations,
            extension_profile,
        })
    }

    pub fn to_file(&self) -> ProblemFile {
        let p = &self.problem;
        let mut file = problem_file(p);
        file.violations = self.violations.as_ref().map(|c| {
            p.schools()
                .map(|s| {
                    (
                        p.school_name(s).to_string(),
                        named_pairs(p, c.at(s).iter().copied()),
                    )
                })
                .collect()
        });
        file.extension_profile = self
            .extension_profile
            .as_ref()
            .map(|prof| profile_names(p, prof));
        file
    }
}

pub fn problem_file(p: &Problem) -> ProblemFile {
    ProblemFile {
        students: p.student_names().to_vec(),
        schools: p.school_names().to_vec(),
        capacities: p
            .schools()
            .map(|s| (p.school_name(s).to_string(), p.capacity(s)))
            .collect(),
        preferences: p
            .students()
            .map(|i| {
                let ranked = p
                    .preference(i)
                    .ranked()
                    .iter()
                    .map(|&s| p.school_name(s).to_string());
                (p.student_name(i).to_string(), ranked.collect())
            })
            .collect(),
        priorities: priorities_names(p, p.priorities()),
        violations: None,
        extension_profile: None,
    }
}

pub fn problem_json(p: &Problem) -> Value {
    serde_json::to_value(problem_file(p)).expect("problem serializes")
}

/// A priorities block (`{"school": [[i, j], ...]}`) for `priorities`.
pub fn priorities_names(
    p: &Problem,
    priorities: &[PriorityRelation],
) -> IndexMap<String, NamedPairs> {
    p.schools()
        .map(|s| {
            (
                p.school_name(s).to_string(),
                named_pairs(p, priorities[s.0].pairs().iter().copied()),
            )
        })
        .collect()
}

fn named_pairs(p: &Problem, pairs: impl Iterator<Item = (StudentId, StudentId)>) -> NamedPairs {
    pairs
        .map(|(i, j)| (p.student_name(i).to_string(), p.student_name(j).to_string()))
        .collect()
}

fn check_keys<V>(map: &IndexMap<String, V>, expected: &[String], field: &str) -> Result<()> {
    if let Some(k) = map.keys().find(|k| !expected.contains(k)) {
        return Err(Error::invalid(format!("{field}: unknown key {k:?}")));
    }
    if let Some(k) = expected.iter().find(|k| !map.contains_key(*k)) {
        return Err(Error::invalid(format!("{field}: missing entry for {k:?}")));
    }
    Ok(())
}

fn context(e: Error, field: &str) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::invalid(format!("{field}: {msg}")),
        other => Error::invalid(format!("{field}: {other}")),
    }
}

struct Names<'a> {
    students: &'a [String],
    schools: &'a [String],
}

impl Names<'_> {
    fn student(&self, name: &str, field: &str) -> Result<StudentId> {
        self.students
            .iter()
            .position(|x| x == name)
            .map(StudentId)
            .ok_or_else(|| Error::invalid(format!("{field}: unknown student {name:?}")))
    }

    fn school(&self, name: &str, field: &str) -> Result<SchoolId> {
        self.schools
            .iter()
            .position(|x| x == name)
            .map(SchoolId)
            .ok_or_else(|| Error::invalid(format!("{field}: unknown school {name:?}")))
    }

    fn pairs(&self, pairs: &NamedPairs, field: &str) -> Result<Vec<(StudentId, StudentId)>> {
        pairs
            .iter()
            .map(|(i, j)| Ok((self.student(i, field)?, self.student(j, field)?)))
            .collect()
    }

    fn relation(&self, pairs: &NamedPairs, field: &str) -> Result<PriorityRelation> {
        PriorityRelation::new(self.students.len(), self.pairs(pairs, field)?).map_err(|e| match e {
            Error::NotAsymmetric(i, j) => Error::invalid(format!(
                "{field}: not asymmetric, both ({0:?}, {1:?}) and ({1:?}, {0:?}) given",
                self.students[i.0], self.students[j.0]
            )),
            Error::Reflexive(i) => Error::invalid(format!(
                "{field}: reflexive pair for {:?}",
                self.students[i.0]
            )),
            other => context(other, field),
        })
    }

    fn violations(&self, map: &IndexMap<String, NamedPairs>, p: &Problem) -> Result<ViolationSet> {
        if let Some(k) = map.keys().find(|k| !self.schools.contains(k)) {
            return Err(Error::invalid(format!("violations: unknown key {k:?}")));
        }
        // Schools without an entry allow no violations.
        let sets = self
            .schools
            .iter()
            .map(|s| match map.get(s) {
                Some(pairs) => self.pairs(pairs, &format!("violations.{s}")),
                None => Ok(Vec::new()),
            })
            .collect::<Result<Vec<_>>>()?;
        ViolationSet::new(p, sets)
    }
}

fn order_from_names(p: &Problem, names: &[String], field: &str) -> Result<TotalOrder> {
    let ids = names
        .iter()
        .map(|x| {
            p.student_id(x)
                .ok_or_else(|| Error::invalid(format!("{field}: unknown student {x:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if ids.len() != p.num_students() {
        return Err(Error::invalid(format!(
            "{field}: order lists {} students, expected {}",
            ids.len(),
            p.num_students()
        )));
    }
    TotalOrder::new(ids).map_err(|e| context(e, field))
}

fn order_names(p: &Problem, order: &TotalOrder) -> Vec<String> {
    order
        .order()
        .iter()
        .map(|&i| p.student_name(i).to_string())
        .collect()
}

pub fn profile_from_names(
    p: &Problem,
    map: &IndexMap<String, Vec<String>>,
    field: &str,
) -> Result<ExtensionProfile> {
    check_keys(map, p.school_names(), field)?;
    let orders = p
        .schools()
        .map(|s| {
            order_from_names(
                p,
                &map[p.school_name(s)],
                &format!("{field}.{}", p.school_name(s)),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ExtensionProfile::new(p.priorities(), orders).map_err(|e| context(e, field))
}

pub fn profile_names(p: &Problem, prof: &ExtensionProfile) -> IndexMap<String, Vec<String>> {
    p.schools()
        .map(|s| (p.school_name(s).to_string(), order_names(p, prof.order(s))))
        .collect()
}

/// `{"extension_profile": {...}}` as written by `extend`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub extension_profile: IndexMap<String, Vec<String>>,
}

impl ProfileFile {
    pub fn new(p: &Problem, prof: &ExtensionProfile) -> Self {
        Self {
            extension_profile: profile_names(p, prof),
        }
    }

    pub fn parse(p: &Problem, text: &str) -> Result<ExtensionProfile> {
        let file: ProfileFile = serde_json::from_str(text)?;
        profile_from_names(p, &file.extension_profile, "extension_profile")
    }
}

/// Tiebreak ranks listed as orders: the first student gets rank 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TiebreakFile {
    Single {
        order: Vec<String>,
    },
    Multiple {
        orders: IndexMap<String, Vec<String>>,
    },
}

impl TiebreakFile {
    pub fn parse(p: &Problem, text: &str) -> Result<TiebreakProfile> {
        let file: TiebreakFile = serde_json::from_str(text)?;
        file.to_profile(p)
    }

    pub fn to_profile(&self, p: &Problem) -> Result<TiebreakProfile> {
        match self {
            TiebreakFile::Single { order } => {
                let order = order_from_names(p, order, "order")?;
                Ok(TiebreakProfile::single(
                    Rank::from_order(&order),
                    p.num_schools(),
                ))
            }
            TiebreakFile::Multiple { orders } => {
                check_keys(orders, p.school_names(), "orders")?;
                let ranks = p
                    .schools()
                    .map(|s| {
                        let name = p.school_name(s);
                        order_from_names(p, &orders[name], &format!("orders.{name}"))
                            .map(|o| Rank::from_order(&o))
                    })
                    .collect::<Result<Vec<_>>>()?;
                TiebreakProfile::new(ranks)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub assignment: IndexMap<String, Option<String>>,
}

impl MatchingFile {
    pub fn new(p: &Problem, mu: &Matching) -> Self {
        Self {
            assignment: p
                .students()
                .map(|i| {
                    (
                        p.student_name(i).to_string(),
                        mu.school_of(i).map(|s| p.school_name(s).to_string()),
                    )
                })
                .collect(),
        }
    }

    pub fn parse(p: &Problem, text: &str) -> Result<Matching> {
        let file: MatchingFile = serde_json::from_str(text)?;
        file.to_matching(p)
    }

    pub fn to_matching(&self, p: &Problem) -> Result<Matching> {
        check_keys(&self.assignment, p.student_names(), "assignment")?;
        let assignment = p
            .students()
            .map(|i| match &self.assignment[p.student_name(i)] {
                None => Ok(None),
                Some(s) => p.school_id(s).map(Some).ok_or_else(|| {
                    Error::invalid(format!(
                        "assignment.{}: unknown school {s:?}",
                        p.student_name(i)
                    ))
                }),
            })
            .collect::<Result<Vec<Assignment>>>()?;
        Matching::new(p, assignment)
    }
}

pub fn matching_json(p: &Problem, mu: &Matching) -> Value {
    serde_json::to_value(MatchingFile::new(p, mu)).expect("matching serializes")
}

pub fn profile_json(p: &Problem, prof: &ExtensionProfile) -> Value {
    serde_json::to_value(profile_names(p, prof)).expect("profile serializes")
}

/// A standalone relation: `{"students": [...], "pairs": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub students: Vec<String>,
    pub pairs: NamedPairs,
}

impl RelationFile {
    pub fn new(students: &[String], rel: &PriorityRelation) -> Self {
        Self {
            students: students.to_vec(),
            pairs: rel
                .pairs()
                .iter()
                .map(|&(i, j)| (students[i.0].clone(), students[j.0].clone()))
                .collect(),
        }
    }

    pub fn to_relation(&self) -> Result<PriorityRelation> {
        let names = Names {
            students: &self.students,
            schools: &[],
        };
        for (k, name) in self.students.iter().enumerate() {
            if self.students[..k].contains(name) {
                return Err(Error::invalid(format!("students: duplicate {name:?}")));
            }
        }
        names.relation(&self.pairs, "pairs")
    }
}

/// `{"order": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TotalOrderFile {
    pub order: Vec<String>,
}

impl TotalOrderFile {
    pub fn new(students: &[String], order: &TotalOrder) -> Self {
        Self {
            order: order
                .order()
                .iter()
                .map(|&i| students[i.0].clone())
                .collect(),
        }
    }
}

/// Output of `realize`: a total order and the pairs it may violate.
pub fn realization_json(
    students: &[String],
    order: &TotalOrder,
    allowed: &[(StudentId, StudentId)],
) -> Value {
    json!({
        "order": TotalOrderFile::new(students, order).order,
        "violations": allowed
            .iter()
            .map(|&(i, j)| (students[i.0].clone(), students[j.0].clone()))
            .collect::<NamedPairs>(),
    })
}
