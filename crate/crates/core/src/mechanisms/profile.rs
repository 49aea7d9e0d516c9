use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SchoolId;
use crate::relations::{
    count_extensions, enumerate_extensions, enumerate_extensions_limited, is_extension, smo_extend,
    smo_extend_tiebreak, Chooser, PriorityRelation, Rank, TotalOrder,
    DEFAULT_MAX_ENUMERATION_STUDENTS,
};

/// Default cap on `|E|` for exhaustive profile enumeration.
pub const DEFAULT_MAX_PROFILES: u128 = 5000;

/// One total order per school, each extending that school's priority.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtensionProfile {
    orders: Vec<TotalOrder>,
}

impl ExtensionProfile {
    /// Fails unless `orders[s]` extends `priorities[s]` for every school.
    pub fn new(priorities: &[PriorityRelation], orders: Vec<TotalOrder>) -> Result<Self> {
        if priorities.len() != orders.len() {
            return Err(Error::invalid(format!(
                "profile has {} orders for {} schools",
                orders.len(),
                priorities.len()
            )));
        }
        for (s, (rel, order)) in priorities.iter().zip(&orders).enumerate() {
            if !is_extension(order, rel)? {
                return Err(Error::invalid(format!(
                    "order for school {} does not extend its priority",
                    SchoolId(s)
                )));
            }
        }
        Ok(Self { orders })
    }

    pub(crate) fn from_orders_unchecked(orders: Vec<TotalOrder>) -> Self {
        Self { orders }
    }

    pub fn orders(&self) -> &[TotalOrder] {
        &self.orders
    }

    pub fn order(&self, s: SchoolId) -> &TotalOrder {
        &self.orders[s.0]
    }

    pub fn to_priorities(&self) -> Vec<PriorityRelation> {
        self.orders.iter().map(TotalOrder::to_relation).collect()
    }

    /// Whether this profile extends `priorities` schoolwise.
    pub fn extends(&self, priorities: &[PriorityRelation]) -> bool {
        self.orders.len() == priorities.len()
            && self
                .orders
                .iter()
                .zip(priorities)
                .all(|(o, r)| is_extension(o, r).unwrap_or(false))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiebreakKind {
    Single,
    Multiple,
}

/// Per-school tiebreaking ranks `r_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiebreakProfile {
    ranks: Vec<Rank>,
}

impl TiebreakProfile {
    pub fn new(ranks: Vec<Rank>) -> Result<Self> {
        if let Some(first) = ranks.first() {
            if ranks.iter().any(|r| r.len() != first.len()) {
                return Err(Error::invalid(
                    "tiebreak ranks cover different student counts",
                ));
            }
        }
        Ok(Self { ranks })
    }

    /// The same rank at each of `schools` schools.
    pub fn single(rank: Rank, schools: usize) -> Self {
        Self {
            ranks: vec![rank; schools],
        }
    }

    /// A uniformly random common rank.
    pub fn random_single(students: usize, schools: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::single(random_rank(students, &mut rng), schools)
    }

    /// Independent uniformly random ranks per school.
    pub fn random_multiple(students: usize, schools: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            ranks: (0..schools)
                .map(|_| random_rank(students, &mut rng))
                .collect(),
        }
    }

    pub fn ranks(&self) -> &[Rank] {
        &self.ranks
    }

    /// `Single` iff every school uses the same rank.
    pub fn kind(&self) -> TiebreakKind {
        if self.ranks.windows(2).all(|w| w[0] == w[1]) {
            TiebreakKind::Single
        } else {
            TiebreakKind::Multiple
        }
    }
}

fn random_rank(n: usize, rng: &mut ChaCha8Rng) -> Rank {
    let mut values: Vec<usize> = (1..=n).collect();
    values.shuffle(rng);
    Rank::new(values).expect("shuffled identity is a bijection")
}

/// Schoolwise tiebreaking SMO.
pub fn extend_profile_tiebreak(
    priorities: &[PriorityRelation],
    tau: &TiebreakProfile,
) -> Result<ExtensionProfile> {
    if tau.ranks.len() != priorities.len() {
        return Err(Error::invalid(format!(
            "tiebreak has {} ranks for {} schools",
            tau.ranks.len(),
            priorities.len()
        )));
    }
    let orders = priorities
        .iter()
        .zip(&tau.ranks)
        .enumerate()
        .map(|(s, (rel, rank))| {
            smo_extend_tiebreak(rel, rank).map_err(|e| e.at_school(SchoolId(s)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtensionProfile { orders })
}

/// Schoolwise SMO with one chooser shared across schools, in school order.
pub fn extend_profile<C: Chooser + ?Sized>(
    priorities: &[PriorityRelation],
    chooser: &mut C,
) -> Result<ExtensionProfile> {
    let orders = priorities
        .iter()
        .enumerate()
        .map(|(s, rel)| smo_extend(rel, chooser).map_err(|e| e.at_school(SchoolId(s))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtensionProfile { orders })
}

/// `|E|` as the product of schoolwise extension counts.
pub fn count_extension_profiles(priorities: &[PriorityRelation]) -> Result<u128> {
    let mut total: u128 = 1;
    for rel in priorities {
        total = total.saturating_mul(count_extensions(rel)?);
    }
    Ok(total)
}

/// Every extension profile, in lexicographic order. Empty if some school's
/// priority is cyclic.
pub fn enumerate_extension_profiles(
    priorities: &[PriorityRelation],
    max_profiles: u128,
) -> Result<Vec<ExtensionProfile>> {
    let count = count_extension_profiles(priorities)?;
    if count > max_profiles {
        return Err(Error::GuardExceeded {
            what: "extension profiles",
            limit: max_profiles,
            actual: count,
        });
    }
    let per_school = priorities
        .iter()
        .map(|rel| enumerate_extensions_limited(rel, usize::MAX))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; per_school.len()];
    if per_school.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        out.push(ExtensionProfile {
            orders: digits
                .iter()
                .zip(&per_school)
                .map(|(&d, exts)| exts[d].clone())
                .collect(),
        });
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < per_school[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// `E^c`: profiles produced by tiebreaking SMO under each of the `n!` common
/// ranks, deduplicated.
pub fn enumerate_single_tiebreak_profiles(
    priorities: &[PriorityRelation],
) -> Result<BTreeSet<ExtensionProfile>> {
    let n = priorities.first().map_or(0, PriorityRelation::ground_size);
    if n > DEFAULT_MAX_ENUMERATION_STUDENTS {
        return Err(Error::GuardExceeded {
            what: "students in single tiebreak enumeration",
            limit: DEFAULT_MAX_ENUMERATION_STUDENTS as u128,
            actual: n as u128,
        });
    }
    let mut out = BTreeSet::new();
    for perm in enumerate_extensions(&PriorityRelation::empty(n))? {
        let tau = TiebreakProfile::single(Rank::from_order(&perm), priorities.len());
        out.insert(extend_profile_tiebreak(priorities, &tau)?);
    }
    Ok(out)
}
