//! Asymmetric priority relations over a student set, their classification,
//! maximal sets and the sequential-maximal-ordering (SMO) family of
//! total-order extension algorithms.
//!
//! Students are dense indices `0..n`; a relation is stored both as a sorted
//! pair list and as an `n * n` adjacency table.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set [`enumerate_extensions`] accepts by default.
pub const DEFAULT_MAX_ENUMERATION_STUDENTS: usize = 8;

/// Largest ground set [`count_extensions`] handles (subset DP is `O(2^n n)`).
pub const MAX_COUNT_STUDENTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StudentId(pub usize);

impl StudentId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StudentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An asymmetric, irreflexive binary relation on `0..n`. `(i, j)` means `i`
/// has higher priority than `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityRelation {
    n: usize,
    adj: Vec<bool>,
    pairs: Vec<(StudentId, StudentId)>,
}

impl PriorityRelation {
    /// Builds a relation, rejecting reflexive pairs, out-of-range students and
    /// symmetric pairs. Duplicate pairs are collapsed.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (StudentId, StudentId)>) -> Result<Self> {
        let mut adj = vec![false; n * n];
        for (i, j) in pairs {
            if i.0 >= n {
                return Err(Error::UnknownStudent(i));
            }
            if j.0 >= n {
                return Err(Error::UnknownStudent(j));
            }
            if i == j {
                return Err(Error::Reflexive(i));
            }
            if adj[j.0 * n + i.0] {
                return Err(Error::NotAsymmetric(i, j));
            }
            adj[i.0 * n + j.0] = true;
        }
        Ok(Self::from_adjacency(n, adj))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_adjacency(n, vec![false; n * n])
    }

    fn from_adjacency(n: usize, adj: Vec<bool>) -> Self {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if adj[i * n + j] {
                    pairs.push((StudentId(i), StudentId(j)));
                }
            }
        }
        Self { n, adj, pairs }
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: StudentId, j: StudentId) -> bool {
        self.adj[i.0 * self.n + j.0]
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> &[(StudentId, StudentId)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `self` minus every pair in `removed`; pairs not in `self` are ignored.
    pub fn without<'a>(
        &self,
        removed: impl IntoIterator<Item = &'a (StudentId, StudentId)>,
    ) -> Self {
        let mut adj = self.adj.clone();
        for &(i, j) in removed {
            if i.0 < self.n && j.0 < self.n {
                adj[i.0 * self.n + j.0] = false;
            }
        }
        Self::from_adjacency(self.n, adj)
    }

    /// Whether every pair of `self` is also a pair of `other`.
    pub fn is_subset_of(&self, other: &PriorityRelation) -> bool {
        self.n == other.n && self.pairs.iter().all(|&(i, j)| other.contains(i, j))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (0..n).all(|y| x == y || self.adj[x * n + y] || self.adj[y * n + x]))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if !self.adj[x * n + y] {
                    continue;
                }
                for z in 0..n {
                    if self.adj[y * n + z] && !self.adj[x * n + z] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_negatively_transitive(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if self.adj[x * n + y] {
                    continue;
                }
                for z in 0..n {
                    if !self.adj[y * n + z] && self.adj[x * n + z] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_acyclic(&self) -> bool {
        !has_cycle(self.n, |i, j| self.adj[i * self.n + j])
    }
}

/// Cycle detection on a digraph over `0..n` given by an edge predicate.
pub(crate) fn has_cycle(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    // Kahn: repeatedly strip sources.
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if edge(i, j) {
                indegree[j] += 1;
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = stack.pop() {
        seen += 1;
        for j in 0..n {
            if edge(i, j) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    stack.push(j);
                }
            }
        }
    }
    seen < n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    /// Contains a directed cycle.
    #[serde(rename = "CYCLIC")]
    Cyclic,
    /// Acyclic but not transitive (A \ P).
    #[serde(rename = "A\\P")]
    AcyclicNotTransitive,
    /// Partial order that is not a weak order (P \ W).
    #[serde(rename = "P\\W")]
    PartialNotWeak,
    /// Weak order that is not complete (W \ T).
    #[serde(rename = "W\\T")]
    WeakNotTotal,
    #[serde(rename = "T")]
    Total,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Cyclic => "CYCLIC",
            ClassLabel::AcyclicNotTransitive => "A\\P",
            ClassLabel::PartialNotWeak => "P\\W",
            ClassLabel::WeakNotTotal => "W\\T",
            ClassLabel::Total => "T",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationClass {
    pub complete: bool,
    pub transitive: bool,
    pub negatively_transitive: bool,
    pub acyclic: bool,
    pub label: ClassLabel,
}

impl RelationClass {
    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    /// Member of P (partial orders).
    pub fn is_partial_order(&self) -> bool {
        self.transitive
    }

    /// Member of W (weak orders).
    pub fn is_weak_order(&self) -> bool {
        self.transitive && self.negatively_transitive
    }

    /// Member of T (total orders).
    pub fn is_total_order(&self) -> bool {
        self.label == ClassLabel::Total
    }
}

pub fn classify(rel: &PriorityRelation) -> RelationClass {
    let complete = rel.is_complete();
    let transitive = rel.is_transitive();
    let negatively_transitive = rel.is_negatively_transitive();
    let acyclic = rel.is_acyclic();
    debug_assert!(!transitive || acyclic);
    let label = if !acyclic {
        ClassLabel::Cyclic
    } else if !transitive {
        ClassLabel::AcyclicNotTransitive
    } else if !negatively_transitive {
        ClassLabel::PartialNotWeak
    } else if !complete {
        ClassLabel::WeakNotTotal
    } else {
        ClassLabel::Total
    };
    RelationClass {
        complete,
        transitive,
        negatively_transitive,
        acyclic,
        label,
    }
}

/// Members of `subset` not dominated by another member of `subset`, in
/// index order.
pub fn maximal_set(rel: &PriorityRelation, subset: &[StudentId]) -> Result<Vec<StudentId>> {
    if let Some(&bad) = subset.iter().find(|i| i.0 >= rel.n) {
        return Err(Error::UnknownStudent(bad));
    }
    let mut members = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    Ok(members
        .iter()
        .copied()
        .filter(|&i| !members.iter().any(|&j| j != i && rel.contains(j, i)))
        .collect())
}

fn maximal_among(rel: &PriorityRelation, remaining: &[bool], out: &mut Vec<StudentId>) {
    out.clear();
    let n = rel.n;
    for i in 0..n {
        if remaining[i] && !(0..n).any(|j| remaining[j] && rel.adj[j * n + i]) {
            out.push(StudentId(i));
        }
    }
}

/// A strict total order, stored highest priority first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalOrder {
    order: Vec<StudentId>,
    position: Vec<usize>,
}

impl TotalOrder {
    /// Fails unless `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<StudentId>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (p, &i) in order.iter().enumerate() {
            if i.0 >= n {
                return Err(Error::UnknownStudent(i));
            }
            if position[i.0] != usize::MAX {
                return Err(Error::invalid(format!(
                    "student {i} appears twice in total order"
                )));
            }
            position[i.0] = p;
        }
        Ok(Self { order, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).map(StudentId).collect(),
            position: (0..n).collect(),
        }
    }

    /// Reads a total order back out of a relation, if it is one.
    pub fn from_relation(rel: &PriorityRelation) -> Option<Self> {
        let n = rel.n;
        // In a total order, position = number of students ranked above.
        let mut order = vec![None; n];
        for i in 0..n {
            let above = (0..n).filter(|&j| rel.adj[j * n + i]).count();
            if order[above].is_some() {
                return None;
            }
            order[above] = Some(StudentId(i));
        }
        let order = TotalOrder::new(order.into_iter().map(Option::unwrap).collect()).ok()?;
        (order.to_relation() == *rel).then_some(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[StudentId] {
        &self.order
    }

    /// Zero-based position of `i`; smaller is higher priority.
    #[inline]
    pub fn position(&self, i: StudentId) -> usize {
        self.position[i.0]
    }

    #[inline]
    pub fn prefers(&self, i: StudentId, j: StudentId) -> bool {
        self.position[i.0] < self.position[j.0]
    }

    pub fn to_relation(&self) -> PriorityRelation {
        let n = self.order.len();
        let mut adj = vec![false; n * n];
        for (a, &i) in self.order.iter().enumerate() {
            for &j in &self.order[a + 1..] {
                adj[i.0 * n + j.0] = true;
            }
        }
        PriorityRelation::from_adjacency(n, adj)
    }
}

/// Tiebreaking rank `r_s`: a bijection from students onto `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(Vec<usize>);

impl Rank {
    /// `ranks[i]` is the rank of student `i`.
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n + 1];
        for (i, &r) in ranks.iter().enumerate() {
            if r == 0 || r > n || seen[r] {
                return Err(Error::invalid(format!(
                    "rank {r} of student #{i} breaks the bijection onto 1..={n}"
                )));
            }
            seen[r] = true;
        }
        Ok(Self(ranks))
    }

    /// The student listed first gets rank 1.
    pub fn from_order(order: &TotalOrder) -> Self {
        let mut ranks = vec![0; order.len()];
        for (p, &i) in order.order().iter().enumerate() {
            ranks[i.0] = p + 1;
        }
        Self(ranks)
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn of(&self, i: StudentId) -> usize {
        self.0[i.0]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

/// Picks one student out of a nonempty maximal set during an SMO run.
pub trait Chooser {
    fn choose(&mut self, candidates: &[StudentId]) -> StudentId;
}

/// Always the lowest student index.
#[derive(Debug, Clone, Copy, Default)]
pub struct LowestIndex;

impl Chooser for LowestIndex {
    fn choose(&mut self, candidates: &[StudentId]) -> StudentId {
        *candidates.iter().min().expect("empty maximal set")
    }
}

/// Uniform choice from a seeded stream; every extension has positive
/// probability.
#[derive(Debug, Clone)]
pub struct SeededRandom(ChaCha8Rng);

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Chooser for SeededRandom {
    fn choose(&mut self, candidates: &[StudentId]) -> StudentId {
        *candidates.choose(&mut self.0).expect("empty maximal set")
    }
}

/// Minimum-rank member of the maximal set.
#[derive(Debug, Clone, Copy)]
pub struct ByRank<'a>(pub &'a Rank);

impl Chooser for ByRank<'_> {
    fn choose(&mut self, candidates: &[StudentId]) -> StudentId {
        *candidates
            .iter()
            .min_by_key(|&&i| self.0.of(i))
            .expect("empty maximal set")
    }
}

/// One SMO run: repeatedly append the chooser's pick from the maximal set of
/// the remaining students.
pub fn smo_extend<C: Chooser + ?Sized>(
    rel: &PriorityRelation,
    chooser: &mut C,
) -> Result<TotalOrder> {
    let n = rel.n;
    let mut remaining = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut candidates = Vec::with_capacity(n);
    for _ in 0..n {
        maximal_among(rel, &remaining, &mut candidates);
        if candidates.is_empty() {
            return Err(Error::CyclicRelation { school: None });
        }
        let pick = chooser.choose(&candidates);
        debug_assert!(candidates.contains(&pick), "chooser left the maximal set");
        remaining[pick.0] = false;
        order.push(pick);
    }
    TotalOrder::new(order)
}

/// Tiebreaking SMO: each step takes the minimum-rank maximal student.
pub fn smo_extend_tiebreak(rel: &PriorityRelation, rank: &Rank) -> Result<TotalOrder> {
    if rank.len() != rel.n {
        return Err(Error::invalid(format!(
            "rank covers {} students, relation has {}",
            rank.len(),
            rel.n
        )));
    }
    smo_extend(rel, &mut ByRank(rank))
}

/// All linear extensions of `rel`, by backtracking over every maximal-set
/// choice, in lexicographic order. A cyclic relation yields none.
pub fn enumerate_extensions(rel: &PriorityRelation) -> Result<Vec<TotalOrder>> {
    enumerate_extensions_limited(rel, DEFAULT_MAX_ENUMERATION_STUDENTS)
}

pub fn enumerate_extensions_limited(
    rel: &PriorityRelation,
    max_students: usize,
) -> Result<Vec<TotalOrder>> {
    if rel.n > max_students {
        return Err(Error::GuardExceeded {
            what: "students in extension enumeration",
            limit: max_students as u128,
            actual: rel.n as u128,
        });
    }
    let mut out = Vec::new();
    let mut remaining = vec![true; rel.n];
    let mut prefix = Vec::with_capacity(rel.n);
    backtrack(rel, &mut remaining, &mut prefix, &mut out);
    Ok(out)
}

fn backtrack(
    rel: &PriorityRelation,
    remaining: &mut [bool],
    prefix: &mut Vec<StudentId>,
    out: &mut Vec<TotalOrder>,
) {
    if prefix.len() == rel.n {
        out.push(TotalOrder::new(prefix.clone()).expect("prefix is a permutation"));
        return;
    }
    let mut candidates = Vec::new();
    maximal_among(rel, remaining, &mut candidates);
    // An empty maximal set on a nonempty remainder means a cycle: dead branch.
    for i in candidates {
        remaining[i.0] = false;
        prefix.push(i);
        backtrack(rel, remaining, prefix, out);
        prefix.pop();
        remaining[i.0] = true;
    }
}

/// `|E(rel)|` without materializing the extensions. Zero when cyclic.
pub fn count_extensions(rel: &PriorityRelation) -> Result<u128> {
    let n = rel.n;
    if n > MAX_COUNT_STUDENTS {
        return Err(Error::GuardExceeded {
            what: "students in extension counting",
            limit: MAX_COUNT_STUDENTS as u128,
            actual: n as u128,
        });
    }
    // above[i]: bitmask of students that must precede i.
    let above: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| rel.adj[j * n + i])
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let full = 1usize << n;
    let mut ways = vec![0u128; full];
    ways[0] = 1;
    for placed in 0..full {
        let w = ways[placed];
        if w == 0 {
            continue;
        }
        for (i, &req) in above.iter().enumerate() {
            let bit = 1usize << i;
            if placed & bit == 0 && (req as usize) & !placed == 0 {
                ways[placed | bit] += w;
            }
        }
    }
    Ok(ways[full - 1])
}

/// Whether `candidate` contains every pair of `rel`.
pub fn is_extension(candidate: &TotalOrder, rel: &PriorityRelation) -> Result<bool> {
    if candidate.len() != rel.n {
        return Err(Error::invalid(format!(
            "ground sets differ: total order over {} students, relation over {}",
            candidate.len(),
            rel.n
        )));
    }
    Ok(rel.pairs.iter().all(|&(i, j)| candidate.prefers(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: usize) -> StudentId {
        StudentId(i)
    }

    fn rel(n: usize, pairs: &[(usize, usize)]) -> PriorityRelation {
        PriorityRelation::new(n, pairs.iter().map(|&(i, j)| (s(i), s(j)))).unwrap()
    }

    fn order(ids: &[usize]) -> TotalOrder {
        TotalOrder::new(ids.iter().map(|&i| s(i)).collect()).unwrap()
    }

    // Example 1 school s over {i0, i1, i2}: (i1, i2), (i2, i0).
    fn chain() -> PriorityRelation {
        rel(3, &[(1, 2), (2, 0)])
    }

    fn three_cycle() -> PriorityRelation {
        rel(3, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn construction_rejects_bad_pairs() {
        assert!(matches!(
            PriorityRelation::new(2, [(s(0), s(1)), (s(1), s(0))]),
            Err(Error::NotAsymmetric(..))
        ));
        assert!(matches!(
            PriorityRelation::new(2, [(s(1), s(1))]),
            Err(Error::Reflexive(_))
        ));
        assert!(matches!(
            PriorityRelation::new(2, [(s(0), s(2))]),
            Err(Error::UnknownStudent(_))
        ));
        // duplicates collapse
        assert_eq!(
            PriorityRelation::new(2, [(s(0), s(1)), (s(0), s(1))])
                .unwrap()
                .pairs()
                .len(),
            1
        );
    }

    #[test]
    fn classify_examples() {
        let c = classify(&chain());
        assert!(c.acyclic && !c.transitive);
        assert_eq!(c.label, ClassLabel::AcyclicNotTransitive);

        // {(i4, i1)} on {i1..i4}, indices 3 -> 0
        let c = classify(&rel(4, &[(3, 0)]));
        assert!(c.transitive && !c.negatively_transitive);
        assert_eq!(c.label, ClassLabel::PartialNotWeak);

        let c = classify(&PriorityRelation::empty(3));
        assert!(c.transitive && c.negatively_transitive && !c.complete);
        assert_eq!(c.label, ClassLabel::WeakNotTotal);

        assert_eq!(classify(&three_cycle()).label, ClassLabel::Cyclic);
        assert_eq!(
            classify(&order(&[2, 0, 1]).to_relation()).label,
            ClassLabel::Total
        );
    }

    #[test]
    fn maximal_set_examples() {
        assert_eq!(
            maximal_set(&chain(), &[s(0), s(1), s(2)]).unwrap(),
            vec![s(1)]
        );
        assert_eq!(
            maximal_set(&PriorityRelation::empty(2), &[s(0), s(1)]).unwrap(),
            vec![s(0), s(1)]
        );
        assert!(maximal_set(&three_cycle(), &[s(0), s(1), s(2)])
            .unwrap()
            .is_empty());
        assert!(matches!(
            maximal_set(&chain(), &[s(5)]),
            Err(Error::UnknownStudent(_))
        ));
    }

    #[test]
    fn smo_forced_chain() {
        let expected = order(&[1, 2, 0]);
        assert_eq!(smo_extend(&chain(), &mut LowestIndex).unwrap(), expected);
        for seed in 0..10 {
            assert_eq!(
                smo_extend(&chain(), &mut SeededRandom::new(seed)).unwrap(),
                expected
            );
        }
        for perm in enumerate_extensions(&PriorityRelation::empty(3)).unwrap() {
            let rank = Rank::from_order(&perm);
            assert_eq!(smo_extend_tiebreak(&chain(), &rank).unwrap(), expected);
        }
    }

    #[test]
    fn smo_cyclic_errors() {
        assert!(matches!(
            smo_extend(&three_cycle(), &mut LowestIndex),
            Err(Error::CyclicRelation { school: None })
        ));
    }

    #[test]
    fn smo_lowest_index_on_empty() {
        assert_eq!(
            smo_extend(&PriorityRelation::empty(2), &mut LowestIndex).unwrap(),
            order(&[0, 1])
        );
    }

    #[test]
    fn tiebreak_examples() {
        // rank(a)=2, rank(b)=1, rank(c)=3
        let rank = Rank::new(vec![2, 1, 3]).unwrap();
        assert_eq!(
            smo_extend_tiebreak(&PriorityRelation::empty(3), &rank).unwrap(),
            order(&[1, 0, 2])
        );

        // {(i4, i1)} with identity ranks: i2 i3 i4 i1
        let r = rel(4, &[(3, 0)]);
        let out = smo_extend_tiebreak(&r, &Rank::identity(4)).unwrap();
        assert_eq!(out, order(&[1, 2, 3, 0]));
        assert!(out.prefers(s(3), s(0)));
    }

    #[test]
    fn rank_must_be_bijection() {
        assert!(Rank::new(vec![1, 1, 3]).is_err());
        assert!(Rank::new(vec![0, 1, 2]).is_err());
        assert!(Rank::new(vec![1, 2, 4]).is_err());
        assert!(smo_extend_tiebreak(&chain(), &Rank::identity(2)).is_err());
    }

    #[test]
    fn rank_from_order_roundtrip() {
        let o = order(&[2, 0, 1]);
        let r = Rank::from_order(&o);
        assert_eq!(r.values(), &[2, 3, 1]);
        assert_eq!(
            smo_extend_tiebreak(&PriorityRelation::empty(3), &r).unwrap(),
            o
        );
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_extensions(&chain()).unwrap(),
            vec![order(&[1, 2, 0])]
        );
        assert_eq!(
            enumerate_extensions(&PriorityRelation::empty(3))
                .unwrap()
                .len(),
            6
        );
        assert!(enumerate_extensions(&three_cycle()).unwrap().is_empty());
        assert!(matches!(
            enumerate_extensions(&PriorityRelation::empty(9)),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn count_matches_enumeration() {
        assert_eq!(count_extensions(&chain()).unwrap(), 1);
        assert_eq!(count_extensions(&PriorityRelation::empty(4)).unwrap(), 24);
        assert_eq!(count_extensions(&three_cycle()).unwrap(), 0);
        assert_eq!(count_extensions(&rel(4, &[(3, 0)])).unwrap(), 12);
        assert_eq!(count_extensions(&PriorityRelation::empty(0)).unwrap(), 1);
    }

    #[test]
    fn is_extension_examples() {
        assert!(is_extension(&order(&[1, 2, 0]), &chain()).unwrap());
        assert!(!is_extension(&order(&[0, 1, 2]), &chain()).unwrap());
        assert!(is_extension(&order(&[2, 1, 0]), &PriorityRelation::empty(3)).unwrap());
        assert!(is_extension(&order(&[0, 1]), &chain()).is_err());
    }

    #[test]
    fn total_order_relation_roundtrip() {
        let o = order(&[3, 1, 0, 2]);
        assert_eq!(TotalOrder::from_relation(&o.to_relation()), Some(o));
        assert_eq!(TotalOrder::from_relation(&chain()), None);
        assert_eq!(TotalOrder::from_relation(&PriorityRelation::empty(2)), None);
        assert!(TotalOrder::new(vec![s(0), s(0)]).is_err());
    }

    #[test]
    fn without_removes_only_present_pairs() {
        let total = order(&[0, 1, 2]).to_relation();
        let reduced = total.without(&[(s(0), s(2)), (s(2), s(1))]);
        assert_eq!(reduced, rel(3, &[(0, 1), (1, 2)]));
        assert!(reduced.is_subset_of(&total));
    }
}
