//! Seeded random instances with priorities of a requested class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PreferenceOrder, Problem, SchoolId};
use crate::relations::{classify, ClassLabel, PriorityRelation, RelationClass, StudentId};
use crate::violations::ViolationSet;

/// Requested priority class. The plain letters are the nested classes, the
/// differences are their strict layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassSpec {
    A,
    P,
    W,
    T,
    #[serde(rename = "A\\P")]
    AcyclicNotPartial,
    #[serde(rename = "P\\W")]
    PartialNotWeak,
    #[serde(rename = "W\\T")]
    WeakNotTotal,
}

impl ClassSpec {
    pub const ALL: [ClassSpec; 7] = [
        ClassSpec::A,
        ClassSpec::P,
        ClassSpec::W,
        ClassSpec::T,
        ClassSpec::AcyclicNotPartial,
        ClassSpec::PartialNotWeak,
        ClassSpec::WeakNotTotal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassSpec::A => "A",
            ClassSpec::P => "P",
            ClassSpec::W => "W",
            ClassSpec::T => "T",
            ClassSpec::AcyclicNotPartial => "A\\P",
            ClassSpec::PartialNotWeak => "P\\W",
            ClassSpec::WeakNotTotal => "W\\T",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Fewest students for which the class is nonempty.
    pub fn min_students(self) -> usize {
        match self {
            ClassSpec::AcyclicNotPartial | ClassSpec::PartialNotWeak => 3,
            ClassSpec::WeakNotTotal => 2,
            _ => 1,
        }
    }

    pub fn contains(self, class: &RelationClass) -> bool {
        match self {
            ClassSpec::A => class.is_acyclic(),
            ClassSpec::P => class.is_partial_order(),
            ClassSpec::W => class.is_weak_order(),
            ClassSpec::T => class.is_total_order(),
            ClassSpec::AcyclicNotPartial => class.label == ClassLabel::AcyclicNotTransitive,
            ClassSpec::PartialNotWeak => class.label == ClassLabel::PartialNotWeak,
            ClassSpec::WeakNotTotal => class.label == ClassLabel::WeakNotTotal,
        }
    }
}

impl std::fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub students: usize,
    pub schools: usize,
    pub min_capacity: usize,
    pub max_capacity: usize,
    pub class: ClassSpec,
    /// Chance of keeping each pair of the underlying random total order.
    pub density: f64,
    pub seed: u64,
}

impl RandomSpec {
    pub fn generate(&self) -> Result<Problem> {
        random_problem(self, &mut ChaCha8Rng::seed_from_u64(self.seed))
    }
}

/// A relation on `n` students in `class`. Starts from a random total order
/// with pairs dropped at rate `1 - density`, then adjusts for the class.
pub fn random_relation(
    n: usize,
    class: ClassSpec,
    density: f64,
    rng: &mut impl Rng,
) -> Result<PriorityRelation> {
    if n < class.min_students() {
        return Err(Error::invalid(format!(
            "class {class} needs at least {} students",
            class.min_students()
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::invalid(format!("density {density} outside [0, 1]")));
    }
    let mut perm: Vec<StudentId> = (0..n).map(StudentId).collect();
    perm.shuffle(rng);
    let pairs = match class {
        ClassSpec::T => all_forward(&perm),
        ClassSpec::W | ClassSpec::WeakNotTotal => {
            let mut layer = vec![0usize; n];
            let mut current = 0;
            for k in 1..n {
                if rng.gen_bool(density) {
                    current += 1;
                }
                layer[k] = current;
            }
            if class == ClassSpec::WeakNotTotal && current + 1 == n {
                // every layer is a singleton; merge the first two
                for l in layer.iter_mut().skip(1) {
                    *l -= 1;
                }
            }
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if layer[a] < layer[b] {
                        out.push((perm[a], perm[b]));
                    }
                }
            }
            out
        }
        ClassSpec::A | ClassSpec::P | ClassSpec::AcyclicNotPartial | ClassSpec::PartialNotWeak => {
            let mut keep = vec![vec![false; n]; n];
            for a in 0..n {
                for b in a + 1..n {
                    keep[a][b] = rng.gen_bool(density);
                }
            }
            match class {
                ClassSpec::P | ClassSpec::PartialNotWeak => close_transitively(&mut keep),
                ClassSpec::AcyclicNotPartial if is_transitive(&keep) => {
                    // force a broken chain a > b > c without a > c
                    let mut picks: Vec<usize> = (0..n).collect();
                    picks.shuffle(rng);
                    let mut abc = [picks[0], picks[1], picks[2]];
                    abc.sort();
                    let [a, b, c] = abc;
                    keep[a][b] = true;
                    keep[b][c] = true;
                    keep[a][c] = false;
                }
                _ => {}
            }
            if class == ClassSpec::PartialNotWeak && is_negatively_transitive(&keep) {
                // a single comparable pair plus an outsider is never a weak order
                let mut picks: Vec<usize> = (0..n).collect();
                picks.shuffle(rng);
                let (a, b) = (picks[0].min(picks[1]), picks[0].max(picks[1]));
                keep = vec![vec![false; n]; n];
                keep[a][b] = true;
            }
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if keep[a][b] {
                        out.push((perm[a], perm[b]));
                    }
                }
            }
            out
        }
    };
    let rel = PriorityRelation::new(n, pairs)?;
    let got = classify(&rel);
    if !class.contains(&got) {
        return Err(Error::Invariant(format!(
            "generated {} relation, wanted {class}",
            got.label
        )));
    }
    Ok(rel)
}

fn all_forward(perm: &[StudentId]) -> Vec<(StudentId, StudentId)> {
    let mut out = Vec::new();
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            out.push((perm[a], perm[b]));
        }
    }
    out
}

// The helpers below work on positions in the underlying order, where every
// kept pair points forward.

fn close_transitively(keep: &mut [Vec<bool>]) {
    let n = keep.len();
    for k in 0..n {
        for a in 0..n {
            if keep[a][k] {
                for b in 0..n {
                    if keep[k][b] {
                        keep[a][b] = true;
                    }
                }
            }
        }
    }
}

fn is_transitive(keep: &[Vec<bool>]) -> bool {
    let n = keep.len();
    (0..n).all(|a| (0..n).all(|b| !keep[a][b] || (0..n).all(|c| !keep[b][c] || keep[a][c])))
}

fn is_negatively_transitive(keep: &[Vec<bool>]) -> bool {
    let n = keep.len();
    let rel = |a: usize, b: usize| if a < b { keep[a][b] } else { false };
    (0..n).all(|a| (0..n).all(|b| !rel(a, b) || (0..n).all(|c| rel(a, c) || rel(c, b))))
}

/// A random problem. Each student ranks a random nonempty subset of
/// schools in random order.
pub fn random_problem(spec: &RandomSpec, rng: &mut impl Rng) -> Result<Problem> {
    if spec.schools == 0 {
        return Err(Error::invalid("at least one school is required"));
    }
    if spec.min_capacity == 0 || spec.min_capacity > spec.max_capacity {
        return Err(Error::invalid(
            "capacity range must satisfy 1 <= min <= max",
        ));
    }
    let n = spec.students;
    let m = spec.schools;
    let capacities = (0..m)
        .map(|_| rng.gen_range(spec.min_capacity..=spec.max_capacity))
        .collect();
    let preferences = (0..n)
        .map(|_| {
            let mut schools: Vec<SchoolId> = (0..m).map(SchoolId).collect();
            schools.shuffle(rng);
            schools.truncate(rng.gen_range(1..=m));
            PreferenceOrder::new(schools)
        })
        .collect::<Result<Vec<_>>>()?;
    let priorities = (0..m)
        .map(|_| random_relation(n, spec.class, spec.density, rng))
        .collect::<Result<Vec<_>>>()?;
    Problem::new(
        (1..=n).map(|k| format!("i{k}")).collect(),
        (1..=m).map(|k| format!("s{k}")).collect(),
        capacities,
        preferences,
        priorities,
    )
}

/// Each priority pair is allowed with probability `density`; pairs outside
/// the priority are added at a quarter of that rate.
pub fn random_violation_set(
    prob: &Problem,
    density: f64,
    rng: &mut impl Rng,
) -> Result<ViolationSet> {
    let sets = prob
        .schools()
        .map(|s| {
            let mut out = Vec::new();
            for i in prob.students() {
                for j in prob.students() {
                    if i == j {
                        continue;
                    }
                    let p = if prob.priority(s).contains(i, j) {
                        density
                    } else {
                        density / 4.0
                    };
                    if rng.gen_bool(p) {
                        out.push((i, j));
                    }
                }
            }
            out
        })
        .collect();
    ViolationSet::new(prob, sets)
}

/// An endless seeded stream of instances with random sizes up to the given
/// bounds, capacities in `capacity`, and random density.
pub struct InstanceSampler {
    rng: ChaCha8Rng,
    class: ClassSpec,
    max_students: usize,
    max_schools: usize,
    capacity: (usize, usize),
}

impl InstanceSampler {
    pub fn new(
        class: ClassSpec,
        max_students: usize,
        max_schools: usize,
        seed: u64,
    ) -> Result<Self> {
        if max_students < class.min_students() || max_schools == 0 {
            return Err(Error::invalid(format!(
                "bounds too small for class {class}: need at least {} students and one school",
                class.min_students()
            )));
        }
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            class,
            max_students,
            max_schools,
            capacity: (1, 2),
        })
    }

    pub fn with_capacity(mut self, min: usize, max: usize) -> Self {
        self.capacity = (min, max);
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl Iterator for InstanceSampler {
    type Item = Problem;

    fn next(&mut self) -> Option<Problem> {
        let spec = RandomSpec {
            students: self
                .rng
                .gen_range(self.class.min_students()..=self.max_students),
            schools: self.rng.gen_range(1..=self.max_schools),
            min_capacity: self.capacity.0,
            max_capacity: self.capacity.1,
            class: self.class,
            density: self.rng.gen_range(0.0..=1.0),
            seed: 0,
        };
        Some(random_problem(&spec, &mut self.rng).expect("sampler bounds are validated"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_class_is_hit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for class in ClassSpec::ALL {
            for n in class.min_students()..=6 {
                for k in 0..=10 {
                    let rel = random_relation(n, class, k as f64 / 10.0, &mut rng).unwrap();
                    assert!(class.contains(&classify(&rel)));
                }
            }
        }
    }

    #[test]
    fn too_few_students() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(random_relation(2, ClassSpec::PartialNotWeak, 0.5, &mut rng).is_err());
    }

    #[test]
    fn spec_is_deterministic() {
        let spec = RandomSpec {
            students: 5,
            schools: 3,
            min_capacity: 1,
            max_capacity: 2,
            class: ClassSpec::P,
            density: 0.4,
            seed: 11,
        };
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
    }

    #[test]
    fn sampler_respects_bounds() {
        for p in InstanceSampler::new(ClassSpec::W, 4, 3, 9)
            .unwrap()
            .take(50)
        {
            assert!(p.num_students() <= 4 && (1..=3).contains(&p.num_schools()));
            assert!(p.capacities().iter().all(|&q| (1..=2).contains(&q)));
            assert!(p.all_priorities(|c| c.is_weak_order()));
        }
    }

    #[test]
    fn class_names_parse() {
        for c in ClassSpec::ALL {
            assert_eq!(ClassSpec::parse(c.as_str()), Some(c));
        }
    }
}
