//! Brute-force oracles against the library, exhaustively on tiny ground sets
//! and with proptest beyond.

use std::collections::BTreeSet;

use proptest::prelude::*;
use school_choice::mechanisms::{
    deferred_acceptance_with, eadam, eadam_with, extend_profile, EadamConfig,
};
use school_choice::model::{enumerate_matchings, is_stable, stability_report, weakly_dominates};
use school_choice::random::{random_violation_set, ClassSpec, InstanceSampler};
use school_choice::relations::{
    classify, count_extensions, enumerate_extensions, is_extension, smo_extend, ClassLabel,
    LowestIndex, PriorityRelation, SeededRandom, StudentId, TotalOrder,
};
use school_choice::theory::{augment, maximal_pareto_chains, DEFAULT_MAX_CHAINS};
use school_choice::violations::{
    effective_priority, effective_problem, is_partially_stable, realize_as_violation_model,
    ViolationSet,
};

type Adj = Vec<Vec<bool>>;

fn adjacency(rel: &PriorityRelation) -> Adj {
    let n = rel.ground_size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rel.contains(StudentId(i), StudentId(j)))
                .collect()
        })
        .collect()
}

fn closure(adj: &Adj) -> Adj {
    let n = adj.len();
    let mut r = adj.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Class label straight from the definitions, with acyclicity via the
/// transitive closure.
fn label_oracle(rel: &PriorityRelation) -> ClassLabel {
    let a = adjacency(rel);
    let n = a.len();
    let r = |i: usize, j: usize| a[i][j];
    let acyclic = !(0..n).any(|i| closure(&a)[i][i]);
    let transitive =
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r(i, j) && r(j, k)) || r(i, k))));
    let neg = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| r(i, k) || r(k, j) || !r(i, j))));
    let complete = (0..n).all(|i| (0..n).all(|j| i == j || r(i, j) || r(j, i)));
    if !acyclic {
        ClassLabel::Cyclic
    } else if !transitive {
        ClassLabel::AcyclicNotTransitive
    } else if !neg {
        ClassLabel::PartialNotWeak
    } else if !complete {
        ClassLabel::WeakNotTotal
    } else {
        ClassLabel::Total
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Total orders containing `rel`, found by filtering all permutations.
fn extensions_oracle(rel: &PriorityRelation) -> BTreeSet<Vec<usize>> {
    permutations(rel.ground_size())
        .into_iter()
        .filter(|perm| {
            let mut pos = vec![0; perm.len()];
            for (k, &i) in perm.iter().enumerate() {
                pos[i] = k;
            }
            rel.pairs().iter().all(|&(i, j)| pos[i.0] < pos[j.0])
        })
        .collect()
}

/// Every asymmetric relation on `n` students: each unordered pair is
/// absent, forward or backward.
fn all_relations(n: usize) -> Vec<PriorityRelation> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut chosen = Vec::new();
            for &(i, j) in &pairs {
                match code % 3 {
                    1 => chosen.push((StudentId(i), StudentId(j))),
                    2 => chosen.push((StudentId(j), StudentId(i))),
                    _ => {}
                }
                code /= 3;
            }
            PriorityRelation::new(n, chosen).unwrap()
        })
        .collect()
}

fn library_extensions(rel: &PriorityRelation) -> BTreeSet<Vec<usize>> {
    enumerate_extensions(rel)
        .unwrap()
        .iter()
        .map(|o| o.order().iter().map(|i| i.0).collect())
        .collect()
}

#[test]
fn classify_matches_definitions_exhaustively() {
    for n in 0..=4 {
        for rel in all_relations(n) {
            assert_eq!(
                classify(&rel).label,
                label_oracle(&rel),
                "{:?}",
                rel.pairs()
            );
        }
    }
}

#[test]
fn extensions_match_permutation_filter_exhaustively() {
    for n in 0..=4 {
        for rel in all_relations(n) {
            let oracle = extensions_oracle(&rel);
            assert_eq!(library_extensions(&rel), oracle);
            assert_eq!(count_extensions(&rel).unwrap(), oracle.len() as u128);
            assert_eq!(oracle.is_empty(), !classify(&rel).acyclic);
        }
    }
}

fn relation_strategy(max_n: usize) -> impl Strategy<Value = PriorityRelation> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |codes| {
            let mut chosen = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    match codes[k] {
                        1 => chosen.push((StudentId(i), StudentId(j))),
                        2 => chosen.push((StudentId(j), StudentId(i))),
                        _ => {}
                    }
                    k += 1;
                }
            }
            PriorityRelation::new(n, chosen).unwrap()
        })
    })
}

fn acyclic_strategy(max_n: usize) -> impl Strategy<Value = PriorityRelation> {
    (1..=max_n, any::<u64>(), 0.0f64..=1.0).prop_map(|(n, seed, density)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        school_choice::random::random_relation(n, ClassSpec::A, density, &mut rng).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classify_agrees_on_larger_relations(rel in relation_strategy(6)) {
        prop_assert_eq!(classify(&rel).label, label_oracle(&rel));
    }

    #[test]
    fn extensions_agree_on_larger_relations(rel in relation_strategy(6)) {
        prop_assert_eq!(library_extensions(&rel), extensions_oracle(&rel));
    }

    #[test]
    fn smo_outputs_are_extensions(rel in acyclic_strategy(7), seed in any::<u64>()) {
        let order = smo_extend(&rel, &mut SeededRandom::new(seed)).unwrap();
        prop_assert!(is_extension(&order, &rel).unwrap());
    }

    #[test]
    fn total_order_relation_round_trip(seed in any::<u64>(), n in 1usize..8) {
        let order = smo_extend(&PriorityRelation::empty(n), &mut SeededRandom::new(seed)).unwrap();
        prop_assert_eq!(TotalOrder::from_relation(&order.to_relation()), Some(order));
    }

    #[test]
    fn realize_round_trips(rel in acyclic_strategy(6)) {
        let (order, allowed) = realize_as_violation_model(&rel).unwrap();
        prop_assert!(allowed.iter().all(|&(i, j)| order.prefers(i, j) && !rel.contains(i, j)));
        prop_assert_eq!(effective_priority(&order.to_relation(), &allowed), rel);
    }

    #[test]
    fn reduction_keeps_acyclicity(rel in acyclic_strategy(6), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let allowed: BTreeSet<_> = rel.pairs().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let reduced = effective_priority(&rel, &allowed);
        prop_assert!(reduced.is_subset_of(&rel));
        prop_assert!(classify(&reduced).acyclic);
    }
}

#[test]
fn realize_round_trips_exhaustively() {
    for n in 0..=4 {
        for rel in all_relations(n).into_iter().filter(|r| classify(r).acyclic) {
            let (order, allowed) = realize_as_violation_model(&rel).unwrap();
            assert_eq!(effective_priority(&order.to_relation(), &allowed), rel);
        }
    }
}

#[test]
fn partial_stability_two_ways_and_monotone() {
    let mut sampler = InstanceSampler::new(ClassSpec::A, 4, 3, 21).unwrap();
    for _ in 0..80 {
        let p = sampler.next().unwrap();
        let small = random_violation_set(&p, 0.3, sampler.rng()).unwrap();
        // grow `small` by every priority pair of school 0
        let mut sets: Vec<Vec<_>> = p
            .schools()
            .map(|s| small.at(s).iter().copied().collect())
            .collect();
        sets[0].extend(
            p.priority(school_choice::SchoolId(0))
                .pairs()
                .iter()
                .copied(),
        );
        let large = ViolationSet::new(&p, sets).unwrap();
        assert!(small.is_subset_of(&large));
        let reduced = effective_problem(&p, &small).unwrap();
        for mu in enumerate_matchings(&p).unwrap() {
            let direct = is_partially_stable(&p, &small, &mu).unwrap();
            assert_eq!(direct, stability_report(&reduced, &mu).unwrap().stable);
            if direct {
                assert!(is_partially_stable(&p, &large, &mu).unwrap());
            }
        }
    }
}

#[test]
fn eadam_weakly_improves_da_and_is_stable() {
    for p in InstanceSampler::new(ClassSpec::P, 6, 3, 22)
        .unwrap()
        .take(150)
    {
        for seed in 0..3 {
            let start = extend_profile(p.priorities(), &mut SeededRandom::new(seed)).unwrap();
            let da = deferred_acceptance_with(&p, &start).unwrap();
            let ea = eadam(&p, &start).unwrap();
            assert!(is_stable(&p, &ea));
            assert!(weakly_dominates(&p, &ea, &da));
            let fix = eadam_with(
                &p,
                &start,
                EadamConfig {
                    settle_to_fixpoint: true,
                },
            )
            .unwrap();
            assert!(is_stable(&p, &fix));
        }
    }
}

#[test]
fn augment_is_monotone_along_chains() {
    for p in InstanceSampler::new(ClassSpec::P, 5, 3, 23)
        .unwrap()
        .take(60)
    {
        let stable = school_choice::model::stable_set_oracle(&p).unwrap();
        for chain in maximal_pareto_chains(&p, &stable, DEFAULT_MAX_CHAINS).unwrap() {
            let full = augment(&p, &chain).unwrap();
            for k in 0..chain.len() {
                let prefix = augment(&p, &chain[..k]).unwrap();
                for s in p.schools() {
                    assert!(prefix[s.0].added.is_subset(&full[s.0].added));
                }
            }
            for aug in &full {
                assert!(aug.asymmetric && aug.acyclic);
            }
        }
    }
}

#[test]
fn lowest_index_smo_is_an_extension_for_every_profile() {
    for p in InstanceSampler::new(ClassSpec::A, 6, 4, 24)
        .unwrap()
        .take(50)
    {
        let prof = extend_profile(p.priorities(), &mut LowestIndex).unwrap();
        assert!(prof.extends(p.priorities()));
    }
}
