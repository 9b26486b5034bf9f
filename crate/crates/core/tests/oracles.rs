mod common;

use common::{brute_force_draws, mutual_information_2d, random_joint, tuples};
use itertools::Itertools;
use kldecomp::{
    decompose, joint_from_population, marginalize, reference_from_population, sequence_probability,
    BigRational, DecomposeOptions, PopulationSpec, ReferenceSpec, Report, SubsetMask, ZeroPolicy,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

const POPULATIONS: &[(&[(&str, u64)], usize)] = &[
    (&[("0", 2), ("1", 2), ("2", 2)], 3),
    (&[("0", 3), ("1", 2)], 2),
    (&[("A", 4), ("B", 4)], 4),
    (&[("A", 1), ("B", 1)], 2),
    (&[("x", 3), ("y", 1), ("z", 2)], 4),
    (&[("a", 5), ("b", 2)], 3),
];

#[test]
fn joint_equals_labeled_enumeration() {
    for &(counts, k) in POPULATIONS {
        let spec = PopulationSpec::new(counts.iter().copied(), k).unwrap();
        let joint = joint_from_population(&spec).unwrap();
        let oracle = brute_force_draws(counts, k);
        let a = &joint.alphabets()[0];
        for idx in tuples(a.len(), k) {
            let key: Vec<String> = idx.iter().map(|&i| a.symbol(i).to_string()).collect();
            let want = oracle.get(&key).cloned().unwrap_or_else(BigRational::zero);
            assert_eq!(joint.get(&idx).unwrap(), &want, "{counts:?} {key:?}");
        }
    }
}

#[test]
fn case2_pair_probability_by_enumeration() {
    let counts = [("0", 3), ("1", 2)];
    let oracle = brute_force_draws(&counts, 2);
    let want = &oracle[&vec!["0".to_string(), "0".to_string()]];
    assert_eq!(want, &r(3, 10));
    let spec = PopulationSpec::new(counts, 2).unwrap();
    assert_eq!(&sequence_probability(&spec, &["0", "0"]).unwrap(), want);
}

#[test]
fn case4_all_a_by_enumeration() {
    let counts = [("A", 4), ("B", 4)];
    let oracle = brute_force_draws(&counts, 4);
    let key = vec!["A".to_string(); 4];
    assert_eq!(oracle[&key], r(1, 70));
    let spec = PopulationSpec::new(counts, 4).unwrap();
    assert_eq!(sequence_probability(&spec, &["A"; 4]).unwrap(), r(1, 70));
}

#[test]
fn case2_second_draw_marginal_by_enumeration() {
    let counts = [("0", 3), ("1", 2)];
    let oracle = brute_force_draws(&counts, 2);
    let mut second = [BigRational::zero(), BigRational::zero()];
    for (key, p) in &oracle {
        second[if key[1] == "0" { 0 } else { 1 }] += p.clone();
    }
    assert_eq!(second, [r(3, 5), r(2, 5)]);

    let joint = joint_from_population(&PopulationSpec::new(counts, 2).unwrap()).unwrap();
    let m = marginalize(&joint, SubsetMask::singleton(1, 2).unwrap()).unwrap();
    assert_eq!(m.probs, second);
    let float = marginalize(
        &joint.to_real::<f64>(),
        SubsetMask::singleton(1, 2).unwrap(),
    )
    .unwrap();
    assert_eq!(float.probs, vec![0.6, 0.4]);
}

#[test]
fn two_labeled_items_give_anti_diagonal() {
    let counts = [("A", 1), ("B", 1)];
    let oracle = brute_force_draws(&counts, 2);
    let joint = joint_from_population(&PopulationSpec::new(counts, 2).unwrap()).unwrap();
    let want: Vec<BigRational> = tuples(2, 2)
        .iter()
        .map(|t| {
            let key: Vec<String> = t.iter().map(|&i| ["A", "B"][i].to_string()).collect();
            oracle.get(&key).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    assert_eq!(want, vec![r(0, 1), r(1, 2), r(1, 2), r(0, 1)]);
    assert_eq!(joint.probs(), want.as_slice());
}

#[test]
fn exchangeability_over_all_permutations() {
    for &(counts, k) in POPULATIONS.iter().filter(|(_, k)| *k <= 4) {
        let spec = PopulationSpec::new(counts.iter().copied(), k).unwrap();
        let joint = joint_from_population(&spec).unwrap();
        let m = joint.alphabets()[0].len();
        for t in tuples(m, k) {
            let p = joint.get(&t).unwrap();
            for perm in t.iter().copied().permutations(k) {
                assert_eq!(joint.get(&perm).unwrap(), p);
            }
        }
    }
}

#[test]
fn every_draw_marginal_is_the_population_proportion() {
    for &(counts, k) in POPULATIONS {
        let spec = PopulationSpec::new(counts.iter().copied(), k).unwrap();
        let joint = joint_from_population(&spec).unwrap();
        let q = reference_from_population(&spec);
        for i in 0..k {
            assert_eq!(
                joint.marginal(i).unwrap().probs,
                q.per_dimension()[i].probs()
            );
        }
        let total: BigRational = joint.probs().iter().cloned().sum();
        assert_eq!(total, r(1, 1));
    }
}

#[test]
fn k2_own_marginals_reduce_to_mutual_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let rows = 2 + (rand::Rng::gen_range(&mut rng, 0..3));
        let cols = 2 + (rand::Rng::gen_range(&mut rng, 0..3));
        let joint = random_joint(&mut rng, &[rows, cols]);
        let own = ReferenceSpec::from_marginals(&joint).unwrap();
        let rep: Report = decompose(&joint, &own, allow_zeros()).unwrap();
        let mi = mutual_information_2d(joint.probs(), rows, cols);
        assert!((rep.kl_full - mi).abs() <= 1e-12);
        assert!((rep.interaction_totals[0] - mi).abs() <= 1e-12);
        assert!(rep.marginal_kls.iter().all(|v| v.abs() <= 1e-12));
    }
}

/// Own marginals can vanish where the joint does.
fn allow_zeros() -> DecomposeOptions {
    DecomposeOptions {
        zero_policy: ZeroPolicy::AllowZeroReference,
        keep_tables: false,
    }
}
