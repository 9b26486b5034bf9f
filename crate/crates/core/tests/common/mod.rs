//! Test-only oracles. Nothing here calls into the code paths it checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;
use kldecomp::{Alphabet, BigRational, JointPmf, ReferenceSpec, SymbolPmf, DEFAULT_TOLERANCE};
use num_bigint::BigInt;
use rand::Rng;

/// Labels every item of the population, enumerates all ordered draws of
/// `k` distinct items and tallies the symbol tuples.
pub fn brute_force_draws(counts: &[(&str, u64)], k: usize) -> BTreeMap<Vec<String>, BigRational> {
    let items: Vec<&str> = counts
        .iter()
        .flat_map(|&(s, c)| std::iter::repeat_n(s, c as usize))
        .collect();
    let mut tally: BTreeMap<Vec<String>, u64> = BTreeMap::new();
    let mut total = 0u64;
    for draw in (0..items.len()).permutations(k) {
        let key = draw.iter().map(|&i| items[i].to_string()).collect();
        *tally.entry(key).or_default() += 1;
        total += 1;
    }
    tally
        .into_iter()
        .map(|(k, c)| (k, BigRational::new(BigInt::from(c), BigInt::from(total))))
        .collect()
}

pub fn alphabet(m: usize) -> Alphabet {
    Alphabet::new((0..m).map(|i| format!("s{i}"))).unwrap()
}

/// Random strictly positive PMF of length `m`.
pub fn random_pmf<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// Random joint over the given shape. About a fifth of the cells are zero
/// so that sparse supports are exercised too.
pub fn random_joint<R: Rng>(rng: &mut R, shape: &[usize]) -> JointPmf<f64> {
    let n: usize = shape.iter().product();
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.0..1.0)
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    let probs = w.iter().map(|x| x / s).collect();
    let alphabets = shape.iter().map(|&m| alphabet(m)).collect();
    JointPmf::new(alphabets, probs).unwrap()
}

pub fn random_shape<R: Rng>(rng: &mut R, k_range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    let k = rng.gen_range(k_range);
    (0..k).map(|_| rng.gen_range(2..=4)).collect()
}

pub fn random_reference<R: Rng>(rng: &mut R, shape: &[usize]) -> ReferenceSpec<f64> {
    ReferenceSpec::heterogeneous(
        shape
            .iter()
            .map(|&m| SymbolPmf::new(alphabet(m), random_pmf(rng, m), DEFAULT_TOLERANCE).unwrap())
            .collect(),
    )
}

/// Mutual information of a 2-D row-major table, straight from the
/// definition `Σ p(x,y) log2(p(x,y) / (p(x) p(y)))`.
pub fn mutual_information_2d(probs: &[f64], rows: usize, cols: usize) -> f64 {
    let px: Vec<f64> = (0..rows)
        .map(|i| (0..cols).map(|j| probs[i * cols + j]).sum())
        .collect();
    let py: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| probs[i * cols + j]).sum())
        .collect();
    let mut mi = 0.0;
    for i in 0..rows {
        for j in 0..cols {
            let p = probs[i * cols + j];
            if p > 0.0 {
                mi += p * (p / (px[i] * py[j])).log2();
            }
        }
    }
    mi
}

/// All outcome tuples of an `m`-symbol alphabet of length `k`, row-major.
pub fn tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).map(|_| 0..m).multi_cartesian_product().collect()
}
