//! Exact joint law of `k` ordered draws without replacement from a finite
//! labeled population (multivariate hypergeometric model).
//!
//! Each draw `X_j` is its own dimension, so the sample space is the set of
//! ordered `k`-tuples. All arithmetic is in [`BigRational`]; every single
//! draw then has marginal exactly `counts[s] / n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dist::{Alphabet, JointPmf, ReferenceSpec, SymbolPmf};
use crate::error::{Error, Result};
use crate::subset::MAX_DIMENSIONS;

/// Symbol counts of a finite population plus the number of draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationSpec {
    counts: BTreeMap<String, u64>,
    k: usize,
}

impl PopulationSpec {
    /// Rejects empty populations, zero counts, `k = 0` and `k > n`.
    pub fn new<S: Into<String>>(
        counts: impl IntoIterator<Item = (S, u64)>,
        k: usize,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, c) in counts {
            let s = s.into();
            if c == 0 {
                return Err(Error::InvalidPopulation(format!(
                    "symbol {s:?} has zero count"
                )));
            }
            if map.insert(s.clone(), c).is_some() {
                return Err(Error::InvalidPopulation(format!("duplicate symbol {s:?}")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidPopulation("population has no symbols".into()));
        }
        if k == 0 {
            return Err(Error::InvalidPopulation("k must be at least 1".into()));
        }
        let n: u64 = map.values().sum();
        if k as u64 > n {
            return Err(Error::InvalidPopulation(format!(
                "cannot draw k = {k} items from a population of n = {n}"
            )));
        }
        Ok(Self { counts: map, k })
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total population size.
    pub fn n(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.counts.keys().cloned()).expect("population keys are unique and nonempty")
    }

    fn count_vec(&self) -> Vec<u64> {
        // BTreeMap order coincides with the sorted alphabet
        self.counts.values().copied().collect()
    }
}

/// Exact probability of drawing exactly `draws`, in order.
///
/// Zero when some symbol is drawn more often than it occurs.
pub fn sequence_probability(spec: &PopulationSpec, draws: &[&str]) -> Result<BigRational> {
    if draws.len() != spec.k {
        return Err(Error::ArityMismatch {
            expected: spec.k,
            actual: draws.len(),
        });
    }
    let mut remaining = spec.counts.clone();
    let n = spec.n();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (j, s) in draws.iter().enumerate() {
        let c = remaining
            .get_mut(*s)
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))?;
        num *= *c;
        den *= n - j as u64;
        *c = c.saturating_sub(1);
    }
    Ok(BigRational::new(num, den))
}

/// Dense exact joint PMF over all ordered `k`-tuples of population symbols.
pub fn joint_from_population(spec: &PopulationSpec) -> Result<JointPmf<BigRational>> {
    if spec.k > MAX_DIMENSIONS {
        return Err(Error::DimensionCap {
            k: spec.k,
            max: MAX_DIMENSIONS,
        });
    }
    let alphabet = spec.alphabet();
    let m = alphabet.len();
    let len = m.checked_pow(spec.k as u32).ok_or(Error::DimensionCap {
        k: spec.k,
        max: MAX_DIMENSIONS,
    })?;
    let mut probs = Vec::with_capacity(len);
    let mut remaining = spec.count_vec();
    let n = spec.n();
    // Depth-first over positions visits tuples in row-major order.
    fill(&mut probs, &mut remaining, n, 0, spec.k, BigRational::one());
    debug_assert_eq!(probs.len(), len);
    let alphabets = vec![alphabet; spec.k];
    JointPmf::new(alphabets, probs)
}

fn fill(
    out: &mut Vec<BigRational>,
    remaining: &mut [u64],
    n: u64,
    depth: usize,
    k: usize,
    acc: BigRational,
) {
    if depth == k {
        out.push(acc);
        return;
    }
    let left = n - depth as u64;
    let subtree = remaining.len().pow((k - depth - 1) as u32);
    for s in 0..remaining.len() {
        let c = remaining[s];
        if c == 0 || acc.is_zero() {
            out.extend(std::iter::repeat_n(BigRational::zero(), subtree));
            continue;
        }
        let p = &acc * BigRational::new(BigInt::from(c), BigInt::from(left));
        remaining[s] -= 1;
        fill(out, remaining, n, depth + 1, k, p);
        remaining[s] += 1;
    }
}

/// Population proportions `counts[s] / n`, repeated for each of the `k`
/// draws.
pub fn reference_from_population(spec: &PopulationSpec) -> ReferenceSpec<BigRational> {
    let n = BigInt::from(spec.n());
    let probs = spec
        .count_vec()
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), n.clone()))
        .collect();
    let q = SymbolPmf::new(spec.alphabet(), probs, 0.0).expect("proportions sum to one");
    ReferenceSpec::homogeneous(q, spec.k)
}
