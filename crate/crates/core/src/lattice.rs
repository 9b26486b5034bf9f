//! Set functions on the Boolean lattice of variable subsets.
//!
//! The entropy table holds `H(X_S)` for every `S ⊆ [k]`. Interaction
//! information is the negated Möbius inversion of that table:
//!
//! ```text
//! I(S) = -Σ_{T ⊆ S} (-1)^{|S|-|T|} H(X_T)
//! ```
//!
//! so `I({i}) = -H(X_i)`, `I({i,j})` is the mutual information, and
//! `I({i,j,l})` is the negated co-information. Orders above two can take
//! either sign.

use std::ops::{AddAssign, SubAssign};

use serde::{Deserialize, Serialize};

use crate::dist::{marginalize, sum_out_axis, JointPmf};
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Prob, Real};
use crate::subset::{SubsetMask, MAX_DIMENSIONS};

fn check_k(k: usize) -> Result<()> {
    if k > MAX_DIMENSIONS {
        return Err(Error::DimensionCap {
            k,
            max: MAX_DIMENSIONS,
        });
    }
    Ok(())
}

/// Zeta transform over subsets, in place: `f(S) ← Σ_{T⊆S} f(T)`.
///
/// `xs.len()` must be a power of two; O(k·2^k) additions.
pub fn subset_zeta<T: Clone + AddAssign>(xs: &mut [T]) {
    butterfly(xs, |lo, hi| *hi += lo.clone());
}

/// Möbius transform over subsets, in place; inverse of [`subset_zeta`].
pub fn subset_mobius<T: Clone + SubAssign>(xs: &mut [T]) {
    butterfly(xs, |lo, hi| *hi -= lo.clone());
}

fn butterfly<T>(xs: &mut [T], op: impl Fn(&T, &mut T)) {
    assert!(
        xs.len().is_power_of_two(),
        "lattice table length must be 2^k"
    );
    let mut half = 1;
    while half < xs.len() {
        for block in xs.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                op(l, h);
            }
        }
        half *= 2;
    }
}

/// `H(X_S)` in bits for every subset mask; `values[0] = H(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyTable<F> {
    pub k: usize,
    pub values: Vec<F>,
}

/// `I(S)` in bits for every subset mask. The entry at the empty set is
/// undefined and stored as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionTable<F> {
    pub k: usize,
    pub values: Vec<F>,
}

fn check_len(k: usize, len: usize) -> Result<()> {
    check_k(k)?;
    if len != 1usize << k {
        return Err(Error::Parse(format!(
            "lattice table for k = {k} needs {} values, got {len}",
            1usize << k
        )));
    }
    Ok(())
}

impl<F: Real> EntropyTable<F> {
    /// Wraps raw values. Only the length is checked, so arbitrary set
    /// functions can be pushed through the transforms.
    pub fn from_values(k: usize, values: Vec<F>) -> Result<Self> {
        check_len(k, values.len())?;
        Ok(Self { k, values })
    }

    pub fn get(&self, s: SubsetMask) -> F {
        self.values[s.index()]
    }

    /// `Σ_i H(X_i) − H(X_[k])`.
    pub fn total_correlation(&self) -> F {
        let singles: Vec<F> = (0..self.k).map(|i| self.values[1 << i]).collect();
        pairwise_sum(&singles) - self.values[(1 << self.k) - 1]
    }
}

impl<F: Real> InteractionTable<F> {
    pub fn from_values(k: usize, values: Vec<F>) -> Result<Self> {
        check_len(k, values.len())?;
        Ok(Self { k, values })
    }

    pub fn get(&self, s: SubsetMask) -> F {
        self.values[s.index()]
    }
}

/// Shannon entropy in bits, with `0·log 0 = 0`.
pub fn shannon_entropy<F: Real>(probs: &[F]) -> F {
    let terms: Vec<F> = probs
        .iter()
        .map(|&p| {
            if p > F::zero() {
                -(p * p.log2())
            } else {
                F::zero()
            }
        })
        .collect();
    pairwise_sum(&terms)
}

/// Entropies of every subset marginal.
///
/// Marginals are built top-down: the marginal of `S` is obtained from that
/// of `S ∪ {j}` (with `j` the lowest variable outside `S`) by summing out
/// one axis. The parent links form a spanning tree of the lattice, walked
/// depth-first, so at most `k` intermediate marginals are alive at once.
/// Exact inputs stay exact until each marginal is converted for its
/// entropy.
pub fn entropy_table<T: Prob, F: Real>(joint: &JointPmf<T>) -> Result<EntropyTable<F>> {
    let k = joint.k();
    check_k(k)?;
    if k == 0 {
        return Err(Error::InvalidSubset {
            bits: 0,
            k,
            reason: "distribution has no dimensions",
        });
    }
    let mut values = vec![F::zero(); 1 << k];
    let full = (1u64 << k) - 1;
    let shape = joint.shape();
    visit(full, joint.probs().to_vec(), shape, &mut values);
    Ok(EntropyTable { k, values })
}

/// `mask` has shape `shape` (its retained dimensions in increasing order).
/// Children drop one bit from the block of trailing ones of `mask`; bit `j`
/// in that block sits at axis `j` of the marginal.
fn visit<T: Prob, F: Real>(mask: u64, probs: Vec<T>, shape: Vec<usize>, out: &mut [F]) {
    let real: Vec<F> = probs.iter().map(Prob::to_real).collect();
    out[mask as usize] = shannon_entropy(&real);
    drop(real);
    let mut j = 0;
    while mask >> j & 1 == 1 {
        let child = mask & !(1 << j);
        if child != 0 {
            let child_probs = sum_out_axis(&probs, &shape, j);
            let mut child_shape = shape.clone();
            child_shape.remove(j);
            visit(child, child_probs, child_shape, out);
        }
        j += 1;
    }
}

/// Literal alternating double sum over `(S, T ⊆ S)`.
///
/// O(3^k); kept as the reference path for cross-checks.
pub fn interaction_table_naive<F: Real>(h: &EntropyTable<F>) -> InteractionTable<F> {
    let mut values = vec![F::zero(); h.values.len()];
    let mut terms = Vec::new();
    for s in SubsetMask::all(h.k).skip(1) {
        terms.clear();
        for t in s.submasks() {
            let hv = h.values[t.index()];
            // -(-1)^{|S|-|T|} H(T)
            terms.push(if (s.len() - t.len()) % 2 == 0 {
                -hv
            } else {
                hv
            });
        }
        values[s.index()] = pairwise_sum(&terms);
    }
    InteractionTable { k: h.k, values }
}

/// Same result as [`interaction_table_naive`] via an in-place Möbius
/// transform, O(k·2^k).
pub fn interaction_table_fast<F: Real>(h: &EntropyTable<F>) -> InteractionTable<F> {
    let mut values = h.values.clone();
    subset_mobius(&mut values);
    for v in values.iter_mut() {
        *v = -*v;
    }
    values[0] = F::zero();
    InteractionTable { k: h.k, values }
}

/// Rebuilds `-H(X_S) = Σ_{∅≠T⊆S} I(T)` for every `S` and returns the
/// largest absolute deviation.
pub fn mobius_roundtrip_check<F: Real>(h: &EntropyTable<F>) -> F {
    let mut acc = interaction_table_fast(h).values;
    subset_zeta(&mut acc);
    acc.iter()
        .zip(&h.values)
        .skip(1)
        .map(|(&rebuilt, &hv)| (rebuilt + hv).abs())
        .fold(F::zero(), F::max)
}

/// Totals `I^(r) = Σ_{|S| = r} I(S)` for `r = 1..=k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderTotals<F> {
    values: Vec<F>,
}

impl<F: Real> OrderTotals<F> {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    /// `I^(r)`; `r` is one-based.
    pub fn get(&self, r: usize) -> Option<F> {
        r.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// `(r, I^(r))` pairs for `r ≥ 2`.
    pub fn interactions(&self) -> impl Iterator<Item = (usize, F)> + '_ {
        self.values
            .iter()
            .copied()
            .enumerate()
            .skip(1)
            .map(|(i, v)| (i + 1, v))
    }

    pub fn as_slice(&self) -> &[F] {
        &self.values
    }
}

pub fn total_interaction_by_order<F: Real>(t: &InteractionTable<F>) -> OrderTotals<F> {
    let mut buckets: Vec<Vec<F>> = vec![Vec::new(); t.k];
    for s in SubsetMask::all(t.k).skip(1) {
        buckets[s.len() - 1].push(t.values[s.index()]);
    }
    OrderTotals {
        values: buckets.iter().map(|b| pairwise_sum(b)).collect(),
    }
}

/// `C(P_k) = Σ_i H(X_i) − H(X_[k])`, from the one-dimensional marginals
/// and the full joint only.
pub fn total_correlation_entropy<T: Prob, F: Real>(joint: &JointPmf<T>) -> Result<F> {
    let k = joint.k();
    let full: Vec<F> = joint.probs().iter().map(Prob::to_real).collect();
    let singles = (0..k)
        .map(|i| {
            let m = marginalize(joint, SubsetMask::singleton(i, k)?)?;
            let real: Vec<F> = m.probs.iter().map(Prob::to_real).collect();
            Ok(shannon_entropy(&real))
        })
        .collect::<Result<Vec<F>>>()?;
    Ok(pairwise_sum(&singles) - shannon_entropy(&full))
}

/// `Σ_{r≥2} I^(r)`.
pub fn total_correlation_interactions<F: Real>(t: &InteractionTable<F>) -> F {
    let totals = total_interaction_by_order(t);
    pairwise_sum(&totals.as_slice()[1..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Alphabet;

    fn bin() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    fn pair(p: [f64; 4]) -> JointPmf<f64> {
        JointPmf::new(vec![bin(), bin()], p.to_vec()).unwrap()
    }

    #[test]
    fn zeta_and_mobius_are_inverse_on_integers() {
        let orig: Vec<i64> = (0..16).map(|i| i * i - 7).collect();
        let mut xs = orig.clone();
        subset_zeta(&mut xs);
        // f(S) = Σ_{T⊆S} g(T), checked by brute force
        for s in 0..16u64 {
            let m = SubsetMask::new(s, 4).unwrap();
            let direct: i64 = m.submasks().map(|t| orig[t.index()]).sum();
            assert_eq!(xs[s as usize], direct);
        }
        subset_mobius(&mut xs);
        assert_eq!(xs, orig);
    }

    #[test]
    fn independent_uniform_pair() {
        let h: EntropyTable<f64> = entropy_table(&pair([0.25; 4])).unwrap();
        assert_eq!(h.values, vec![0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn correlated_uniform_pair() {
        let h: EntropyTable<f64> = entropy_table(&pair([0.5, 0.0, 0.0, 0.5])).unwrap();
        assert_eq!(h.values[3], 1.0);
        let i = interaction_table_fast(&h);
        assert_eq!(i.values[3], 1.0);
    }

    #[test]
    fn singleton_and_pair_entries() {
        let p = pair([0.1, 0.2, 0.3, 0.4]);
        let h: EntropyTable<f64> = entropy_table(&p).unwrap();
        for t in [interaction_table_naive(&h), interaction_table_fast(&h)] {
            assert_eq!(t.values[1], -h.values[1]);
            assert_eq!(t.values[2], -h.values[2]);
            let mi = h.values[1] + h.values[2] - h.values[3];
            assert!((t.values[3] - mi).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_table_has_zero_interactions() {
        let h = EntropyTable::from_values(5, vec![0.0_f64; 32]).unwrap();
        assert!(interaction_table_fast(&h).values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn k1_roundtrip_is_exact() {
        let h: EntropyTable<f64> =
            entropy_table(&JointPmf::new(vec![bin()], vec![0.3, 0.7]).unwrap()).unwrap();
        assert_eq!(mobius_roundtrip_check(&h), 0.0);
    }

    #[test]
    fn from_values_checks_length() {
        assert!(EntropyTable::<f64>::from_values(3, vec![0.0; 7]).is_err());
        assert!(matches!(
            EntropyTable::<f64>::from_values(21, vec![]),
            Err(Error::DimensionCap { k: 21, .. })
        ));
    }

    fn triple(probs: Vec<f64>) -> InteractionTable<f64> {
        let a = vec![bin(), bin(), bin()];
        let h: EntropyTable<f64> = entropy_table(&JointPmf::new(a, probs).unwrap()).unwrap();
        interaction_table_fast(&h)
    }

    #[test]
    fn xor_parity_triple_is_the_negated_co_information() {
        // pairs independent, triple fully determined: co-information is -1
        let t = triple(
            (0..8u32)
                .map(|i| if i.count_ones() % 2 == 0 { 0.25 } else { 0.0 })
                .collect(),
        );
        assert!((t.values[7] - 1.0).abs() < 1e-15);
        for pair in [3, 5, 6] {
            assert!(t.values[pair].abs() < 1e-15);
        }
    }

    #[test]
    fn identical_copies_have_negative_triple() {
        let mut probs = vec![0.0; 8];
        probs[0] = 0.5;
        probs[7] = 0.5;
        let t = triple(probs);
        assert!((t.values[7] + 1.0).abs() < 1e-15);
        for pair in [3, 5, 6] {
            assert!((t.values[pair] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn entropy_table_works_in_f32() {
        let h: EntropyTable<f32> = entropy_table(&pair([0.25; 4])).unwrap();
        assert_eq!(h.values, vec![0.0f32, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn order_totals_accessors() {
        let t = InteractionTable::from_values(2, vec![0.0, -1.0, -1.0, 0.5]).unwrap();
        let o = total_interaction_by_order(&t);
        assert_eq!(o.get(1), Some(-2.0));
        assert_eq!(o.get(2), Some(0.5));
        assert_eq!(o.get(0), None);
        assert_eq!(o.interactions().collect::<Vec<_>>(), vec![(2, 0.5)]);
        assert_eq!(total_correlation_interactions(&t), 0.5);
    }
}
