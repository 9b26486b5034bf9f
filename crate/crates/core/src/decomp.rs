//! KL divergence against a product reference and its exact split
//!
//! ```text
//! KL(P_k ‖ Q_1⊗..⊗Q_k) = Σ_i KL(P_i ‖ Q_i) + Σ_{r≥2} I^(r)(P_k)
//! ```
//!
//! where the interaction sum equals the total correlation `C(P_k)`. The
//! full KL is evaluated directly from the joint tensor, independently of
//! the lattice, so the residual between the two sides is a real check.

use crate::dist::{JointPmf, ReferenceSpec};
use crate::error::{Error, Result};
use crate::lattice::{
    entropy_table, interaction_table_fast, total_correlation_entropy,
    total_correlation_interactions, total_interaction_by_order, EntropyTable, InteractionTable,
};
use crate::scalar::{pairwise_sum, Prob, Real};
use crate::subset::MAX_DIMENSIONS;

/// How zeros in the reference are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    /// Every reference probability must be strictly positive.
    #[default]
    Strict,
    /// Zeros are accepted where the distribution is also zero.
    AllowZeroReference,
}

/// Where a zero reference entry was found: `(position, p is positive there)`.
type ZeroAt = (usize, bool);

fn kl_raw<F: Real>(p: &[F], q: &[F], policy: ZeroPolicy) -> std::result::Result<F, ZeroAt> {
    let mut terms = Vec::with_capacity(p.len());
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if qi <= F::zero() {
            if pi > F::zero() || policy == ZeroPolicy::Strict {
                return Err((i, pi > F::zero()));
            }
            continue;
        }
        if pi > F::zero() {
            terms.push(pi * (pi.log2() - qi.log2()));
        }
    }
    Ok(pairwise_sum(&terms))
}

fn zero_error(dimension: usize, symbol: String, continuity: bool) -> Error {
    if continuity {
        Error::AbsoluteContinuityViolated { dimension, symbol }
    } else {
        Error::ReferenceNotPositive { dimension, symbol }
    }
}

/// `KL(p ‖ q) = Σ p log2(p/q)` in bits; zero-probability terms of `p`
/// contribute nothing.
pub fn kl_divergence<F: Real>(p: &[F], q: &[F], policy: ZeroPolicy) -> Result<F> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    kl_raw(p, q, policy).map_err(|(i, c)| zero_error(1, format!("#{i}"), c))
}

/// Zero-checks the reference against the support of each marginal.
fn check_reference<T: Prob>(
    joint: &JointPmf<T>,
    reference: &ReferenceSpec<T>,
    policy: ZeroPolicy,
) -> Result<()> {
    for (d, q) in reference.per_dimension().iter().enumerate() {
        if q.probs().iter().all(|v| *v > T::zero()) {
            continue;
        }
        let m = joint.marginal(d)?;
        for (x, v) in q.probs().iter().enumerate() {
            if *v > T::zero() {
                continue;
            }
            let continuity = m.probs[x] > T::zero();
            if continuity || policy == ZeroPolicy::Strict {
                return Err(zero_error(
                    d + 1,
                    q.alphabet().symbol(x).to_string(),
                    continuity,
                ));
            }
        }
    }
    Ok(())
}

/// `KL(P_k ‖ Q_1⊗..⊗Q_k)` straight from the joint tensor.
///
/// Each outcome contributes `P(x)·(log2 P(x) − Σ_i log2 Q_i(x_i))`, which
/// never forms the product `Π Q_i(x_i)` and so cannot underflow for large
/// `k`.
pub fn kl_joint_vs_product<T: Prob, F: Real>(
    joint: &JointPmf<T>,
    reference: &ReferenceSpec<T>,
    policy: ZeroPolicy,
) -> Result<F> {
    reference.ensure_matches(joint.alphabets())?;
    check_reference(joint, reference, policy)?;
    let log_q: Vec<Vec<F>> = reference
        .per_dimension()
        .iter()
        .map(|q| {
            q.probs()
                .iter()
                .map(|v| {
                    let r: F = v.to_real();
                    if r > F::zero() {
                        r.log2()
                    } else {
                        F::zero()
                    }
                })
                .collect()
        })
        .collect();
    let shape = joint.shape();
    let mut idx = vec![0usize; shape.len()];
    let mut terms = Vec::with_capacity(joint.probs().len());
    for p in joint.probs() {
        let p: F = p.to_real();
        if p > F::zero() {
            let mut lq = F::zero();
            for (d, &i) in idx.iter().enumerate() {
                lq += log_q[d][i];
            }
            terms.push(p * (p.log2() - lq));
        }
        crate::dist::increment(&mut idx, &shape);
    }
    Ok(pairwise_sum(&terms))
}

/// `KL(P_i ‖ Q_i)` for each dimension. Marginals are summed in the
/// joint's own scalar type, so exact inputs give exact marginals.
pub fn marginal_kls<T: Prob, F: Real>(
    joint: &JointPmf<T>,
    reference: &ReferenceSpec<T>,
    policy: ZeroPolicy,
) -> Result<Vec<F>> {
    reference.ensure_matches(joint.alphabets())?;
    check_reference(joint, reference, policy)?;
    reference
        .per_dimension()
        .iter()
        .enumerate()
        .map(|(d, q)| {
            let m = joint.marginal(d)?;
            let p: Vec<F> = m.probs.iter().map(Prob::to_real).collect();
            let q: Vec<F> = q.probs().iter().map(Prob::to_real).collect();
            kl_raw(&p, &q, policy)
                .map_err(|(x, c)| zero_error(d + 1, m.alphabets[0].symbol(x).to_string(), c))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecomposeOptions {
    pub zero_policy: ZeroPolicy,
    /// Keep the full entropy and interaction tables in the report.
    pub keep_tables: bool,
}

/// Every quantity on both sides of the decomposition, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport<F> {
    pub k: usize,
    /// Directly computed `KL(P_k ‖ Q^⊗k)`.
    pub kl_full: F,
    pub marginal_kls: Vec<F>,
    pub marginal_kl_sum: F,
    /// `I^(r)` for `r = 2..=k`, in order.
    pub interaction_totals: Vec<F>,
    pub total_correlation_interactions: F,
    pub total_correlation_entropy: F,
    /// `marginal_kl_sum + total_correlation_interactions`.
    pub recomposed_kl: F,
    /// `|kl_full − recomposed_kl|`.
    pub residual_decomposition: F,
    /// `|total_correlation_entropy − total_correlation_interactions|`.
    pub residual_total_correlation: F,
    pub entropies: Option<EntropyTable<F>>,
    pub per_subset_interactions: Option<InteractionTable<F>>,
}

impl<F: Real> DecompositionReport<F> {
    /// `I^(r)`, for `r ≥ 2`.
    pub fn interaction_total(&self, r: usize) -> Option<F> {
        r.checked_sub(2)
            .and_then(|i| self.interaction_totals.get(i))
            .copied()
    }
}

/// Runs the whole pipeline for one joint and product reference.
///
/// Homogeneous and heterogeneous references go through the same path; the
/// interaction side does not depend on the reference at all.
pub fn decompose<T: Prob, F: Real>(
    joint: &JointPmf<T>,
    reference: &ReferenceSpec<T>,
    options: DecomposeOptions,
) -> Result<DecompositionReport<F>> {
    let k = joint.k();
    if k > MAX_DIMENSIONS {
        return Err(Error::DimensionCap {
            k,
            max: MAX_DIMENSIONS,
        });
    }
    let kl_full = kl_joint_vs_product(joint, reference, options.zero_policy)?;
    let marginal_kls = marginal_kls(joint, reference, options.zero_policy)?;
    let marginal_kl_sum = pairwise_sum(&marginal_kls);

    let h: EntropyTable<F> = entropy_table(joint)?;
    let t = interaction_table_fast(&h);
    let totals = total_interaction_by_order(&t);
    let interaction_totals = totals.as_slice()[1..].to_vec();
    let c_int = pairwise_sum(&interaction_totals);
    let c_ent = h.total_correlation();
    let recomposed_kl = marginal_kl_sum + c_int;

    Ok(DecompositionReport {
        k,
        kl_full,
        marginal_kl_sum,
        marginal_kls,
        interaction_totals,
        total_correlation_interactions: c_int,
        total_correlation_entropy: c_ent,
        recomposed_kl,
        residual_decomposition: (kl_full - recomposed_kl).abs(),
        residual_total_correlation: (c_ent - c_int).abs(),
        entropies: options.keep_tables.then_some(h),
        per_subset_interactions: options.keep_tables.then_some(t),
    })
}

/// `|C_entropy − C_interactions|`: the entropy-side total correlation from
/// one-dimensional marginals against the sum of interaction totals.
pub fn check_total_correlation_identity<T: Prob, F: Real>(joint: &JointPmf<T>) -> Result<F> {
    let direct: F = total_correlation_entropy(joint)?;
    let h: EntropyTable<F> = entropy_table(joint)?;
    let via_lattice = total_correlation_interactions(&interaction_table_fast(&h));
    Ok((direct - via_lattice).abs())
}
