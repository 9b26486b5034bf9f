//! Exact decomposition of the KL divergence between a discrete joint
//! distribution `P_k` and a product reference `Q_1 ⊗ .. ⊗ Q_k`:
//!
//! ```text
//! KL(P_k ‖ Q^⊗k) = Σ_i KL(P_i ‖ Q_i) + Σ_{r=2}^{k} I^(r)(P_k)
//! ```
//!
//! where `I^(r)` sums the interaction information of every `r`-subset of
//! variables, and the interaction sum equals the total correlation
//! `C(P_k) = Σ_i H(X_i) − H(X_1..X_k)`.
//!
//! Tensors are generic over the probability scalar ([`Prob`]): `f64`, `f32`
//! or exact [`BigRational`]. Entropies, divergences and lattice tables are
//! generic over a floating-point [`Real`]. The aliases below fix the usual
//! choices.
//!
//! ```
//! use kldecomp::{decompose, joint_from_population, reference_from_population,
//!     DecomposeOptions, PopulationSpec, Report};
//!
//! let spec = PopulationSpec::new([("0", 3), ("1", 2)], 2).unwrap();
//! let joint = joint_from_population(&spec).unwrap();
//! let q = reference_from_population(&spec);
//! let report: Report = decompose(&joint, &q, DecomposeOptions::default()).unwrap();
//! assert!(report.residual_decomposition < 1e-12);
//! assert_eq!(report.marginal_kl_sum, 0.0);
//! ```

pub mod decomp;
pub mod dist;
pub mod error;
pub mod fixtures;
pub mod hypergeom;
pub mod io;
pub mod lattice;
pub mod scalar;
pub mod subset;

pub use num_rational::BigRational;

pub use decomp::{
    check_total_correlation_identity, decompose, kl_divergence, kl_joint_vs_product, marginal_kls,
    DecomposeOptions, DecompositionReport, ZeroPolicy,
};
pub use dist::{
    marginalize, product_reference_for, product_reference_pmf, validate_pmf, Alphabet, JointPmf,
    MarginalPmf, ReferenceSpec, SymbolPmf, Violation, DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use hypergeom::{
    joint_from_population, reference_from_population, sequence_probability, PopulationSpec,
};
pub use lattice::{
    entropy_table, interaction_table_fast, interaction_table_naive, mobius_roundtrip_check,
    shannon_entropy, subset_mobius, subset_zeta, total_correlation_entropy,
    total_correlation_interactions, total_interaction_by_order, EntropyTable, InteractionTable,
    OrderTotals,
};
pub use scalar::{pairwise_sum, Prob, Real};
pub use subset::{SubsetMask, MAX_DIMENSIONS};

/// Floating-point joint distribution.
pub type Joint = JointPmf<f64>;
/// Exact joint distribution.
pub type ExactJoint = JointPmf<BigRational>;
pub type Reference = ReferenceSpec<f64>;
pub type ExactReference = ReferenceSpec<BigRational>;
pub type Entropies = EntropyTable<f64>;
pub type Interactions = InteractionTable<f64>;
pub type Report = DecompositionReport<f64>;
