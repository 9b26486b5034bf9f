//! JSON and CSV file formats.
//!
//! * distribution: `{"k", "alphabets", "probs", "mode", "rational_probs"?,
//!   "reference"?}` with `probs` row-major, first dimension slowest;
//! * reference: `{"per_dimension": [{"symbols", "probs", "rational_probs"?}, ..]}`
//!   or the homogeneous shorthand `{"symbols", "probs", "rational_probs"?}`;
//! * population: `{"counts": {"sym": n, ..}, "k": int}`;
//! * report: field names follow the validation summary layout (`KL_full`,
//!   `KL_marginals_sum`, `TotalCorrelation_C_Pk`, `Direct_C_Pk`,
//!   `Residual`, `I_sums`).
//!
//! Rational numbers are `[numerator, denominator]` pairs; parts that do not
//! fit an `i64` are written as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decomp::{decompose, DecomposeOptions, DecompositionReport};
use crate::dist::{JointPmf, ReferenceSpec, SymbolPmf};
use crate::error::{Error, Result};
use crate::hypergeom::PopulationSpec;
use crate::lattice::{EntropyTable, InteractionTable};
use crate::scalar::Prob;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float64,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntPart {
    Small(i64),
    Big(String),
}

impl IntPart {
    fn from_big(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => IntPart::Small(x),
            None => IntPart::Big(v.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            IntPart::Small(x) => Ok(BigInt::from(*x)),
            IntPart::Big(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

pub type RationalJson = [IntPart; 2];

fn rational_to_json<T: Prob>(v: &T) -> Option<RationalJson> {
    v.as_ratio()
        .map(|(n, d)| [IntPart::from_big(&n), IntPart::from_big(&d)])
}

fn rational_from_json(r: &RationalJson) -> Result<BigRational> {
    let n = r[0].to_big()?;
    let d = r[1].to_big()?;
    if d.is_zero() {
        return Err(Error::Parse("rational with zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

fn rationals_from_json(v: &[RationalJson]) -> Result<Vec<BigRational>> {
    v.iter().map(rational_from_json).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolPmfJson {
    pub symbols: Vec<String>,
    pub probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_probs: Option<Vec<RationalJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceJson {
    PerDimension {
        per_dimension: Vec<SymbolPmfJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        homogeneous: Option<bool>,
    },
    Shorthand(SymbolPmfJson),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub k: usize,
    pub alphabets: Vec<Vec<String>>,
    pub probs: Vec<f64>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_probs: Option<Vec<RationalJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationJson {
    pub counts: BTreeMap<String, u64>,
    pub k: usize,
}

impl PopulationJson {
    pub fn to_spec(&self) -> Result<PopulationSpec> {
        PopulationSpec::new(self.counts.iter().map(|(s, &c)| (s.clone(), c)), self.k)
    }
}

/// A loaded distribution in whichever arithmetic its file declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyJoint {
    Float(JointPmf<f64>),
    Exact(JointPmf<BigRational>),
}

impl AnyJoint {
    pub fn k(&self) -> usize {
        match self {
            AnyJoint::Float(p) => p.k(),
            AnyJoint::Exact(p) => p.k(),
        }
    }

    pub fn to_float(&self) -> JointPmf<f64> {
        match self {
            AnyJoint::Float(p) => p.clone(),
            AnyJoint::Exact(p) => p.to_real(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyReference {
    Float(ReferenceSpec<f64>),
    Exact(ReferenceSpec<BigRational>),
}

impl AnyReference {
    pub fn to_float(&self) -> ReferenceSpec<f64> {
        match self {
            AnyReference::Float(r) => r.clone(),
            AnyReference::Exact(r) => r.to_real(),
        }
    }
}

/// Decomposes in exact arithmetic when both sides are exact, otherwise in
/// `f64` after converting each probability once.
pub fn decompose_any(
    joint: &AnyJoint,
    reference: &AnyReference,
    options: DecomposeOptions,
) -> Result<DecompositionReport<f64>> {
    match (joint, reference) {
        (AnyJoint::Exact(p), AnyReference::Exact(q)) => decompose(p, q, options),
        (AnyJoint::Float(p), q) => decompose(p, &q.to_float(), options),
        (p, q) => decompose(&p.to_float(), &q.to_float(), options),
    }
}

fn symbol_pmf_json<T: Prob>(q: &SymbolPmf<T>) -> SymbolPmfJson {
    SymbolPmfJson {
        symbols: q.alphabet().symbols().to_vec(),
        probs: q.probs().iter().map(|v| v.to_real::<f64>()).collect(),
        rational_probs: exact_list(q.probs()),
    }
}

fn exact_list<T: Prob>(v: &[T]) -> Option<Vec<RationalJson>> {
    if T::EXACT {
        v.iter().map(rational_to_json).collect()
    } else {
        None
    }
}

pub fn reference_to_json<T: Prob>(r: &ReferenceSpec<T>) -> ReferenceJson {
    ReferenceJson::PerDimension {
        per_dimension: r.per_dimension().iter().map(symbol_pmf_json).collect(),
        homogeneous: Some(r.is_homogeneous()),
    }
}

/// Serializes a joint (and optionally its reference) to the distribution
/// format. Exact tensors get both `probs` and `rational_probs`.
pub fn distribution_to_json<T: Prob>(
    joint: &JointPmf<T>,
    reference: Option<&ReferenceSpec<T>>,
) -> DistributionJson {
    DistributionJson {
        k: joint.k(),
        alphabets: joint
            .alphabets()
            .iter()
            .map(|a| a.symbols().to_vec())
            .collect(),
        probs: joint.probs().iter().map(|v| v.to_real::<f64>()).collect(),
        mode: if T::EXACT {
            Mode::Rational
        } else {
            Mode::Float64
        },
        rational_probs: exact_list(joint.probs()),
        reference: reference.map(reference_to_json),
    }
}

/// Validates and canonicalizes a parsed distribution file.
pub fn parse_distribution(d: &DistributionJson, tolerance: f64) -> Result<AnyJoint> {
    if d.k != d.alphabets.len() {
        return Err(Error::Parse(format!(
            "k = {} but {} alphabets were given",
            d.k,
            d.alphabets.len()
        )));
    }
    match d.mode {
        Mode::Float64 => Ok(AnyJoint::Float(JointPmf::from_labeled(
            d.alphabets.clone(),
            d.probs.clone(),
            tolerance,
        )?)),
        Mode::Rational => {
            let raw = d.rational_probs.as_ref().ok_or_else(|| {
                Error::Parse("mode is \"rational\" but rational_probs is missing".into())
            })?;
            Ok(AnyJoint::Exact(JointPmf::from_labeled(
                d.alphabets.clone(),
                rationals_from_json(raw)?,
                tolerance,
            )?))
        }
    }
}

/// Builds a reference for a `k`-dimensional distribution. The shorthand
/// form is repeated in every dimension. The result is exact only when
/// every dimension carries `rational_probs`.
pub fn parse_reference(r: &ReferenceJson, k: usize, tolerance: f64) -> Result<AnyReference> {
    let dims: Vec<&SymbolPmfJson> = match r {
        ReferenceJson::PerDimension { per_dimension, .. } => per_dimension.iter().collect(),
        ReferenceJson::Shorthand(q) => vec![q; k],
    };
    for q in &dims {
        if q.symbols.len() != q.probs.len() {
            return Err(Error::Parse(format!(
                "reference lists {} symbols but {} probabilities",
                q.symbols.len(),
                q.probs.len()
            )));
        }
    }
    if dims.iter().all(|q| q.rational_probs.is_some()) {
        let per = dims
            .iter()
            .map(|q| {
                let v = rationals_from_json(q.rational_probs.as_ref().expect("checked"))?;
                if v.len() != q.symbols.len() {
                    return Err(Error::Parse("rational_probs length mismatch".into()));
                }
                SymbolPmf::from_labeled(q.symbols.iter().cloned().zip(v), tolerance)
            })
            .collect::<Result<_>>()?;
        Ok(AnyReference::Exact(ReferenceSpec::heterogeneous(per)))
    } else {
        let per = dims
            .iter()
            .map(|q| {
                SymbolPmf::from_labeled(
                    q.symbols.iter().cloned().zip(q.probs.iter().copied()),
                    tolerance,
                )
            })
            .collect::<Result<_>>()?;
        Ok(AnyReference::Float(ReferenceSpec::heterogeneous(per)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesJson {
    pub entropy: EntropyTable<f64>,
    pub interaction: InteractionTable<f64>,
}

/// Report serialization; numbers are `f64` in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    #[serde(rename = "Case", default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub k: usize,
    #[serde(rename = "KL_full")]
    pub kl_full: f64,
    #[serde(rename = "KL_marginals")]
    pub kl_marginals: Vec<f64>,
    #[serde(rename = "KL_marginals_sum")]
    pub kl_marginals_sum: f64,
    #[serde(rename = "TotalCorrelation_C_Pk")]
    pub total_correlation_interactions: f64,
    #[serde(rename = "Direct_C_Pk")]
    pub total_correlation_entropy: f64,
    #[serde(rename = "Recomposed_KL")]
    pub recomposed_kl: f64,
    #[serde(rename = "Residual")]
    pub residual: f64,
    #[serde(rename = "Residual_TC")]
    pub residual_total_correlation: f64,
    /// `I^(r)` keyed by `r`.
    #[serde(rename = "I_sums")]
    pub i_sums: BTreeMap<usize, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TablesJson>,
}

impl ReportJson {
    pub fn from_report(r: &DecompositionReport<f64>, case: Option<&str>) -> Self {
        let tables = match (&r.entropies, &r.per_subset_interactions) {
            (Some(h), Some(t)) => Some(TablesJson {
                entropy: h.clone(),
                interaction: t.clone(),
            }),
            _ => None,
        };
        Self {
            case: case.map(str::to_owned),
            k: r.k,
            kl_full: r.kl_full,
            kl_marginals: r.marginal_kls.clone(),
            kl_marginals_sum: r.marginal_kl_sum,
            total_correlation_interactions: r.total_correlation_interactions,
            total_correlation_entropy: r.total_correlation_entropy,
            recomposed_kl: r.recomposed_kl,
            residual: r.residual_decomposition,
            residual_total_correlation: r.residual_total_correlation,
            i_sums: r
                .interaction_totals
                .iter()
                .enumerate()
                .map(|(i, &v)| (i + 2, v))
                .collect(),
            tables,
        }
    }

    /// Stacked-bar components: the marginal sum, then `I^(2)..I^(k)`.
    pub fn components(&self) -> Vec<(String, f64)> {
        let mut rows = vec![("marginal_sum".to_string(), self.kl_marginals_sum)];
        rows.extend(self.i_sums.iter().map(|(r, &v)| (format!("I^({r})"), v)));
        rows
    }

    /// `component,value_bits` rows: the components followed by a
    /// `KL_full` total line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,value_bits\n");
        for (name, v) in self.components() {
            out.push_str(&format!("{name},{v}\n"));
        }
        out.push_str(&format!("KL_full,{}\n", self.kl_full));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::{joint_from_population, reference_from_population};

    #[test]
    fn exact_distribution_roundtrips_through_json() {
        let spec = PopulationSpec::new([("0", 3), ("1", 2)], 2).unwrap();
        let joint = joint_from_population(&spec).unwrap();
        let q = reference_from_population(&spec);
        let json = serde_json::to_string(&distribution_to_json(&joint, Some(&q))).unwrap();
        let back: DistributionJson = serde_json::from_str(&json).unwrap();
        assert_eq!(
            parse_distribution(&back, 1e-12).unwrap(),
            AnyJoint::Exact(joint)
        );
        let r = parse_reference(back.reference.as_ref().unwrap(), 2, 1e-12).unwrap();
        assert_eq!(r, AnyReference::Exact(q));
    }

    #[test]
    fn shorthand_reference_is_broadcast() {
        let r: ReferenceJson =
            serde_json::from_str(r#"{"symbols": ["b", "a"], "probs": [0.4, 0.6]}"#).unwrap();
        let AnyReference::Float(q) = parse_reference(&r, 3, 1e-12).unwrap() else {
            panic!("float reference expected");
        };
        assert_eq!(q.k(), 3);
        assert!(q.is_homogeneous());
        assert_eq!(q.per_dimension()[2].probs(), &[0.6, 0.4]);
    }

    #[test]
    fn rational_mode_needs_rational_probs() {
        let d: DistributionJson = serde_json::from_str(
            r#"{"k": 1, "alphabets": [["a", "b"]], "probs": [0.5, 0.5], "mode": "rational"}"#,
        )
        .unwrap();
        assert!(matches!(
            parse_distribution(&d, 1e-12),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn big_rational_parts_are_strings() {
        let big = BigInt::from(u64::MAX) * BigInt::from(3);
        let j = rational_to_json(&BigRational::new(BigInt::from(1), big.clone())).unwrap();
        assert_eq!(j[1], IntPart::Big(big.to_string()));
        assert_eq!(
            rational_from_json(&j).unwrap(),
            BigRational::new(BigInt::from(1), big)
        );
    }

    #[test]
    fn k_must_match_alphabets() {
        let d: DistributionJson = serde_json::from_str(
            r#"{"k": 2, "alphabets": [["a", "b"]], "probs": [0.5, 0.5], "mode": "float64"}"#,
        )
        .unwrap();
        assert!(matches!(
            parse_distribution(&d, 1e-12),
            Err(Error::Parse(_))
        ));
    }
}
