//! Discrete joint distributions over a product of finite alphabets.
//!
//! Tensors are dense and row-major: the first dimension is the slowest
//! varying axis, so the flat index of `(x_1, .., x_k)` is
//! `Σ_i x_i · Π_{j>i} |alphabet_j|`. Alphabets are sorted at construction,
//! which makes the index ↔ symbol mapping canonical.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Prob, Real};
use crate::subset::SubsetMask;

/// Default normalization tolerance for floating-point tensors.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Finite, lexicographically sorted set of symbol labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        Ok(Self::canonicalize(symbols)?.0)
    }

    /// Sorts `symbols` and returns the alphabet together with the
    /// permutation `order`, where `order[sorted_index] = input_index`.
    pub fn canonicalize<S: Into<String>>(
        symbols: impl IntoIterator<Item = S>,
    ) -> Result<(Self, Vec<usize>)> {
        let raw: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if raw.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut seen = HashSet::with_capacity(raw.len());
        for s in &raw {
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[a].cmp(&raw[b]));
        let symbols = order.iter().map(|&i| raw[i].clone()).collect();
        Ok((Self { symbols }, order))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols
            .binary_search_by(|s| s.as_str().cmp(symbol))
            .ok()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// A normalization or sign problem found by [`validate_pmf`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoDimensions,
    LengthMismatch { expected: usize, actual: usize },
    Negative { index: usize, value: f64 },
    NonFinite { index: usize },
    NotNormalized { sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoDimensions => write!(f, "distribution has no dimensions"),
            Violation::LengthMismatch { expected, actual } => write!(
                f,
                "tensor has {actual} entries but the alphabets require {expected}"
            ),
            Violation::Negative { index, value } => {
                write!(f, "entry {index} is negative ({value})")
            }
            Violation::NonFinite { index } => write!(f, "entry {index} is not finite"),
            Violation::NotNormalized { sum } => write!(f, "entries sum to {sum}, not 1"),
        }
    }
}

/// Checks nonnegativity, finiteness and normalization of a flat tensor.
///
/// Exact scalars must sum to exactly one; floating-point ones within
/// `tolerance`.
fn check_tensor<T: Prob>(probs: &[T], expected_len: usize, tolerance: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    if probs.len() != expected_len {
        out.push(Violation::LengthMismatch {
            expected: expected_len,
            actual: probs.len(),
        });
    }
    let mut finite = true;
    for (index, p) in probs.iter().enumerate() {
        let v = p.approx_f64();
        if !v.is_finite() {
            finite = false;
            out.push(Violation::NonFinite { index });
        } else if *p < T::zero() {
            out.push(Violation::Negative { index, value: v });
        }
    }
    if finite {
        let sum = pairwise_sum(probs);
        let ok = if T::EXACT {
            sum == T::one()
        } else {
            (sum.approx_f64() - 1.0).abs() <= tolerance
        };
        if !ok {
            out.push(Violation::NotNormalized {
                sum: sum.approx_f64(),
            });
        }
    }
    out
}

/// Row-major strides for a tensor of the given shape.
pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Flat offsets of every index combination over `dims`, row-major in the
/// order `dims` are listed.
fn combo_offsets(dims: &[usize], shape: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for &d in dims {
        let mut next = Vec::with_capacity(offs.len() * shape[d]);
        for &o in &offs {
            for a in 0..shape[d] {
                next.push(o + a * strides[d]);
            }
        }
        offs = next;
    }
    offs
}

/// Sums one axis out of a row-major tensor.
pub(crate) fn sum_out_axis<T: Prob>(probs: &[T], shape: &[usize], axis: usize) -> Vec<T> {
    let inner: usize = shape[axis + 1..].iter().product();
    let m = shape[axis];
    let outer = probs.len() / (inner * m);
    let mut out = Vec::with_capacity(outer * inner);
    let mut buf = Vec::with_capacity(m);
    for o in 0..outer {
        let base = o * m * inner;
        for i in 0..inner {
            buf.clear();
            buf.extend((0..m).map(|a| probs[base + a * inner + i].clone()));
            out.push(pairwise_sum(&buf));
        }
    }
    out
}

/// Joint probability mass function `P_k` over `k` dimensions.
#[derive(Clone, PartialEq)]
pub struct JointPmf<T> {
    alphabets: Vec<Alphabet>,
    probs: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for JointPmf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointPmf")
            .field("alphabets", &self.alphabets)
            .field("probs", &self.probs)
            .finish()
    }
}

impl<T: Prob> JointPmf<T> {
    /// Builds a distribution over canonical alphabets, validated at the
    /// default tolerance.
    pub fn new(alphabets: Vec<Alphabet>, probs: Vec<T>) -> Result<Self> {
        Self::with_tolerance(alphabets, probs, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(alphabets: Vec<Alphabet>, probs: Vec<T>, tolerance: f64) -> Result<Self> {
        let p = Self::new_unchecked(alphabets, probs);
        let v = validate_pmf(&p, tolerance);
        if v.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidPmf(v))
        }
    }

    /// Builds a distribution from per-dimension symbol lists in arbitrary
    /// order; the tensor is permuted to match the sorted alphabets.
    pub fn from_labeled(symbols: Vec<Vec<String>>, probs: Vec<T>, tolerance: f64) -> Result<Self> {
        let mut alphabets = Vec::with_capacity(symbols.len());
        let mut orders = Vec::with_capacity(symbols.len());
        for s in symbols {
            let (a, o) = Alphabet::canonicalize(s)?;
            alphabets.push(a);
            orders.push(o);
        }
        let shape: Vec<usize> = alphabets.iter().map(Alphabet::len).collect();
        let expected: usize = shape.iter().product();
        if alphabets.is_empty() || probs.len() != expected {
            return Self::with_tolerance(alphabets, probs, tolerance);
        }
        let st = strides(&shape);
        let mut permuted = Vec::with_capacity(expected);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..expected {
            let src: usize = idx
                .iter()
                .zip(&orders)
                .zip(&st)
                .map(|((&i, o), &s)| o[i] * s)
                .sum();
            permuted.push(probs[src].clone());
            increment(&mut idx, &shape);
        }
        Self::with_tolerance(alphabets, permuted, tolerance)
    }

    /// Skips validation; use [`validate_pmf`] to inspect the result.
    pub fn new_unchecked(alphabets: Vec<Alphabet>, probs: Vec<T>) -> Self {
        Self { alphabets, probs }
    }

    pub fn k(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn shape(&self) -> Vec<usize> {
        self.alphabets.iter().map(Alphabet::len).collect()
    }

    pub fn is_exact(&self) -> bool {
        T::EXACT
    }

    /// Probability of the outcome with the given per-dimension indices.
    pub fn get(&self, index: &[usize]) -> Option<&T> {
        if index.len() != self.k() {
            return None;
        }
        let shape = self.shape();
        let mut flat = 0;
        for (&i, &m) in index.iter().zip(&shape) {
            if i >= m {
                return None;
            }
            flat = flat * m + i;
        }
        self.probs.get(flat)
    }

    /// Probability of the outcome with the given symbols.
    pub fn get_symbols(&self, symbols: &[&str]) -> Result<&T> {
        if symbols.len() != self.k() {
            return Err(Error::ArityMismatch {
                expected: self.k(),
                actual: symbols.len(),
            });
        }
        let idx = symbols
            .iter()
            .zip(&self.alphabets)
            .map(|(s, a)| {
                a.index_of(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.get(&idx).expect("indices checked against alphabets"))
    }

    /// Converts every entry to floating point, rounding each exactly once.
    pub fn to_real<F: Real>(&self) -> JointPmf<F> {
        JointPmf {
            alphabets: self.alphabets.clone(),
            probs: self.probs.iter().map(Prob::to_real).collect(),
        }
    }

    /// One-dimensional marginal of dimension `i` (zero-based).
    pub fn marginal(&self, i: usize) -> Result<MarginalPmf<T>> {
        marginalize(self, SubsetMask::singleton(i, self.k())?)
    }
}

/// Advances a row-major multi-index; wraps to all zeros after the last one.
pub(crate) fn increment(idx: &mut [usize], shape: &[usize]) {
    for d in (0..idx.len()).rev() {
        idx[d] += 1;
        if idx[d] < shape[d] {
            return;
        }
        idx[d] = 0;
    }
}

/// Distribution of the variables in `subset`, retained in increasing
/// dimension order.
#[derive(Clone, PartialEq)]
pub struct MarginalPmf<T> {
    pub subset: SubsetMask,
    pub alphabets: Vec<Alphabet>,
    pub probs: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for MarginalPmf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MarginalPmf")
            .field("subset", &self.subset)
            .field("probs", &self.probs)
            .finish()
    }
}

impl<T: Prob> MarginalPmf<T> {
    /// Views the marginal as a joint distribution over its retained
    /// dimensions.
    pub fn into_joint(self) -> JointPmf<T> {
        JointPmf::new_unchecked(self.alphabets, self.probs)
    }
}

/// Sums the joint over every dimension outside `subset`.
pub fn marginalize<T: Prob>(joint: &JointPmf<T>, subset: SubsetMask) -> Result<MarginalPmf<T>> {
    let k = joint.k();
    if subset.k() != k {
        return Err(Error::InvalidSubset {
            bits: subset.bits(),
            k,
            reason: "mask built for a different dimension count",
        });
    }
    if subset.is_empty() {
        return Err(Error::InvalidSubset {
            bits: 0,
            k,
            reason: "subset is empty",
        });
    }
    let shape = joint.shape();
    let st = strides(&shape);
    let kept: Vec<usize> = subset.indices().collect();
    let dropped: Vec<usize> = (0..k).filter(|&i| !subset.contains(i)).collect();
    let alphabets: Vec<Alphabet> = kept.iter().map(|&i| joint.alphabets[i].clone()).collect();
    if dropped.is_empty() {
        return Ok(MarginalPmf {
            subset,
            alphabets,
            probs: joint.probs.clone(),
        });
    }

    let inner = combo_offsets(&dropped, &shape, &st);
    let bases = combo_offsets(&kept, &shape, &st);
    let mut buf = Vec::with_capacity(inner.len());
    let probs = bases
        .iter()
        .map(|&b| {
            buf.clear();
            buf.extend(inner.iter().map(|&o| joint.probs[b + o].clone()));
            pairwise_sum(&buf)
        })
        .collect();
    Ok(MarginalPmf {
        subset,
        alphabets,
        probs,
    })
}

/// Reports every invariant violation; empty iff `p` is a valid PMF.
pub fn validate_pmf<T: Prob>(p: &JointPmf<T>, tolerance: f64) -> Vec<Violation> {
    if p.k() == 0 {
        return vec![Violation::NoDimensions];
    }
    let expected = p.shape().iter().product();
    check_tensor(&p.probs, expected, tolerance)
}

/// Distribution of a single variable over its own alphabet.
#[derive(Clone, PartialEq)]
pub struct SymbolPmf<T> {
    alphabet: Alphabet,
    probs: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for SymbolPmf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.alphabet.symbols.iter().zip(&self.probs))
            .finish()
    }
}

impl<T: Prob> SymbolPmf<T> {
    pub fn new(alphabet: Alphabet, probs: Vec<T>, tolerance: f64) -> Result<Self> {
        let v = check_tensor(&probs, alphabet.len(), tolerance);
        if !v.is_empty() {
            return Err(Error::InvalidPmf(v));
        }
        Ok(Self { alphabet, probs })
    }

    /// Accepts symbols in any order.
    pub fn from_labeled<S: Into<String>>(
        pairs: impl IntoIterator<Item = (S, T)>,
        tolerance: f64,
    ) -> Result<Self> {
        let (symbols, probs): (Vec<String>, Vec<T>) =
            pairs.into_iter().map(|(s, p)| (s.into(), p)).unzip();
        let (alphabet, order) = Alphabet::canonicalize(symbols)?;
        let probs = order.iter().map(|&i| probs[i].clone()).collect();
        Self::new(alphabet, probs, tolerance)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob_of(&self, symbol: &str) -> Option<&T> {
        self.alphabet.index_of(symbol).map(|i| &self.probs[i])
    }

    pub fn to_real<F: Real>(&self) -> SymbolPmf<F> {
        SymbolPmf {
            alphabet: self.alphabet.clone(),
            probs: self.probs.iter().map(Prob::to_real).collect(),
        }
    }
}

/// Product reference `Q_1 ⊗ .. ⊗ Q_k`, one PMF per dimension.
///
/// Normalization is checked at construction. Strict positivity is enforced
/// by the divergence routines, which know whether zeros are tolerated.
#[derive(Clone, PartialEq)]
pub struct ReferenceSpec<T> {
    per_dimension: Vec<SymbolPmf<T>>,
}

impl<T: fmt::Debug> fmt::Debug for ReferenceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.per_dimension).finish()
    }
}

impl<T: Prob> ReferenceSpec<T> {
    /// The same `q` in each of `k` dimensions.
    pub fn homogeneous(q: SymbolPmf<T>, k: usize) -> Self {
        Self {
            per_dimension: vec![q; k],
        }
    }

    pub fn heterogeneous(per_dimension: Vec<SymbolPmf<T>>) -> Self {
        Self { per_dimension }
    }

    /// The product of the joint's own one-dimensional marginals.
    pub fn from_marginals(joint: &JointPmf<T>) -> Result<Self> {
        let per_dimension = (0..joint.k())
            .map(|i| {
                let m = joint.marginal(i)?;
                Ok(SymbolPmf {
                    alphabet: m.alphabets[0].clone(),
                    probs: m.probs,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { per_dimension })
    }

    pub fn k(&self) -> usize {
        self.per_dimension.len()
    }

    pub fn per_dimension(&self) -> &[SymbolPmf<T>] {
        &self.per_dimension
    }

    pub fn is_homogeneous(&self) -> bool {
        self.per_dimension.windows(2).all(|w| w[0] == w[1])
    }

    /// Checks dimension count and per-dimension alphabets against a joint.
    pub fn ensure_matches(&self, alphabets: &[Alphabet]) -> Result<()> {
        if self.k() != alphabets.len() {
            return Err(Error::AlphabetMismatch(format!(
                "reference has {} dimensions, distribution has {}",
                self.k(),
                alphabets.len()
            )));
        }
        for (i, (q, a)) in self.per_dimension.iter().zip(alphabets).enumerate() {
            if &q.alphabet != a {
                return Err(Error::AlphabetMismatch(format!(
                    "dimension {}: reference alphabet {:?} differs from {:?}",
                    i + 1,
                    q.alphabet,
                    a
                )));
            }
        }
        Ok(())
    }

    pub fn to_real<F: Real>(&self) -> ReferenceSpec<F> {
        ReferenceSpec {
            per_dimension: self.per_dimension.iter().map(SymbolPmf::to_real).collect(),
        }
    }
}

/// Materializes `Q_1 ⊗ .. ⊗ Q_k` as a dense joint tensor.
pub fn product_reference_pmf<T: Prob>(reference: &ReferenceSpec<T>) -> Result<JointPmf<T>> {
    if reference.k() == 0 {
        return Err(Error::AlphabetMismatch(
            "reference has no dimensions".into(),
        ));
    }
    let mut probs: Vec<T> = vec![T::one()];
    for q in &reference.per_dimension {
        let mut next = Vec::with_capacity(probs.len() * q.probs.len());
        for p in &probs {
            for v in &q.probs {
                next.push(p.clone() * v.clone());
            }
        }
        probs = next;
    }
    let alphabets = reference
        .per_dimension
        .iter()
        .map(|q| q.alphabet.clone())
        .collect();
    Ok(JointPmf::new_unchecked(alphabets, probs))
}

/// Like [`product_reference_pmf`], but first checks that the reference
/// covers exactly `alphabets`.
pub fn product_reference_for<T: Prob>(
    reference: &ReferenceSpec<T>,
    alphabets: &[Alphabet],
) -> Result<JointPmf<T>> {
    reference.ensure_matches(alphabets)?;
    product_reference_pmf(reference)
}
