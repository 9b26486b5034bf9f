use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension count accepted by the lattice computations. Tables
/// hold `2^k` entries.
pub const MAX_DIMENSIONS: usize = 20;

/// A subset `S ⊆ {0, .., k-1}` of the variables, stored as a bitmask where
/// bit `i` set means variable `i` (zero-based) is in `S`.
///
/// Every lattice table is indexed by `bits()`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetMask {
    bits: u64,
    k: usize,
}

impl SubsetMask {
    pub fn new(bits: u64, k: usize) -> Result<Self> {
        if k > 63 || bits >> k != 0 {
            return Err(Error::InvalidSubset {
                bits,
                k,
                reason: "bit outside the dimension range",
            });
        }
        Ok(Self { bits, k })
    }

    pub fn empty(k: usize) -> Self {
        Self { bits: 0, k }
    }

    pub fn full(k: usize) -> Self {
        Self {
            bits: (1u64 << k) - 1,
            k,
        }
    }

    pub fn singleton(index: usize, k: usize) -> Result<Self> {
        if index >= k {
            return Err(Error::InvalidSubset {
                bits: 1u64.checked_shl(index as u32).unwrap_or(0),
                k,
                reason: "bit outside the dimension range",
            });
        }
        Ok(Self {
            bits: 1 << index,
            k,
        })
    }

    pub fn from_indices(indices: &[usize], k: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            bits |= Self::singleton(i, k)?.bits;
        }
        Ok(Self { bits, k })
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn index(self) -> usize {
        self.bits as usize
    }

    #[inline]
    pub fn k(self) -> usize {
        self.k
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        index < self.k && self.bits >> index & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    /// Member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.k).filter(move |&i| bits >> i & 1 == 1)
    }

    /// All subsets of `self`, including the empty set and `self`, in
    /// decreasing bit order.
    pub fn submasks(self) -> Submasks {
        Submasks {
            of: self.bits,
            next: Some(self.bits),
            k: self.k,
        }
    }

    /// Every mask of a `k`-dimensional lattice, in increasing bit order.
    pub fn all(k: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1u64 << k).map(move |bits| SubsetMask { bits, k })
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            // one-based, matching the usual X_1..X_k naming
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

pub struct Submasks {
    of: u64,
    next: Option<u64>,
    k: usize,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.of)
        };
        Some(SubsetMask {
            bits: cur,
            k: self.k,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_bits() {
        assert!(SubsetMask::new(0b100, 2).is_err());
        assert!(SubsetMask::new(0b11, 2).is_ok());
        assert!(SubsetMask::singleton(3, 3).is_err());
    }

    #[test]
    fn submasks_enumerate_power_set() {
        let s = SubsetMask::new(0b1011, 4).unwrap();
        let subs: Vec<u64> = s.submasks().map(|m| m.bits()).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|&t| t & !0b1011 == 0));
        assert_eq!(*subs.last().unwrap(), 0);
    }

    #[test]
    fn debug_is_one_based() {
        let s = SubsetMask::from_indices(&[0, 2], 3).unwrap();
        assert_eq!(format!("{s:?}"), "{1,3}");
    }
}
