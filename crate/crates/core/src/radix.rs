//! Mixed-radix encoding of state tuples, level 1 most significant.
//!
//! Tuple `(x_1..x_n)` with `x_i` in `1..=n_i` maps to
//! `1 + Σ (x_i - 1) · Π_{j>i} n_j`, so lexicographic tuple order coincides
//! with the order of flat states.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<usize>,
    size: usize,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        let mut size: usize = 1;
        for &r in &radices {
            if r == 0 {
                return Err(Error::invalid("radix must be positive"));
            }
            size = size.checked_mul(r).ok_or(Error::CapExceeded {
                what: "product state space",
                cap: usize::MAX,
            })?;
        }
        Ok(MixedRadix { radices, size })
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Number of tuples.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn check(&self, tuple: &[usize]) -> Result<()> {
        if tuple.len() != self.radices.len() {
            return Err(Error::DegreeMismatch {
                expected: self.radices.len(),
                found: tuple.len(),
            });
        }
        for (&x, &r) in tuple.iter().zip(&self.radices) {
            if !(1..=r).contains(&x) {
                return Err(Error::OutOfRange { value: x, bound: r });
            }
        }
        Ok(())
    }

    /// 1-based tuple to 1-based flat state.
    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        self.check(tuple)?;
        Ok(self.encode_unchecked(tuple) + 1)
    }

    /// 1-based tuple to 0-based flat index.
    pub(crate) fn encode_unchecked(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&x, &r)| acc * r + (x - 1))
    }

    /// 1-based flat state to 1-based tuple.
    pub fn decode(&self, state: usize) -> Result<Vec<usize>> {
        if !(1..=self.size).contains(&state) {
            return Err(Error::OutOfRange {
                value: state,
                bound: self.size,
            });
        }
        Ok(self.decode_unchecked(state - 1))
    }

    pub(crate) fn decode_unchecked(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = alloc::vec![0; self.radices.len()];
        for (slot, &r) in tuple.iter_mut().zip(&self.radices).rev() {
            *slot = index % r + 1;
            index /= r;
        }
        tuple
    }

    /// All tuples in lexicographic (= flat) order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size).map(|i| self.decode_unchecked(i))
    }
}
