use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

/// A subset of `{1..n}` as a bitset.
///
/// Ordering is lexicographic on the sorted element list, so `{1,3} < {2,4}`
/// and `{1,3} < {1,3,4}`; this is the canonical sort key used across the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    capacity: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(capacity: usize) -> Self {
        StateSet {
            capacity,
            words: alloc::vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::empty(capacity);
        for x in 0..capacity {
            s.insert0(x);
        }
        s
    }

    pub fn singleton(capacity: usize, state: usize) -> Result<Self> {
        Self::from_states(capacity, &[state])
    }

    /// From 1-based states.
    pub fn from_states(capacity: usize, states: &[usize]) -> Result<Self> {
        let mut s = Self::empty(capacity);
        for &x in states {
            if !(1..=capacity).contains(&x) {
                return Err(Error::OutOfRange {
                    value: x,
                    bound: capacity,
                });
            }
            s.insert0(x - 1);
        }
        Ok(s)
    }

    /// Size of the underlying state set, not the number of members.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, state: usize) -> bool {
        (1..=self.capacity).contains(&state) && self.contains0(state - 1)
    }

    #[inline]
    pub(crate) fn contains0(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn insert0(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.capacity == other.capacity && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet {
            capacity: self.capacity,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// 0-based members in increasing order.
    pub(crate) fn iter0(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// 1-based members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.iter0().map(|x| x + 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The only member of a singleton, 1-based.
    pub fn single(&self) -> Option<usize> {
        let mut it = self.iter();
        match (it.next(), it.next()) {
            (Some(x), None) => Some(x),
            _ => None,
        }
    }
}

impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter0().cmp(other.iter0()).then(self.capacity.cmp(&other.capacity))
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
