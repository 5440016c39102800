use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result, StateSet};

/// A self-map of `{1..n}` stored as its image list.
///
/// Internally images are kept 0-based; every public method speaks 1-based
/// states. Composition is right action: `s.compose(t)` applies `s` first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformation {
    images: Vec<u32>,
}

impl Transformation {
    /// Builds a transformation from 1-based images, e.g. `[3, 2, 4, 4]`.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::invalid("a transformation needs degree at least 1"));
        }
        let images = images
            .iter()
            .map(|&y| {
                if (1..=n).contains(&y) {
                    Ok((y - 1) as u32)
                } else {
                    Err(Error::OutOfRange { value: y, bound: n })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transformation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Transformation {
            images: (0..degree as u32).collect(),
        }
    }

    /// The constant map sending every state to `target` (1-based).
    pub fn constant(degree: usize, target: usize) -> Result<Self> {
        if !(1..=degree).contains(&target) {
            return Err(Error::OutOfRange {
                value: target,
                bound: degree,
            });
        }
        Ok(Transformation {
            images: alloc::vec![(target - 1) as u32; degree],
        })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[1, 5, 3, 7], &[2, 8, 4, 6]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = alloc::vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if !(1..=degree).contains(&x) {
                    return Err(Error::OutOfRange {
                        value: x,
                        bound: degree,
                    });
                }
                if seen[x - 1] {
                    return Err(Error::invalid(alloc::format!(
                        "point {x} appears twice in cycle notation"
                    )));
                }
                seen[x - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[x - 1] = (next - 1) as u32;
            }
        }
        Ok(Transformation { images })
    }

    pub(crate) fn from_images0(images: Vec<u32>) -> Self {
        debug_assert!(images.iter().all(|&y| (y as usize) < images.len()));
        Transformation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&y| y as usize + 1).collect()
    }

    /// Image of a 0-based state, without range checks.
    #[inline]
    pub(crate) fn map0(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `x^s` for a 1-based state `x`.
    pub fn apply(&self, x: usize) -> Result<usize> {
        if !(1..=self.degree()).contains(&x) {
            return Err(Error::OutOfRange {
                value: x,
                bound: self.degree(),
            });
        }
        Ok(self.map0(x - 1) + 1)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked composition; callers guarantee equal degrees.
    pub(crate) fn then(&self, other: &Transformation) -> Transformation {
        Transformation {
            images: self.images.iter().map(|&y| other.images[y as usize]).collect(),
        }
    }

    pub fn image_set(&self, set: &StateSet) -> Result<StateSet> {
        if set.capacity() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: set.capacity(),
            });
        }
        Ok(self.image_set0(set))
    }

    pub(crate) fn image_set0(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.degree());
        for x in set.iter0() {
            out.insert0(self.map0(x));
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = alloc::vec![false; self.degree()];
        for &y in &self.images {
            if core::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        true
    }

    pub fn inverse(&self) -> Option<Transformation> {
        if !self.is_permutation() {
            return None;
        }
        let mut images = alloc::vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        Some(Transformation { images })
    }

    /// `(index, period)`: the least `i >= 0`, `p >= 1` with `s^(i+p) = s^i`.
    ///
    /// Powers start at `s^0 = identity`, so permutations have index 0 and
    /// their group-theoretic order as period.
    pub fn element_order(&self) -> (usize, usize) {
        let mut seen: BTreeMap<Transformation, usize> = BTreeMap::new();
        let mut power = Transformation::identity(self.degree());
        let mut k = 0;
        loop {
            if let Some(&first) = seen.get(&power) {
                return (first, k - first);
            }
            let next = power.then(self);
            seen.insert(power, k);
            power = next;
            k += 1;
        }
    }

    /// Disjoint cycles of length at least 2, each starting at its least point (1-based).
    pub fn cycles(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_permutation() {
            return None;
        }
        let mut done = alloc::vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if done[start] || self.map0(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !done[x] {
                done[x] = true;
                cycle.push(x + 1);
                x = self.map0(x);
            }
            out.push(cycle);
        }
        Some(out)
    }
}

/// Permutations print in cycle notation (`()` for the identity), other
/// transformations as their 1-based image list.
impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cycles() {
            Some(cycles) if cycles.is_empty() => f.write_str("()"),
            Some(cycles) => {
                for cycle in cycles {
                    f.write_str("(")?;
                    for (i, x) in cycle.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{x}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            None => {
                f.write_str("[")?;
                for (i, y) in self.images.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", y + 1)?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Transformation({self})")
    }
}
