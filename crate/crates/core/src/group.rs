use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::{Error, Limits, Result, Transformation, TransformationSemigroup};

/// A permutation group with its elements enumerated.
///
/// An empty generator list denotes the trivial group.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Transformation>,
    elements: Vec<Transformation>,
    members: BTreeSet<Transformation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Transformation>, limits: &Limits) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
            if !g.is_permutation() {
                return Err(Error::invalid(alloc::format!("{g} is not a permutation")));
            }
        }
        let identity = Transformation::identity(degree);
        let mut elements = alloc::vec![identity.clone()];
        if !generators.is_empty() {
            let en = TransformationSemigroup::new(generators.clone())?.enumerate(limits)?;
            elements.extend(en.elements().iter().filter(|e| **e != identity).cloned());
        }
        let members = elements.iter().cloned().collect();
        Ok(PermGroup {
            degree,
            generators,
            elements,
            members,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        let identity = Transformation::identity(degree);
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: alloc::vec![identity.clone()],
            members: [identity].into_iter().collect(),
        }
    }

    /// The cyclic group generated by an `n`-cycle on `n` points.
    pub fn cyclic(n: usize) -> Result<Self> {
        let images: Vec<usize> = (1..=n).map(|x| x % n + 1).collect();
        PermGroup::new(n, alloc::vec![Transformation::new(&images)?], &Limits::default())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    /// Elements, identity first, then in breadth-first generation order.
    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: &Transformation) -> bool {
        self.members.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.members == other.members
    }

    /// Histogram of element orders.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for e in &self.elements {
            *hist.entry(e.element_order().1).or_insert(0) += 1;
        }
        hist
    }

    /// As a semigroup; the trivial group is generated by the identity.
    pub fn as_semigroup(&self) -> TransformationSemigroup {
        let gens = if self.generators.is_empty() {
            alloc::vec![Transformation::identity(self.degree)]
        } else {
            self.generators.clone()
        };
        TransformationSemigroup::new(gens).expect("degree-checked generators")
    }
}

/// Name of a small group from its order and element-order histogram.
///
/// Covers the groups of order at most 8 that can be told apart this way;
/// anything else is reported as `G<order>`.
pub(crate) fn small_group_name(order: usize, hist: &BTreeMap<usize, usize>) -> alloc::string::String {
    let count = |k: usize| hist.get(&k).copied().unwrap_or(0);
    let name = match order {
        1 => "1",
        2 => "C2",
        3 => "C3",
        4 if count(4) > 0 => "C4",
        4 => "V4",
        5 => "C5",
        6 if count(6) > 0 => "C6",
        6 => "S3",
        7 => "C7",
        8 if count(8) > 0 => "C8",
        8 if count(2) == 5 && count(4) == 2 => "D4",
        8 if count(2) == 1 && count(4) == 6 => "Q8",
        _ => return alloc::format!("G{order}"),
    };
    name.into()
}
