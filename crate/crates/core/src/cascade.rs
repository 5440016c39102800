//! Transformation cascades over a fixed list of components.
//!
//! A cascade is a tuple of dependency functions `(d_1..d_n)`; `d_i` maps the
//! states of levels `1..i-1` to a transformation of level `i`. Dependency
//! functions are stored sparsely: absent prefixes evaluate to the identity,
//! and identity values are never stored. For components that are not monoids
//! this means cascades live in the cascade product of the components with an
//! identity adjoined.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::radix::MixedRadix;
use crate::{Error, Limits, Result, Transformation, TransformationSemigroup};

/// Ordered components `(n_i, S_i)`; level 1 is the top of the hierarchy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentList {
    levels: Vec<TransformationSemigroup>,
    radix: MixedRadix,
}

impl ComponentList {
    pub fn new(levels: Vec<TransformationSemigroup>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("a component list needs at least one level"));
        }
        let radix = MixedRadix::new(levels.iter().map(|s| s.degree()).collect())?;
        Ok(ComponentList { levels, radix })
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// State-set sizes `(n_1..n_k)`.
    pub fn points(&self) -> &[usize] {
        self.radix.radices()
    }

    /// The component semigroup at a 1-based level.
    pub fn semigroup(&self, level: usize) -> &TransformationSemigroup {
        &self.levels[level - 1]
    }

    pub fn semigroups(&self) -> &[TransformationSemigroup] {
        &self.levels
    }

    /// The encoding of the product state space.
    pub fn radix(&self) -> &MixedRadix {
        &self.radix
    }

    /// Size of the flattened state space `Π n_i`.
    pub fn flat_degree(&self) -> usize {
        self.radix.size()
    }

    /// `Π_{j<level} n_j`, the number of prefixes at a 1-based level.
    pub fn prefix_domain(&self, level: usize) -> usize {
        self.points()[..level - 1].iter().product()
    }

    /// `(2, 2, 4)`
    pub fn points_display(&self) -> String {
        let mut s = String::from("(");
        for (i, n) in self.points().iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&alloc::format!("{n}"));
        }
        s.push(')');
        s
    }

    fn prefix_radix(&self, level: usize) -> MixedRadix {
        MixedRadix::new(self.points()[..level - 1].to_vec()).expect("sub-product of a valid radix")
    }
}

/// `d_i: X_1 × … × X_{i-1} → S_i` in canonical sparse form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DependencyFunction {
    level: usize,
    states: usize,
    prefix_radices: Vec<usize>,
    entries: BTreeMap<Vec<usize>, Transformation>,
}

impl DependencyFunction {
    fn empty(components: &ComponentList, level: usize) -> Self {
        DependencyFunction {
            level,
            states: components.points()[level - 1],
            prefix_radices: components.points()[..level - 1].to_vec(),
            entries: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn arity(&self) -> usize {
        self.level - 1
    }

    /// Number of stored (non-identity) values.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored `(prefix, value)` pairs in lexicographic prefix order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Transformation)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    fn check_prefix(&self, prefix: &[usize]) -> Result<()> {
        if prefix.len() != self.arity() {
            return Err(Error::invalid(alloc::format!(
                "level {} dependency expects a prefix of length {}, got {}",
                self.level,
                self.arity(),
                prefix.len()
            )));
        }
        for (&x, &r) in prefix.iter().zip(&self.prefix_radices) {
            if !(1..=r).contains(&x) {
                return Err(Error::OutOfRange { value: x, bound: r });
            }
        }
        Ok(())
    }

    /// Value at `prefix`, the identity where nothing is stored.
    pub fn evaluate(&self, prefix: &[usize]) -> Result<Transformation> {
        self.check_prefix(prefix)?;
        Ok(self
            .get(prefix)
            .cloned()
            .unwrap_or_else(|| Transformation::identity(self.states)))
    }

    #[inline]
    pub(crate) fn get(&self, prefix: &[usize]) -> Option<&Transformation> {
        self.entries.get(prefix)
    }

    /// Stores `value` at `prefix`; an identity value removes the entry.
    pub fn set(&mut self, prefix: &[usize], value: Transformation) -> Result<()> {
        self.check_prefix(prefix)?;
        if value.degree() != self.states {
            return Err(Error::DegreeMismatch {
                expected: self.states,
                found: value.degree(),
            });
        }
        self.set_unchecked(prefix.to_vec(), value);
        Ok(())
    }

    fn set_unchecked(&mut self, prefix: Vec<usize>, value: Transformation) {
        if value.is_identity() {
            self.entries.remove(&prefix);
        } else {
            self.entries.insert(prefix, value);
        }
    }
}

/// A transformation cascade: one dependency function per level.
///
/// Equality and ordering compare dependency data only; comparing cascades
/// over different component lists is meaningless.
#[derive(Clone)]
pub struct Cascade {
    components: Arc<ComponentList>,
    deps: Vec<DependencyFunction>,
}

impl PartialEq for Cascade {
    fn eq(&self, other: &Self) -> bool {
        self.deps == other.deps
    }
}

impl Eq for Cascade {}

impl PartialOrd for Cascade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cascade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deps.cmp(&other.deps)
    }
}

impl Cascade {
    /// The cascade with no stored dependencies.
    pub fn identity(components: &Arc<ComponentList>) -> Self {
        Cascade {
            deps: (1..=components.len())
                .map(|level| DependencyFunction::empty(components, level))
                .collect(),
            components: Arc::clone(components),
        }
    }

    /// Builds a cascade from `(prefix, value)` pairs; a prefix of length `L`
    /// defines the dependency function of level `L + 1`.
    pub fn from_dependencies(
        components: &Arc<ComponentList>,
        entries: &[(Vec<usize>, Transformation)],
    ) -> Result<Self> {
        let mut c = Cascade::identity(components);
        for (prefix, value) in entries {
            let level = prefix.len() + 1;
            if level > components.len() {
                return Err(Error::invalid(alloc::format!(
                    "prefix {:?} has length {} but there are only {} levels",
                    prefix,
                    prefix.len(),
                    components.len()
                )));
            }
            c.deps[level - 1].set(prefix, value.clone())?;
        }
        Ok(c)
    }

    /// Direct-product element: level `i` maps every prefix to `elems[i]`.
    pub fn constant(components: &Arc<ComponentList>, elems: &[Transformation]) -> Result<Self> {
        if elems.len() != components.len() {
            return Err(Error::DegreeMismatch {
                expected: components.len(),
                found: elems.len(),
            });
        }
        let mut c = Cascade::identity(components);
        for (level, value) in (1..).zip(elems) {
            let n = components.points()[level - 1];
            if value.degree() != n {
                return Err(Error::DegreeMismatch {
                    expected: n,
                    found: value.degree(),
                });
            }
            if value.is_identity() {
                continue;
            }
            for prefix in components.prefix_radix(level).tuples() {
                c.deps[level - 1].set_unchecked(prefix, value.clone());
            }
        }
        Ok(c)
    }

    pub fn components(&self) -> &Arc<ComponentList> {
        &self.components
    }

    /// Dependency function of a 1-based level.
    pub fn dependency(&self, level: usize) -> &DependencyFunction {
        &self.deps[level - 1]
    }

    pub fn dependencies(&self) -> &[DependencyFunction] {
        &self.deps
    }

    /// Total number of stored (non-identity) dependency values.
    pub fn dependency_count(&self) -> usize {
        self.deps.iter().map(DependencyFunction::len).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.dependency_count() == 0
    }

    /// All stored values are permutations, so the cascade acts bijectively.
    pub fn is_permutation(&self) -> bool {
        self.deps
            .iter()
            .all(|d| d.entries.values().all(Transformation::is_permutation))
    }

    /// Deepest level with a stored value, 0 for the identity cascade.
    pub fn depth(&self) -> usize {
        self.deps.iter().rposition(|d| !d.is_empty()).map_or(0, |i| i + 1)
    }

    /// Coordinatewise action; every level reads the original tuple.
    pub fn act(&self, tuple: &[usize]) -> Result<Vec<usize>> {
        self.components.radix().check(tuple)?;
        Ok(self.act_unchecked(tuple))
    }

    pub(crate) fn act_unchecked(&self, tuple: &[usize]) -> Vec<usize> {
        self.deps
            .iter()
            .enumerate()
            .map(|(i, d)| match d.get(&tuple[..i]) {
                Some(v) => v.map0(tuple[i] - 1) + 1,
                None => tuple[i],
            })
            .collect()
    }

    /// `self` then `other`: `act(result, x) = act(other, act(self, x))`.
    pub fn compose(&self, other: &Cascade) -> Result<Cascade> {
        if !Arc::ptr_eq(&self.components, &other.components) && self.components != other.components {
            return Err(Error::invalid("cascades are over different component lists"));
        }
        let mut out = Cascade::identity(&self.components);
        let depth = self.depth().max(other.depth());
        if depth > 0 {
            let mut prefix = Vec::with_capacity(depth);
            let mut image = Vec::with_capacity(depth);
            self.compose_walk(other, depth, &mut prefix, &mut image, &mut out);
        }
        Ok(out)
    }

    /// Visits every prefix down to `depth`, carrying the image of the prefix
    /// under `self` alongside it.
    fn compose_walk(
        &self,
        other: &Cascade,
        depth: usize,
        prefix: &mut Vec<usize>,
        image: &mut Vec<usize>,
        out: &mut Cascade,
    ) {
        let i = prefix.len();
        let first = self.deps[i].get(prefix);
        let second = other.deps[i].get(image);
        let value = match (first, second) {
            (Some(a), Some(b)) => Some(a.then(b)),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        if let Some(v) = &value {
            out.deps[i].set_unchecked(prefix.clone(), v.clone());
        }
        if i + 1 == depth {
            return;
        }
        for x in 1..=self.components.points()[i] {
            let y = match first {
                Some(a) => a.map0(x - 1) + 1,
                None => x,
            };
            prefix.push(x);
            image.push(y);
            self.compose_walk(other, depth, prefix, image, out);
            prefix.pop();
            image.pop();
        }
    }

    /// The transformation induced on the mixed-radix encoding of tuples.
    pub fn flatten(&self, limits: &Limits) -> Result<Transformation> {
        let radix = self.components.radix();
        if radix.size() > limits.flat_degree {
            return Err(Error::CapExceeded {
                what: "flattened degree",
                cap: limits.flat_degree,
            });
        }
        let images = radix
            .tuples()
            .map(|x| radix.encode_unchecked(&self.act_unchecked(&x)) as u32)
            .collect();
        Ok(Transformation::from_images0(images))
    }

    /// `(index, period)` of the cascade under composition.
    pub fn element_order(&self) -> (usize, usize) {
        let mut seen: BTreeMap<Cascade, usize> = BTreeMap::new();
        let mut power = Cascade::identity(&self.components);
        let mut k = 0;
        loop {
            if let Some(&first) = seen.get(&power) {
                return (first, k - first);
            }
            let next = power.compose(self).expect("same components");
            seen.insert(power, k);
            power = next;
            k += 1;
        }
    }
}

/// `4 dependencies`, `1 dependency`
pub(crate) fn counted(n: usize, one: &str, many: &str) -> String {
    alloc::format!("{n} {}", if n == 1 { one } else { many })
}

/// `perm cascade with 3 levels with (2, 2, 2) pts, 4 dependencies`
impl fmt::Display for Cascade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_permutation() {
            "perm"
        } else {
            "transformation"
        };
        write!(
            f,
            "{kind} cascade with {} with {} pts, {}",
            counted(self.components.len(), "level", "levels"),
            self.components.points_display(),
            counted(self.dependency_count(), "dependency", "dependencies")
        )
    }
}

impl fmt::Debug for Cascade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for d in &self.deps {
            for (p, v) in d.entries() {
                list.entry(&(p, v));
            }
        }
        list.finish()
    }
}

/// One cascade per (level, prefix, generator) with a single stored value.
///
/// For group components these generate the full wreath product. For other
/// components they generate the cascade product of the components with an
/// identity adjoined.
pub fn wreath_generators(components: &Arc<ComponentList>, limits: &Limits) -> Result<Vec<Cascade>> {
    let mut out = Vec::new();
    for level in 1..=components.len() {
        if components.prefix_domain(level) > limits.flat_degree {
            return Err(Error::CapExceeded {
                what: "prefix domain",
                cap: limits.flat_degree,
            });
        }
        for prefix in components.prefix_radix(level).tuples() {
            for g in components.semigroup(level).generators() {
                if g.is_identity() {
                    continue;
                }
                let mut c = Cascade::identity(components);
                c.deps[level - 1].set_unchecked(prefix.clone(), g.clone());
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// The semigroup `⟨W⟩` of cascades generated by a set `W`.
#[derive(Clone, Debug)]
pub struct CascadeProduct {
    components: Arc<ComponentList>,
    generators: Vec<Cascade>,
    elements: Vec<Cascade>,
    index: BTreeMap<Cascade, usize>,
}

impl CascadeProduct {
    /// Closes `generators` under composition, breadth first.
    pub fn generate(components: &Arc<ComponentList>, generators: Vec<Cascade>, limits: &Limits) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("a cascade product needs at least one generator"));
        }
        if generators
            .iter()
            .any(|g| !Arc::ptr_eq(&g.components, components) && *g.components != **components)
        {
            return Err(Error::invalid("generator is over a different component list"));
        }
        let mut product = CascadeProduct {
            components: Arc::clone(components),
            generators,
            elements: Vec::new(),
            index: BTreeMap::new(),
        };
        for g in product.generators.clone() {
            product.try_push(g, limits)?;
        }
        let mut next = 0;
        while next < product.elements.len() {
            for g in 0..product.generators.len() {
                let prod = product.elements[next].compose(&product.generators[g])?;
                product.try_push(prod, limits)?;
            }
            next += 1;
        }
        Ok(product)
    }

    fn try_push(&mut self, c: Cascade, limits: &Limits) -> Result<()> {
        if self.index.contains_key(&c) {
            return Ok(());
        }
        if self.elements.len() >= limits.elements {
            return Err(Error::CapExceeded {
                what: "cascade semigroup element count",
                cap: limits.elements,
            });
        }
        self.index.insert(c.clone(), self.elements.len());
        self.elements.push(c);
        Ok(())
    }

    pub fn components(&self) -> &Arc<ComponentList> {
        &self.components
    }

    pub fn generators(&self) -> &[Cascade] {
        &self.generators
    }

    pub fn elements(&self) -> &[Cascade] {
        &self.elements
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, c: &Cascade) -> bool {
        self.index.contains_key(c)
    }

    /// All generators are permutation cascades.
    pub fn is_group(&self) -> bool {
        self.generators.iter().all(Cascade::is_permutation)
    }

    /// Period histogram over the elements (the group-theoretic element
    /// orders when this is a group).
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for e in &self.elements {
            *hist.entry(e.element_order().1).or_insert(0) += 1;
        }
        hist
    }
}

/// `cascade group with 2 generators, 3 levels with (2, 2, 2) pts`
impl fmt::Display for CascadeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_group() { "group" } else { "semigroup" };
        write!(
            f,
            "cascade {kind} with {}, {} with {} pts",
            counted(self.generators.len(), "generator", "generators"),
            counted(self.components.len(), "level", "levels"),
            self.components.points_display()
        )
    }
}
