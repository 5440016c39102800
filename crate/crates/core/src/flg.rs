//! Frobenius-Lagrange decomposition of permutation groups.
//!
//! A subgroup chain `G = H_0 > H_1 > … > H_k = 1` identifies every element
//! `u` of `G` with a tuple of right-coset representatives
//! `u = t_k · … · t_2 · t_1`, `t_i ∈ T_i`. Right multiplication by `g`
//! becomes a permutation cascade whose level-`i` component is the action of
//! `H_{i-1}` on the right cosets of `H_i`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::cascade::{Cascade, CascadeProduct, ComponentList};
use crate::{Error, Limits, PermGroup, Result, Transformation, TransformationSemigroup};

/// `H_0 = G > H_1 > … > H_k = 1`, each subgroup enumerated.
#[derive(Clone, Debug)]
pub struct SubgroupChain {
    groups: Vec<PermGroup>,
}

impl SubgroupChain {
    /// Validates a chain given outermost group first. A missing trivial
    /// group at the end is appended.
    pub fn new(mut groups: Vec<PermGroup>) -> Result<Self> {
        let first = groups
            .first()
            .ok_or_else(|| Error::invalid("a subgroup chain needs at least one group"))?;
        if first.is_trivial() {
            return Err(Error::invalid("a subgroup chain must start at a nontrivial group"));
        }
        let degree = first.degree();
        if !groups.last().is_some_and(PermGroup::is_trivial) {
            groups.push(PermGroup::trivial(degree));
        }
        for (i, pair) in groups.windows(2).enumerate() {
            let (outer, inner) = (&pair[0], &pair[1]);
            if inner.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: inner.degree(),
                });
            }
            if !inner.is_subgroup_of(outer) {
                return Err(Error::invalid(alloc::format!(
                    "chain position {} is not a subgroup of position {}",
                    i + 1,
                    i
                )));
            }
            if inner.order() >= outer.order() {
                return Err(Error::invalid(alloc::format!(
                    "inclusion of chain position {} in position {} is not strict (orders {} and {})",
                    i + 1,
                    i,
                    inner.order(),
                    outer.order()
                )));
            }
        }
        Ok(SubgroupChain { groups })
    }

    /// Point-stabilizer chain with base points taken smallest first; points
    /// whose stabilizer adds nothing are skipped.
    pub fn point_stabilizers(group: &PermGroup, limits: &Limits) -> Result<Self> {
        if group.is_trivial() {
            return Err(Error::invalid("cannot decompose the trivial group"));
        }
        let mut groups = alloc::vec![group.clone()];
        for point in 0..group.degree() {
            let current = groups.last().expect("nonempty");
            if current.is_trivial() {
                break;
            }
            let stab = stabilizer(current, point, limits)?;
            if stab.order() < current.order() {
                groups.push(stab);
            }
        }
        SubgroupChain::new(groups)
    }

    pub fn groups(&self) -> &[PermGroup] {
        &self.groups
    }

    /// Number of levels `k`.
    pub fn levels(&self) -> usize {
        self.groups.len() - 1
    }

    /// Indices `[H_{i-1} : H_i]`.
    pub fn indices(&self) -> Vec<usize> {
        self.groups.windows(2).map(|w| w[0].order() / w[1].order()).collect()
    }
}

/// Stabilizer of a 0-based point, generated by Schreier generators and
/// pruned greedily.
fn stabilizer(group: &PermGroup, point: usize, limits: &Limits) -> Result<PermGroup> {
    // Orbit transversal: for each orbit point, an element carrying `point` to it.
    let mut reps: BTreeMap<usize, Transformation> = BTreeMap::new();
    let mut queue = alloc::vec![point];
    reps.insert(point, Transformation::identity(group.degree()));
    let mut next = 0;
    while next < queue.len() {
        let x = queue[next];
        next += 1;
        for g in group.generators() {
            let y = g.map0(x);
            if !reps.contains_key(&y) {
                let r = reps[&x].then(g);
                reps.insert(y, r);
                queue.push(y);
            }
        }
    }
    let mut candidates = Vec::new();
    for x in &queue {
        for g in group.generators() {
            let tg = reps[x].then(g);
            let back = reps[&tg.map0(point)].inverse().expect("permutation");
            let s = tg.then(&back);
            if !s.is_identity() && !candidates.contains(&s) {
                candidates.push(s);
            }
        }
    }
    let mut gens: Vec<Transformation> = Vec::new();
    let mut current = PermGroup::trivial(group.degree());
    for s in candidates {
        if !current.contains(&s) {
            gens.push(s);
            current = PermGroup::new(group.degree(), gens.clone(), limits)?;
        }
    }
    Ok(current)
}

/// Right transversal `T_i` of `H_i` in `H_{i-1}` with a lookup from elements
/// of `H_{i-1}` to their coset index.
#[derive(Clone, Debug)]
pub struct Transversal {
    reps: Vec<Transformation>,
    coset_of: BTreeMap<Transformation, usize>,
}

impl Transversal {
    /// Breadth-first over the generators of `outer` starting at the identity;
    /// the first element to reach a new coset becomes its representative.
    pub fn new(outer: &PermGroup, inner: &PermGroup) -> Result<Self> {
        let mut t = Transversal {
            reps: Vec::new(),
            coset_of: BTreeMap::new(),
        };
        t.add(Transformation::identity(outer.degree()), inner);
        let mut next = 0;
        while next < t.reps.len() {
            for g in outer.generators() {
                let v = t.reps[next].then(g);
                if !t.coset_of.contains_key(&v) {
                    t.add(v, inner);
                }
            }
            next += 1;
        }
        if t.reps.len() * inner.order() != outer.order() {
            return Err(Error::Inconsistent(alloc::format!(
                "transversal has {} cosets, expected {}",
                t.reps.len(),
                outer.order() / inner.order()
            )));
        }
        Ok(t)
    }

    fn add(&mut self, rep: Transformation, inner: &PermGroup) {
        let idx = self.reps.len();
        for h in inner.elements() {
            self.coset_of.insert(h.then(&rep), idx);
        }
        self.reps.push(rep);
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representatives, identity first.
    pub fn reps(&self) -> &[Transformation] {
        &self.reps
    }

    /// 0-based index of the coset containing `u`.
    pub fn coset_index(&self, u: &Transformation) -> Option<usize> {
        self.coset_of.get(u).copied()
    }

    /// Representative of the coset containing `u`.
    pub fn rep_of(&self, u: &Transformation) -> Option<&Transformation> {
        self.coset_index(u).map(|i| &self.reps[i])
    }

    /// Action of `h` on the cosets: `j ↦ index of T_j · h`.
    pub fn action(&self, h: &Transformation) -> Result<Transformation> {
        let images = self
            .reps
            .iter()
            .map(|t| {
                self.coset_index(&t.then(h))
                    .map(|j| j as u32)
                    .ok_or_else(|| Error::invalid(alloc::format!("{h} is not in the acting group")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transformation::from_images0(images))
    }
}

/// Coset action of `outer` on right cosets of `inner`: the component group
/// on `|T|` points, generated by the images of `outer`'s generators.
pub fn coset_action(outer: &PermGroup, transversal: &Transversal) -> Result<TransformationSemigroup> {
    let mut gens = Vec::new();
    for g in outer.generators() {
        let a = transversal.action(g)?;
        if !gens.contains(&a) {
            gens.push(a);
        }
    }
    if gens.is_empty() {
        gens.push(Transformation::identity(transversal.len()));
    }
    TransformationSemigroup::new(gens)
}

/// A permutation group coordinatized along a subgroup chain.
#[derive(Clone, Debug)]
pub struct FlDecomposition {
    chain: SubgroupChain,
    transversals: Vec<Transversal>,
    components: Arc<ComponentList>,
}

impl FlDecomposition {
    pub fn new(chain: SubgroupChain) -> Result<Self> {
        let mut transversals = Vec::new();
        let mut levels = Vec::new();
        for pair in chain.groups.windows(2) {
            let t = Transversal::new(&pair[0], &pair[1])?;
            levels.push(coset_action(&pair[0], &t)?);
            transversals.push(t);
        }
        let components = Arc::new(ComponentList::new(levels)?);
        Ok(FlDecomposition {
            chain,
            transversals,
            components,
        })
    }

    /// Decomposition along the default point-stabilizer chain.
    pub fn with_default_chain(group: &PermGroup, limits: &Limits) -> Result<Self> {
        FlDecomposition::new(SubgroupChain::point_stabilizers(group, limits)?)
    }

    pub fn chain(&self) -> &SubgroupChain {
        &self.chain
    }

    pub fn group(&self) -> &PermGroup {
        &self.chain.groups[0]
    }

    pub fn transversals(&self) -> &[Transversal] {
        &self.transversals
    }

    pub fn components(&self) -> &Arc<ComponentList> {
        &self.components
    }

    /// 1-based coset coordinates of `u`.
    pub fn coordinates(&self, u: &Transformation) -> Result<Vec<usize>> {
        if !self.group().contains(u) {
            return Err(Error::invalid(alloc::format!("{u} is not in the group")));
        }
        let mut h = u.clone();
        let mut coords = Vec::with_capacity(self.transversals.len());
        for t in &self.transversals {
            let j = t
                .coset_index(&h)
                .ok_or_else(|| Error::Inconsistent("coset lookup failed".into()))?;
            coords.push(j + 1);
            h = h.then(&t.reps[j].inverse().expect("permutation"));
        }
        debug_assert!(h.is_identity());
        Ok(coords)
    }

    /// `t_k · … · t_1` for `t_i = T_i[x_i]`.
    pub fn decode(&self, coords: &[usize]) -> Result<Transformation> {
        self.components.radix().check(coords)?;
        let mut u = Transformation::identity(self.group().degree());
        for (t, &x) in self.transversals.iter().zip(coords) {
            u = t.reps[x - 1].then(&u);
        }
        Ok(u)
    }

    /// The permutation cascade emulating right multiplication by `g`.
    ///
    /// Level 1 holds the coset action of `g` itself. Below, the value at a
    /// prefix is the coset action of the carry left over after sifting `g`
    /// through the representatives the prefix selects.
    pub fn encode(&self, g: &Transformation) -> Result<Cascade> {
        if !self.group().contains(g) {
            return Err(Error::invalid(alloc::format!("{g} is not in the group")));
        }
        let mut entries = Vec::new();
        let mut prefix = Vec::with_capacity(self.transversals.len());
        self.encode_walk(g.clone(), &mut prefix, &mut entries)?;
        Cascade::from_dependencies(&self.components, &entries)
    }

    fn encode_walk(
        &self,
        carry: Transformation,
        prefix: &mut Vec<usize>,
        entries: &mut Vec<(Vec<usize>, Transformation)>,
    ) -> Result<()> {
        if carry.is_identity() {
            return Ok(());
        }
        let t = &self.transversals[prefix.len()];
        let action = t.action(&carry)?;
        entries.push((prefix.clone(), action.clone()));
        if prefix.len() + 1 == self.transversals.len() {
            return Ok(());
        }
        for (j, rep) in t.reps.iter().enumerate() {
            let moved = rep.then(&carry);
            let target = &t.reps[action.map0(j)];
            let next = moved.then(&target.inverse().expect("permutation"));
            prefix.push(j + 1);
            self.encode_walk(next, prefix, entries)?;
            prefix.pop();
        }
        Ok(())
    }

    /// Cascade group generated by the encoded generators of `G`.
    pub fn cascade_group(&self, limits: &Limits) -> Result<CascadeProduct> {
        let gens = self
            .group()
            .generators()
            .iter()
            .map(|g| self.encode(g))
            .collect::<Result<Vec<_>>>()?;
        CascadeProduct::generate(&self.components, gens, limits)
    }
}

/// Decomposes `group` along `chain` (or the default point-stabilizer chain)
/// and generates the cascade group of its encoded generators.
pub fn fl_cascade_group(
    group: &PermGroup,
    chain: Option<SubgroupChain>,
    limits: &Limits,
) -> Result<(FlDecomposition, CascadeProduct)> {
    let decomposition = match chain {
        Some(chain) => {
            if !chain.groups[0].same_elements(group) {
                return Err(Error::invalid("the chain does not start at the given group"));
            }
            FlDecomposition::new(chain)?
        }
        None => FlDecomposition::with_default_chain(group, limits)?,
    };
    let product = decomposition.cascade_group(limits)?;
    Ok((decomposition, product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn perm(n: usize, cycles: &[&[usize]]) -> Transformation {
        Transformation::from_cycles(n, cycles).unwrap()
    }

    fn group(n: usize, gens: Vec<Transformation>) -> PermGroup {
        PermGroup::new(n, gens, &Limits::default()).unwrap()
    }

    fn z4() -> PermGroup {
        group(4, vec![perm(4, &[&[1, 2, 3, 4]])])
    }

    fn s3() -> PermGroup {
        group(3, vec![perm(3, &[&[1, 2, 3]]), perm(3, &[&[1, 2]])])
    }

    fn z4_chain() -> SubgroupChain {
        SubgroupChain::new(vec![
            z4(),
            group(4, vec![perm(4, &[&[1, 3], &[2, 4]])]),
            PermGroup::trivial(4),
        ])
        .unwrap()
    }

    #[test]
    fn default_chains() {
        let c = SubgroupChain::point_stabilizers(&z4(), &Limits::default()).unwrap();
        assert_eq!(c.indices(), vec![4]);
        let c = SubgroupChain::point_stabilizers(&s3(), &Limits::default()).unwrap();
        assert_eq!(c.indices(), vec![3, 2]);
        assert!(SubgroupChain::point_stabilizers(&PermGroup::trivial(3), &Limits::default()).is_err());
    }

    #[test]
    fn chain_validation() {
        let not_sub = group(4, vec![perm(4, &[&[1, 2]])]);
        let err = SubgroupChain::new(vec![z4(), not_sub]).unwrap_err();
        assert!(alloc::format!("{err}").contains("position 1"));
        assert!(SubgroupChain::new(vec![z4(), z4()]).is_err());
        assert!(SubgroupChain::new(vec![PermGroup::trivial(4)]).is_err());
        // trailing trivial group is implied
        assert_eq!(SubgroupChain::new(vec![z4()]).unwrap().levels(), 1);
    }

    #[test]
    fn coset_action_of_index_two() {
        let k = group(4, vec![perm(4, &[&[1, 3], &[2, 4]])]);
        let t = Transversal::new(&z4(), &k).unwrap();
        assert!(t.reps()[0].is_identity());
        let comp = coset_action(&z4(), &t).unwrap();
        assert_eq!(comp.degree(), 2);
        assert_eq!(comp.enumerate(&Limits::default()).unwrap().len(), 2);
        for h in k.elements() {
            assert_eq!(t.action(h).unwrap().map0(0), 0);
        }
    }

    #[test]
    fn transversal_contract() {
        let k = group(3, vec![perm(3, &[&[2, 3]])]);
        let t = Transversal::new(&s3(), &k).unwrap();
        assert_eq!(t.len(), 3);
        for r in t.reps() {
            assert_eq!(t.rep_of(r), Some(r));
        }
        for u in s3().elements() {
            let r = t.rep_of(u).unwrap();
            assert!(k.contains(&u.then(&r.inverse().unwrap())));
        }
    }

    #[test]
    fn z4_reproduces_the_counter() {
        let d = FlDecomposition::new(z4_chain()).unwrap();
        assert_eq!(d.components().points(), &[2, 2]);
        let g = d.cascade_group(&Limits::default()).unwrap();
        assert_eq!(g.order(), 4);
        let c = d.encode(&perm(4, &[&[1, 2, 3, 4]])).unwrap();
        // constant swap on top, a single carry below
        assert_eq!(c.dependency(1).len(), 1);
        assert_eq!(c.dependency(2).len(), 1);
        let all: alloc::collections::BTreeSet<_> =
            d.components().radix().tuples().map(|x| d.decode(&x).unwrap()).collect();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn encode_emulates_right_multiplication() {
        for d in [
            FlDecomposition::new(z4_chain()).unwrap(),
            FlDecomposition::with_default_chain(&s3(), &Limits::default()).unwrap(),
        ] {
            for g in d.group().elements() {
                let c = d.encode(g).unwrap();
                for u in d.group().elements() {
                    let x = d.coordinates(u).unwrap();
                    assert_eq!(d.decode(&x).unwrap(), *u);
                    assert_eq!(c.act(&x).unwrap(), d.coordinates(&u.then(g)).unwrap());
                }
            }
        }
    }

    #[test]
    fn identity_encodes_to_identity() {
        let d = FlDecomposition::new(z4_chain()).unwrap();
        assert!(d.encode(&Transformation::identity(4)).unwrap().is_identity());
        assert!(d.decode(&[1, 1]).unwrap().is_identity());
        assert!(d.encode(&perm(4, &[&[1, 2]])).is_err());
    }

    #[test]
    fn chain_must_start_at_group() {
        assert!(fl_cascade_group(&s3(), Some(z4_chain()), &Limits::default()).is_err());
        let (d, g) = fl_cascade_group(&s3(), None, &Limits::default()).unwrap();
        assert_eq!(d.components().points(), &[3, 2]);
        assert_eq!(g.order(), 6);
    }
}
