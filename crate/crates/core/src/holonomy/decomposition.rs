use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::skeleton::{MemberId, Skeleton};
use crate::cascade::{counted, Cascade, CascadeProduct, ComponentList};
use crate::group::small_group_name;
use crate::{Enumeration, Error, Limits, PermGroup, Result, Transformation, TransformationSemigroup};

/// One class representative at a given depth, with its block of coordinates.
#[derive(Clone, Debug)]
pub struct LevelEntry {
    pub rep: MemberId,
    /// 0-based position of the block within the level's state set.
    pub offset: usize,
    pub tiles: Vec<MemberId>,
    /// The holonomy group as permutations of tile indices.
    pub group: PermGroup,
}

impl LevelEntry {
    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    fn contains(&self, y: usize) -> bool {
        (self.offset..self.offset + self.tiles.len()).contains(&y)
    }
}

/// The representatives living at one depth.
#[derive(Clone, Debug)]
pub struct Level {
    pub depth: usize,
    pub entries: Vec<LevelEntry>,
}

impl Level {
    /// Number of coordinate values at this depth.
    pub fn states(&self) -> usize {
        self.entries.iter().map(LevelEntry::tile_count).sum()
    }
}

/// Holonomy decomposition of a transformation semigroup.
///
/// A coordinate tuple has one entry per depth `1..=height(X)`. Decoding walks
/// down from `X`: at each depth where the current member is active, the
/// coordinate picks a tile of its representative, carried into the member by
/// its in-word. A coordinate lying outside the active representative's block
/// is read as that block's first tile, which keeps decoding total.
#[derive(Clone, Debug)]
pub struct HolonomyDecomposition {
    skeleton: Skeleton,
    elements: Enumeration,
    levels: Vec<Level>,
    /// Level and entry index for each class representative.
    entry_of: BTreeMap<MemberId, (usize, usize)>,
    /// `member_tiles[p][j]`: the tile `tiles(rep(p))[j] · w_in(p)` of `p`.
    member_tiles: Vec<Vec<MemberId>>,
    components: Arc<ComponentList>,
}

impl HolonomyDecomposition {
    pub fn new(semigroup: &TransformationSemigroup, limits: &Limits) -> Result<Self> {
        if semigroup.degree() < 2 {
            return Err(Error::invalid("holonomy decomposition needs at least two states"));
        }
        let skeleton = Skeleton::new(semigroup, limits)?;
        let elements = semigroup.enumerate(limits)?;
        let height = skeleton.top_height();

        let mut levels: Vec<Level> = (1..=height)
            .map(|depth| Level {
                depth,
                entries: Vec::new(),
            })
            .collect();
        // classes are numbered in canonical order of their representatives
        for class in skeleton.classes() {
            if class.depth > height {
                continue;
            }
            let rep = class.rep;
            let tiles = skeleton.tiles(rep).to_vec();
            let group = holonomy_group(&skeleton, &elements, rep, limits)?;
            let level = &mut levels[class.depth - 1];
            let offset = level.states();
            level.entries.push(LevelEntry {
                rep,
                offset,
                tiles,
                group,
            });
        }
        let mut entry_of = BTreeMap::new();
        for (l, level) in levels.iter().enumerate() {
            for (e, entry) in level.entries.iter().enumerate() {
                entry_of.insert(entry.rep, (l, e));
            }
        }
        let member_tiles = (0..skeleton.members().len())
            .map(|p| {
                let rep = skeleton.rep(p);
                skeleton
                    .tiles(rep)
                    .iter()
                    .map(|&tile| {
                        skeleton
                            .image_member(tile, skeleton.in_map(p))
                            .ok_or_else(|| Error::Inconsistent("tile image is not a member".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let component_semigroups = levels.iter().map(level_semigroup).collect::<Result<Vec<_>>>()?;
        let components = Arc::new(ComponentList::new(component_semigroups)?);
        if components.prefix_domain(components.len()) > limits.flat_degree {
            return Err(Error::CapExceeded {
                what: "prefix domain",
                cap: limits.flat_degree,
            });
        }
        Ok(HolonomyDecomposition {
            skeleton,
            elements,
            levels,
            entry_of,
            member_tiles,
            components,
        })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn semigroup(&self) -> &TransformationSemigroup {
        self.skeleton.semigroup()
    }

    /// Enumerated elements of the decomposed semigroup.
    pub fn elements(&self) -> &Enumeration {
        &self.elements
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn components(&self) -> &Arc<ComponentList> {
        &self.components
    }

    /// `1: 2` / `2: 2` / `3: (2,C2) 2`, one line per depth.
    pub fn components_display(&self) -> String {
        let mut out = String::new();
        for (i, level) in self.levels.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&alloc::format!("{}:", level.depth));
            for entry in &level.entries {
                if entry.group.is_trivial() {
                    out.push_str(&alloc::format!(" {}", entry.tile_count()));
                } else {
                    let name = small_group_name(entry.group.order(), &entry.group.order_histogram());
                    out.push_str(&alloc::format!(" ({},{})", entry.tile_count(), name));
                }
            }
        }
        out
    }

    /// Entry of the representative of `p` if `p` is active at `depth`.
    fn active_entry(&self, p: MemberId, depth: usize) -> Option<&LevelEntry> {
        if self.skeleton.depth(p) != depth {
            return None;
        }
        let (l, e) = self.entry_of[&self.skeleton.rep(p)];
        Some(&self.levels[l].entries[e])
    }

    /// One decoding step: the member chosen by coordinate `y` (0-based) at `depth`.
    fn descend(&self, p: MemberId, depth: usize, y: usize) -> MemberId {
        match self.active_entry(p, depth) {
            Some(entry) => {
                let local = if entry.contains(y) { y - entry.offset } else { 0 };
                self.member_tiles[p][local]
            }
            None => p,
        }
    }

    /// Coordinates of a 1-based state; depths the tile chain skips hold 1.
    pub fn encode_state(&self, x: usize) -> Result<Vec<usize>> {
        let n = self.skeleton.degree();
        if !(1..=n).contains(&x) {
            return Err(Error::OutOfRange { value: x, bound: n });
        }
        let mut p = self.skeleton.top();
        let mut coords = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            match self.active_entry(p, level.depth) {
                Some(entry) => {
                    let local = self.member_tiles[p]
                        .iter()
                        .position(|&q| self.skeleton.member(q).contains(x))
                        .ok_or_else(|| Error::Inconsistent("tiles do not cover their member".into()))?;
                    coords.push(entry.offset + local + 1);
                    p = self.member_tiles[p][local];
                }
                None => coords.push(1),
            }
        }
        Ok(coords)
    }

    /// The state a coordinate tuple stands for. Total on in-range tuples.
    pub fn decode_tuple(&self, coords: &[usize]) -> Result<usize> {
        self.components.radix().check(coords)?;
        let mut p = self.skeleton.top();
        for (level, &c) in self.levels.iter().zip(coords) {
            p = self.descend(p, level.depth, c - 1);
        }
        self.skeleton
            .member(p)
            .single()
            .ok_or_else(|| Error::Inconsistent("decoding did not end at a singleton".into()))
    }

    /// The cascade emulating `s` on coordinates.
    ///
    /// Walking a prefix of the input tuple and of its image in parallel
    /// determines the current members `P` (input) and `Q` (output), with
    /// `P·s ⊆ Q` at every depth. Where `Q` is active the value is either the
    /// permutation of tiles induced by `s` (when `P·s = Q`) or the constant
    /// onto the tile of `Q` covering `P·s`.
    pub fn lift(&self, s: &Transformation) -> Result<Cascade> {
        if !(self.elements.contains(s) || (s.is_identity() && s.degree() == self.skeleton.degree())) {
            return Err(Error::invalid(alloc::format!("{s} is not an element of the semigroup")));
        }
        let depth = self.levels.len();
        let mut cache: BTreeMap<(usize, MemberId, MemberId), Option<Transformation>> = BTreeMap::new();
        let mut entries = Vec::new();
        let top = self.skeleton.top();
        let mut prefix = Vec::with_capacity(depth);
        self.lift_walk(s, top, top, &mut prefix, &mut cache, &mut entries)?;
        Cascade::from_dependencies(&self.components, &entries)
    }

    fn lift_walk(
        &self,
        s: &Transformation,
        p: MemberId,
        q: MemberId,
        prefix: &mut Vec<usize>,
        cache: &mut BTreeMap<(usize, MemberId, MemberId), Option<Transformation>>,
        entries: &mut Vec<(Vec<usize>, Transformation)>,
    ) -> Result<()> {
        let i = prefix.len();
        let level = &self.levels[i];
        let value = match cache.get(&(level.depth, p, q)) {
            Some(v) => v.clone(),
            None => {
                let v = self.lift_value(s, level, p, q)?;
                cache.insert((level.depth, p, q), v.clone());
                v
            }
        };
        if let Some(v) = &value {
            if !v.is_identity() {
                entries.push((prefix.clone(), v.clone()));
            }
        }
        if i + 1 == self.levels.len() {
            return Ok(());
        }
        for y in 0..level.states() {
            let z = value.as_ref().map_or(y, |v| v.map0(y));
            let next_p = self.descend(p, level.depth, y);
            let next_q = self.descend(q, level.depth, z);
            prefix.push(y + 1);
            self.lift_walk(s, next_p, next_q, prefix, cache, entries)?;
            prefix.pop();
        }
        Ok(())
    }

    fn lift_value(
        &self,
        s: &Transformation,
        level: &Level,
        p: MemberId,
        q: MemberId,
    ) -> Result<Option<Transformation>> {
        let sk = &self.skeleton;
        let image = s.image_set0(sk.member(p));
        if !image.is_subset(sk.member(q)) {
            return Err(Error::Inconsistent(alloc::format!(
                "lift lost track: {} · s is not inside {}",
                sk.member(p),
                sk.member(q)
            )));
        }
        let Some(target) = self.active_entry(q, level.depth) else {
            return Ok(None);
        };
        let n = level.states();
        let q_tiles = &self.member_tiles[q];
        let covering = |set: &crate::StateSet| -> Result<usize> {
            q_tiles
                .iter()
                .position(|&t| set.is_subset(sk.member(t)))
                .ok_or_else(|| Error::Inconsistent(alloc::format!("no tile of {} covers {set}", sk.member(q))))
        };
        if self.active_entry(p, level.depth).is_some() && sk.member_id(&image) == Some(q) {
            // s maps P onto Q bijectively and tiles onto tiles
            let perm = self.member_tiles[p]
                .iter()
                .map(|&t| {
                    let moved = s.image_set0(sk.member(t));
                    q_tiles
                        .iter()
                        .position(|&u| *sk.member(u) == moved)
                        .ok_or_else(|| Error::Inconsistent("tile image is not a tile".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let images = (0..n)
                .map(|y| {
                    let local = if target.contains(y) { y - target.offset } else { 0 };
                    (target.offset + perm[local]) as u32
                })
                .collect();
            Ok(Some(Transformation::from_images0(images)))
        } else {
            let j = covering(&image)?;
            Ok(Some(Transformation::from_images0(
                alloc::vec![(target.offset + j) as u32; n],
            )))
        }
    }

    /// Cascade semigroup generated by the lifts of the generators.
    pub fn cascade_semigroup(&self, limits: &Limits) -> Result<CascadeProduct> {
        CascadeProduct::generate(&self.components, self.lifted_generators()?, limits)
    }

    pub fn lifted_generators(&self) -> Result<Vec<Cascade>> {
        self.semigroup().generators().iter().map(|g| self.lift(g)).collect()
    }

    /// `cascade semigroup with 2 generators, 3 levels with (2, 2, 4) pts`,
    /// without enumerating the cascade semigroup.
    pub fn summary(&self) -> String {
        let gens = self.semigroup().generators();
        let kind = if gens.iter().all(Transformation::is_permutation) {
            "group"
        } else {
            "semigroup"
        };
        alloc::format!(
            "cascade {kind} with {}, {} with {} pts",
            counted(gens.len(), "generator", "generators"),
            counted(self.components.len(), "level", "levels"),
            self.components.points_display()
        )
    }
}

/// Permutations of `tiles(rep)` induced by the elements fixing `rep` setwise.
fn holonomy_group(sk: &Skeleton, elements: &Enumeration, rep: MemberId, limits: &Limits) -> Result<PermGroup> {
    let tiles = sk.tiles(rep);
    let k = tiles.len();
    let mut perms: BTreeSet<Transformation> = BTreeSet::new();
    for s in elements.elements() {
        if sk.image_member(rep, s) != Some(rep) {
            continue;
        }
        let images = tiles
            .iter()
            .map(|&t| {
                let moved = s.image_set0(sk.member(t));
                tiles
                    .iter()
                    .position(|&u| *sk.member(u) == moved)
                    .map(|j| j as u32)
                    .ok_or_else(|| Error::Inconsistent("stabilizing element does not permute tiles".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let perm = Transformation::from_images0(images);
        if !perm.is_identity() {
            perms.insert(perm);
        }
    }
    let mut gens: Vec<Transformation> = Vec::new();
    let mut group = PermGroup::trivial(k);
    for p in perms {
        if !group.contains(&p) {
            gens.push(p);
            group = PermGroup::new(k, gens.clone(), limits)?;
        }
    }
    Ok(group)
}

/// Generators of a level component: holonomy permutations on their block
/// (identity elsewhere), constant maps, and, when the level has several
/// blocks, the same permutations with foreign blocks routed into the block
/// as the lifts require.
fn level_semigroup(level: &Level) -> Result<TransformationSemigroup> {
    let n = level.states();
    let mut gens: Vec<Transformation> = Vec::new();
    let push = |t: Transformation, gens: &mut Vec<Transformation>| {
        if !t.is_identity() && !gens.contains(&t) {
            gens.push(t);
        }
    };
    let several = level.entries.len() > 1;
    for entry in &level.entries {
        let mut perms: Vec<Transformation> = entry.group.generators().to_vec();
        if several {
            perms.push(Transformation::identity(entry.tile_count()));
        }
        for perm in &perms {
            let blockwise = (0..n)
                .map(|y| {
                    if entry.contains(y) {
                        (entry.offset + perm.map0(y - entry.offset)) as u32
                    } else {
                        y as u32
                    }
                })
                .collect();
            push(Transformation::from_images0(blockwise), &mut gens);
            if several {
                let routed = (0..n)
                    .map(|y| {
                        let local = if entry.contains(y) { y - entry.offset } else { 0 };
                        (entry.offset + perm.map0(local)) as u32
                    })
                    .collect();
                push(Transformation::from_images0(routed), &mut gens);
            }
        }
    }
    for y in 1..=n {
        push(Transformation::constant(n, y)?, &mut gens);
    }
    if gens.is_empty() {
        gens.push(Transformation::identity(n));
    }
    TransformationSemigroup::new(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Word;
    use alloc::vec;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images).unwrap()
    }

    fn semigroup_t() -> TransformationSemigroup {
        TransformationSemigroup::new(vec![t(&[3, 2, 4, 4]), t(&[3, 3, 1, 3])]).unwrap()
    }

    fn full_monoid_3() -> TransformationSemigroup {
        TransformationSemigroup::new(vec![t(&[2, 3, 1]), t(&[2, 1, 3]), t(&[1, 1, 3])]).unwrap()
    }

    fn decompose(s: &TransformationSemigroup) -> HolonomyDecomposition {
        HolonomyDecomposition::new(s, &Limits::default()).unwrap()
    }

    fn assert_emulates(hd: &HolonomyDecomposition, s: &Transformation, lifted: &Cascade) {
        for c in hd.components().radix().tuples() {
            let x = hd.decode_tuple(&c).unwrap();
            let moved = lifted.act(&c).unwrap();
            assert_eq!(
                hd.decode_tuple(&moved).unwrap(),
                s.apply(x).unwrap(),
                "tuple {c:?} under {s}"
            );
        }
    }

    #[test]
    fn components_of_t() {
        let hd = decompose(&semigroup_t());
        assert_eq!(hd.elements().len(), 13);
        assert_eq!(hd.components_display(), "1: 2\n2: 2\n3: (2,C2) 2");
        assert_eq!(hd.components().points(), &[2, 2, 4]);
        assert_eq!(
            hd.summary(),
            "cascade semigroup with 2 generators, 3 levels with (2, 2, 4) pts"
        );
    }

    #[test]
    fn decode_inverts_encode_and_is_total() {
        let hd = decompose(&semigroup_t());
        for x in 1..=4 {
            let c = hd.encode_state(x).unwrap();
            assert_eq!(hd.decode_tuple(&c).unwrap(), x);
        }
        let mut hits = [0usize; 4];
        for c in hd.components().radix().tuples() {
            hits[hd.decode_tuple(&c).unwrap() - 1] += 1;
        }
        assert_eq!(hits.iter().sum::<usize>(), 16);
        assert!(hits.iter().all(|&h| h > 0));
        assert!(hd.decode_tuple(&[3, 1, 1]).is_err());
    }

    #[test]
    fn lifts_of_generators_emulate() {
        let s = semigroup_t();
        let hd = decompose(&s);
        for g in s.generators() {
            assert_emulates(&hd, g, &hd.lift(g).unwrap());
        }
        // junk coordinates are routed, so only canonical encodings stay fixed
        let id = Transformation::identity(4);
        let lifted = hd.lift(&id).unwrap();
        assert_emulates(&hd, &id, &lifted);
        for x in 1..=4 {
            let c = hd.encode_state(x).unwrap();
            assert_eq!(lifted.act(&c).unwrap(), c);
        }
        assert!(hd.lift(&t(&[2, 2, 2, 2])).is_err());
    }

    #[test]
    fn lift_of_t2_swaps_the_c2_block() {
        let hd = decompose(&semigroup_t());
        let lifted = hd.lift(&t(&[3, 3, 1, 3])).unwrap();
        let c = hd.encode_state(1).unwrap();
        let d = hd.encode_state(3).unwrap();
        // 1 and 3 sit in the same C2 block and are exchanged by t2
        assert_eq!(c[..2], d[..2]);
        assert_eq!(lifted.act(&c).unwrap(), d);
    }

    #[test]
    fn word_emulation() {
        let s = semigroup_t();
        let hd = decompose(&s);
        let lifted = hd.lifted_generators().unwrap();
        let words = [vec![1, 2], vec![2, 2, 1], vec![1, 1, 2, 1, 2], vec![2, 1, 2, 1, 1, 2]];
        for w in words {
            let word = Word::new(w.clone());
            let flat = s.evaluate(&word).unwrap();
            let mut c = lifted[w[0] - 1].clone();
            for &g in &w[1..] {
                c = c.compose(&lifted[g - 1]).unwrap();
            }
            assert_emulates(&hd, &flat, &c);
        }
    }

    #[test]
    fn trivial_monoid() {
        let s = TransformationSemigroup::new(vec![Transformation::identity(2)]).unwrap();
        let hd = decompose(&s);
        assert_eq!(hd.components_display(), "1: 2");
        assert_eq!(hd.components().points(), &[2]);
        assert_eq!(hd.encode_state(2).unwrap(), vec![2]);
        assert_eq!(hd.decode_tuple(&[1]).unwrap(), 1);
    }

    #[test]
    fn full_transformation_monoid_on_three_points() {
        let s = full_monoid_3();
        let hd = decompose(&s);
        assert_eq!(hd.elements().len(), 27);
        let display = hd.components_display();
        assert!(display.lines().next().unwrap().contains("(3,S3)"), "{display}");
        for g in s.generators() {
            assert_emulates(&hd, g, &hd.lift(g).unwrap());
        }
    }

    #[test]
    fn permutation_group_has_height_one() {
        let s = TransformationSemigroup::new(vec![t(&[2, 3, 4, 1])]).unwrap();
        let hd = decompose(&s);
        assert_eq!(hd.components_display(), "1: (4,C4)");
        let g = t(&[2, 3, 4, 1]);
        assert_emulates(&hd, &g, &hd.lift(&g).unwrap());
    }

    #[test]
    fn level_components_hold_constants_and_holonomy() {
        let hd = decompose(&semigroup_t());
        let last = hd.components().semigroup(3);
        for y in 1..=4 {
            assert!(last.generators().contains(&Transformation::constant(4, y).unwrap()));
        }
        let entry = &hd.levels()[2].entries[0];
        assert_eq!(entry.group.order(), 2);
        let swap = t(&[2, 1, 3, 4]);
        assert!(last.enumerate(&Limits::default()).unwrap().contains(&swap));
    }

    #[test]
    fn rejects_one_point() {
        let s = TransformationSemigroup::new(vec![Transformation::identity(1)]).unwrap();
        assert!(HolonomyDecomposition::new(&s, &Limits::default()).is_err());
    }
}
