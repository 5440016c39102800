use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::{Error, Limits, Result, StateSet, Transformation, TransformationSemigroup, Word};

/// Index of a skeleton member; members are numbered in canonical set order.
pub type MemberId = usize;

/// Index of an equivalence class of members.
pub type ClassId = usize;

/// Members reachable from each other form a class.
#[derive(Clone, Debug)]
pub struct Class {
    pub members: Vec<MemberId>,
    /// The member with the smallest canonical sort key.
    pub rep: MemberId,
    pub height: usize,
    pub depth: usize,
}

/// The image sets of a transformation semigroup under subduction.
///
/// Members are `X`, every image `X·s`, and every singleton. Classes collect
/// mutually subducing members; tiles of a member are its maximal proper
/// sub-members.
#[derive(Clone, Debug)]
pub struct Skeleton {
    semigroup: TransformationSemigroup,
    members: Vec<StateSet>,
    index: BTreeMap<StateSet, MemberId>,
    /// `successors[p][g]` is the member `P · t_g`.
    successors: Vec<Vec<MemberId>>,
    witness: Vec<Option<Word>>,
    below: Vec<Vec<u64>>,
    class_of: Vec<ClassId>,
    classes: Vec<Class>,
    in_words: Vec<Word>,
    out_words: Vec<Word>,
    in_maps: Vec<Transformation>,
    out_maps: Vec<Transformation>,
    tiles: Vec<Vec<MemberId>>,
    top: MemberId,
}

fn bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

impl Skeleton {
    pub fn new(semigroup: &TransformationSemigroup, limits: &Limits) -> Result<Self> {
        let n = semigroup.degree();
        if n > limits.subset_degree {
            return Err(Error::CapExceeded {
                what: "degree for subset computations",
                cap: limits.subset_degree,
            });
        }
        let gens = semigroup.generators();
        let full = StateSet::full(n);

        // Images of X, breadth first.
        let mut found: BTreeMap<StateSet, Word> = BTreeMap::new();
        let mut queue = VecDeque::new();
        found.insert(full.clone(), Word::empty());
        queue.push_back(full.clone());
        while let Some(p) = queue.pop_front() {
            let w = found[&p].clone();
            for (i, g) in gens.iter().enumerate() {
                let q = g.image_set0(&p);
                if !found.contains_key(&q) {
                    if found.len() >= limits.elements {
                        return Err(Error::CapExceeded {
                            what: "skeleton member count",
                            cap: limits.elements,
                        });
                    }
                    found.insert(q.clone(), w.pushed(i + 1));
                    queue.push_back(q);
                }
            }
        }
        let mut all: BTreeSet<StateSet> = found.keys().cloned().collect();
        for x in 1..=n {
            all.insert(StateSet::singleton(n, x)?);
        }
        let members: Vec<StateSet> = all.into_iter().collect();
        let index: BTreeMap<StateSet, MemberId> = members.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let witness = members.iter().map(|m| found.get(m).cloned()).collect();
        let successors: Vec<Vec<MemberId>> = members
            .iter()
            .map(|m| gens.iter().map(|g| index[&g.image_set0(m)]).collect())
            .collect();
        let top = index[&full];

        let mut sk = Skeleton {
            semigroup: semigroup.clone(),
            members,
            index,
            successors,
            witness,
            below: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            in_words: Vec::new(),
            out_words: Vec::new(),
            in_maps: Vec::new(),
            out_maps: Vec::new(),
            tiles: Vec::new(),
            top,
        };
        sk.compute_subduction();
        sk.compute_classes();
        sk.compute_words()?;
        sk.compute_tiles();
        Ok(sk)
    }

    fn member_count(&self) -> usize {
        self.members.len()
    }

    /// `below[p]` = members subduced by `p`: subsets of anything reachable from `p`.
    fn compute_subduction(&mut self) {
        let m = self.member_count();
        let words = m.div_ceil(64);
        let mut down = alloc::vec![alloc::vec![0u64; words]; m];
        for (r, set_r) in self.members.iter().enumerate() {
            for (q, set_q) in self.members.iter().enumerate() {
                if set_q.is_subset(set_r) {
                    down[r][q / 64] |= 1 << (q % 64);
                }
            }
        }
        self.below = (0..m)
            .map(|p| {
                let mut acc = alloc::vec![0u64; words];
                for r in self.reachable(p) {
                    for (a, b) in acc.iter_mut().zip(&down[r]) {
                        *a |= b;
                    }
                }
                acc
            })
            .collect();
    }

    /// Members reachable from `p` in the generator graph, `p` included.
    fn reachable(&self, p: MemberId) -> Vec<MemberId> {
        self.bfs_words(p).into_keys().collect()
    }

    /// Shortest words from `p` to every member reachable from it.
    fn bfs_words(&self, p: MemberId) -> BTreeMap<MemberId, Word> {
        let mut seen = BTreeMap::new();
        let mut queue = VecDeque::new();
        seen.insert(p, Word::empty());
        queue.push_back(p);
        while let Some(q) = queue.pop_front() {
            for (g, &r) in self.successors[q].iter().enumerate() {
                if !seen.contains_key(&r) {
                    let w = seen[&q].pushed(g + 1);
                    seen.insert(r, w);
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    fn compute_classes(&mut self) {
        let m = self.member_count();
        let mut class_of = alloc::vec![usize::MAX; m];
        let mut classes: Vec<Class> = Vec::new();
        for p in 0..m {
            if class_of[p] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<MemberId> = (p..m).filter(|&q| self.subduces(q, p) && self.subduces(p, q)).collect();
            for &q in &members {
                class_of[q] = id;
            }
            // members are scanned in canonical order, so the first is the smallest
            classes.push(Class {
                rep: members[0],
                members,
                height: 0,
                depth: 0,
            });
        }
        // Strict subduction strictly shrinks the set of subduced members, so
        // sorting by that count is a topological order.
        let mut order: Vec<ClassId> = (0..classes.len()).collect();
        let weight = |c: &Class| self.below[c.rep].iter().map(|w| w.count_ones()).sum::<u32>();
        order.sort_by_key(|&c| weight(&classes[c]));
        for &c in &order {
            let rep = classes[c].rep;
            if self.members[rep].len() == 1 {
                continue;
            }
            let height = (0..classes.len())
                .filter(|&d| d != c && bit(&self.below[rep], classes[d].rep))
                .map(|d| classes[d].height + 1)
                .max()
                .unwrap_or(0);
            classes[c].height = height;
        }
        let top_height = classes[class_of[self.top]].height;
        for c in &mut classes {
            c.depth = top_height + 1 - c.height;
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    fn compute_words(&mut self) -> Result<()> {
        let m = self.member_count();
        let mut in_words = alloc::vec![Word::empty(); m];
        let mut out_words = alloc::vec![Word::empty(); m];
        for class in &self.classes {
            let from_rep = self.bfs_words(class.rep);
            let to_rep = self.words_to(class.rep);
            for &p in &class.members {
                in_words[p] = from_rep
                    .get(&p)
                    .cloned()
                    .ok_or_else(|| Error::Inconsistent("class member unreachable from its representative".into()))?;
                out_words[p] = to_rep[p]
                    .clone()
                    .ok_or_else(|| Error::Inconsistent("representative unreachable from a class member".into()))?;
            }
        }
        self.in_maps = in_words
            .iter()
            .map(|w| self.semigroup.evaluate(w))
            .collect::<Result<_>>()?;
        self.out_maps = out_words
            .iter()
            .map(|w| self.semigroup.evaluate(w))
            .collect::<Result<_>>()?;
        self.in_words = in_words;
        self.out_words = out_words;
        Ok(())
    }

    /// Shortest words from every member to `target` (breadth first on the
    /// reversed graph, first generator wins on ties).
    fn words_to(&self, target: MemberId) -> Vec<Option<Word>> {
        let m = self.member_count();
        let mut preds: Vec<Vec<MemberId>> = alloc::vec![Vec::new(); m];
        for (p, succ) in self.successors.iter().enumerate() {
            for &q in succ {
                preds[q].push(p);
            }
        }
        let mut dist = alloc::vec![usize::MAX; m];
        dist[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if dist[p] == usize::MAX {
                    dist[p] = dist[q] + 1;
                    queue.push_back(p);
                }
            }
        }
        (0..m)
            .map(|start| {
                if dist[start] == usize::MAX {
                    return None;
                }
                let mut word = Vec::new();
                let mut p = start;
                while p != target {
                    let (g, &next) = self.successors[p]
                        .iter()
                        .enumerate()
                        .find(|(_, &q)| dist[q] != usize::MAX && dist[q] + 1 == dist[p])
                        .expect("distance decreases along some edge");
                    word.push(g + 1);
                    p = next;
                }
                Some(Word::new(word))
            })
            .collect()
    }

    fn compute_tiles(&mut self) {
        self.tiles = (0..self.member_count())
            .map(|p| {
                let set = &self.members[p];
                let mut candidates: Vec<MemberId> = (0..self.member_count())
                    .filter(|&q| q != p && self.members[q].is_subset(set))
                    .collect();
                candidates.sort_by_key(|&q| core::cmp::Reverse(self.members[q].len()));
                let mut maximal: Vec<MemberId> = Vec::new();
                for q in candidates {
                    if !maximal.iter().any(|&r| self.members[q].is_subset(&self.members[r])) {
                        maximal.push(q);
                    }
                }
                maximal.sort_unstable();
                maximal
            })
            .collect();
    }

    pub fn semigroup(&self) -> &TransformationSemigroup {
        &self.semigroup
    }

    pub fn degree(&self) -> usize {
        self.semigroup.degree()
    }

    /// Members in canonical order.
    pub fn members(&self) -> &[StateSet] {
        &self.members
    }

    pub fn member(&self, p: MemberId) -> &StateSet {
        &self.members[p]
    }

    pub fn member_id(&self, set: &StateSet) -> Option<MemberId> {
        self.index.get(set).copied()
    }

    /// The member `X`.
    pub fn top(&self) -> MemberId {
        self.top
    }

    /// Word `w` with `X · w = P`, or `None` if `P` is not an image of `X`.
    pub fn witness(&self, p: MemberId) -> Option<&Word> {
        self.witness[p].as_ref()
    }

    pub fn is_image(&self, p: MemberId) -> bool {
        self.witness[p].is_some()
    }

    /// `Q ⊑ P` for members.
    pub fn subduces(&self, q: MemberId, p: MemberId) -> bool {
        bit(&self.below[p], q)
    }

    /// Shortest word `w` with `P · w = Q` exactly, for members.
    pub fn path_word(&self, p: MemberId, q: MemberId) -> Option<Word> {
        self.bfs_words(p).remove(&q)
    }

    /// A word `w` with `q ⊆ p · w`, searching image sets of `p` breadth first.
    pub fn subduction(&self, q: &StateSet, p: &StateSet) -> Result<Option<Word>> {
        let n = self.degree();
        if q.capacity() != n || p.capacity() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: if q.capacity() != n { q.capacity() } else { p.capacity() },
            });
        }
        if q.len() > p.len() {
            return Ok(None);
        }
        let mut seen: BTreeMap<StateSet, Word> = BTreeMap::new();
        let mut queue = VecDeque::new();
        seen.insert(p.clone(), Word::empty());
        queue.push_back(p.clone());
        while let Some(r) = queue.pop_front() {
            if q.is_subset(&r) {
                return Ok(seen.remove(&r));
            }
            for (i, g) in self.semigroup.generators().iter().enumerate() {
                let next = g.image_set0(&r);
                if next.len() >= q.len() && !seen.contains_key(&next) {
                    let w = seen[&r].pushed(i + 1);
                    seen.insert(next.clone(), w);
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn class_of(&self, p: MemberId) -> ClassId {
        self.class_of[p]
    }

    /// Representative of `p`'s class.
    pub fn rep(&self, p: MemberId) -> MemberId {
        self.classes[self.class_of[p]].rep
    }

    pub fn height(&self, p: MemberId) -> usize {
        self.classes[self.class_of[p]].height
    }

    pub fn depth(&self, p: MemberId) -> usize {
        self.classes[self.class_of[p]].depth
    }

    /// Height of `X`, the number of cascade levels.
    pub fn top_height(&self) -> usize {
        self.height(self.top)
    }

    /// `rep(P) · w_in = P`.
    pub fn in_word(&self, p: MemberId) -> &Word {
        &self.in_words[p]
    }

    /// `P · w_out = rep(P)`.
    pub fn out_word(&self, p: MemberId) -> &Word {
        &self.out_words[p]
    }

    pub(crate) fn in_map(&self, p: MemberId) -> &Transformation {
        &self.in_maps[p]
    }

    #[cfg(test)]
    pub(crate) fn out_map(&self, p: MemberId) -> &Transformation {
        &self.out_maps[p]
    }

    /// Maximal members strictly inside `p`, in canonical order.
    pub fn tiles(&self, p: MemberId) -> &[MemberId] {
        &self.tiles[p]
    }

    /// Tiles of a member given as a set.
    pub fn tiles_of(&self, set: &StateSet) -> Result<Vec<StateSet>> {
        let p = self
            .member_id(set)
            .ok_or_else(|| Error::invalid(alloc::format!("{set} is not a skeleton member")))?;
        Ok(self.tiles[p].iter().map(|&q| self.members[q].clone()).collect())
    }

    pub(crate) fn image_member(&self, p: MemberId, s: &Transformation) -> Option<MemberId> {
        self.member_id(&s.image_set0(&self.members[p]))
    }
}
