use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Limits, Result, Transformation};

/// A sequence of generator indices (1-based). The empty word is the formal
/// identity of `S¹`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Self {
        Word(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pushed(&self, generator: usize) -> Word {
        let mut w = self.0.clone();
        w.push(generator);
        Word(w)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{self}")
    }
}

/// A transformation semigroup given by a nonempty generator list.
#[derive(Clone, PartialEq, Eq)]
pub struct TransformationSemigroup {
    degree: usize,
    generators: Vec<Transformation>,
}

impl TransformationSemigroup {
    pub fn new(generators: Vec<Transformation>) -> Result<Self> {
        let degree = match generators.first() {
            Some(g) => g.degree(),
            None => return Err(Error::invalid("a semigroup needs at least one generator")),
        };
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(TransformationSemigroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn is_permutation_group(&self) -> bool {
        self.generators.iter().all(Transformation::is_permutation)
    }

    /// Evaluates a word over the generators; the empty word gives the identity.
    pub fn evaluate(&self, word: &Word) -> Result<Transformation> {
        let mut acc = Transformation::identity(self.degree);
        for &g in word.indices() {
            let gen = g
                .checked_sub(1)
                .and_then(|i| self.generators.get(i))
                .ok_or(Error::OutOfRange {
                    value: g,
                    bound: self.generators.len(),
                })?;
            acc = acc.then(gen);
        }
        Ok(acc)
    }

    /// Breadth-first closure of the generators under composition.
    ///
    /// Elements come out ordered by the length of their (shortest) word, ties
    /// broken by generator order, so the result is deterministic.
    pub fn enumerate(&self, limits: &Limits) -> Result<Enumeration> {
        let mut en = Enumeration {
            elements: Vec::new(),
            words: Vec::new(),
            index: BTreeMap::new(),
        };
        for (i, g) in self.generators.iter().enumerate() {
            en.try_push(g.clone(), Word::new(alloc::vec![i + 1]), limits)?;
        }
        let mut next = 0;
        while next < en.elements.len() {
            for (i, g) in self.generators.iter().enumerate() {
                let prod = en.elements[next].then(g);
                if !en.index.contains_key(&prod) {
                    let word = en.words[next].pushed(i + 1);
                    en.try_push(prod, word, limits)?;
                }
            }
            next += 1;
        }
        Ok(en)
    }
}

impl fmt::Debug for TransformationSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformationSemigroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

/// The enumerated elements of a semigroup together with one word per element.
#[derive(Clone, Debug)]
pub struct Enumeration {
    elements: Vec<Transformation>,
    words: Vec<Word>,
    index: BTreeMap<Transformation, usize>,
}

impl Enumeration {
    fn try_push(&mut self, t: Transformation, w: Word, limits: &Limits) -> Result<()> {
        if self.index.contains_key(&t) {
            return Ok(());
        }
        if self.elements.len() >= limits.elements {
            return Err(Error::CapExceeded {
                what: "semigroup element count",
                cap: limits.elements,
            });
        }
        self.index.insert(t.clone(), self.elements.len());
        self.elements.push(t);
        self.words.push(w);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.index.contains_key(t)
    }

    pub fn position(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn word_of(&self, t: &Transformation) -> Option<&Word> {
        self.position(t).map(|i| &self.words[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Transformation, &Word)> {
        self.elements.iter().zip(&self.words)
    }
}
