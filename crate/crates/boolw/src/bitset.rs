//! Fixed-universe vertex sets backed by `u64` words.
//!
//! Every set carries its universe size `n` and keeps bits past `n` zeroed,
//! so `Eq`/`Hash` work structurally and `complement` is a mask away.

use std::fmt;

/// A subset of `{0, .., n-1}` stored as a packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    nbits: usize,
    words: Vec<u64>,
}

fn word_count(nbits: usize) -> usize {
    nbits.div_ceil(64)
}

impl VertexSet {
    /// Empty subset of a universe with `nbits` elements.
    pub fn empty(nbits: usize) -> Self {
        VertexSet { nbits, words: vec![0; word_count(nbits)] }
    }

    /// Full subset `{0, .., nbits-1}`.
    pub fn full(nbits: usize) -> Self {
        let mut s = VertexSet { nbits, words: vec![!0u64; word_count(nbits)] };
        s.mask_tail();
        s
    }

    /// Singleton `{v}`.
    pub fn singleton(nbits: usize, v: usize) -> Self {
        let mut s = Self::empty(nbits);
        s.insert(v);
        s
    }

    /// Set containing the given vertices.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(nbits: usize, vs: I) -> Self {
        let mut s = Self::empty(nbits);
        for v in vs {
            s.insert(v);
        }
        s
    }

    /// Universe size `n` (not the cardinality).
    pub fn universe(&self) -> usize {
        self.nbits
    }

    /// Number of elements in the set.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.nbits);
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.nbits, "vertex {v} out of universe {}", self.nbits);
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.nbits, "vertex {v} out of universe {}", self.nbits);
        self.words[v / 64] &= !(1u64 << (v % 64));
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    /// `self \ other`.
    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.nbits, other.nbits);
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        out
    }

    pub fn complement(&self) -> VertexSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(w, o)| (w & o).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).any(|(w, o)| w & o != 0)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    /// Copies `other` into `self` (same universe); reuses the allocation.
    pub fn copy_from(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.copy_from_slice(&other.words);
    }

    // Invariant: bits at positions >= nbits are zero.
    fn mask_tail(&mut self) {
        let used = self.nbits % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        debug_assert!(self.tail_clear());
    }

    fn tail_clear(&self) -> bool {
        let used = self.nbits % 64;
        used == 0 || self.words.last().map_or(true, |w| w >> used == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
