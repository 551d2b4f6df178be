//! Fixed-width leaf sets backed by `u64` words.
//!
//! Bit `i` stands for the leaf with universal index `i` (0-based). All sets
//! taking part in one comparison share the same width.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafSet {
    words: Vec<u64>,
}

impl LeafSet {
    pub fn empty(universe: usize) -> Self {
        LeafSet {
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        self.words[index / 64] |= 1 << (index % 64);
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.words.get(index / 64).is_some_and(|w| w & (1 << (index % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &LeafSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection_len(&self, other: &LeafSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &LeafSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Complement within a universe of `universe` leaves.
    pub fn complement(&self, universe: usize) -> LeafSet {
        let mut out = LeafSet {
            words: self.words.iter().map(|w| !w).collect(),
        };
        let tail = universe % 64;
        if tail != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + tz)
            })
        })
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_masks_tail() {
        let mut s = LeafSet::empty(70);
        s.insert(0);
        s.insert(69);
        let c = s.complement(70);
        assert_eq!(c.len(), 68);
        assert!(!c.contains(69));
        assert!(!c.contains(70));
        assert_eq!(s.intersection_len(&c), 0);
    }

    #[test]
    fn subset_and_iter() {
        let mut a = LeafSet::empty(130);
        let mut b = LeafSet::empty(130);
        for i in [3, 64, 129] {
            a.insert(i);
            b.insert(i);
        }
        b.insert(7);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![3, 7, 64, 129]);
        assert_eq!(LeafSet::full(130).len(), 130);
    }
}
