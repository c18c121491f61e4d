//! Fixed-width bitsets over at most 256 elements.

use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not};

pub const CAPACITY: usize = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits([u64; 4]);

impl Bits {
    pub const EMPTY: Bits = Bits([0; 4]);

    /// The set `{0, …, n − 1}`.
    pub fn full(n: usize) -> Bits {
        assert!(n <= CAPACITY, "bitset capacity exceeded");
        let mut b = Bits::EMPTY;
        for (w, word) in b.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        b
    }

    pub fn singleton(i: usize) -> Bits {
        let mut b = Bits::EMPTY;
        b.insert(i);
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    pub fn and_not(&self, other: &Bits) -> Bits {
        let mut b = *self;
        for (x, y) in b.0.iter_mut().zip(&other.0) {
            *x &= !y;
        }
        b
    }

    pub fn iter(&self) -> BitsIter {
        BitsIter { words: self.0, k: 0 }
    }
}

pub struct BitsIter {
    words: [u64; 4],
    k: usize,
}

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.k < 4 {
            let w = self.words[self.k];
            if w != 0 {
                let t = w.trailing_zeros() as usize;
                self.words[self.k] &= w - 1;
                return Some(self.k * 64 + t);
            }
            self.k += 1;
        }
        None
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut b = Bits::EMPTY;
        for i in iter {
            b.insert(i);
        }
        b
    }
}

impl BitAnd for Bits {
    type Output = Bits;
    fn bitand(mut self, rhs: Bits) -> Bits {
        self &= rhs;
        self
    }
}

impl BitAndAssign for Bits {
    fn bitand_assign(&mut self, rhs: Bits) {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x &= y;
        }
    }
}

impl BitOr for Bits {
    type Output = Bits;
    fn bitor(mut self, rhs: Bits) -> Bits {
        self |= rhs;
        self
    }
}

impl BitOrAssign for Bits {
    fn bitor_assign(&mut self, rhs: Bits) {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x |= y;
        }
    }
}

impl Not for Bits {
    type Output = Bits;
    fn not(self) -> Bits {
        Bits(self.0.map(|w| !w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_iteration() {
        assert_eq!(Bits::full(0).len(), 0);
        assert_eq!(Bits::full(65).len(), 65);
        assert_eq!(Bits::full(256).len(), 256);
        let b: Bits = [3, 64, 200].into_iter().collect();
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![3, 64, 200]);
        assert_eq!(b.first(), Some(3));
    }

    proptest! {
        #[test]
        fn matches_btreeset(xs in proptest::collection::btree_set(0usize..256, 0..40),
                            ys in proptest::collection::btree_set(0usize..256, 0..40)) {
            let a: Bits = xs.iter().copied().collect();
            let b: Bits = ys.iter().copied().collect();
            let inter: Vec<usize> = xs.intersection(&ys).copied().collect();
            let diff: Vec<usize> = xs.difference(&ys).copied().collect();
            prop_assert_eq!((a & b).iter().collect::<Vec<_>>(), inter);
            prop_assert_eq!(a.and_not(&b).iter().collect::<Vec<_>>(), diff);
            prop_assert_eq!((a | b).len(), xs.union(&ys).count());
        }
    }
}
