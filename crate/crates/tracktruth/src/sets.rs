//! Small index sets over worlds and observables.
//!
//! Spaces are capped at 64 worlds and 64 observables, so a set of either kind
//! fits in one machine word. Sets iterate in ascending id order, which keeps
//! every downstream report and witness deterministic.

use std::fmt;

macro_rules! small_set {
    ($set:ident, $id:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $set(u64);

        impl $set {
            pub const EMPTY: $set = $set(0);

            /// Set containing ids `0..n`.
            pub fn full(n: usize) -> Self {
                debug_assert!(n <= 64);
                if n == 64 {
                    $set(u64::MAX)
                } else {
                    $set((1u64 << n) - 1)
                }
            }

            pub fn singleton(x: $id) -> Self {
                $set(1u64 << x.0)
            }

            pub fn from_bits(bits: u64) -> Self {
                $set(bits)
            }

            pub fn bits(self) -> u64 {
                self.0
            }

            pub fn contains(self, x: $id) -> bool {
                self.0 & (1u64 << x.0) != 0
            }

            pub fn insert(&mut self, x: $id) {
                self.0 |= 1u64 << x.0;
            }

            pub fn remove(&mut self, x: $id) {
                self.0 &= !(1u64 << x.0);
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn union(self, other: Self) -> Self {
                $set(self.0 | other.0)
            }

            pub fn intersect(self, other: Self) -> Self {
                $set(self.0 & other.0)
            }

            pub fn minus(self, other: Self) -> Self {
                $set(self.0 & !other.0)
            }

            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn iter(self) -> impl Iterator<Item = $id> {
                let mut bits = self.0;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        None
                    } else {
                        let i = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        Some($id(i))
                    }
                })
            }

            pub fn first(self) -> Option<$id> {
                if self.0 == 0 {
                    None
                } else {
                    Some($id(self.0.trailing_zeros() as usize))
                }
            }
        }

        impl FromIterator<$id> for $set {
            fn from_iter<I: IntoIterator<Item = $id>>(items: I) -> Self {
                let mut s = $set::EMPTY;
                for x in items {
                    s.insert(x);
                }
                s
            }
        }

        impl fmt::Debug for $set {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter().map(|x| x.0)).finish()
            }
        }
    };
}

/// Index of a world within its space; dense `0..|S|`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WorldId(pub usize);

/// Index of an observable within its space; dense `0..|O|`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ObsId(pub usize);

small_set!(WorldSet, WorldId, "A set of worlds, packed into one word.");
small_set!(ObsSet, ObsId, "A set of observables, packed into one word.");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_ascending() {
        let s: WorldSet = [WorldId(5), WorldId(0), WorldId(3)].into_iter().collect();
        let ids: Vec<usize> = s.iter().map(|w| w.0).collect();
        assert_eq!(ids, vec![0, 3, 5]);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn set_algebra() {
        let a = WorldSet::from_bits(0b1011);
        let b = WorldSet::from_bits(0b0110);
        assert_eq!(a.union(b).bits(), 0b1111);
        assert_eq!(a.intersect(b).bits(), 0b0010);
        assert_eq!(a.minus(b).bits(), 0b1001);
        assert!(a.intersect(b).is_subset(a));
        assert_eq!(WorldSet::full(4).bits(), 0b1111);
    }
}
