//! Fixed-length bitsets over the vertices or edges of one graph.
//!
//! Graphs handled here are small (stable graphs of genus at most four and their
//! hat graphs), so a single `u64` word carries every set.

use std::fmt;

use serde::Serialize;

/// Maximum number of vertices or edges a graph may have.
pub const MAX_BITS: usize = 64;

macro_rules! index_set {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A set of ", $what, " indices of a fixed graph.")]
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            bits: u64,
            len: u8,
        }

        impl $name {
            pub fn empty(len: usize) -> Self {
                assert!(len <= MAX_BITS, "bitset length {len} exceeds {MAX_BITS}");
                Self { bits: 0, len: len as u8 }
            }

            pub fn full(len: usize) -> Self {
                let mut s = Self::empty(len);
                s.bits = mask(len);
                s
            }

            pub fn from_bits(len: usize, bits: u64) -> Self {
                let mut s = Self::empty(len);
                assert!(bits & !mask(len) == 0, "bits outside of length {len}");
                s.bits = bits;
                s
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, it: I) -> Self {
                let mut s = Self::empty(len);
                for i in it {
                    s.insert(i);
                }
                s
            }

            pub fn singleton(len: usize, i: usize) -> Self {
                Self::from_indices(len, [i])
            }

            #[inline]
            pub fn len(&self) -> usize {
                self.len as usize
            }

            #[inline]
            pub fn bits(&self) -> u64 {
                self.bits
            }

            #[inline]
            pub fn count(&self) -> usize {
                self.bits.count_ones() as usize
            }

            #[inline]
            pub fn is_empty(&self) -> bool {
                self.bits == 0
            }

            #[inline]
            pub fn is_full(&self) -> bool {
                self.bits == mask(self.len())
            }

            #[inline]
            pub fn contains(&self, i: usize) -> bool {
                i < self.len() && self.bits >> i & 1 == 1
            }

            pub fn insert(&mut self, i: usize) {
                assert!(i < self.len(), "index {i} out of range {}", self.len);
                self.bits |= 1 << i;
            }

            pub fn remove(&mut self, i: usize) {
                assert!(i < self.len(), "index {i} out of range {}", self.len);
                self.bits &= !(1 << i);
            }

            pub fn with(mut self, i: usize) -> Self {
                self.insert(i);
                self
            }

            pub fn without(mut self, i: usize) -> Self {
                self.remove(i);
                self
            }

            pub fn union(&self, other: &Self) -> Self {
                self.check(other);
                Self { bits: self.bits | other.bits, len: self.len }
            }

            pub fn intersection(&self, other: &Self) -> Self {
                self.check(other);
                Self { bits: self.bits & other.bits, len: self.len }
            }

            pub fn difference(&self, other: &Self) -> Self {
                self.check(other);
                Self { bits: self.bits & !other.bits, len: self.len }
            }

            pub fn complement(&self) -> Self {
                Self { bits: !self.bits & mask(self.len()), len: self.len }
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.check(other);
                self.bits & !other.bits == 0
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> {
                let mut bits = self.bits;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i)
                })
            }

            pub fn to_vec(&self) -> Vec<usize> {
                self.iter().collect()
            }

            /// All subsets of `0..len`, in increasing bit order.
            pub fn all_subsets(len: usize) -> impl Iterator<Item = Self> {
                assert!(len < MAX_BITS, "cannot enumerate subsets of {len} elements");
                (0..1u64 << len).map(move |b| Self::from_bits(len, b))
            }

            /// All subsets of `self`.
            pub fn subsets(&self) -> impl Iterator<Item = Self> {
                let len = self.len();
                let full = self.bits;
                let mut cur = Some(0u64);
                std::iter::from_fn(move || {
                    let c = cur?;
                    cur = if c == full { None } else { Some((c.wrapping_sub(full)) & full) };
                    Some(Self::from_bits(len, c))
                })
            }

            fn check(&self, other: &Self) {
                debug_assert_eq!(self.len, other.len, "bitset length mismatch");
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                self.to_vec().serialize(s)
            }
        }
    };
}

#[inline]
fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

index_set!(VertexSet, "vertex");
index_set!(EdgeSet, "edge");
