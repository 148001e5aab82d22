//! Subsets of the chain `{1, ..., n}` packed into a bitmask.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest chain size supported by the packed representations.
pub const MAX_N: usize = 16;

/// A set of 1-based points of a chain, bit `p - 1` standing for point `p`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u16);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    /// The whole chain `{1, ..., n}`.
    pub fn full(n: usize) -> PointSet {
        debug_assert!(n <= MAX_N);
        if n == MAX_N {
            PointSet(u16::MAX)
        } else {
            PointSet((1u16 << n) - 1)
        }
    }

    pub fn from_bits(bits: u16) -> PointSet {
        PointSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    /// Builds a set from points, rejecting anything outside `1..=n`.
    pub fn from_points<I>(n: usize, points: I) -> Result<PointSet>
    where
        I: IntoIterator,
        I::Item: Into<usize>,
    {
        let mut set = PointSet::EMPTY;
        for p in points {
            let p = p.into();
            if p == 0 || p > n {
                return Err(Error::PointOutOfRange { point: p, n });
            }
            set.insert(p as u8);
        }
        Ok(set)
    }

    pub fn contains(self, point: u8) -> bool {
        point >= 1 && (point as usize) <= MAX_N && self.0 & (1 << (point - 1)) != 0
    }

    pub fn insert(&mut self, point: u8) {
        self.0 |= 1 << (point - 1);
    }

    pub fn remove(&mut self, point: u8) {
        self.0 &= !(1 << (point - 1));
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    /// Points in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as u8 + 1;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.iter().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<u8>::deserialize(deserializer)?;
        PointSet::from_points(MAX_N, points).map_err(serde::de::Error::custom)
    }
}

/// All `k`-subsets of `set`, in lexicographic order of their ascending point lists.
pub fn subsets_of_size(set: PointSet, k: usize) -> impl Iterator<Item = PointSet> {
    use itertools::Itertools;
    set.to_vec()
        .into_iter()
        .combinations(k)
        .map(|c| c.into_iter().fold(PointSet::EMPTY, |mut s, p| {
            s.insert(p);
            s
        }))
}

/// All nonempty subsets of `{1, ..., n}`, ordered by size and then lexicographically.
pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = PointSet> {
    (1..=n).flat_map(move |k| subsets_of_size(PointSet::full(n), k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterates_ascending() {
        let s = PointSet::from_points(7, [5usize, 1, 3]).unwrap();
        assert_eq!(s.to_vec(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "{1,3,5}");
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            PointSet::from_points(3, [4usize]),
            Err(Error::PointOutOfRange { point: 4, n: 3 })
        );
        assert!(PointSet::from_points(3, [0usize]).is_err());
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets_of_size(PointSet::full(5), 2).count(), 10);
        assert_eq!(nonempty_subsets(4).count(), 15);
        assert_eq!(PointSet::full(16).len(), 16);
        let first: Vec<_> = subsets_of_size(PointSet::full(4), 2).map(|s| s.to_vec()).collect();
        assert_eq!(first[0], vec![1, 2]);
        assert_eq!(first[5], vec![3, 4]);
    }
}
