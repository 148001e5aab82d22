//! Injective partial transformations of the chain `{1, ..., n}`.
//!
//! Maps act on the right and compose left to right: `x(ab) = (xa)b`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{PointSet, MAX_N};

/// A point of the chain. Points are 1-based.
pub type Point = u8;

const UNDEFINED: u8 = 0;

/// An injective partial map of `{1, ..., n}` into itself.
///
/// Stored as a table of `n` slots (`0` marks an undefined slot) together with
/// the domain and image as bitmasks, so application is a table lookup and
/// hashing touches a fixed-size value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartialInjection {
    n: u8,
    slots: [u8; MAX_N],
    domain: PointSet,
    image: PointSet,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::ChainTooLarge { n, max: MAX_N })
    } else {
        Ok(())
    }
}

impl PartialInjection {
    /// Builds the map with the given graph, checking range and injectivity.
    pub fn new(n: usize, pairs: &[(Point, Point)]) -> Result<Self> {
        check_n(n)?;
        let mut out = Self::empty_unchecked(n);
        for &(x, y) in pairs {
            for p in [x, y] {
                if p == 0 || p as usize > n {
                    return Err(Error::PointOutOfRange { point: p as usize, n });
                }
            }
            if out.domain.contains(x) {
                return Err(Error::DuplicateKey { point: x });
            }
            if out.image.contains(y) {
                return Err(Error::DuplicateValue { point: y });
            }
            out.set(x, y);
        }
        Ok(out)
    }

    /// The empty transformation, the zero of every semigroup considered here.
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self::empty_unchecked(n))
    }

    pub(crate) fn empty_unchecked(n: usize) -> Self {
        PartialInjection {
            n: n as u8,
            slots: [UNDEFINED; MAX_N],
            domain: PointSet::EMPTY,
            image: PointSet::EMPTY,
        }
    }

    /// The partial identity on `set`.
    pub fn identity_on(n: usize, set: PointSet) -> Result<Self> {
        check_n(n)?;
        if !set.is_subset(PointSet::full(n)) {
            let point = set.difference(PointSet::full(n)).iter().next().unwrap_or(0) as usize;
            return Err(Error::PointOutOfRange { point, n });
        }
        let mut out = Self::empty_unchecked(n);
        for p in set.iter() {
            out.set(p, p);
        }
        Ok(out)
    }

    /// The identity permutation of the chain.
    pub fn identity(n: usize) -> Result<Self> {
        Self::identity_on(n, PointSet::full(n))
    }

    /// Builds a map from pairs already known to be injective and in range.
    pub(crate) fn from_pairs_unchecked<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        let mut out = Self::empty_unchecked(n);
        for (x, y) in pairs {
            debug_assert!(!out.domain.contains(x) && !out.image.contains(y));
            out.set(x, y);
        }
        out
    }

    fn set(&mut self, x: Point, y: Point) {
        self.slots[x as usize - 1] = y;
        self.domain.insert(x);
        self.image.insert(y);
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// `x` under the map, if defined.
    #[inline]
    pub fn apply(&self, x: Point) -> Option<Point> {
        if x == 0 || x > self.n {
            return None;
        }
        match self.slots[x as usize - 1] {
            UNDEFINED => None,
            y => Some(y),
        }
    }

    pub fn domain(&self) -> PointSet {
        self.domain
    }

    pub fn image(&self) -> PointSet {
        self.image
    }

    /// Size of the image.
    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// The graph as pairs in ascending domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.domain.iter().map(move |x| (x, self.slots[x as usize - 1]))
    }

    /// Images of the domain points, taken in ascending domain order.
    pub fn image_sequence(&self) -> Vec<Point> {
        self.pairs().map(|(_, y)| y).collect()
    }

    /// `x(ab) = (xa)b`, defined where `xa` lands in the domain of `b`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::MismatchedChainSize { left: self.n(), right: other.n() });
        }
        Ok(self.then(other))
    }

    /// Composition without the chain-size check; callers guarantee equal `n`.
    #[inline]
    pub(crate) fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::empty_unchecked(self.n());
        for x in self.domain.iter() {
            let y = self.slots[x as usize - 1];
            let z = other.slots[y as usize - 1];
            if z != UNDEFINED {
                out.set(x, z);
            }
        }
        out
    }

    /// The inverse partial map: domain and image swap roles.
    pub fn inverse(&self) -> Self {
        Self::from_pairs_unchecked(self.n(), self.pairs().map(|(x, y)| (y, x)))
    }

    /// `k`-fold product of the map with itself; the zeroth power is the identity on the chain.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::from_pairs_unchecked(self.n(), PointSet::full(self.n()).iter().map(|p| (p, p)));
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    /// Restriction of the map to `set`.
    pub fn restrict(&self, set: PointSet) -> Self {
        Self::from_pairs_unchecked(self.n(), self.pairs().filter(|&(x, _)| set.contains(x)))
    }

    /// Image of a set of points (points outside the domain are dropped).
    pub fn image_of(&self, set: PointSet) -> PointSet {
        set.iter().filter_map(|x| self.apply(x)).fold(PointSet::EMPTY, |mut s, y| {
            s.insert(y);
            s
        })
    }

    pub fn fix_points(&self) -> PointSet {
        self.pairs().filter(|&(x, y)| x == y).fold(PointSet::EMPTY, |mut s, (x, _)| {
            s.insert(x);
            s
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }

    /// True when the map is defined on every point of the chain.
    pub fn is_permutation(&self) -> bool {
        self.domain == PointSet::full(self.n())
    }

    /// The image sequence in ascending domain order is cyclic.
    pub fn is_orientation_preserving(&self) -> bool {
        is_cyclic(&self.image_sequence())
    }

    /// The image sequence in ascending domain order is strictly increasing.
    pub fn is_order_preserving(&self) -> bool {
        self.image_sequence().windows(2).all(|w| w[0] < w[1])
    }
}

/// At most one circular descent, reading `a[t]` as followed by `a[0]`.
///
/// The empty sequence and constant sequences are cyclic.
pub fn is_cyclic(seq: &[Point]) -> bool {
    let t = seq.len();
    (0..t).filter(|&i| seq[i] > seq[(i + 1) % t]).count() <= 1
}

/// A finite sequence of points, repeats allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSequence(pub Vec<Point>);

impl PointSequence {
    pub fn is_cyclic(&self) -> bool {
        is_cyclic(&self.0)
    }
}

impl Ord for PartialInjection {
    /// Chain size, then rank, then domain list, then image sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| self.domain.iter().cmp(other.domain.iter()))
            .then_with(|| self.pairs().map(|p| p.1).cmp(other.pairs().map(|p| p.1)))
    }
}

impl PartialOrd for PartialInjection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}{}", self.n, self)
    }
}

/// Wire form: `{"n":3,"pairs":[[1,2],[3,1]]}`.
#[derive(Serialize, Deserialize)]
struct RawInjection {
    n: usize,
    pairs: Vec<[Point; 2]>,
}

impl Serialize for PartialInjection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawInjection { n: self.n(), pairs: self.pairs().map(|(x, y)| [x, y]).collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PartialInjection {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawInjection::deserialize(deserializer)?;
        let pairs: Vec<(Point, Point)> = raw.pairs.iter().map(|p| (p[0], p[1])).collect();
        PartialInjection::new(raw.n, &pairs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(n: usize, pairs: &[(Point, Point)]) -> PartialInjection {
        PartialInjection::new(n, pairs).unwrap()
    }

    fn set(n: usize, pts: &[u8]) -> PointSet {
        PointSet::from_points(n, pts.iter().copied()).unwrap()
    }

    #[test]
    fn construction() {
        let e = pi(3, &[]);
        assert!(e.is_empty());
        assert_eq!(e, PartialInjection::empty(3).unwrap());
        let a = pi(3, &[(3, 1), (1, 2)]);
        assert_eq!(a.apply(1), Some(2));
        assert_eq!(a.apply(3), Some(1));
        assert_eq!(a.apply(2), None);
        assert_eq!(a.pairs().collect::<Vec<_>>(), vec![(1, 2), (3, 1)]);
        assert_eq!(PartialInjection::new(3, &[(1, 2), (3, 2)]), Err(Error::DuplicateValue { point: 2 }));
        assert_eq!(PartialInjection::new(3, &[(1, 2), (1, 3)]), Err(Error::DuplicateKey { point: 1 }));
        assert_eq!(PartialInjection::new(3, &[(1, 4)]), Err(Error::PointOutOfRange { point: 4, n: 3 }));
        assert!(PartialInjection::new(0, &[]).is_err());
    }

    #[test]
    fn equality_needs_same_chain() {
        assert_ne!(pi(3, &[(1, 1)]), pi(4, &[(1, 1)]));
        assert_ne!(pi(3, &[]), pi(4, &[]));
    }

    #[test]
    fn composition() {
        let a = pi(3, &[(1, 1), (3, 2)]);
        let b = pi(3, &[(2, 1)]);
        assert_eq!(a.compose(&b).unwrap(), pi(3, &[(3, 1)]));
        let zero = pi(3, &[]);
        assert_eq!(a.compose(&zero).unwrap(), zero);
        let id = PartialInjection::identity(3).unwrap();
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(
            a.compose(&pi(4, &[])),
            Err(Error::MismatchedChainSize { left: 3, right: 4 })
        );
    }

    #[test]
    fn inverse_swaps_pairs() {
        let a = pi(3, &[(1, 2), (3, 1)]);
        assert_eq!(a.inverse(), pi(3, &[(2, 1), (1, 3)]));
        assert_eq!(pi(3, &[]).inverse(), pi(3, &[]));
        assert_eq!(a.inverse().inverse(), a);
        assert_eq!(a.then(&a.inverse()), PartialInjection::identity_on(3, a.domain()).unwrap());
    }

    #[test]
    fn partial_identities() {
        let a = PartialInjection::identity_on(3, set(3, &[1, 2])).unwrap();
        assert_eq!(a, pi(3, &[(1, 1), (2, 2)]));
        assert!(a.is_idempotent());
        assert_eq!(PartialInjection::identity_on(3, PointSet::EMPTY).unwrap(), pi(3, &[]));
        let b = PartialInjection::identity_on(3, set(3, &[2, 3])).unwrap();
        assert_eq!(a.compose(&b).unwrap(), PartialInjection::identity_on(3, set(3, &[2])).unwrap());
        assert!(PartialInjection::identity_on(3, set(5, &[4])).is_err());
    }

    #[test]
    fn cyclic_sequences() {
        assert!(is_cyclic(&[2, 3, 1]));
        assert!(!is_cyclic(&[2, 1, 3]));
        assert!(is_cyclic(&[]));
        assert!(is_cyclic(&[5, 5, 5]));
        assert!(is_cyclic(&[4]));
        assert!(PointSequence(vec![3, 1, 2]).is_cyclic());
        assert!(!PointSequence(vec![3, 2, 1]).is_cyclic());
    }

    #[test]
    fn orientation_and_order() {
        assert!(pi(3, &[(1, 2), (2, 3), (3, 1)]).is_orientation_preserving());
        assert!(!pi(3, &[(1, 2), (2, 1), (3, 3)]).is_orientation_preserving());
        assert!(pi(3, &[(1, 1), (3, 2)]).is_order_preserving());
        assert!(!pi(3, &[(1, 2), (3, 1)]).is_order_preserving());
        assert!(pi(3, &[]).is_order_preserving());
    }

    #[test]
    fn fixed_points() {
        assert_eq!(PartialInjection::identity_on(3, set(3, &[1, 2])).unwrap().fix_points(), set(3, &[1, 2]));
        assert_eq!(pi(3, &[(1, 2), (3, 1)]).fix_points(), PointSet::EMPTY);
        assert_eq!(pi(3, &[(1, 1), (2, 3)]).fix_points(), set(3, &[1]));
    }

    #[test]
    fn ordering_is_rank_then_domain_then_images() {
        let mut v = vec![pi(3, &[(1, 2), (2, 1)]), pi(3, &[(2, 1)]), pi(3, &[]), pi(3, &[(1, 1), (2, 2)]), pi(3, &[(1, 2)])];
        v.sort();
        assert_eq!(
            v,
            vec![pi(3, &[]), pi(3, &[(1, 2)]), pi(3, &[(2, 1)]), pi(3, &[(1, 1), (2, 2)]), pi(3, &[(1, 2), (2, 1)])]
        );
    }

    #[test]
    fn display_and_power() {
        let g = pi(3, &[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(g.to_string(), "[1->2, 2->3, 3->1]");
        assert_eq!(g.power(3), PartialInjection::identity(3).unwrap());
        assert_eq!(g.power(0), PartialInjection::identity(3).unwrap());
        assert_eq!(pi(3, &[]).to_string(), "[]");
    }
}
