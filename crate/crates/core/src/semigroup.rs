//! The semigroup `POPI_n(Y)`: direct enumeration, generator closure and the
//! cardinality formula.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{subsets_of_size, PointSet, MAX_N};
use crate::transform::{PartialInjection, Point};

/// The ambient chain size together with the restricted range `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RangeContext {
    n: usize,
    range: PointSet,
    points: Vec<Point>,
}

impl RangeContext {
    pub fn new(n: usize, range: &[Point]) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::ChainTooLarge { n, max: MAX_N });
        }
        let mut set = PointSet::EMPTY;
        for &p in range {
            if p == 0 || p as usize > n {
                return Err(Error::PointOutOfRange { point: p as usize, n });
            }
            if set.contains(p) {
                return Err(Error::BadParameters(format!("point {p} listed twice in the range")));
            }
            set.insert(p);
        }
        Self::from_set(n, set)
    }

    pub fn from_set(n: usize, range: PointSet) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::ChainTooLarge { n, max: MAX_N });
        }
        if range.is_empty() {
            return Err(Error::BadParameters("the range Y must be nonempty".into()));
        }
        if !range.is_subset(PointSet::full(n)) {
            let point = range.difference(PointSet::full(n)).iter().next().unwrap_or(0) as usize;
            return Err(Error::PointOutOfRange { point, n });
        }
        Ok(RangeContext { n, range, points: range.to_vec() })
    }

    /// The unrestricted case `Y = {1, ..., n}`.
    pub fn full(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::ChainTooLarge { n, max: MAX_N });
        }
        Self::from_set(n, PointSet::full(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn range(&self) -> PointSet {
        self.range
    }

    /// `|Y|`.
    pub fn r(&self) -> usize {
        self.points.len()
    }

    /// `y_1 < ... < y_r`.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// `y_i` for a 1-based index taken cyclically, so `y_{r+1} = y_1` and `y_0 = y_r`.
    pub fn y(&self, i: isize) -> Point {
        let r = self.r() as isize;
        self.points[(i - 1).rem_euclid(r) as usize]
    }

    /// 1-based position of `p` in `Y`.
    pub fn position(&self, p: Point) -> Option<usize> {
        self.points.iter().position(|&q| q == p).map(|i| i + 1)
    }

    pub fn is_full(&self) -> bool {
        self.r() == self.n
    }

    /// Membership in `POPI_n(Y)`.
    pub fn contains(&self, a: &PartialInjection) -> Result<bool> {
        if a.n() != self.n {
            return Err(Error::MismatchedChainSize { left: self.n, right: a.n() });
        }
        Ok(a.image().is_subset(self.range) && a.is_orientation_preserving())
    }

    pub(crate) fn require_member(&self, a: &PartialInjection) -> Result<()> {
        if self.contains(a)? {
            Ok(())
        } else {
            Err(Error::NotAMember(a.to_string()))
        }
    }
}

impl Serialize for RangeContext {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            n: usize,
            y: &'a [Point],
        }
        Raw { n: self.n, y: &self.points }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RangeContext {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            y: Vec<Point>,
        }
        let raw = Raw::deserialize(deserializer)?;
        RangeContext::new(raw.n, &raw.y).map_err(serde::de::Error::custom)
    }
}

/// Right Cayley graph: `right[e * generators.len() + k]` is the index of `elements[e] * generators[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cayley {
    pub generators: Vec<PartialInjection>,
    pub right: Vec<usize>,
}

impl Cayley {
    pub fn product(&self, element: usize, generator: usize) -> usize {
        self.right[element * self.generators.len() + generator]
    }
}

/// Deduplicated, deterministically ordered elements with an optional Cayley graph.
///
/// Elements are sorted by rank, then domain, then image sequence.
#[derive(Clone, Debug)]
pub struct ElementSet {
    elements: Vec<PartialInjection>,
    index: HashMap<PartialInjection, usize>,
    cayley: Option<Cayley>,
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for ElementSet {}

impl ElementSet {
    /// Sorts and deduplicates `elements`.
    pub fn from_elements(mut elements: Vec<PartialInjection>) -> Self {
        elements.sort();
        elements.dedup();
        let index = elements.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        ElementSet { elements, index, cayley: None }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PartialInjection] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &PartialInjection {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &PartialInjection) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn contains(&self, a: &PartialInjection) -> bool {
        self.index.contains_key(a)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PartialInjection> {
        self.elements.iter()
    }

    pub fn cayley(&self) -> Option<&Cayley> {
        self.cayley.as_ref()
    }

    /// Index of `elements[a] * elements[b]`, if the product lies in the set.
    pub fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        self.index_of(&self.elements[a].then(&self.elements[b]))
    }

    /// Indices of the elements of rank exactly `k`.
    pub fn rank_layer(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].rank() == k).collect()
    }

    /// True when the product of any two members is again a member.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&a.then(b))))
    }
}

/// Indices of the elements of `set` with rank `k`.
pub fn rank_layer(set: &ElementSet, k: usize) -> Vec<usize> {
    set.rank_layer(k)
}

/// The orientation-preserving bijections from `from` onto `to` (sets of equal
/// size `k`): the `k` cyclic rotations of the order-isomorphism.
pub fn orientation_preserving_bijections(
    n: usize,
    from: PointSet,
    to: PointSet,
) -> impl Iterator<Item = PartialInjection> {
    debug_assert_eq!(from.len(), to.len());
    let a = from.to_vec();
    let b = to.to_vec();
    let k = a.len();
    (0..k.max(1)).map(move |shift| {
        PartialInjection::from_pairs_unchecked(n, (0..k).map(|m| (a[m], b[(m + shift) % k])))
    })
}

/// All of `POPI_n(Y)`, built constructively: for every `k`, every `k`-subset `A`
/// of the chain and every `k`-subset `B` of `Y`, the `k` rotations `A -> B`,
/// plus the empty map.
pub fn enumerate(ctx: &RangeContext) -> ElementSet {
    let n = ctx.n();
    let mut out = Vec::with_capacity(expected_size(n, ctx.r()));
    out.push(PartialInjection::empty_unchecked(n));
    for k in 1..=ctx.r() {
        for dom in subsets_of_size(PointSet::full(n), k) {
            for img in subsets_of_size(ctx.range(), k) {
                out.extend(orientation_preserving_bijections(n, dom, img));
            }
        }
    }
    let len = out.len();
    let set = ElementSet::from_elements(out);
    debug_assert_eq!(set.len(), len, "rotations must be pairwise distinct");
    set
}

fn expected_size(n: usize, r: usize) -> usize {
    cardinality_formula(n, r)
        .ok()
        .and_then(|c| usize::try_from(c).ok())
        .unwrap_or(0)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `|POPI_n(Y)| = 1 + r * C(n + r - 1, r)` for `|Y| = r`.
pub fn cardinality_formula(n: usize, r: usize) -> Result<BigUint> {
    if r < 1 || r > n {
        return Err(Error::BadParameters(format!("need 1 <= r <= n, got n={n}, r={r}")));
    }
    Ok(BigUint::from(1u32) + BigUint::from(r) * binomial((n + r - 1) as u64, r as u64))
}

/// The subsemigroup generated by `generators`, with its right Cayley graph.
///
/// No identity or zero is adjoined unless it is generated.
pub fn closure(ctx: &RangeContext, generators: &[PartialInjection]) -> Result<ElementSet> {
    for g in generators {
        if !ctx.contains(g)? {
            return Err(Error::GeneratorOutsideSemigroup(g.to_string()));
        }
    }
    Ok(close_under(generators))
}

/// Breadth-first closure under right multiplication by `generators`.
pub(crate) fn close_under(generators: &[PartialInjection]) -> ElementSet {
    let mut gens: Vec<PartialInjection> = generators.to_vec();
    gens.sort();
    gens.dedup();
    let g = gens.len();

    let mut found: Vec<PartialInjection> = Vec::new();
    let mut seen: HashMap<PartialInjection, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for a in &gens {
        seen.insert(*a, found.len());
        queue.push_back(found.len());
        found.push(*a);
    }
    let mut edges: Vec<usize> = Vec::new();
    while let Some(i) = queue.pop_front() {
        // BFS pops indices in insertion order, so edges fill row by row.
        debug_assert_eq!(edges.len(), i * g);
        let x = found[i];
        for gen in &gens {
            let p = x.then(gen);
            let j = *seen.entry(p).or_insert_with(|| {
                found.push(p);
                queue.push_back(found.len() - 1);
                found.len() - 1
            });
            edges.push(j);
        }
    }

    let mut set = ElementSet::from_elements(found.clone());
    let remap: Vec<usize> = found.iter().map(|a| set.index[a]).collect();
    let mut right = vec![0usize; set.len() * g];
    for (old, &new) in remap.iter().enumerate() {
        for k in 0..g {
            right[new * g + k] = remap[edges[old * g + k]];
        }
    }
    set.cayley = Some(Cayley { generators: gens, right });
    set
}
