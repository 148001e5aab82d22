//! Regularity and Green's relations on `POPI_n(Y)`.
//!
//! Two independent routes produce every partition: the closed-form
//! characterizations in terms of domain, image, rank and regularity, and an
//! oracle that works on the finite semigroup alone by comparing principal
//! ideals (mutual reachability in the left and right Cayley graphs).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::semigroup::{close_under, ElementSet, RangeContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    L,
    R,
    H,
    D,
    J,
}

impl Relation {
    pub const ALL: [Relation; 5] = [Relation::L, Relation::R, Relation::H, Relation::D, Relation::J];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::L => "L",
            Relation::R => "R",
            Relation::H => "H",
            Relation::D => "D",
            Relation::J => "J",
        };
        f.write_str(s)
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Relation::L),
            "R" | "r" => Ok(Relation::R),
            "H" | "h" => Ok(Relation::H),
            "D" | "d" => Ok(Relation::D),
            "J" | "j" => Ok(Relation::J),
            other => Err(Error::BadParameters(format!("unknown relation {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Characterized,
}

/// What the members of one class have in common. A field is `None` when the
/// members disagree on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub size: usize,
    pub rank: Option<usize>,
    pub regular: Option<bool>,
    pub domain: Option<PointSet>,
    pub image: Option<PointSet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenPartition {
    pub relation: Relation,
    pub method: Method,
    /// Classes ordered by their smallest member; members ascending.
    pub classes: Vec<Vec<usize>>,
    pub info: Vec<ClassInfo>,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl GreenPartition {
    fn from_labels<K: Hash + Eq>(
        relation: Relation,
        method: Method,
        set: &ElementSet,
        regular: &[bool],
        labels: impl IntoIterator<Item = K>,
    ) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(set.len());
        for (i, key) in labels.into_iter().enumerate() {
            let next = classes.len();
            let c = *ids.entry(key).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push(i);
            class_of.push(c);
        }
        assert_eq!(class_of.len(), set.len(), "one label per element");
        let info = classes.iter().map(|members| class_info(set, regular, members)).collect();
        GreenPartition { relation, method, classes, info, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing element `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_members(&self, i: usize) -> &[usize] {
        &self.classes[self.class_of[i]]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Same relation and identical classes, regardless of how they were computed.
    pub fn same_classes(&self, other: &GreenPartition) -> bool {
        self.classes == other.classes
    }

    /// Every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &GreenPartition) -> bool {
        self.classes
            .iter()
            .all(|c| c.iter().all(|&i| coarser.related(c[0], i)))
    }
}

fn common<T: PartialEq + Copy>(mut values: impl Iterator<Item = T>) -> Option<T> {
    let first = values.next()?;
    values.all(|v| v == first).then_some(first)
}

fn class_info(set: &ElementSet, regular: &[bool], members: &[usize]) -> ClassInfo {
    let el = |i: &usize| set.get(*i);
    ClassInfo {
        size: members.len(),
        rank: common(members.iter().map(|i| el(i).rank())),
        regular: common(members.iter().map(|&i| regular[i])),
        domain: common(members.iter().map(|i| el(i).domain())),
        image: common(members.iter().map(|i| el(i).image())),
    }
}

/// Regular iff the domain lies inside `Y`.
pub fn is_regular_characterized(ctx: &RangeContext, a: &crate::PartialInjection) -> Result<bool> {
    ctx.require_member(a)?;
    Ok(a.domain().is_subset(ctx.range()))
}

/// Exhaustive search for `b` in the set with `aba = a`.
pub fn is_regular_oracle(set: &ElementSet, index: usize) -> bool {
    let a = set.get(index);
    set.iter().any(|b| a.then(b).then(a) == *a)
}

fn regular_flags_characterized(ctx: &RangeContext, set: &ElementSet) -> Vec<bool> {
    set.iter().map(|a| a.domain().is_subset(ctx.range())).collect()
}

pub fn regular_flags_oracle(set: &ElementSet) -> Vec<bool> {
    (0..set.len()).map(|i| is_regular_oracle(set, i)).collect()
}

/// Partition from the closed-form descriptions:
///
/// * `L`: both regular with equal images, or equal;
/// * `R`: equal domains;
/// * `H`: `L` and `R` together;
/// * `D` (= `J`): both regular of equal rank, or both non-regular with equal domains.
pub fn green_characterized(ctx: &RangeContext, set: &ElementSet, relation: Relation) -> GreenPartition {
    let regular = regular_flags_characterized(ctx, set);
    let l_key = |i: usize| -> (bool, u32) {
        if regular[i] {
            (true, set.get(i).image().bits() as u32)
        } else {
            (false, i as u32)
        }
    };
    let r_key = |i: usize| set.get(i).domain().bits();
    let d_key = |i: usize| -> (bool, u32) {
        if regular[i] {
            (true, set.get(i).rank() as u32)
        } else {
            (false, set.get(i).domain().bits() as u32)
        }
    };
    let m = Method::Characterized;
    let idx = 0..set.len();
    match relation {
        Relation::L => GreenPartition::from_labels(relation, m, set, &regular, idx.map(l_key)),
        Relation::R => GreenPartition::from_labels(relation, m, set, &regular, idx.map(r_key)),
        Relation::H => {
            GreenPartition::from_labels(relation, m, set, &regular, idx.map(|i| (l_key(i), r_key(i))))
        }
        Relation::D | Relation::J => GreenPartition::from_labels(relation, m, set, &regular, idx.map(d_key)),
    }
}

/// Strongly connected components of the left, right and two-sided Cayley
/// graphs of a finite semigroup. Two elements generate the same principal
/// right ideal iff each is reachable from the other in the right graph, and
/// likewise for left and two-sided ideals.
pub struct IdealComponents {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub two_sided: Vec<usize>,
}

impl IdealComponents {
    pub fn new(set: &ElementSet) -> Self {
        let (gens, right_edges) = right_edges(set);
        let mut left_edges = Vec::with_capacity(right_edges.len());
        for (i, a) in set.iter().enumerate() {
            for g in &gens {
                let j = set
                    .index_of(&g.then(a))
                    .expect("set must be closed under multiplication");
                left_edges.push((i, j));
            }
        }
        let n = set.len();
        let left = components(n, left_edges.iter().copied());
        let right = components(n, right_edges.iter().copied());
        let two_sided = components(n, left_edges.iter().chain(right_edges.iter()).copied());
        IdealComponents { left, right, two_sided }
    }
}

/// Right-multiplication edges for a generating set: the Cayley graph when the
/// set carries one, otherwise a greedily chosen generating set.
fn right_edges(set: &ElementSet) -> (Vec<crate::PartialInjection>, Vec<(usize, usize)>) {
    let cayley = match set.cayley() {
        Some(c) => c.clone(),
        None => {
            let gens = greedy_generators(set);
            let closed = close_under(&gens);
            assert!(closed == *set, "set must be closed under multiplication");
            closed.cayley().expect("closure records its Cayley graph").clone()
        }
    };
    let g = cayley.generators.len();
    let edges = (0..set.len())
        .flat_map(|i| (0..g).map(move |k| (i, k)))
        .map(|(i, k)| (i, cayley.product(i, k)))
        .collect();
    (cayley.generators, edges)
}

/// Walks the set from the highest rank down, keeping every element not yet
/// generated by the ones kept so far.
pub fn greedy_generators(set: &ElementSet) -> Vec<crate::PartialInjection> {
    let mut gens = Vec::new();
    let mut generated: HashSet<crate::PartialInjection> = HashSet::new();
    for a in set.iter().rev() {
        if !generated.contains(a) {
            gens.push(*a);
            generated = close_under(&gens).iter().copied().collect();
        }
    }
    gens
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (a, b) in edges {
        graph.add_edge(nodes[a], nodes[b], ());
    }
    let mut label = vec![0; n];
    for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for node in scc {
            label[node.index()] = c;
        }
    }
    label
}

/// Partition computed from the semigroup alone, with `S^1` supplied by
/// treating every element as reachable from itself.
pub fn green_oracle(set: &ElementSet, relation: Relation) -> GreenPartition {
    let comps = IdealComponents::new(set);
    let regular = regular_flags_oracle(set);
    green_oracle_with(set, &comps, &regular, relation)
}

/// Same as [`green_oracle`], reusing precomputed components and regularity.
pub fn green_oracle_with(
    set: &ElementSet,
    comps: &IdealComponents,
    regular: &[bool],
    relation: Relation,
) -> GreenPartition {
    let m = Method::Oracle;
    let idx = 0..set.len();
    match relation {
        Relation::L => GreenPartition::from_labels(relation, m, set, regular, comps.left.iter().copied()),
        Relation::R => GreenPartition::from_labels(relation, m, set, regular, comps.right.iter().copied()),
        Relation::H => GreenPartition::from_labels(
            relation,
            m,
            set,
            regular,
            idx.map(|i| (comps.left[i], comps.right[i])),
        ),
        Relation::J => {
            GreenPartition::from_labels(relation, m, set, regular, comps.two_sided.iter().copied())
        }
        Relation::D => {
            let labels = join(set.len(), &comps.left, &comps.right);
            GreenPartition::from_labels(relation, m, set, regular, labels)
        }
    }
}

/// Finest equivalence containing both labelings (transitive closure of their union).
fn join(n: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for labels in [a, b] {
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (i, &l) in labels.iter().enumerate() {
            let rep = *first.entry(l).or_insert(i);
            let (x, y) = (find(&mut parent, i), find(&mut parent, rep));
            parent[x] = y;
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Checks `D = L o R`: `a D b` iff some `c` has `a L c` and `c R b`.
pub fn d_equals_l_compose_r(l: &GreenPartition, r: &GreenPartition, d: &GreenPartition) -> bool {
    let n = d.class_of.len();
    let pairs: HashSet<(usize, usize)> = (0..n).map(|c| (l.class_of(c), r.class_of(c))).collect();
    (0..n).all(|a| (0..n).all(|b| pairs.contains(&(l.class_of(a), r.class_of(b))) == d.related(a, b)))
}

/// Structure of an `H`-class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HClassProfile {
    pub size: usize,
    pub is_group: bool,
    pub is_cyclic_group: bool,
    pub domain: Option<PointSet>,
    pub image: Option<PointSet>,
}

/// Profile of the `H`-class of element `index`, with the class taken from the
/// characterization (same domain and image, both regular or equal).
pub fn h_class_profile(ctx: &RangeContext, set: &ElementSet, index: usize) -> HClassProfile {
    let a = set.get(index);
    let regular = |x: &crate::PartialInjection| x.domain().is_subset(ctx.range());
    let members: Vec<usize> = (0..set.len())
        .filter(|&j| {
            let b = set.get(j);
            j == index || (b.domain() == a.domain() && b.image() == a.image() && regular(a) && regular(b))
        })
        .collect();
    profile_of(set, &members)
}

/// Profile of the class containing `index` in an arbitrary `H`-partition.
pub fn h_class_profile_in(set: &ElementSet, h: &GreenPartition, index: usize) -> HClassProfile {
    profile_of(set, h.class_members(index))
}

fn profile_of(set: &ElementSet, members: &[usize]) -> HClassProfile {
    let elems: Vec<_> = members.iter().map(|&i| *set.get(i)).collect();
    let inside: HashSet<_> = elems.iter().copied().collect();
    let closed = elems.iter().all(|a| elems.iter().all(|b| inside.contains(&a.then(b))));
    let identity = elems.iter().copied().find(|e| {
        e.is_idempotent() && elems.iter().all(|a| e.then(a) == *a && a.then(e) == *a)
    });
    let is_group = closed
        && identity.is_some_and(|e| elems.iter().all(|a| elems.iter().any(|b| a.then(b) == e)));
    let is_cyclic_group = is_group
        && elems.iter().any(|g| {
            let mut powers = HashSet::new();
            let mut p = *g;
            while powers.insert(p) {
                p = p.then(g);
            }
            powers.len() == elems.len()
        });
    HClassProfile {
        size: elems.len(),
        is_group,
        is_cyclic_group,
        domain: common(elems.iter().map(|a| a.domain())),
        image: common(elems.iter().map(|a| a.image())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::enumerate;
    use crate::PartialInjection;

    fn pi(n: usize, pairs: &[(u8, u8)]) -> PartialInjection {
        PartialInjection::new(n, pairs).unwrap()
    }

    fn ctx12() -> (RangeContext, ElementSet) {
        let ctx = RangeContext::new(3, &[1, 2]).unwrap();
        let set = enumerate(&ctx);
        (ctx, set)
    }

    #[test]
    fn regularity_examples() {
        let (ctx, set) = ctx12();
        assert!(is_regular_characterized(&ctx, &pi(3, &[(1, 2)])).unwrap());
        assert!(!is_regular_characterized(&ctx, &pi(3, &[(3, 1)])).unwrap());
        assert!(is_regular_characterized(&ctx, &pi(3, &[])).unwrap());
        assert!(matches!(
            is_regular_characterized(&ctx, &pi(3, &[(1, 3)])),
            Err(Error::NotAMember(_))
        ));
        let a = set.index_of(&pi(3, &[(1, 2)])).unwrap();
        assert!(is_regular_oracle(&set, a));
        let b = pi(3, &[(2, 1)]);
        let a_el = pi(3, &[(1, 2)]);
        assert_eq!(a_el.then(&b).then(&a_el), a_el);
        assert!(!is_regular_oracle(&set, set.index_of(&pi(3, &[(3, 1)])).unwrap()));
        assert!(is_regular_oracle(&set, 0));
    }

    #[test]
    fn characterized_examples() {
        let (ctx, set) = ctx12();
        let a = set.index_of(&pi(3, &[(3, 1)])).unwrap();
        let b = set.index_of(&pi(3, &[(3, 2)])).unwrap();
        let l = green_characterized(&ctx, &set, Relation::L);
        let r = green_characterized(&ctx, &set, Relation::R);
        let d = green_characterized(&ctx, &set, Relation::D);
        let h = green_characterized(&ctx, &set, Relation::H);
        assert!(r.related(a, b) && d.related(a, b) && !l.related(a, b));
        let id = set.index_of(&pi(3, &[(1, 1), (2, 2)])).unwrap();
        let swap = set.index_of(&pi(3, &[(1, 2), (2, 1)])).unwrap();
        assert!(h.related(id, swap));
        let reg2: Vec<_> = d
            .classes
            .iter()
            .zip(&d.info)
            .filter(|(_, info)| info.rank == Some(2) && info.regular == Some(true))
            .map(|(c, _)| c.clone())
            .collect();
        assert_eq!(reg2, vec![vec![id.min(swap), id.max(swap)]]);
    }

    #[test]
    fn oracle_agrees_on_small_case() {
        let (ctx, set) = ctx12();
        for rel in Relation::ALL {
            let o = green_oracle(&set, rel);
            let c = green_characterized(&ctx, &set, rel);
            assert!(o.same_classes(&c), "{rel}");
            assert_eq!(o.info, c.info);
        }
    }

    #[test]
    fn oracle_on_zero_only() {
        let ctx = RangeContext::new(3, &[1]).unwrap();
        let zero = crate::closure(&ctx, &[pi(3, &[])]).unwrap();
        for rel in Relation::ALL {
            assert_eq!(green_oracle(&zero, rel).len(), 1);
        }
    }

    #[test]
    fn d_is_j_and_l_compose_r() {
        let ctx = RangeContext::new(4, &[1, 3]).unwrap();
        let set = enumerate(&ctx);
        let l = green_oracle(&set, Relation::L);
        let r = green_oracle(&set, Relation::R);
        let d = green_oracle(&set, Relation::D);
        let j = green_oracle(&set, Relation::J);
        assert!(d.same_classes(&j));
        assert!(d_equals_l_compose_r(&l, &r, &d));
        let h = green_oracle(&set, Relation::H);
        assert!(h.refines(&l) && h.refines(&r) && l.refines(&d) && r.refines(&d));
    }

    #[test]
    fn profiles() {
        let (ctx, set) = ctx12();
        let id = set.index_of(&pi(3, &[(1, 1), (2, 2)])).unwrap();
        let y = PointSet::from_points(3, [1usize, 2]).unwrap();
        assert_eq!(
            h_class_profile(&ctx, &set, id),
            HClassProfile { size: 2, is_group: true, is_cyclic_group: true, domain: Some(y), image: Some(y) }
        );
        let a = set.index_of(&pi(3, &[(3, 1)])).unwrap();
        assert_eq!(
            h_class_profile(&ctx, &set, a),
            HClassProfile {
                size: 1,
                is_group: false,
                is_cyclic_group: false,
                domain: Some(PointSet::from_points(3, [3usize]).unwrap()),
                image: Some(PointSet::from_points(3, [1usize]).unwrap()),
            }
        );
        assert_eq!(
            h_class_profile(&ctx, &set, 0),
            HClassProfile {
                size: 1,
                is_group: true,
                is_cyclic_group: true,
                domain: Some(PointSet::EMPTY),
                image: Some(PointSet::EMPTY),
            }
        );
        let h = green_oracle(&set, Relation::H);
        assert_eq!(h_class_profile_in(&set, &h, id), h_class_profile(&ctx, &set, id));
    }

    #[test]
    fn relation_parsing() {
        assert_eq!("L".parse::<Relation>().unwrap(), Relation::L);
        assert_eq!("d".parse::<Relation>().unwrap(), Relation::D);
        assert!("X".parse::<Relation>().is_err());
    }
}
