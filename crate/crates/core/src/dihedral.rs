//! When are `POPI_n(Y)` and `POPI_n(Z)` isomorphic?
//!
//! The criterion: `|Y| = |Z| <= 2`, or `Z` is the image of `Y` under a
//! rotation or reflection of the chain viewed as a cycle (an element of the
//! dihedral group generated by `g` and `h`). An independent backtracking
//! search over element bijections serves as the oracle.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::regular_flags_oracle;
use crate::points::PointSet;
use crate::rank::{g_perm, h_perm};
use crate::semigroup::{enumerate, ElementSet, RangeContext};
use crate::transform::{PartialInjection, Point};

/// `1, g, ..., g^{n-1}, h, hg, ..., hg^{n-1}` for `n >= 3`.
pub fn dihedral_elements(n: usize) -> Result<Vec<PartialInjection>> {
    if n <= 2 {
        return Err(Error::ChainTooSmall { n });
    }
    let g = g_perm(n);
    let h = h_perm(n);
    let rotations: Vec<_> = (0..n).map(|k| g.power(k)).collect();
    let reflections: Vec<_> = rotations.iter().map(|r| h.then(r)).collect();
    Ok(rotations.into_iter().chain(reflections).collect())
}

/// Pairwise test: for all `i < j` in the domain, `|ja - ia|` is `j - i` or `n - (j - i)`.
pub fn is_dihedral_restriction(a: &PartialInjection) -> bool {
    let n = a.n() as i32;
    let pairs: Vec<(i32, i32)> = a.pairs().map(|(x, y)| (x as i32, y as i32)).collect();
    pairs.iter().tuple_combinations().all(|(&(i, ia), &(j, ja))| {
        let gap = j - i;
        let d = (ja - ia).abs();
        d == gap || d == n - gap
    })
}

/// Direct search for a dihedral permutation extending `a`.
pub fn extends_to_dihedral(a: &PartialInjection) -> Result<bool> {
    Ok(dihedral_elements(a.n())?
        .iter()
        .any(|d| a.pairs().all(|(x, y)| d.apply(x) == Some(y))))
}

/// Some permutation `sigma` with `Y sigma = Z`: the order-isomorphism on `Y`
/// and on its complement.
pub fn range_permutation(n: usize, y: PointSet, z: PointSet) -> Option<PartialInjection> {
    if y.len() != z.len() {
        return None;
    }
    let full = PointSet::full(n);
    let pairs = y
        .iter()
        .zip(z.iter())
        .chain(full.difference(y).iter().zip(full.difference(z).iter()));
    Some(PartialInjection::from_pairs_unchecked(n, pairs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoReason {
    SmallRank,
    Dihedral,
    OracleMap,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub verdict: bool,
    pub reason: IsoReason,
    /// For `Dihedral`, a dihedral permutation carrying `Y` onto `Z`; for
    /// `SmallRank`, any permutation doing so.
    pub delta: Option<PartialInjection>,
    /// Index pairs `(i, j)` of an element-level isomorphism, when one was built.
    pub element_map: Option<Vec<[usize; 2]>>,
}

/// Decides isomorphism of `POPI_n(Y)` and `POPI_n(Z)` by the criterion alone.
pub fn decide_isomorphic(n: usize, y: PointSet, z: PointSet) -> Result<IsoWitness> {
    RangeContext::from_set(n, y)?;
    RangeContext::from_set(n, z)?;
    if y.len() != z.len() {
        return Ok(IsoWitness { verdict: false, reason: IsoReason::None, delta: None, element_map: None });
    }
    if y.len() <= 2 {
        return Ok(IsoWitness {
            verdict: true,
            reason: IsoReason::SmallRank,
            delta: range_permutation(n, y, z),
            element_map: None,
        });
    }
    // |Y| >= 3 forces n >= 3
    let delta = dihedral_elements(n)?.into_iter().find(|d| d.image_of(y) == z);
    Ok(match delta {
        Some(d) => IsoWitness { verdict: true, reason: IsoReason::Dihedral, delta: Some(d), element_map: None },
        None => IsoWitness { verdict: false, reason: IsoReason::None, delta: None, element_map: None },
    })
}

/// An element-level map `source[i] -> target[forward[i]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementMap {
    pub forward: Vec<usize>,
}

impl ElementMap {
    pub fn pairs(&self) -> Vec<[usize; 2]> {
        self.forward.iter().enumerate().map(|(i, &j)| [i, j]).collect()
    }
}

/// Bijective and product-preserving on every pair of elements.
pub fn is_isomorphism(source: &ElementSet, target: &ElementSet, map: &ElementMap) -> bool {
    if source.len() != target.len() || map.forward.len() != source.len() {
        return false;
    }
    let mut hit = vec![false; target.len()];
    for &j in &map.forward {
        if j >= target.len() || std::mem::replace(&mut hit[j], true) {
            return false;
        }
    }
    let image = |i: usize| target.get(map.forward[i]);
    (0..source.len()).all(|a| {
        (0..source.len()).all(|b| {
            let ab = source.get(a).then(source.get(b));
            match source.index_of(&ab) {
                Some(p) => *image(p) == image(a).then(image(b)),
                None => false,
            }
        })
    })
}

/// The map `a -> sigma^-1 a sigma` from `POPI_n(Y)` to `POPI_n(Z)`, checked
/// to be an isomorphism.
///
/// `sigma` must carry `Y` onto `Z` and, unless `|Y| <= 2`, be dihedral.
pub fn conjugation_isomorphism(n: usize, y: PointSet, z: PointSet, sigma: &PartialInjection) -> Result<ElementMap> {
    let ys = RangeContext::from_set(n, y)?;
    let zs = RangeContext::from_set(n, z)?;
    if sigma.n() != n {
        return Err(Error::MismatchedChainSize { left: n, right: sigma.n() });
    }
    if !sigma.is_permutation() {
        return Err(Error::NotValid(format!("{sigma} is not a permutation")));
    }
    if sigma.image_of(y) != z {
        return Err(Error::NotARangeMap);
    }
    if y.len() > 2 && !dihedral_elements(n)?.contains(sigma) {
        return Err(Error::NotValid(format!("{sigma} is not dihedral and |Y| > 2")));
    }
    let source = enumerate(&ys);
    let target = enumerate(&zs);
    let inv = sigma.inverse();
    let forward = source
        .iter()
        .map(|a| {
            let image = inv.then(a).then(sigma);
            target
                .index_of(&image)
                .ok_or_else(|| Error::NotValid(format!("{a} maps to {image}, outside the target")))
        })
        .collect::<Result<Vec<_>>>()?;
    let map = ElementMap { forward };
    if !is_isomorphism(&source, &target, &map) {
        return Err(Error::NotValid("conjugation does not preserve products".into()));
    }
    Ok(map)
}

/// An isomorphism found by [`bruteforce_isomorphism`], with the bijection of
/// ranges it induces on rank-one idempotents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleIsomorphism {
    pub element_map: ElementMap,
    pub point_map: Vec<(Point, Point)>,
}

struct Features {
    rank: usize,
    idempotent: bool,
    regular: bool,
    image: PointSet,
    fix: PointSet,
}

fn features(set: &ElementSet) -> Vec<Features> {
    let regular = regular_flags_oracle(set);
    set.iter()
        .zip(regular)
        .map(|(a, regular)| Features {
            rank: a.rank(),
            idempotent: a.is_idempotent(),
            regular,
            image: a.image(),
            fix: a.fix_points(),
        })
        .collect()
}

fn union_of_images(set: &ElementSet) -> PointSet {
    set.iter().fold(PointSet::EMPTY, |acc, a| acc.union(a.image()))
}

/// Backtracking search for a product-preserving bijection between two finite
/// semigroups of partial injections on the same chain.
///
/// The search fixes a bijection `phi` between the ranges first; any
/// isomorphism sends `id_{y}` to `id_{y phi}` and then satisfies
/// `Im(a') = Im(a) phi`, `Fix(a') = Fix(a) phi` and `(y phi) a' = (y a) phi`
/// for `y` in the range and domain of `a`. Candidates are pruned with those
/// facts and with rank, idempotency and regularity, elements are assigned from
/// the highest rank down, and every assignment propagates forced images of
/// products.
pub fn bruteforce_isomorphism(source: &ElementSet, target: &ElementSet) -> Option<OracleIsomorphism> {
    if source.len() != target.len() {
        return None;
    }
    if source.is_empty() {
        return Some(OracleIsomorphism { element_map: ElementMap { forward: Vec::new() }, point_map: Vec::new() });
    }
    let ys = union_of_images(source);
    let zs = union_of_images(target);
    if ys.len() != zs.len() {
        return None;
    }
    let fs = features(source);
    let ft = features(target);
    let mut order: Vec<usize> = (0..source.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(fs[i].rank));

    let y_points = ys.to_vec();
    for z_perm in zs.to_vec().into_iter().permutations(y_points.len()) {
        let phi: Vec<(Point, Point)> = y_points.iter().copied().zip(z_perm).collect();
        let phi_of = |p: Point| phi.iter().find(|(a, _)| *a == p).map(|(_, b)| *b);
        let phi_set = |s: PointSet| {
            s.iter().fold(PointSet::EMPTY, |mut acc, p| {
                acc.insert(phi_of(p).expect("point lies in the range"));
                acc
            })
        };
        let candidates: Vec<Vec<usize>> = (0..source.len())
            .map(|i| {
                let a = source.get(i);
                let f = &fs[i];
                let image = phi_set(f.image);
                let fix = phi_set(f.fix);
                (0..target.len())
                    .filter(|&j| {
                        let b = target.get(j);
                        let g = &ft[j];
                        g.rank == f.rank
                            && g.idempotent == f.idempotent
                            && g.regular == f.regular
                            && g.image == image
                            && g.fix == fix
                            && a.domain().intersection(ys).iter().all(|y| {
                                b.apply(phi_of(y).unwrap()) == a.apply(y).and_then(phi_of)
                            })
                    })
                    .collect()
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        let mut search = Search::new(source, target, &candidates);
        if search.solve(&order, 0) {
            let forward: Vec<usize> = search.fwd.iter().map(|x| x.expect("complete assignment")).collect();
            let element_map = ElementMap { forward };
            debug_assert!(is_isomorphism(source, target, &element_map));
            return Some(OracleIsomorphism { element_map, point_map: phi });
        }
    }
    None
}

struct Search<'a> {
    source: &'a ElementSet,
    target: &'a ElementSet,
    allowed: Vec<Vec<bool>>,
    candidates: &'a [Vec<usize>],
    fwd: Vec<Option<usize>>,
    inv: Vec<Option<usize>>,
    assigned: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(source: &'a ElementSet, target: &'a ElementSet, candidates: &'a [Vec<usize>]) -> Self {
        let allowed = candidates
            .iter()
            .map(|c| {
                let mut row = vec![false; target.len()];
                for &j in c {
                    row[j] = true;
                }
                row
            })
            .collect();
        Search {
            source,
            target,
            allowed,
            candidates,
            fwd: vec![None; source.len()],
            inv: vec![None; target.len()],
            assigned: Vec::new(),
        }
    }

    fn solve(&mut self, order: &[usize], mut pos: usize) -> bool {
        while pos < order.len() && self.fwd[order[pos]].is_some() {
            pos += 1;
        }
        let Some(&a) = order.get(pos) else {
            return true;
        };
        for &b in self.candidates[a].iter() {
            if self.inv[b].is_some() {
                continue;
            }
            let mark = self.assigned.len();
            if self.assign(a, b) && self.solve(order, pos + 1) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn undo(&mut self, mark: usize) {
        for a in self.assigned.drain(mark..) {
            let b = self.fwd[a].take().expect("assigned");
            self.inv[b] = None;
        }
    }

    /// Assigns `a -> b` and everything it forces; false on contradiction
    /// (the caller undoes partial work).
    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            match (self.fwd[x], self.inv[y]) {
                (Some(existing), _) if existing == y => continue,
                (Some(_), _) | (None, Some(_)) => return false,
                (None, None) => {}
            }
            if !self.allowed[x][y] {
                return false;
            }
            self.fwd[x] = Some(y);
            self.inv[y] = Some(x);
            self.assigned.push(x);
            let ex = self.source.get(x);
            let ey = self.target.get(y);
            for k in 0..self.assigned.len() {
                let u = self.assigned[k];
                let v = self.fwd[u].expect("assigned");
                let (eu, ev) = (self.source.get(u), self.target.get(v));
                for (s, t) in [(ex.then(eu), ey.then(ev)), (eu.then(ex), ev.then(ey))] {
                    let (Some(p), Some(q)) = (self.source.index_of(&s), self.target.index_of(&t)) else {
                        return false;
                    };
                    match self.fwd[p] {
                        Some(existing) if existing != q => return false,
                        Some(_) => {}
                        None => queue.push((p, q)),
                    }
                }
            }
        }
        true
    }
}
