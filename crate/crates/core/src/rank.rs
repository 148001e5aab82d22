//! Rank of `POPI_n(Y)`: generating sets, constructive factorizations of every
//! element into elements of top rank `r = |Y|`, and rank certificates.
//!
//! For a proper range `Y` the factorization proceeds in three kinds of steps:
//!
//! * rank `m <= r - 2`: split into two factors of rank `m + 1`;
//! * rank `r - 1`: split into a rank-`r` factor and a member of `V`, the
//!   order-preserving elements with domain inside `Y` and rank `r - 1`;
//! * members of `V`: split into two rank-`r` factors.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{subsets_of_size, PointSet};
use crate::semigroup::{close_under, enumerate, orientation_preserving_bijections, RangeContext};
use crate::transform::{PartialInjection, Point};

/// The `n`-cycle `i -> i + 1`, `n -> 1`.
pub fn g_perm(n: usize) -> PartialInjection {
    PartialInjection::from_pairs_unchecked(n, (1..=n as Point).map(|i| (i, i % n as Point + 1)))
}

/// The reversal `i -> n + 1 - i`.
pub fn h_perm(n: usize) -> PartialInjection {
    PartialInjection::from_pairs_unchecked(n, (1..=n as Point).map(|i| (i, n as Point + 1 - i)))
}

/// The `r`-cycle on `Y`: `y_i -> y_{i+1}`, `y_r -> y_1`.
pub fn gbar(ctx: &RangeContext) -> PartialInjection {
    let r = ctx.r() as isize;
    PartialInjection::from_pairs_unchecked(ctx.n(), (1..=r).map(|i| (ctx.y(i), ctx.y(i + 1))))
}

/// Writes an orientation-preserving `a` as `g^l * a1` with `a1` order-preserving
/// and `0 <= l < n`, returning `(l, a1)` for the smallest such `l`.
pub fn shift_decompose(a: &PartialInjection) -> Result<(usize, PartialInjection)> {
    if !a.is_orientation_preserving() {
        return Err(Error::NotOrientationPreserving(a.to_string()));
    }
    let n = a.n();
    let g = g_perm(n);
    for l in 0..n {
        let a1 = g.power((n - l) % n).then(a);
        if a1.is_order_preserving() {
            debug_assert_eq!(g.power(l).then(&a1), *a);
            return Ok((l, a1));
        }
    }
    unreachable!("every orientation-preserving map is a rotation of an order-preserving one")
}

/// Which construction produced a [`Decomposition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum Step {
    /// Rank `m <= r - 2` written as a product of two rank-`m + 1` elements.
    RaiseRank,
    /// Rank `r - 1` written as (rank `r`) times (member of `V`).
    TopMinusOne { i: usize, j: usize },
    /// Member of `V` written as a product of two rank-`r` elements.
    IntoTopRank { case: VCase, i: usize, j: usize },
}

impl Step {
    pub fn case(&self) -> Option<VCase> {
        match self {
            Step::IntoTopRank { case, .. } => Some(*case),
            _ => None,
        }
    }

    pub fn case_family(&self) -> Option<u8> {
        self.case().map(VCase::family)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::RaiseRank => write!(f, "raise-rank"),
            Step::TopMinusOne { i, j } => {
                let branch = if i <= j { "i<=j" } else { "i>j" };
                write!(f, "top-minus-one/{branch}")
            }
            Step::IntoTopRank { case, .. } => write!(f, "v-into-top/{case}"),
        }
    }
}

/// Case split for factoring a member of `V` whose domain misses `y_i` and
/// whose image misses `y_j`. Cases are tried in order: a free point below
/// `y_1`, a free point above `y_r`, then the first inner gap
/// `y_k < y_{k+1} - 1`, further split by where `k` falls relative to `i`, `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VCase {
    /// `y_1 > 1`, `i >= j`.
    BelowIGeJ,
    /// `y_1 > 1`, `i < j`.
    BelowILtJ,
    /// `y_r < n`, `i >= j`.
    AboveIGeJ,
    /// `y_r < n`, `i < j`.
    AboveILtJ,
    /// Inner gap, `i >= j`, `k >= j - 1`.
    GapIGeJHigh,
    /// Inner gap, `i >= j`, `k < j - 1`.
    GapIGeJLow,
    /// Inner gap, `i < j`, `k >= j`.
    GapILtJHigh,
    /// Inner gap, `i < j`, `j + 1 - i <= k < j`.
    GapILtJMid,
    /// Inner gap, `i < j`, `k < j + 1 - i`.
    GapILtJLow,
}

impl VCase {
    pub const ALL: [VCase; 9] = [
        VCase::BelowIGeJ,
        VCase::BelowILtJ,
        VCase::AboveIGeJ,
        VCase::AboveILtJ,
        VCase::GapIGeJHigh,
        VCase::GapIGeJLow,
        VCase::GapILtJHigh,
        VCase::GapILtJMid,
        VCase::GapILtJLow,
    ];

    /// 1, 2 or 3 for the below / above / inner-gap families.
    pub fn family(self) -> u8 {
        match self {
            VCase::BelowIGeJ | VCase::BelowILtJ => 1,
            VCase::AboveIGeJ | VCase::AboveILtJ => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for VCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VCase::BelowIGeJ => "case-1/i>=j",
            VCase::BelowILtJ => "case-1/i<j",
            VCase::AboveIGeJ => "case-2/i>=j",
            VCase::AboveILtJ => "case-2/i<j",
            VCase::GapIGeJHigh => "case-3/i>=j/k>=j-1",
            VCase::GapIGeJLow => "case-3/i>=j/k<j-1",
            VCase::GapILtJHigh => "case-3/i<j/k>=j",
            VCase::GapILtJMid => "case-3/i<j/j+1-i<=k<j",
            VCase::GapILtJLow => "case-3/i<j/k<j+1-i",
        };
        f.write_str(s)
    }
}

/// `beta * gamma` equals the decomposed element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub beta: PartialInjection,
    pub gamma: PartialInjection,
    /// Power of the `n`-cycle folded into `beta`; zero when unused.
    pub shift_exponent: usize,
    pub step: Step,
}

fn build(n: usize, pairs: &[(Point, Point)]) -> Result<PartialInjection> {
    PartialInjection::new(n, pairs).map_err(|e| Error::DecompositionNotFound(e.to_string()))
}

fn require_proper(ctx: &RangeContext) -> Result<()> {
    if ctx.is_full() {
        Err(Error::FullRangeNotSupported)
    } else {
        Ok(())
    }
}

/// Factors an element of rank `m <= r - 2` into two elements of rank `m + 1`.
///
/// Any such factorization has `Dom(beta) = Dom(a) + {c}` and
/// `gamma = beta^-1 a` plus one extra pair `d -> y` with `d` outside
/// `Im(beta)` and `y` in `Y \ Im(a)`; the search runs through exactly these
/// candidates in ascending order and keeps the first orientation-preserving one.
pub fn decompose_below(ctx: &RangeContext, a: &PartialInjection) -> Result<Decomposition> {
    ctx.require_member(a)?;
    let m = a.rank();
    let r = ctx.r();
    if m + 2 > r {
        return Err(Error::RankTooHigh { rank: m, max: r.saturating_sub(2) });
    }
    let n = ctx.n();
    let chain = PointSet::full(n);
    let free_images = ctx.range().difference(a.image());
    for c in chain.difference(a.domain()).iter() {
        let mut dom = a.domain();
        dom.insert(c);
        for img in subsets_of_size(ctx.range(), m + 1) {
            for beta in orientation_preserving_bijections(n, dom, img) {
                let base = beta.inverse().then(a);
                for d in chain.difference(beta.image()).iter() {
                    for y in free_images.iter() {
                        let mut pairs: Vec<_> = base.pairs().collect();
                        pairs.push((d, y));
                        let gamma = PartialInjection::from_pairs_unchecked(n, pairs);
                        if gamma.is_orientation_preserving() && beta.then(&gamma) == *a {
                            return Ok(Decomposition { beta, gamma, shift_exponent: 0, step: Step::RaiseRank });
                        }
                    }
                }
            }
        }
    }
    Err(Error::DecompositionNotFound(a.to_string()))
}

/// Membership in `V`: order-preserving, domain inside `Y`, rank `r - 1`.
pub fn is_in_v(ctx: &RangeContext, a: &PartialInjection) -> bool {
    a.n() == ctx.n()
        && a.is_order_preserving()
        && a.domain().is_subset(ctx.range())
        && a.image().is_subset(ctx.range())
        && a.rank() + 1 == ctx.r()
}

/// 1-based position in `Y` of the single point of `Y` missing from `set`.
fn missing_index(ctx: &RangeContext, set: PointSet) -> usize {
    let missing = ctx.range().difference(set);
    debug_assert_eq!(missing.len(), 1);
    ctx.position(missing.iter().next().expect("exactly one point missing")).unwrap()
}

/// Factors an element of rank `r - 1` as `(g^l beta) * gamma` with `g^l beta`
/// of rank `r` and `gamma` in `V`.
///
/// With `a = g^l a1`, `a1` order-preserving on `a_1 < ... < a_{r-1}` and
/// missing `y_i` from its image, pick the smallest free point `c` with
/// `a_{j-1} < c < a_j`. Then `beta` is the order-isomorphism of
/// `Dom(a1) + {c}` onto `Y`, and `gamma` fixes `y_1..y_{min(i,j)-1}` and
/// `y_{max(i,j)+1}..y_r`, moving the block between them one step towards `y_j`.
pub fn decompose_top_minus_one(ctx: &RangeContext, a: &PartialInjection) -> Result<Decomposition> {
    require_proper(ctx)?;
    ctx.require_member(a)?;
    let r = ctx.r();
    if a.rank() + 1 != r {
        return Err(Error::BadRank { rank: a.rank(), expected: r - 1 });
    }
    let n = ctx.n();
    let (l, a1) = shift_decompose(a)?;
    let dom = a1.domain().to_vec();
    let i = missing_index(ctx, a1.image());
    let c = PointSet::full(n)
        .difference(a1.domain())
        .iter()
        .next()
        .expect("rank r - 1 < n leaves a free point");
    let j = 1 + dom.iter().filter(|&&x| x < c).count();
    let y = |k: usize| ctx.y(k as isize);

    let mut beta_pairs: Vec<(Point, Point)> = Vec::with_capacity(r);
    beta_pairs.extend((1..j).map(|k| (dom[k - 1], y(k))));
    beta_pairs.push((c, y(j)));
    beta_pairs.extend((j..r).map(|k| (dom[k - 1], y(k + 1))));

    let mut gamma_pairs: Vec<(Point, Point)> = Vec::with_capacity(r - 1);
    if i <= j {
        gamma_pairs.extend((1..i).map(|k| (y(k), y(k))));
        gamma_pairs.extend((i..j).map(|k| (y(k), y(k + 1))));
        gamma_pairs.extend((j + 1..=r).map(|k| (y(k), y(k))));
    } else {
        gamma_pairs.extend((1..j).map(|k| (y(k), y(k))));
        gamma_pairs.extend((j + 1..=i).map(|k| (y(k), y(k - 1))));
        gamma_pairs.extend((i + 1..=r).map(|k| (y(k), y(k))));
    }
    let beta = g_perm(n).power(l).then(&build(n, &beta_pairs)?);
    let gamma = build(n, &gamma_pairs)?;
    let d = Decomposition { beta, gamma, shift_exponent: l, step: Step::TopMinusOne { i, j } };
    check(ctx, a, &d, r, r - 1)?;
    if !is_in_v(ctx, &d.gamma) {
        return Err(Error::DecompositionNotFound(a.to_string()));
    }
    Ok(d)
}

fn check(ctx: &RangeContext, a: &PartialInjection, d: &Decomposition, beta_rank: usize, gamma_rank: usize) -> Result<()> {
    let ok = d.beta.rank() == beta_rank
        && d.gamma.rank() == gamma_rank
        && ctx.contains(&d.beta)?
        && ctx.contains(&d.gamma)?
        && d.beta.then(&d.gamma) == *a;
    if ok {
        Ok(())
    } else {
        Err(Error::DecompositionNotFound(a.to_string()))
    }
}

/// Factors a member of `V` into two rank-`r` elements.
///
/// `beta` is a rotation `y_m -> y_{m+s}` of `Y` and `gamma` undoes it on the
/// points coming from `Dom(a)` while sending one point outside `Y` (below
/// `y_1`, above `y_r`, or inside the first gap after `y_k`) to the missing
/// image `y_j`. The shift `s` is chosen so that this extra point sits in the
/// right cyclic position for `gamma` to stay orientation-preserving.
pub fn decompose_v(ctx: &RangeContext, a: &PartialInjection) -> Result<Decomposition> {
    require_proper(ctx)?;
    if !is_in_v(ctx, a) {
        return Err(Error::NotInV(a.to_string()));
    }
    let n = ctx.n();
    let r = ctx.r() as isize;
    let pts = ctx.points();
    let i = missing_index(ctx, a.domain()) as isize;
    let j = missing_index(ctx, a.image()) as isize;
    let i_ge_j = i >= j;

    let (case, shift, extra) = if pts[0] > 1 {
        let case = if i_ge_j { VCase::BelowIGeJ } else { VCase::BelowILtJ };
        (case, if i_ge_j { 1 - j } else { -j }, 1)
    } else if (pts[pts.len() - 1] as usize) < n {
        let case = if i_ge_j { VCase::AboveIGeJ } else { VCase::AboveILtJ };
        (case, if i_ge_j { 1 - j } else { -j }, n as Point)
    } else {
        let k = (1..r)
            .find(|&k| ctx.y(k) + 1 < ctx.y(k + 1))
            .expect("a proper range containing 1 and n has an inner gap");
        let case = if i_ge_j {
            if k >= j - 1 {
                VCase::GapIGeJHigh
            } else {
                VCase::GapIGeJLow
            }
        } else if k >= j {
            VCase::GapILtJHigh
        } else if k >= j + 1 - i {
            VCase::GapILtJMid
        } else {
            VCase::GapILtJLow
        };
        (case, if i_ge_j { k + 1 - j } else { k - j }, ctx.y(k) + 1)
    };

    let beta_pairs: Vec<_> = (1..=r).map(|m| (ctx.y(m), ctx.y(m + shift))).collect();
    let mut gamma_pairs: Vec<_> = a
        .pairs()
        .map(|(x, ax)| {
            let m = ctx.position(x).expect("domain lies inside Y") as isize;
            (ctx.y(m + shift), ax)
        })
        .collect();
    gamma_pairs.push((extra, ctx.y(j)));

    let d = Decomposition {
        beta: build(n, &beta_pairs)?,
        gamma: build(n, &gamma_pairs)?,
        shift_exponent: 0,
        step: Step::IntoTopRank { case, i: i as usize, j: j as usize },
    };
    check(ctx, a, &d, ctx.r(), ctx.r())?;
    Ok(d)
}

/// The unique `t` in `0..r` with `a = b * gbar^t`, for rank-`r` elements
/// sharing a domain. If `a` sends the `i`-th domain point to `y_1` and `b`
/// sends the `j`-th, then `t = j - i` when `i <= j` and `r - i + j` otherwise.
pub fn hclass_shift_exponent(a: &PartialInjection, b: &PartialInjection, ctx: &RangeContext) -> Result<usize> {
    ctx.require_member(a)?;
    ctx.require_member(b)?;
    let r = ctx.r();
    for x in [a, b] {
        if x.rank() != r {
            return Err(Error::BadRank { rank: x.rank(), expected: r });
        }
    }
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch);
    }
    let y1 = ctx.y(1);
    let wrap = |x: &PartialInjection| 1 + x.image_sequence().iter().position(|&p| p == y1).unwrap();
    let (i, j) = (wrap(a), wrap(b));
    let t = if i <= j { j - i } else { r - i + j };
    if b.then(&gbar(ctx).power(t)) != *a {
        return Err(Error::DecompositionNotFound(format!("{a} as {b} * gbar^t")));
    }
    Ok(t)
}

/// One rank-`r` generator per `r`-subset `A` of the chain: the
/// order-isomorphism `A -> Y`, except that for `A = Y` the cycle `gbar` is
/// used. Subsets are taken in lexicographic order.
pub fn canonical_generating_set(ctx: &RangeContext) -> Result<Vec<PartialInjection>> {
    require_proper(ctx)?;
    let n = ctx.n();
    Ok(subsets_of_size(PointSet::full(n), ctx.r())
        .map(|dom| {
            if dom == ctx.range() {
                gbar(ctx)
            } else {
                orientation_preserving_bijections(n, dom, ctx.range())
                    .next()
                    .expect("k = r >= 1 gives at least one bijection")
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub ctx: RangeContext,
    pub claimed_rank: usize,
    pub generating_set: Vec<PartialInjection>,
    /// Domains of the top-rank `R`-classes, each of which must contain a generator.
    pub lower_bound_witness: Vec<PointSet>,
}

/// Rank certificate: `C(n, r)` with the canonical generators for proper `Y`;
/// for `Y` the whole chain, a generating pair found by search together with
/// an exhaustive check that no single element generates.
pub fn semigroup_rank(ctx: &RangeContext) -> RankCertificate {
    let n = ctx.n();
    if !ctx.is_full() {
        let generating_set = canonical_generating_set(ctx).expect("proper range");
        let lower_bound_witness: Vec<_> = subsets_of_size(PointSet::full(n), ctx.r()).collect();
        return RankCertificate {
            ctx: ctx.clone(),
            claimed_rank: generating_set.len(),
            generating_set,
            lower_bound_witness,
        };
    }

    let all = enumerate(ctx);
    if let Some(single) = all.iter().find(|x| close_under(&[**x]).len() == all.len()) {
        return RankCertificate {
            ctx: ctx.clone(),
            claimed_rank: 1,
            generating_set: vec![*single],
            lower_bound_witness: Vec::new(),
        };
    }
    let g = g_perm(n);
    let pair = all
        .rank_layer(n - 1)
        .into_iter()
        .map(|k| *all.get(k))
        .find(|x| close_under(&[g, *x]).len() == all.len())
        .map(|x| vec![g, x])
        .or_else(|| {
            // widen to every pair
            (0..all.len())
                .flat_map(|p| (p + 1..all.len()).map(move |q| (p, q)))
                .map(|(p, q)| vec![*all.get(p), *all.get(q)])
                .find(|pair| close_under(pair).len() == all.len())
        });
    let generating_set = pair.unwrap_or_else(|| all.elements().to_vec());
    RankCertificate {
        ctx: ctx.clone(),
        claimed_rank: generating_set.len(),
        generating_set,
        lower_bound_witness: Vec::new(),
    }
}

/// Outcome of replaying a [`RankCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub expected_size: usize,
    pub closure_size: usize,
    pub closure_ok: bool,
    /// Closure size with each generator removed in turn.
    pub deletion_sizes: Vec<usize>,
    pub deletion_all_shrink: bool,
    /// For a full range: no single element generates.
    pub no_single_generator: Option<bool>,
}

pub fn verify_certificate(cert: &RankCertificate) -> CertificateCheck {
    let all = enumerate(&cert.ctx);
    let closure_size = close_under(&cert.generating_set).len();
    let deletion_sizes = deletion_sizes(&cert.generating_set);
    let no_single_generator = cert
        .ctx
        .is_full()
        .then(|| all.iter().all(|x| close_under(&[*x]).len() < all.len()));
    CertificateCheck {
        expected_size: all.len(),
        closure_size,
        closure_ok: closure_size == all.len() && cert.generating_set.len() == cert.claimed_rank,
        deletion_all_shrink: deletion_sizes.iter().all(|&s| s < closure_size),
        deletion_sizes,
        no_single_generator,
    }
}

/// Size of the closure of `gens` with each generator left out in turn.
pub fn deletion_sizes(gens: &[PartialInjection]) -> Vec<usize> {
    (0..gens.len())
        .map(|skip| {
            let rest: Vec<_> = gens.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, g)| *g).collect();
            close_under(&rest).len()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorStep {
    pub target: PartialInjection,
    #[serde(flatten)]
    pub decomposition: Decomposition,
}

/// An element written as a product of rank-`r` elements, with every
/// intermediate split recorded.
#[derive(Clone, Debug, Serialize)]
pub struct Factorization {
    pub element: PartialInjection,
    pub steps: Vec<FactorStep>,
    pub word: Vec<PartialInjection>,
}

impl Factorization {
    pub fn product(&self) -> Option<PartialInjection> {
        let mut it = self.word.iter();
        let first = *it.next()?;
        Some(it.fold(first, |acc, x| acc.then(x)))
    }
}

/// Runs the three splitting steps until only rank-`r` factors remain.
pub fn factor_into_top_rank(ctx: &RangeContext, a: &PartialInjection) -> Result<Factorization> {
    require_proper(ctx)?;
    ctx.require_member(a)?;
    let mut steps = Vec::new();
    let word = factor_rec(ctx, a, &mut steps)?;
    Ok(Factorization { element: *a, steps, word })
}

fn factor_rec(ctx: &RangeContext, a: &PartialInjection, steps: &mut Vec<FactorStep>) -> Result<Vec<PartialInjection>> {
    let r = ctx.r();
    let m = a.rank();
    if m == r {
        return Ok(vec![*a]);
    }
    if m + 1 == r {
        let d = decompose_top_minus_one(ctx, a)?;
        steps.push(FactorStep { target: *a, decomposition: d.clone() });
        let v = decompose_v(ctx, &d.gamma)?;
        steps.push(FactorStep { target: d.gamma, decomposition: v.clone() });
        return Ok(vec![d.beta, v.beta, v.gamma]);
    }
    let d = decompose_below(ctx, a)?;
    steps.push(FactorStep { target: *a, decomposition: d.clone() });
    let mut word = factor_rec(ctx, &d.beta, steps)?;
    word.extend(factor_rec(ctx, &d.gamma, steps)?);
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(n: usize, pairs: &[(Point, Point)]) -> PartialInjection {
        PartialInjection::new(n, pairs).unwrap()
    }

    fn ctx(n: usize, y: &[Point]) -> RangeContext {
        RangeContext::new(n, y).unwrap()
    }

    #[test]
    fn dihedral_generators() {
        assert_eq!(g_perm(3), pi(3, &[(1, 2), (2, 3), (3, 1)]));
        assert_eq!(h_perm(3), pi(3, &[(1, 3), (2, 2), (3, 1)]));
        assert_eq!(g_perm(1), pi(1, &[(1, 1)]));
        for n in 1..8 {
            let id = PartialInjection::identity(n).unwrap();
            assert_eq!(g_perm(n).power(n), id);
            assert_eq!(h_perm(n).power(2), id);
        }
    }

    #[test]
    fn gbar_examples() {
        let c = ctx(3, &[1, 2]);
        assert_eq!(gbar(&c), pi(3, &[(1, 2), (2, 1)]));
        assert_eq!(gbar(&RangeContext::full(5).unwrap()), g_perm(5));
        let c = ctx(6, &[2, 3, 5]);
        assert_eq!(gbar(&c).power(3), PartialInjection::identity_on(6, c.range()).unwrap());
        assert!(c.contains(&gbar(&c)).unwrap());
    }

    #[test]
    fn shift_examples() {
        let a = pi(3, &[(1, 1), (3, 2)]);
        assert_eq!(shift_decompose(&a).unwrap(), (0, a));
        let e = pi(3, &[]);
        assert_eq!(shift_decompose(&e).unwrap(), (0, e));
        let c = pi(3, &[(1, 2), (2, 3), (3, 1)]);
        let (l, a1) = shift_decompose(&c).unwrap();
        assert!(l < 3 && a1.is_order_preserving());
        assert_eq!(g_perm(3).power(l).then(&a1), c);
        assert_eq!(a1.image(), c.image());
        assert!(matches!(
            shift_decompose(&pi(3, &[(1, 2), (2, 1), (3, 3)])),
            Err(Error::NotOrientationPreserving(_))
        ));
    }

    #[test]
    fn below_examples() {
        let c = ctx(3, &[1, 2]);
        let d = decompose_below(&c, &pi(3, &[])).unwrap();
        assert_eq!(d.beta.rank(), 1);
        assert_eq!(d.gamma.rank(), 1);
        assert!(d.beta.then(&d.gamma).is_empty());
        // the suggested pair works as well
        assert!(pi(3, &[(1, 1)]).then(&pi(3, &[(2, 2)])).is_empty());

        let c = ctx(4, &[1, 2, 3]);
        let a = pi(4, &[(3, 1)]);
        let d = decompose_below(&c, &a).unwrap();
        assert_eq!((d.beta.rank(), d.gamma.rank()), (2, 2));
        assert_eq!(d.beta.then(&d.gamma), a);
        assert!(matches!(
            decompose_below(&c, &pi(4, &[(1, 1), (2, 2)])),
            Err(Error::RankTooHigh { rank: 2, max: 1 })
        ));
    }

    #[test]
    fn top_minus_one_worked_example() {
        let c = ctx(3, &[1, 2]);
        let d = decompose_top_minus_one(&c, &pi(3, &[(3, 1)])).unwrap();
        assert_eq!(d.shift_exponent, 0);
        assert_eq!(d.step, Step::TopMinusOne { i: 2, j: 1 });
        assert_eq!(d.beta, pi(3, &[(1, 1), (3, 2)]));
        assert_eq!(d.gamma, pi(3, &[(2, 1)]));
        assert!(matches!(
            decompose_top_minus_one(&c, &pi(3, &[])),
            Err(Error::BadRank { rank: 0, expected: 1 })
        ));
        assert_eq!(
            decompose_top_minus_one(&RangeContext::full(3).unwrap(), &pi(3, &[(1, 1), (2, 2)])),
            Err(Error::FullRangeNotSupported)
        );
    }

    #[test]
    fn top_minus_one_i_le_j_branch() {
        let c = ctx(4, &[1, 2, 3]);
        let all = enumerate(&c);
        let mut seen = 0;
        for a in all.iter().filter(|a| a.rank() == 2 && !a.image().contains(1)) {
            let d = decompose_top_minus_one(&c, a).unwrap();
            let Step::TopMinusOne { i, j } = d.step else { panic!() };
            assert_eq!(i, 1);
            assert!(i <= j);
            assert!(is_in_v(&c, &d.gamma));
            assert_eq!(d.beta.then(&d.gamma), *a);
            seen += 1;
        }
        assert_eq!(seen, 12);
    }

    #[test]
    fn v_worked_example() {
        let c = ctx(3, &[1, 2]);
        let d = decompose_v(&c, &pi(3, &[(2, 1)])).unwrap();
        assert_eq!(d.step, Step::IntoTopRank { case: VCase::AboveILtJ, i: 1, j: 2 });
        assert_eq!(d.beta, pi(3, &[(1, 1), (2, 2)]));
        assert_eq!(d.gamma, pi(3, &[(2, 1), (3, 2)]));
        assert!(matches!(decompose_v(&c, &pi(3, &[(3, 1)])), Err(Error::NotInV(_))));
    }

    #[test]
    fn v_case_dispatch() {
        let c = ctx(3, &[2, 3]);
        let d = decompose_v(&c, &pi(3, &[(2, 3)])).unwrap();
        assert_eq!(d.step.case_family(), Some(1));

        let c = ctx(4, &[1, 2, 4]);
        let a = pi(4, &[(2, 2), (4, 4)]);
        let d = decompose_v(&c, &a).unwrap();
        assert_eq!(d.step, Step::IntoTopRank { case: VCase::GapIGeJHigh, i: 1, j: 1 });
        // the inner-gap construction with k = 2, written out by hand
        assert_eq!(d.beta, pi(4, &[(1, 4), (2, 1), (4, 2)]));
        assert_eq!(d.gamma, pi(4, &[(1, 2), (2, 4), (3, 1)]));
    }

    #[test]
    fn v_case_one_by_hand() {
        // Y = {2,3,5} in a chain of 5: y_1 > 1. a misses y_3 = 5 in its domain and y_1 = 2 in its image.
        let c = ctx(5, &[2, 3, 5]);
        let a = pi(5, &[(2, 3), (3, 5)]);
        let d = decompose_v(&c, &a).unwrap();
        assert_eq!(d.step, Step::IntoTopRank { case: VCase::BelowIGeJ, i: 3, j: 1 });
        // beta: y_1..y_r -> y_1..y_r (j = 1), gamma: 1 -> y_1, y_1..y_2 -> y_2..y_3
        assert_eq!(d.beta, pi(5, &[(2, 2), (3, 3), (5, 5)]));
        assert_eq!(d.gamma, pi(5, &[(1, 2), (2, 3), (3, 5)]));
    }

    #[test]
    fn hclass_shift_examples() {
        let c = ctx(3, &[1, 2]);
        let b = pi(3, &[(1, 1), (3, 2)]);
        let a = pi(3, &[(1, 2), (3, 1)]);
        assert_eq!(hclass_shift_exponent(&a, &b, &c).unwrap(), 1);
        assert_eq!(hclass_shift_exponent(&b, &b, &c).unwrap(), 0);
        let c = ctx(6, &[1, 3, 4, 6]);
        let b = pi(6, &[(2, 4), (3, 6), (5, 1), (6, 3)]);
        let a = b.then(&gbar(&c).power(3));
        assert_eq!(hclass_shift_exponent(&a, &b, &c).unwrap(), 3);
        assert_eq!(
            hclass_shift_exponent(&pi(6, &[(1, 1), (2, 3), (3, 4), (4, 6)]), &b, &c),
            Err(Error::DomainMismatch)
        );
        assert!(matches!(
            hclass_shift_exponent(&pi(6, &[(1, 1)]), &b, &c),
            Err(Error::BadRank { rank: 1, expected: 4 })
        ));
    }

    #[test]
    fn canonical_sets() {
        let c = ctx(3, &[1, 2]);
        let gens = canonical_generating_set(&c).unwrap();
        assert_eq!(gens.len(), 3);
        assert_eq!(gens[0], gbar(&c));
        let doms: Vec<_> = gens.iter().map(|g| g.domain().to_vec()).collect();
        assert_eq!(doms, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(close_under(&gens), enumerate(&c));
        assert_eq!(canonical_generating_set(&ctx(4, &[1, 3])).unwrap().len(), 6);
        assert_eq!(canonical_generating_set(&RangeContext::full(3).unwrap()), Err(Error::FullRangeNotSupported));
    }

    #[test]
    fn rank_examples() {
        let cert = semigroup_rank(&ctx(3, &[1, 2]));
        assert_eq!(cert.claimed_rank, 3);
        let check = verify_certificate(&cert);
        assert!(check.closure_ok && check.deletion_all_shrink);
        assert_eq!(semigroup_rank(&ctx(4, &[2])).claimed_rank, 4);
        let full = semigroup_rank(&RangeContext::full(4).unwrap());
        assert_eq!(full.claimed_rank, 2);
        assert_eq!(full.generating_set[0], g_perm(4));
        let check = verify_certificate(&full);
        assert!(check.closure_ok);
        assert_eq!(check.no_single_generator, Some(true));
    }

    #[test]
    fn factorization_multiplies_back() {
        let c = ctx(4, &[1, 3, 4]);
        for a in enumerate(&c).iter() {
            let f = factor_into_top_rank(&c, a).unwrap();
            assert_eq!(f.product(), Some(*a));
            assert!(f.word.iter().all(|w| w.rank() == 3 && c.contains(w).unwrap()));
        }
    }
}
