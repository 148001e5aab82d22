//! Cross-checks of every closed form against its oracle on small chains.

use num_bigint::BigUint;
use serde::Serialize;

use crate::dihedral::{bruteforce_isomorphism, decide_isomorphic, dihedral_elements, extends_to_dihedral, is_dihedral_restriction};
use crate::green::{
    d_equals_l_compose_r, green_characterized, green_oracle_with, is_regular_characterized, regular_flags_oracle,
    IdealComponents, Relation,
};
use crate::points::{nonempty_subsets, PointSet};
use crate::rank::{decompose_below, decompose_top_minus_one, factor_into_top_rank, semigroup_rank, verify_certificate};
use crate::semigroup::{cardinality_formula, enumerate, RangeContext};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub n: usize,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub max_n: usize,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Tally {
    name: &'static str,
    n: usize,
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, n: usize) -> Self {
        Tally { name, n, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        // keep reports small
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name.to_string(),
            n: self.n,
            passed: self.failures.is_empty(),
            cases: self.cases,
            failures: self.failures,
        }
    }
}

/// Runs all checks for `1 <= n <= max_n`. The oracle-heavy checks stop at
/// `n = 5`; isomorphism checks at `n = 4`.
pub fn run(max_n: usize) -> SelftestReport {
    let mut checks = Vec::new();
    for n in 1..=max_n {
        checks.extend(run_for(n));
    }
    SelftestReport { max_n, checks }
}

fn run_for(n: usize) -> Vec<Check> {
    let mut card = Tally::new("cardinality", n);
    let mut regular = Tally::new("regularity", n);
    let mut green = Tally::new("green", n);
    let mut decompose = Tally::new("decomposition", n);
    let mut rank = Tally::new("rank", n);

    for y in nonempty_subsets(n) {
        let ctx = RangeContext::from_set(n, y).expect("valid range");
        let set = enumerate(&ctx);
        let expected = cardinality_formula(n, ctx.r()).expect("valid parameters");
        card.record(expected == BigUint::from(set.len()), || format!("Y={y}: {} vs {expected}", set.len()));
        if n > 5 {
            continue;
        }

        let flags = regular_flags_oracle(&set);
        for (i, a) in set.iter().enumerate() {
            let c = is_regular_characterized(&ctx, a).expect("member");
            regular.record(c == flags[i], || format!("Y={y}: {a}"));
        }

        let comps = IdealComponents::new(&set);
        let oracle: Vec<_> = Relation::ALL.iter().map(|&rel| green_oracle_with(&set, &comps, &flags, rel)).collect();
        for (rel, o) in Relation::ALL.iter().zip(&oracle) {
            let c = green_characterized(&ctx, &set, *rel);
            green.record(c.same_classes(o), || format!("Y={y}: {rel} differs"));
        }
        let pick = |rel: Relation| &oracle[Relation::ALL.iter().position(|&r| r == rel).unwrap()];
        green.record(d_equals_l_compose_r(pick(Relation::L), pick(Relation::R), pick(Relation::D)), || {
            format!("Y={y}: D != L o R")
        });
        green.record(pick(Relation::D).same_classes(pick(Relation::J)), || format!("Y={y}: D != J"));

        if !ctx.is_full() {
            for a in set.iter() {
                let r = ctx.r();
                let result = match a.rank() {
                    k if k + 1 == r => decompose_top_minus_one(&ctx, a).map(|_| ()),
                    k if k + 2 <= r => decompose_below(&ctx, a).map(|_| ()),
                    _ => Ok(()),
                };
                let result = result.and_then(|_| {
                    factor_into_top_rank(&ctx, a).and_then(|f| match f.product() {
                        Some(p) if p == *a => Ok(()),
                        _ => Err(crate::Error::NotValid("factorization does not multiply back".into())),
                    })
                });
                decompose.record(result.is_ok(), || format!("Y={y}: {a}: {:?}", result.err()));
            }
        }

        if !ctx.is_full() || n <= 4 {
            let cert = semigroup_rank(&ctx);
            let check = verify_certificate(&cert);
            let expected = if ctx.is_full() { 2 } else { binom(n, ctx.r()) };
            let ok = check.closure_ok
                && check.deletion_all_shrink
                && check.no_single_generator != Some(false)
                && cert.claimed_rank == expected;
            rank.record(ok, || format!("Y={y}: claimed {} expected {expected}", cert.claimed_rank));
        }
    }

    let mut out = vec![card.finish()];
    if n <= 5 {
        out.extend([regular.finish(), green.finish(), decompose.finish(), rank.finish()]);
    }
    if (3..=4).contains(&n) {
        out.push(iso_check(n));
    }
    if (3..=6).contains(&n) {
        out.push(dihedral_check(n));
    }
    out
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn iso_check(n: usize) -> Check {
    let mut tally = Tally::new("isomorphism", n);
    let subsets: Vec<PointSet> = nonempty_subsets(n).collect();
    let sets: Vec<_> = subsets.iter().map(|&y| enumerate(&RangeContext::from_set(n, y).unwrap())).collect();
    for (i, &y) in subsets.iter().enumerate() {
        for (j, &z) in subsets.iter().enumerate() {
            let decided = decide_isomorphic(n, y, z).expect("valid ranges").verdict;
            let found = bruteforce_isomorphism(&sets[i], &sets[j]).is_some();
            tally.record(decided == found, || format!("Y={y} Z={z}: criterion {decided}, oracle {found}"));
        }
    }
    tally.finish()
}

fn dihedral_check(n: usize) -> Check {
    let mut tally = Tally::new("dihedral-restriction", n);
    let full = RangeContext::full(n).expect("valid chain");
    for a in enumerate(&full).iter().filter(|a| a.rank() <= 3) {
        let oracle = extends_to_dihedral(a).expect("n >= 3");
        tally.record(is_dihedral_restriction(a) == oracle, || format!("{a}"));
    }
    // every dihedral element is its own witness
    for d in dihedral_elements(n).expect("n >= 3") {
        tally.record(is_dihedral_restriction(&d), || format!("{d}"));
    }
    tally.finish()
}
