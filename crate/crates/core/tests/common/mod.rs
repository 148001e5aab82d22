#![allow(dead_code)]

use itertools::Itertools;
use popi_core::{PartialInjection, Point};

/// Every partial injection on `{1..n}`, built from scratch.
pub fn all_partial_injections(n: usize) -> Vec<PartialInjection> {
    let pts: Vec<Point> = (1..=n as Point).collect();
    let mut out = Vec::new();
    for k in 0..=n {
        for dom in pts.iter().copied().combinations(k) {
            for img in pts.iter().copied().permutations(k) {
                let pairs: Vec<_> = dom.iter().copied().zip(img).collect();
                out.push(PartialInjection::new(n, &pairs).unwrap());
            }
        }
    }
    out
}

/// Circular descent count of the image sequence is at most one.
pub fn naive_orientation_preserving(a: &PartialInjection) -> bool {
    let seq: Vec<Point> = a.pairs().map(|(_, y)| y).collect();
    let t = seq.len();
    (0..t).filter(|&i| seq[i] > seq[(i + 1) % t]).count() <= 1
}

/// Members of `POPI_n(Y)` by filtering all partial injections.
pub fn naive_popi(n: usize, y: &[Point]) -> Vec<PartialInjection> {
    all_partial_injections(n)
        .into_iter()
        .filter(|a| a.pairs().all(|(_, v)| y.contains(&v)) && naive_orientation_preserving(a))
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn mul(a: &PartialInjection, b: &PartialInjection) -> PartialInjection {
    a.compose(b).unwrap()
}
