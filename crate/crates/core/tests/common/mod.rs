#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swallowtail::analysis::RootProfile;
use swallowtail::exact::rational::ratio;
use swallowtail::exact::Rational;

/// Partitions of `n` into positive parts, largest part first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn distinct_roots<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    while out.len() < k {
        let r = ratio(rng.gen_range(-15..=15), rng.gen_range(1..=4));
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

pub fn profile_with<R: Rng>(rng: &mut R, mults: &[usize]) -> RootProfile {
    let mut mults = mults.to_vec();
    mults.shuffle(rng);
    let roots = distinct_roots(rng, mults.len());
    RootProfile::new(roots.into_iter().zip(mults).collect()).unwrap()
}

/// Every multiplicity pattern of each degree in `degrees` at least once,
/// then random patterns until `count` profiles exist. Deterministic in
/// `seed`.
pub fn profile_sweep(degrees: std::ops::RangeInclusive<usize>, count: usize, seed: u64) -> Vec<RootProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let patterns: Vec<Vec<usize>> = degrees.clone().flat_map(partitions).collect();
    for p in &patterns {
        out.push(profile_with(&mut rng, p));
    }
    while out.len() < count {
        let p = patterns.choose(&mut rng).unwrap();
        out.push(profile_with(&mut rng, p));
    }
    out
}
