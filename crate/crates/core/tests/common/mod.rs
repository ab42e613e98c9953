#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use tgl::{AtomSet, Depth, KnowledgeBase, Proposition, Signature, Threshold, ThresholdedGeneralization};

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn signature(r: usize) -> Arc<Signature> {
    Signature::new(NAMES[..r].iter().copied()).unwrap()
}

pub fn prop_from_mask(mask: u64, sig: &Arc<Signature>) -> Proposition {
    let n = sig.atom_count();
    let atoms = AtomSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
    Proposition::from_atoms(atoms, sig).unwrap()
}

pub fn mask_of(p: &Proposition) -> u64 {
    p.atoms().iter().fold(0, |m, i| m | 1 << i)
}

/// A rule as (antecedent mask, consequent mask, threshold; 0 means `inf`).
pub type RawRule = (u64, u64, u32);

pub fn build_kb(r: usize, rules: &[RawRule]) -> KnowledgeBase {
    let sig = signature(r);
    let mut kb = KnowledgeBase::new(sig.clone());
    for &(a, c, k) in rules {
        let threshold = if k == 0 { Threshold::INFINITE } else { Threshold::finite(k).unwrap() };
        kb.push(ThresholdedGeneralization::new(prop_from_mask(a, &sig), prop_from_mask(c, &sig), threshold).unwrap())
            .unwrap();
    }
    kb
}

/// Random knowledge base with `1 ≤ r ≤ max_r`, `m ≤ max_m` and finite
/// thresholds up to `max_k`.
pub fn random_kb<R: Rng>(rng: &mut R, max_r: usize, max_m: usize, max_k: u32) -> KnowledgeBase {
    let r = rng.random_range(1..=max_r);
    let full = (1u64 << (1 << r)) - 1;
    let m = rng.random_range(0..=max_m);
    let rules: Vec<RawRule> = (0..m)
        .map(|_| {
            // Bias antecedents towards small sets so that rules interact.
            let a = if rng.random_bool(0.2) { full } else { rng.random::<u64>() & full };
            let c = rng.random::<u64>() & full;
            (a, c, rng.random_range(1..=max_k))
        })
        .collect();
    build_kb(r, &rules)
}

pub fn random_prop<R: Rng>(rng: &mut R, sig: &Arc<Signature>) -> Proposition {
    let full = (1u64 << sig.atom_count()) - 1;
    prop_from_mask(rng.random::<u64>() & full, sig)
}

prop_compose! {
    /// Knowledge base with `r ≤ max_r`, `m ≤ max_m`, thresholds in
    /// `1..=max_k` and, when `allow_inf`, occasional hard rules.
    pub fn arb_kb(max_r: usize, max_m: usize, max_k: u32, allow_inf: bool)
        (r in 1..=max_r)
        (rules in prop::collection::vec(
            (any::<u64>(), any::<u64>(), if allow_inf { 0..=max_k } else { 1..=max_k }),
            0..=max_m,
        ), r in Just(r)) -> KnowledgeBase {
        let full = (1u64 << (1 << r)) - 1;
        let rules: Vec<RawRule> = rules.into_iter().map(|(a, c, k)| (a & full, c & full, k)).collect();
        build_kb(r, &rules)
    }
}

prop_compose! {
    pub fn arb_kb_with_props(max_r: usize, max_m: usize, max_k: u32, allow_inf: bool)
        (kb in arb_kb(max_r, max_m, max_k, allow_inf))
        (x in any::<u64>(), y in any::<u64>(), kb in Just(kb)) -> (KnowledgeBase, Proposition, Proposition) {
        let sig = kb.signature().clone();
        let full = (1u64 << sig.atom_count()) - 1;
        (kb, prop_from_mask(x & full, &sig), prop_from_mask(y & full, &sig))
    }
}

const INF: u32 = u32::MAX;

fn to_depth(v: u32) -> Depth {
    if v == INF { Depth::Infinite } else { Depth::Finite(v) }
}

/// Pointwise-minimal atom-depth vector satisfying
/// `min_E d ≥ min_A d + k` for every rule, found by exhaustive search.
///
/// Atom depths range over `0..=Σk` and `∞`: the minimal vector assigns each
/// rule one forced level, so its finite values never exceed the sum of the
/// finite thresholds. Vectors satisfying the constraints are closed under
/// pointwise minimum, so the minimum over all of them is itself a solution.
/// The search prunes a partial vector as soon as some single rule cannot be
/// met by any completion.
pub fn minimal_atom_depths(kb: &KnowledgeBase) -> Vec<Depth> {
    let n = kb.signature().atom_count();
    let rules: Vec<(u64, u64, u32)> = kb
        .rules()
        .iter()
        .map(|r| {
            let k = r.threshold().finite_value().unwrap_or(INF);
            (mask_of(r.antecedent()), mask_of(&r.exception()), k)
        })
        .collect();
    let cap: u32 = rules.iter().filter(|r| r.2 != INF).map(|r| r.2).sum();
    let mut values: Vec<u32> = (0..=cap).collect();
    values.push(INF);
    let mut current = vec![0u32; n];
    let mut best = vec![INF; n];
    search(0, n, &rules, &values, &mut current, &mut best);
    best.into_iter().map(to_depth).collect()
}

fn min_over(mask: u64, assigned: u64, v: &[u32]) -> u32 {
    (0..v.len())
        .filter(|&i| (mask & assigned) >> i & 1 == 1)
        .map(|i| v[i])
        .min()
        .unwrap_or(INF)
}

fn plus(a: u32, k: u32) -> u32 {
    if a == INF || k == INF { INF } else { a + k }
}

fn completable(rules: &[(u64, u64, u32)], assigned: u64, v: &[u32]) -> bool {
    rules.iter().all(|&(a, e, k)| {
        let min_e = min_over(e, assigned, v);
        if min_e == INF {
            return true;
        }
        let free_non_exception = a & !e & !assigned != 0;
        let min_a = if free_non_exception { 0 } else { min_over(a, assigned, v) };
        min_e >= plus(min_a, k)
    })
}

fn search(i: usize, n: usize, rules: &[(u64, u64, u32)], values: &[u32], cur: &mut Vec<u32>, best: &mut Vec<u32>) {
    let assigned = if i == 64 { u64::MAX } else { (1u64 << i) - 1 };
    if !completable(rules, assigned, cur) {
        return;
    }
    if i == n {
        for (b, c) in best.iter_mut().zip(cur.iter()) {
            *b = (*b).min(*c);
        }
        return;
    }
    for &x in values {
        cur[i] = x;
        search(i + 1, n, rules, values, cur, best);
    }
}
