//! Shared oracles for the integration suites. Everything here is an
//! independent computation path: walks on the integers, word enumeration,
//! brute-force meet closures. None of it calls the code it checks beyond
//! the primitive under audit.
#![allow(dead_code)] // each test binary uses its own subset

use fi1::subsemigroup::SubsemigroupSpec;
use fi1::triple::Triple;
use fi1::word::{Sign, Word};
use std::collections::BTreeSet;

/// Triple of a single-letter word read off its walk on the integers:
/// left reach is minus the minimum prefix sum, right reach the maximum,
/// displacement the total.
pub fn walk_triple(w: &Word) -> Triple {
    let mut pos = 0i64;
    let (mut min, mut max) = (0i64, 0i64);
    for (_, sign) in w.letters() {
        pos += match sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        min = min.min(pos);
        max = max.max(pos);
    }
    Triple::new(-min, pos, max).expect("walk triples are valid")
}

/// All words over `{x}` of exactly the given length.
pub fn words_of_length(len: usize) -> Vec<Word> {
    assert!((1..=22).contains(&len));
    (0u32..(1 << len))
        .map(|mask| {
            let letters: Vec<(String, Sign)> = (0..len)
                .map(|i| {
                    let sign = if mask >> i & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    ("x".to_string(), sign)
                })
                .collect();
            Word::new(vec!["x".to_string()], letters).expect("valid word")
        })
        .collect()
}

/// All words over `{x}` of length 1..=len.
pub fn words_up_to(len: usize) -> Vec<Word> {
    (1..=len).flat_map(words_of_length).collect()
}

/// Word-enumeration oracle for bounded closures: canonical forms of all
/// products of the given generator symbols, of any length, with D-index at
/// most `max_d`. The layer-by-layer growth stops when a full layer adds
/// nothing; pruning at the bound is sound because a prefix's D-index never
/// exceeds the full product's.
pub fn product_closure_oracle(symbols: &[Triple], max_d: u64) -> BTreeSet<Triple> {
    let mut all: BTreeSet<Triple> = symbols
        .iter()
        .filter(|t| t.dindex() <= max_d)
        .copied()
        .collect();
    let mut layer = all.clone();
    loop {
        let mut next = BTreeSet::new();
        for w in &layer {
            for s in symbols {
                let prod = w.mul(s);
                if prod.dindex() <= max_d && !all.contains(&prod) {
                    next.insert(prod);
                }
            }
        }
        if next.is_empty() {
            return all;
        }
        all.extend(next.iter().copied());
        layer = next;
    }
}

/// Generator symbols a word-enumeration oracle multiplies by: the signed
/// generators plus every idempotent-family member within the bound.
pub fn oracle_symbols(spec: &SubsemigroupSpec, max_d: u64) -> Vec<Triple> {
    let mut symbols = spec.signed_gens();
    if let Some(idems) = spec.idems() {
        for p in idems.points_within(max_d, max_d) {
            if p.a + p.b <= max_d {
                symbols.push(p.to_triple());
            }
        }
    }
    symbols
}
