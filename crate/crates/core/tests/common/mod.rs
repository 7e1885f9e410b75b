#![allow(dead_code)]

use cartensor::reduce::CouplingExpr;
use cartensor::wigner::triangle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct ClosedForm {
    pub id: String,
    pub input: String,
    pub printed: String,
}

pub fn closed_forms() -> Vec<ClosedForm> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/closed_forms.txt");
    std::fs::read_to_string(path)
        .expect("closed form table")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.split(" | ");
            let mut next = || parts.next().expect("three columns").trim().to_string();
            ClosedForm {
                id: next(),
                input: next(),
                printed: next(),
            }
        })
        .collect()
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn subtree(rng: &mut ChaCha8Rng, depth: u32, max_l: u32) -> CouplingExpr {
    if depth == 0 || rng.random_bool(0.4) {
        return CouplingExpr::harmonic(rng.random_range(0..=max_l), NAMES[rng.random_range(0..NAMES.len())]);
    }
    loop {
        let left = subtree(rng, depth - 1, max_l);
        let right = subtree(rng, depth - 1, max_l);
        let (l1, l2) = (left.rank(), right.rank());
        let lo = l1.abs_diff(l2);
        let hi = (l1 + l2).min(max_l);
        if lo <= hi {
            let l = rng.random_range(lo..=hi);
            return CouplingExpr::couple(left, right, l);
        }
    }
}

/// A well-formed coupling with every rank at most `max_l`, nesting depth
/// at most `depth`, total rank at most `max_total` and degree at most
/// `max_degree`.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32, max_l: u32, max_total: u32, max_degree: u32) -> CouplingExpr {
    loop {
        let e = subtree(rng, depth, max_l);
        let coupled = matches!(e, CouplingExpr::Couple { .. });
        if coupled && e.rank() <= max_total && e.degree() <= max_degree {
            return e;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn triangle_triples(max: u32) -> Vec<(u32, u32, u32)> {
    let mut v = Vec::new();
    for l1 in 0..=max {
        for l2 in 0..=max {
            for l3 in 0..=max {
                if triangle(l1 as i64, l2 as i64, l3 as i64) {
                    v.push((l1, l2, l3));
                }
            }
        }
    }
    v
}
