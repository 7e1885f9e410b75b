//! Distinct placements of tensor slots into groups and delta pairs.

use num_bigint::BigInt;

use crate::coeff::fact;

/// One placement: `groups[i]` holds the slots for group `i` (ascending),
/// `pairs` the slots joined by deltas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pub groups: Vec<Vec<u32>>,
    pub pairs: Vec<(u32, u32)>,
}

/// `n! / (Π g_i! · 2^r r!)`, the number of distinct placements.
pub fn distribution_count(n: usize, group_sizes: &[usize], pairs: usize) -> BigInt {
    let mut den = fact(pairs as i64) * (BigInt::from(1) << pairs);
    for g in group_sizes {
        den *= fact(*g as i64);
    }
    fact(n as i64) / den
}

/// Enumerates every way to split `slots` into labelled groups of the given
/// sizes (order inside a group irrelevant) plus `pairs` unordered pairs.
/// Panics if the sizes do not add up to the slot count.
pub fn distributions(slots: &[u32], group_sizes: &[usize], pairs: usize) -> Vec<Distribution> {
    assert_eq!(
        group_sizes.iter().sum::<usize>() + 2 * pairs,
        slots.len(),
        "placement sizes must cover all slots"
    );
    let mut out = Vec::new();
    let mut groups = Vec::with_capacity(group_sizes.len());
    fill_groups(slots, group_sizes, pairs, &mut groups, &mut out);
    out
}

fn fill_groups(rest: &[u32], sizes: &[usize], pairs: usize, groups: &mut Vec<Vec<u32>>, out: &mut Vec<Distribution>) {
    let Some((&g, sizes_rest)) = sizes.split_first() else {
        let mut acc = Vec::with_capacity(pairs);
        matchings(rest.to_vec(), &mut acc, &mut |p| {
            out.push(Distribution {
                groups: groups.clone(),
                pairs: p.to_vec(),
            })
        });
        return;
    };
    let mut pick = Vec::with_capacity(g);
    combinations(rest, g, 0, &mut pick, &mut |chosen| {
        let remaining: Vec<u32> = rest.iter().copied().filter(|s| !chosen.contains(s)).collect();
        groups.push(chosen.to_vec());
        fill_groups(&remaining, sizes_rest, pairs, groups, out);
        groups.pop();
    });
}

fn combinations(items: &[u32], k: usize, start: usize, pick: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    let need = k - pick.len();
    for i in start..=items.len().saturating_sub(need) {
        if i >= items.len() {
            break;
        }
        pick.push(items[i]);
        combinations(items, k, i + 1, pick, f);
        pick.pop();
    }
}

fn matchings(mut rest: Vec<u32>, acc: &mut Vec<(u32, u32)>, f: &mut dyn FnMut(&[(u32, u32)])) {
    if rest.is_empty() {
        f(acc);
        return;
    }
    let first = rest.remove(0);
    for i in 0..rest.len() {
        let mut others = rest.clone();
        let partner = others.remove(i);
        acc.push((first, partner));
        matchings(others, acc, f);
        acc.pop();
    }
}
