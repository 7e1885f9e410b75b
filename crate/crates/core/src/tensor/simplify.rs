//! Contraction rules. A [`Work`] term is an unsimplified product of
//! two-legged deltas, three-legged epsilons, dots and boxes. Slots at or
//! above [`DUMMY_BASE`] are summed indices and must occur exactly twice.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{sort3, DotKey, Leg, Monomial, VectorSymbol};
use crate::coeff::Rational;

pub(crate) const DUMMY_BASE: u32 = 1 << 24;

fn is_dummy(l: &Leg) -> bool {
    matches!(l, Leg::Slot(s) if *s >= DUMMY_BASE)
}

#[derive(Clone, Debug)]
pub(crate) struct Work {
    pub coeff: Rational,
    /// `δ` with a vector on a leg is the vector component; with two vectors
    /// it is the dot product.
    pub pairs: Vec<[Leg; 2]>,
    pub eps: Vec<[Leg; 3]>,
    pub dots: BTreeMap<DotKey, u32>,
    pub boxes: Vec<[VectorSymbol; 3]>,
}

impl Work {
    pub fn new(coeff: Rational) -> Self {
        Work {
            coeff,
            pairs: Vec::new(),
            eps: Vec::new(),
            dots: BTreeMap::new(),
            boxes: Vec::new(),
        }
    }

    pub fn from_monomial(m: &Monomial, c: &Rational) -> Self {
        let mut w = Work::new(c.clone());
        for (v, s) in &m.vectors {
            w.pairs.push([Leg::Slot(*s), Leg::Vec(v.clone())]);
        }
        for &(s, t) in &m.deltas {
            w.pairs.push([Leg::Slot(s), Leg::Slot(t)]);
        }
        w.eps = m.eps.clone();
        w.dots = m.dots.clone();
        w.boxes = m.boxes.clone();
        w
    }

    pub fn relabel(mut self, f: impl Fn(u32) -> u32) -> Self {
        let map = |l: &mut Leg| {
            if let Leg::Slot(s) = l {
                *s = f(*s);
            }
        };
        self.pairs.iter_mut().flat_map(|p| p.iter_mut()).for_each(map);
        self.eps.iter_mut().flat_map(|e| e.iter_mut()).for_each(map);
        self
    }

    pub fn map_vectors(mut self, f: &impl Fn(&VectorSymbol) -> VectorSymbol) -> Self {
        let map = |l: &mut Leg| {
            if let Leg::Vec(v) = l {
                *v = f(v);
            }
        };
        self.pairs.iter_mut().flat_map(|p| p.iter_mut()).for_each(map);
        self.eps.iter_mut().flat_map(|e| e.iter_mut()).for_each(map);
        let dots = std::mem::take(&mut self.dots);
        for ((a, b), e) in dots {
            for _ in 0..e {
                self.pairs.push([Leg::Vec(f(&a)), Leg::Vec(f(&b))]);
            }
        }
        let boxes = std::mem::take(&mut self.boxes);
        for b in boxes {
            self.eps.push(b.map(|v| Leg::Vec(f(&v))));
        }
        self
    }

    pub fn merged(&self, other: &Work) -> Work {
        let mut w = self.clone();
        w.coeff *= &other.coeff;
        w.pairs.extend(other.pairs.iter().cloned());
        w.eps.extend(other.eps.iter().cloned());
        for (k, e) in &other.dots {
            *w.dots.entry(k.clone()).or_insert(0) += e;
        }
        w.boxes.extend(other.boxes.iter().cloned());
        w
    }

    /// Replaces the single remaining occurrence of dummy `d`.
    fn substitute(&mut self, d: &Leg, by: Leg) -> bool {
        for p in self.pairs.iter_mut() {
            for l in p.iter_mut() {
                if l == d {
                    *l = by;
                    return true;
                }
            }
        }
        for e in self.eps.iter_mut() {
            for l in e.iter_mut() {
                if l == d {
                    *l = by;
                    return true;
                }
            }
        }
        false
    }
}

/// Finds two epsilons sharing a dummy leg.
fn shared_eps(eps: &[[Leg; 3]]) -> Option<(usize, usize, Leg)> {
    for i in 0..eps.len() {
        for l in eps[i].iter().filter(|l| is_dummy(l)) {
            for (j, e) in eps.iter().enumerate().skip(i + 1) {
                if e.contains(l) {
                    return Some((i, j, l.clone()));
                }
            }
        }
    }
    None
}

/// Cyclically rotates `e` so that `d` comes first (sign preserving).
fn rotate_to_front(mut e: [Leg; 3], d: &Leg) -> [Leg; 3] {
    while &e[0] != d {
        e.rotate_left(1);
    }
    e
}

/// Applies all contraction rules and appends canonical terms to `out`.
pub(crate) fn simplify(w: Work, out: &mut Vec<(Monomial, Rational)>) {
    let mut stack = vec![w];
    'next: while let Some(mut w) = stack.pop() {
        if w.coeff.is_zero() {
            continue;
        }
        while let Some(pos) = w.pairs.iter().position(|p| p.iter().any(is_dummy)) {
            let [x, y] = w.pairs.swap_remove(pos);
            let (d, other) = if is_dummy(&x) { (x, y) } else { (y, x) };
            if other == d {
                w.coeff *= Rational::from_integer(3.into());
                continue;
            }
            let found = w.substitute(&d, other);
            assert!(found, "summed index {d:?} occurs once");
        }
        if w.eps.iter().any(|e| e[0] == e[1] || e[1] == e[2] || e[0] == e[2]) {
            continue 'next;
        }
        if let Some((i, j, d)) = shared_eps(&w.eps) {
            let ej = rotate_to_front(w.eps.swap_remove(j), &d);
            let ei = rotate_to_front(w.eps.swap_remove(i), &d);
            // ε_dbc ε_def = δ_be δ_cf − δ_bf δ_ce
            let [_, b, c] = ei;
            let [_, e, f] = ej;
            let mut w2 = w.clone();
            w.pairs.push([b.clone(), e.clone()]);
            w.pairs.push([c.clone(), f.clone()]);
            w2.pairs.push([b, f]);
            w2.pairs.push([c, e]);
            w2.coeff = -w2.coeff;
            stack.push(w);
            stack.push(w2);
            continue;
        }
        assert!(
            !w.eps.iter().flatten().any(is_dummy),
            "summed index left on a single epsilon"
        );
        finalize(w, out);
    }
}

fn finalize(w: Work, out: &mut Vec<(Monomial, Rational)>) {
    let mut coeff = w.coeff;
    let mut m = Monomial {
        dots: w.dots,
        ..Monomial::default()
    };
    for p in w.pairs {
        match p {
            [Leg::Vec(a), Leg::Vec(b)] => {
                if a != b {
                    let key = if a < b { (a, b) } else { (b, a) };
                    *m.dots.entry(key).or_insert(0) += 1;
                }
            }
            [Leg::Slot(s), Leg::Vec(v)] | [Leg::Vec(v), Leg::Slot(s)] => m.vectors.push((v, s)),
            [Leg::Slot(s), Leg::Slot(t)] => m.deltas.push((s.min(t), s.max(t))),
        }
    }
    let mut boxes = w.boxes;
    for mut e in w.eps {
        match sort3(&mut e) {
            None => return,
            Some(odd) => {
                if odd {
                    coeff = -coeff;
                }
            }
        }
        if e.iter().all(|l| l.slot().is_none()) {
            boxes.push(e.map(|l| match l {
                Leg::Vec(v) => v,
                Leg::Slot(_) => unreachable!(),
            }));
        } else {
            m.eps.push(e);
        }
    }
    for b in boxes.iter_mut() {
        match sort3(b) {
            None => return,
            Some(odd) => {
                if odd {
                    coeff = -coeff;
                }
            }
        }
    }
    m.vectors.sort_by_key(|(_, s)| *s);
    m.deltas.sort();
    m.eps.sort();
    expand_boxes(m, coeff, boxes, out);
}

const PERMS3: [([usize; 3], bool); 6] = [
    ([0, 1, 2], false),
    ([1, 2, 0], false),
    ([2, 0, 1], false),
    ([0, 2, 1], true),
    ([2, 1, 0], true),
    ([1, 0, 2], true),
];

/// Replaces box pairs by the determinant of their dot-product matrix.
fn expand_boxes(m: Monomial, coeff: Rational, mut boxes: Vec<[VectorSymbol; 3]>, out: &mut Vec<(Monomial, Rational)>) {
    if boxes.len() < 2 {
        let mut m = m;
        m.boxes = boxes;
        out.push((m, coeff));
        return;
    }
    let b2 = boxes.pop().unwrap();
    let b1 = boxes.pop().unwrap();
    for (perm, odd) in PERMS3 {
        let mut m2 = m.clone();
        for k in 0..3 {
            let (x, y) = (&b1[k], &b2[perm[k]]);
            if x != y {
                let key = if x < y {
                    (x.clone(), y.clone())
                } else {
                    (y.clone(), x.clone())
                };
                *m2.dots.entry(key).or_insert(0) += 1;
            }
        }
        let c = if odd { -coeff.clone() } else { coeff.clone() };
        expand_boxes(m2, c, boxes.clone(), out);
    }
}
