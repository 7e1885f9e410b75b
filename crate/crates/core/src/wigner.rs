//! Exact Wigner 3j and Clebsch-Gordan coefficients for integer angular momenta.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::{fact, CoeffAtom, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
    pub m1: i64,
    pub m2: i64,
    pub m3: i64,
}

impl ThreeJArgs {
    pub fn new(l: [i64; 3], m: [i64; 3]) -> Self {
        ThreeJArgs {
            l1: l[0],
            l2: l[1],
            l3: l[2],
            m1: m[0],
            m2: m[1],
            m3: m[2],
        }
    }
}

/// `|l1 - l2| <= l3 <= l1 + l2` with all three nonnegative.
pub fn triangle(l1: i64, l2: i64, l3: i64) -> bool {
    l1 >= 0 && l2 >= 0 && l3 >= 0 && l3 >= (l1 - l2).abs() && l3 <= l1 + l2
}

/// The 3j symbol via the Racah closed-form sum. Out-of-domain arguments give
/// an exact zero.
pub fn three_j(args: ThreeJArgs) -> CoeffAtom {
    let ThreeJArgs { l1, l2, l3, m1, m2, m3 } = args;
    if !triangle(l1, l2, l3) || m1 + m2 + m3 != 0 || m1.abs() > l1 || m2.abs() > l2 || m3.abs() > l3 {
        return CoeffAtom::zero();
    }
    let under = Rational::new(
        fact(l1 + l2 - l3)
            * fact(l1 - l2 + l3)
            * fact(-l1 + l2 + l3)
            * fact(l1 + m1)
            * fact(l1 - m1)
            * fact(l2 + m2)
            * fact(l2 - m2)
            * fact(l3 + m3)
            * fact(l3 - m3),
        fact(l1 + l2 + l3 + 1),
    );

    let k_min = 0.max(l2 - l3 - m1).max(l1 - l3 + m2);
    let k_max = (l1 + l2 - l3).min(l1 - m1).min(l2 + m2);
    let mut sum = Rational::zero();
    for k in k_min..=k_max {
        let den: BigInt = fact(k)
            * fact(l3 - l2 + k + m1)
            * fact(l3 - l1 + k - m2)
            * fact(l1 + l2 - l3 - k)
            * fact(l1 - k - m1)
            * fact(l2 - k + m2);
        let term = Rational::new(BigInt::from(1), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if (l1 - l2 - m3).rem_euclid(2) == 1 {
        sum = -sum;
    }
    if sum.is_zero() {
        return CoeffAtom::zero();
    }
    CoeffAtom::scaled_sqrt(sum, under).expect("positive factorial ratio")
}

/// `⟨l1 m1 l2 m2 | l3 m3⟩ = (-1)^(l1-l2+m3) √(2 l3 + 1) (l1 l2 l3; m1 m2 -m3)`.
pub fn clebsch_gordan(l1: i64, m1: i64, l2: i64, m2: i64, l3: i64, m3: i64) -> CoeffAtom {
    let tj = three_j(ThreeJArgs::new([l1, l2, l3], [m1, m2, -m3]));
    if tj.is_zero() {
        return tj;
    }
    let hat = CoeffAtom::sqrt(Rational::from_integer(BigInt::from(2 * l3 + 1))).expect("positive");
    let v = tj.mul(&hat);
    if (l1 - l2 + m3).rem_euclid(2) == 1 {
        v.neg()
    } else {
        v
    }
}
