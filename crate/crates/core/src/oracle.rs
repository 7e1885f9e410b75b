//! Floating-point reference evaluation of coupled spherical harmonics,
//! independent of the symbolic engine: its own Clebsch-Gordan coefficients,
//! associated Legendre recurrences and spherical basis.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::reduce::{reduce, CouplingExpr, ReduceError, ReductionResult};
use crate::tensor::{Leg, TensorPoly, VectorSymbol};

pub const DEFAULT_SEED: u64 = 0x5eed_1e55;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    /// Accepts a vector whose norm is 1 within `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Option<Self> {
        let n2 = x * x + y * y + z * z;
        ((n2 - 1.0).abs() < 1e-12).then_some(UnitVector([x, y, z]))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Option<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        (n > 1e-300).then(|| UnitVector([x / n, y / n, z / n]))
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        loop {
            let v: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            if let Some(u) = Self::normalized(v[0], v[1], v[2]) {
                return u;
            }
        }
    }

    pub fn xyz(&self) -> [f64; 3] {
        self.0
    }
}

pub type Assignment = BTreeMap<VectorSymbol, UnitVector>;

/// Random unit vectors for `symbols`, drawn from stream `sample` of `seed`.
pub fn random_assignment<'a>(
    symbols: impl IntoIterator<Item = &'a VectorSymbol>,
    seed: u64,
    sample: u64,
) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    symbols
        .into_iter()
        .map(|s| (s.clone(), UnitVector::random(&mut rng)))
        .collect()
}

fn factorial_f64(n: i64) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// Clebsch-Gordan coefficient by the Racah formula in double precision.
pub fn cg_f64(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
    if m1 + m2 != m || j < (j1 - j2).abs() || j > j1 + j2 || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    let pre =
        ((2 * j + 1) as f64 * factorial_f64(j1 + j2 - j) * factorial_f64(j1 - j2 + j) * factorial_f64(-j1 + j2 + j)
            / factorial_f64(j1 + j2 + j + 1))
        .sqrt()
            * (factorial_f64(j1 + m1)
                * factorial_f64(j1 - m1)
                * factorial_f64(j2 + m2)
                * factorial_f64(j2 - m2)
                * factorial_f64(j + m)
                * factorial_f64(j - m))
            .sqrt();
    let mut sum = 0.0;
    for k in 0..=(j1 + j2 - j) {
        let d = [
            j1 + j2 - j - k,
            j1 - m1 - k,
            j2 + m2 - k,
            j - j2 + m1 + k,
            j - j1 - m2 + k,
        ];
        if d.iter().any(|&x| x < 0) {
            continue;
        }
        let den: f64 = factorial_f64(k) * d.iter().map(|&x| factorial_f64(x)).product::<f64>();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / den;
    }
    pre * sum
}

/// `P_l(x)` by the three-term recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for n in 1..l {
        let n = n as f64;
        let p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P'_l(x)`; zero for `l = 0`.
pub fn legendre_prime(l: u32, x: f64) -> f64 {
    // P'_{n+1} = P'_{n-1} + (2n+1) P_n
    let mut d = [0.0, 1.0];
    if l < 2 {
        return d[l as usize];
    }
    for n in 1..l {
        let next = d[0] + (2 * n + 1) as f64 * legendre(n, x);
        d = [d[1], next];
    }
    d[1]
}

/// Standard spherical harmonic `Y_lm` with the Condon-Shortley phase,
/// evaluated at a unit vector without angles.
pub fn ylm(l: u32, m: i32, v: &UnitVector) -> Complex64 {
    let [x, y, z] = v.0;
    let am = m.unsigned_abs();
    if am > l {
        return Complex64::new(0.0, 0.0);
    }
    // P_l^m(z) = (-1)^m (1-z²)^{m/2} p(z); (x+iy)^m carries (1-z²)^{m/2} e^{imφ}.
    let mut p_mm = 1.0;
    for k in 1..=am {
        p_mm *= -((2 * k - 1) as f64);
    }
    let p = if l == am {
        p_mm
    } else {
        let mut prev = p_mm;
        let mut cur = z * (2 * am + 1) as f64 * p_mm;
        for n in (am + 2)..=l {
            let next = ((2 * n - 1) as f64 * z * cur - (n + am - 1) as f64 * prev) / (n - am) as f64;
            prev = cur;
            cur = next;
        }
        cur
    };
    let norm = ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * factorial_f64((l - am) as i64)
        / factorial_f64((l + am) as i64))
    .sqrt();
    let xy = Complex64::new(x, y).powu(am);
    let pos = xy * (norm * p);
    if m >= 0 {
        pos
    } else if am % 2 == 0 {
        pos.conj()
    } else {
        -pos.conj()
    }
}

/// `(-i)^l Y_lm`
pub fn contrastandard_ylm(l: u32, m: i32, v: &UnitVector) -> Complex64 {
    let phase = match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    phase * ylm(l, m, v)
}

/// All `2L+1` components of the coupled expression, indexed by `M + L`.
pub fn eval_expr(expr: &CouplingExpr, assign: &Assignment) -> Vec<Complex64> {
    match expr {
        CouplingExpr::Harmonic { l, v } => {
            let u = assign.get(v).unwrap_or_else(|| panic!("no value for vector {v}"));
            (-(*l as i32)..=*l as i32)
                .map(|m| contrastandard_ylm(*l, m, u))
                .collect()
        }
        CouplingExpr::Couple { left, right, l } => {
            let (x, y) = (eval_expr(left, assign), eval_expr(right, assign));
            let (l1, l2, big) = (left.rank() as i64, right.rank() as i64, *l as i64);
            (-big..=big)
                .map(|mm| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m1 in -l1..=l1 {
                        let m2 = mm - m1;
                        if m2.abs() > l2 {
                            continue;
                        }
                        acc += cg_f64(l1, m1, l2, m2, big, mm) * x[(m1 + l1) as usize] * y[(m2 + l2) as usize];
                    }
                    acc
                })
                .collect()
        }
    }
}

/// Spherical unit vectors `e_m`, `m = -1, 0, 1`, for which `Y^{[1]}_m(a)`
/// is proportional to `a · e_m`.
pub fn spherical_unit(m: i32) -> [Complex64; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    match m {
        1 => [c(0.0, s), c(-s, 0.0), c(0.0, 0.0)],
        0 => [c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)],
        -1 => [c(0.0, -s), c(-s, 0.0), c(0.0, 0.0)],
        _ => panic!("spherical index out of range"),
    }
}

/// Rank-`L` spherical basis tensors `e^{[L]}_M` (flattened, slot 0 most
/// significant), built by stretched coupling of `e_m`.
pub fn spherical_basis(big_l: u32) -> Vec<Vec<Complex64>> {
    if big_l == 0 {
        return vec![vec![Complex64::new(1.0, 0.0)]];
    }
    let prev = spherical_basis(big_l - 1);
    let lp = big_l as i64 - 1;
    let size = 3usize.pow(big_l);
    let l = big_l as i64;
    (-l..=l)
        .map(|mm| {
            let mut t = vec![Complex64::new(0.0, 0.0); size];
            for m1 in -1..=1i64 {
                let m2 = mm - m1;
                if m2.abs() > lp {
                    continue;
                }
                let c = cg_f64(1, m1, lp, m2, l, mm);
                if c == 0.0 {
                    continue;
                }
                let e = spherical_unit(m1 as i32);
                let rest = &prev[(m2 + lp) as usize];
                for (i, ei) in e.iter().enumerate() {
                    for (j, r) in rest.iter().enumerate() {
                        t[i * rest.len() + j] += c * ei * r;
                    }
                }
            }
            t
        })
        .collect()
}

fn levi(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Cartesian components of a tensor polynomial (length `3^L`, slot 0 most
/// significant).
pub fn eval_tensor(poly: &TensorPoly, assign: &Assignment) -> Vec<f64> {
    let rank = poly.rank();
    let size = 3usize.pow(rank);
    let vec_of = |v: &VectorSymbol| assign.get(v).unwrap_or_else(|| panic!("no value for vector {v}")).xyz();
    let mut out = vec![0.0; size];
    let mut idx = vec![0usize; rank as usize];
    for (flat, slot) in out.iter_mut().enumerate() {
        let mut f = flat;
        for k in (0..rank as usize).rev() {
            idx[k] = f % 3;
            f /= 3;
        }
        let mut total = 0.0;
        for (m, c) in poly.terms() {
            let mut v = crate::scalar::eval_scalar_monomial(m, &vec_of);
            for (s, i) in &m.vectors {
                v *= vec_of(s)[idx[*i as usize]];
            }
            for (s, t) in &m.deltas {
                if idx[*s as usize] != idx[*t as usize] {
                    v = 0.0;
                }
            }
            for e in &m.eps {
                let comps: Vec<[f64; 3]> = e
                    .iter()
                    .map(|l| match l {
                        Leg::Slot(s) => {
                            let mut u = [0.0; 3];
                            u[idx[*s as usize]] = 1.0;
                            u
                        }
                        Leg::Vec(w) => vec_of(w),
                    })
                    .collect();
                let mut acc = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            acc += levi(i, j, k) * comps[0][i] * comps[1][j] * comps[2][k];
                        }
                    }
                }
                v *= acc;
            }
            if v != 0.0 {
                let c: f64 = num_traits::ToPrimitive::to_f64(c).expect("finite rational");
                total += c * v;
            }
        }
        *slot = total;
    }
    out
}

/// Contracts Cartesian components of a rank-`L` tensor with `e^{[L]}_M`.
pub fn spherical_components(cart: &[Complex64], rank: u32) -> Vec<Complex64> {
    spherical_basis(rank)
        .iter()
        .map(|e| cart.iter().zip(e).map(|(p, q)| p * q).sum())
        .collect()
}

/// Cartesian components of `prefactor · poly` (length `3^L`).
pub fn eval_result_cartesian(r: &ReductionResult, assign: &Assignment) -> Vec<Complex64> {
    let pre = r.prefactor.to_complex();
    eval_tensor(&r.poly, assign).into_iter().map(|x| pre * x).collect()
}

/// Spherical components `M = -L..L` of a reduction result.
pub fn eval_result(r: &ReductionResult, assign: &Assignment) -> Vec<Complex64> {
    spherical_components(&eval_result_cartesian(r, assign), r.rank())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub expr: String,
    pub samples: usize,
    pub seed: u64,
    pub max_abs_err: f64,
    /// Largest imaginary part of a scalar result; zero for tensors.
    pub max_imag_leak: f64,
    pub pass: bool,
}

/// Compares a reduction against the oracle on `samples` random
/// configurations.
pub fn verify_result(r: &ReductionResult, samples: usize, tol: f64, seed: u64) -> VerifyReport {
    let symbols = r.expr.symbols();
    // Samples are independent; the max reduction is order free.
    let (max_err, leak) = (0..samples)
        .into_par_iter()
        .map(|s| {
            let assign = random_assignment(&symbols, seed, s as u64);
            let want = eval_expr(&r.expr, &assign);
            let got = eval_result(r, &assign);
            let err = want
                .iter()
                .zip(&got)
                .map(|(w, g)| (w - g).norm())
                .map(|d| if d.is_nan() { f64::INFINITY } else { d })
                .fold(0.0, f64::max);
            let leak = if r.rank() == 0 { got[0].im.abs() } else { 0.0 };
            (err, leak)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    VerifyReport {
        expr: r.expr.to_string(),
        samples,
        seed,
        max_abs_err: max_err,
        max_imag_leak: leak,
        pass: max_err <= tol && leak <= tol,
    }
}

pub fn verify(expr: &CouplingExpr, samples: usize, tol: f64, seed: u64) -> Result<VerifyReport, ReduceError> {
    Ok(verify_result(&reduce(expr)?, samples, tol, seed))
}
