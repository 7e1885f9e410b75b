mod common;

use cartensor::coeff::{atom_mul, normalize_atom, rat, CoeffAtom, CoeffSum};
use cartensor::oracle::{eval_result, random_assignment};
use cartensor::parser::parse;
use cartensor::reduce::{reduce, CouplingExpr};
use cartensor::render::result_text;
use cartensor::scalar::parse_scalar;
use cartensor::tensor::{TensorPoly, TensorTerm};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn atom() -> impl Strategy<Value = CoeffAtom> {
    (-30i64..=30, 1i64..=12, 1i64..=1000, 1i64..=8, -4i32..=4, 0i64..4)
        .prop_map(|(n, d, rn, rd, p, i)| CoeffAtom::new(rat(n, d), rat(rn, rd), p, i).unwrap())
}

/// Sum of atom magnitudes, the scale for rounding error when atoms cancel.
fn size(s: &CoeffSum) -> f64 {
    s.atoms().iter().map(|a| a.to_complex().norm()).sum()
}

fn close(x: num_complex::Complex64, y: num_complex::Complex64, scale: f64) -> bool {
    (x - y).norm() <= 1e-14 * scale.max(1.0)
}

/// Mirror image: every coupling node with its children swapped, and the
/// sign picked up by the Clebsch-Gordan exchange symmetry.
fn mirror(e: &CouplingExpr) -> (CouplingExpr, bool) {
    match e {
        CouplingExpr::Harmonic { .. } => (e.clone(), false),
        CouplingExpr::Couple { left, right, l } => {
            let (ml, sl) = mirror(left);
            let (mr, sr) = mirror(right);
            let flip = (left.rank() + right.rank() + l) % 2 == 1;
            (CouplingExpr::couple(mr, ml, *l), sl ^ sr ^ flip)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn atom_mul_commutes_and_associates(a in atom(), b in atom(), c in atom()) {
        prop_assert_eq!(atom_mul(&a, &b), atom_mul(&b, &a));
        prop_assert_eq!(atom_mul(&atom_mul(&a, &b), &c), atom_mul(&a, &atom_mul(&b, &c)));
    }

    #[test]
    fn normalize_is_idempotent(a in atom()) {
        let n = normalize_atom(a);
        prop_assert_eq!(normalize_atom(n.clone()), n);
    }

    #[test]
    fn sums_agree_with_floats(xs in prop::collection::vec(atom(), 1..5), ys in prop::collection::vec(atom(), 1..5)) {
        let (s, t) = (CoeffSum::from_atoms(xs), CoeffSum::from_atoms(ys));
        let (ms, mt) = (size(&s), size(&t));
        prop_assert!(close(s.add(&t).to_complex(), s.to_complex() + t.to_complex(), ms + mt));
        prop_assert!(close(s.mul(&t).to_complex(), s.to_complex() * t.to_complex(), ms * mt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_insertion_order(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let e = common::random_expr(&mut rng, 2, 3, 3, 8);
        let poly = reduce(&e).unwrap().poly;
        // Split each coefficient in two so merging is exercised too.
        let mut terms: Vec<TensorTerm> = poly
            .to_terms()
            .into_iter()
            .flat_map(|t| {
                let half = t.coeff.clone() / rat(2, 1);
                [TensorTerm { coeff: half.clone(), ..t.clone() }, TensorTerm { coeff: half, ..t }]
            })
            .collect();
        terms.shuffle(&mut rng);
        prop_assert_eq!(TensorPoly::from_terms(poly.rank(), terms), poly);
    }

    #[test]
    fn swapping_coupled_factors_only_changes_sign(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let e = common::random_expr(&mut rng, 3, 3, 2, 10);
        let (m, flip) = mirror(&e);
        let (a, b) = (reduce(&e).unwrap(), reduce(&m).unwrap());
        let sign = if flip { rat(-1, 1) } else { rat(1, 1) };
        prop_assert_eq!(&a.prefactor, &b.prefactor);
        prop_assert_eq!(a.poly.scale(&sign), b.poly);
    }
}

#[test]
fn parser_round_trips_fuzzed_expressions() {
    let mut rng = common::rng(7);
    for _ in 0..1000 {
        let e = common::random_expr(&mut rng, 4, 4, 4, 16);
        let text = e.to_string();
        assert_eq!(parse(&text).unwrap(), e, "{text}");
        // Same AST, same bytes.
        assert_eq!(parse(&text).unwrap().to_string(), text);
    }
}

#[test]
fn rendered_scalars_evaluate_like_the_result() {
    let mut rng = common::rng(11);
    for _ in 0..40 {
        let e = common::random_expr(&mut rng, 3, 3, 0, 10);
        let r = reduce(&e).unwrap();
        let text = result_text(&r);
        let back = parse_scalar(&text).unwrap();
        for s in 0..5 {
            let assign = random_assignment(&e.symbols(), 3, s);
            let got = back.eval(&|v| assign[v].xyz());
            let want = eval_result(&r, &assign)[0];
            assert!((got - want).norm() < 1e-14, "{text}: {got} vs {want}");
        }
    }
}
