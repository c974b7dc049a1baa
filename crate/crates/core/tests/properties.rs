use std::sync::Arc;

use locmat::exactla::{det_poly, det_poly_bareiss, det_poly_cofactor};
use locmat::invariants::{
    normalized_det, normalized_rank, radical_eq, rank_by_degree, DegreeStrategy,
};
use locmat::preserver::{jordan_check, jordan_pair_holds};
use locmat::{Element, ExactMatrix, Field, MatLinearMap, RadicalValue, Scalar, Steinitz, TowerDescriptor, Verdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn steinitz() -> impl Strategy<Value = Steinitz> {
    // exponent 4 stands for ∞
    prop::collection::vec(0u64..=4, PRIMES.len()).prop_map(|exps| {
        let mut s = Steinitz::one();
        for (p, e) in PRIMES.iter().zip(exps) {
            let t = match e {
                0 => Steinitz::one(),
                4 => Steinitz::prime_power_infinite(*p).unwrap(),
                e => Steinitz::from_nat(p.pow(e as u32)).unwrap(),
            };
            s = s.mul(&t);
        }
        s
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn scalar(field: Field) -> BoxedStrategy<Scalar> {
    match field {
        Field::Q => rational().prop_map(|r| Scalar::from_rational(Field::Q, r)).boxed(),
        Field::Qi => (rational(), rational())
            .prop_map(|(re, im)| Scalar::gaussian(re, im))
            .boxed(),
    }
}

fn matrix_in(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(scalar(field), rows * cols)
        .prop_map(move |data| ExactMatrix::from_vec(field, rows, cols, data))
}

fn square(max: usize) -> impl Strategy<Value = ExactMatrix> {
    (prop_oneof![Just(Field::Q), Just(Field::Qi)], 1..=max)
        .prop_flat_map(|(field, n)| matrix_in(field, n, n))
}

fn square_pair(max: usize) -> impl Strategy<Value = (ExactMatrix, ExactMatrix)> {
    (prop_oneof![Just(Field::Q), Just(Field::Qi)], 1..=max)
        .prop_flat_map(|(field, n)| (matrix_in(field, n, n), matrix_in(field, n, n)))
}

/// Product of a random integer matrix with a sparse 0/1 one, so low ranks are common.
fn low_rank_q(max: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max).prop_flat_map(|n| {
        (
            matrix_in(Field::Q, n, n),
            prop::collection::vec(prop::bool::weighted(0.3), n * n),
        )
            .prop_map(move |(a, mask)| {
                let data = mask.iter().map(|&b| Scalar::from_int(Field::Q, b as i64)).collect();
                &a * &ExactMatrix::from_vec(Field::Q, n, n, data)
            })
    })
}

fn tower() -> impl Strategy<Value = Arc<TowerDescriptor>> {
    (
        1u64..=3,
        prop::collection::vec(2u64..=3, 0..=1),
        prop::collection::vec(2u64..=3, 1..=2),
    )
        .prop_map(|(n1, prefix, cycle)| Arc::new(TowerDescriptor::new(n1, prefix, cycle).unwrap()))
}

fn naive_product(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(a.field(), a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = a.field().zero();
            for k in 0..a.cols() {
                acc = &acc + &(a.get(i, k) * b.get(k, j));
            }
            out.set(i, j, acc);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steinitz_mul_is_commutative_and_associative(s in steinitz(), t in steinitz(), u in steinitz()) {
        prop_assert_eq!(s.mul(&t), t.mul(&s));
        prop_assert_eq!(s.mul(&t).mul(&u), s.mul(&t.mul(&u)));
    }

    #[test]
    fn steinitz_gcd_lcm_bracket(s in steinitz(), t in steinitz()) {
        let g = s.gcd(&t);
        let l = s.lcm(&t);
        prop_assert!(g.divides(&s) && g.divides(&t));
        prop_assert!(s.divides(&l) && t.divides(&l));
        prop_assert_eq!(g.mul(&l), s.mul(&t));
        prop_assert_eq!(s.divides(&t), s.lcm(&t) == t);
    }

    #[test]
    fn steinitz_text_round_trips(s in steinitz()) {
        let text = s.to_string();
        prop_assert_eq!(text.parse::<Steinitz>().unwrap(), s);
    }

    #[test]
    fn product_matches_entrywise_sum((a, b) in square_pair(4)) {
        prop_assert_eq!(&a * &b, naive_product(&a, &b));
    }

    #[test]
    fn product_handles_rectangles(a in matrix_in(Field::Q, 2, 3), b in matrix_in(Field::Q, 3, 4)) {
        prop_assert_eq!(&a * &b, naive_product(&a, &b));
    }

    #[test]
    fn bareiss_det_agrees_with_cofactor(a in square(4)) {
        let zero = ExactMatrix::zeros(a.field(), a.rows(), a.rows());
        let by_cofactor = det_poly_cofactor(&zero, &a).unwrap().coeff(0);
        prop_assert_eq!(a.det().unwrap(), by_cofactor);
    }

    #[test]
    fn det_poly_routes_agree((a, b) in square_pair(4)) {
        prop_assert_eq!(det_poly_cofactor(&a, &b).unwrap(), det_poly_bareiss(&a, &b).unwrap());
    }

    #[test]
    fn det_poly_evaluates_to_det((a, b) in square_pair(4), t in -5i64..=5) {
        let p = det_poly(&a, &b).unwrap();
        let ts = Scalar::from_int(a.field(), t);
        let direct = (&a.scale(&ts) + &b).det().unwrap();
        prop_assert_eq!(p.eval(&ts), direct);
        prop_assert!(p.degree().map_or(true, |d| d <= a.rank()));
    }

    #[test]
    fn det_is_multiplicative((a, b) in square_pair(4)) {
        prop_assert_eq!((&a * &b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn kron_rank_and_det_factor(a in square(3), k in 1usize..=3) {
        let b = ExactMatrix::identity(a.field(), k);
        let big = a.kron(&b);
        prop_assert_eq!(big.rank(), a.rank() * k);
        prop_assert_eq!(big.det().unwrap(), a.det().unwrap().pow(k as u32));
        prop_assert_eq!(a.kron_identity(k), big);
    }

    #[test]
    fn kron_rank_is_multiplicative(a in low_rank_q(3), b in low_rank_q(3)) {
        prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
    }

    #[test]
    fn promotion_preserves_normalized_invariants(
        t in tower(),
        seed in prop::collection::vec(-3i64..=3, 9),
        jump in 1usize..=3,
    ) {
        let n = t.stage_size(1).unwrap();
        let data = (0..n * n).map(|i| Scalar::from_int(Field::Q, seed[i % seed.len()] + (i / seed.len()) as i64)).collect();
        let a = Element::new(t.clone(), 1, ExactMatrix::from_vec(Field::Q, n, n, data)).unwrap();
        let b = a.promote(1 + jump).unwrap();
        prop_assert_eq!(normalized_rank(&a), normalized_rank(&b));
        prop_assert!(radical_eq(&normalized_det(&a), &normalized_det(&b)));
        prop_assert_eq!(&a, &b);
    }

    #[test]
    fn radical_canonical_form_is_stable(v in rational(), n in 1u64..=6, k in 1u32..=3) {
        let v = num_traits::Signed::abs(&v);
        let r = RadicalValue::new(v.clone(), n);
        prop_assert_eq!(r.canonicalize(), r.clone());
        let raised = RadicalValue::new(num_traits::Pow::pow(&v, k), n * k as u64);
        prop_assert_eq!(&raised, &r);
        prop_assert!(radical_eq(&raised, &r));
    }

    #[test]
    fn degree_strategies_bound_rank(a in low_rank_q(5), trials in 1usize..=4, seed: u64) {
        let r = a.rank();
        prop_assert_eq!(rank_by_degree(&a, DegreeStrategy::Witness).unwrap(), r);
        let random = DegreeStrategy::Random { trials, seed };
        prop_assert!(rank_by_degree(&a, random).unwrap() <= r);
    }

    #[test]
    fn inner_maps_pass_jordan_and_agree_on_pairs(
        (u, x, y) in (prop_oneof![Just(Field::Q), Just(Field::Qi)], 1..=3usize)
            .prop_flat_map(|(f, n)| (matrix_in(f, n, n), matrix_in(f, n, n), matrix_in(f, n, n))),
        transpose: bool,
    ) {
        let Ok(inv) = u.inverse() else { return Ok(()); };
        let map = if transpose {
            MatLinearMap::left_right_transpose(&u, &inv)
        } else {
            MatLinearMap::left_right(&u, &inv)
        };
        prop_assert_eq!(jordan_check(&map), Verdict::Certified);
        prop_assert!(jordan_pair_holds(&map, &x, &y));
    }

    #[test]
    fn jordan_failures_are_genuine(c in square(2)) {
        let map = MatLinearMap::left_right(&c, &ExactMatrix::identity(c.field(), c.rows()));
        match jordan_check(&map) {
            // a ↦ c·a is Jordan exactly when c is a central idempotent
            Verdict::Certified => {
                prop_assert!(c.is_identity() || c.is_zero());
            }
            Verdict::CertifiedFail(w) => {
                let (x, y) = match w {
                    locmat::preserver::Witness::Pair(x, y) => (x, y),
                    locmat::preserver::Witness::Element(e) => (e.clone(), e),
                };
                prop_assert!(!jordan_pair_holds(&map, &x, &y));
            }
            other => prop_assert!(false, "unexpected verdict {:?}", other),
        }
    }
}
