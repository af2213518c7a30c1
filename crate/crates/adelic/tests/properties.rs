use adelic::field::imag_unit;
use adelic::text::{parse_op, parse_poly, render_op, render_poly};
use adelic::{Field, Mono, Op, Poly, Rf, Scalar, Substitution, Var};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -2i64..=2).prop_map(|(n, d, im)| {
        Scalar::from_frac(n, d).add(&imag_unit::<Scalar>().unwrap().mul(&Scalar::from_int(im)))
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((scalar(), 0u32..=3, 0u32..=2), 0..4).prop_map(|ts| {
        Poly::from_terms(ts.into_iter().map(|(c, a, b)| (Mono::from_pairs(&[(Var::Z, a), (Var::T, b)]), c)))
    })
}

fn coeff() -> impl Strategy<Value = Rf> {
    (poly(), prop::bool::weighted(0.25)).prop_map(|(p, frac)| {
        let r = Rf::from(p);
        if frac {
            r.div_ref(&Rf::from(parse_poly::<Scalar>("z+1").unwrap())).unwrap()
        } else {
            r
        }
    })
}

fn op() -> impl Strategy<Value = Op> {
    prop::collection::vec(coeff(), 1..=4).prop_map(|cs| Op::new(Var::Z, cs))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
    }

    #[test]
    fn compose_is_associative(a in op(), b in op(), c in op()) {
        let l = a.compose(&b).unwrap().compose(&c).unwrap();
        let r = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn adjoint_reverses_products(a in op(), b in op()) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.formal_adjoint(), b.formal_adjoint().compose(&a.formal_adjoint()).unwrap());
        prop_assert_eq!(ab.hermitian_adjoint(), b.hermitian_adjoint().compose(&a.hermitian_adjoint()).unwrap());
        prop_assert_eq!(a.formal_adjoint().formal_adjoint(), a);
    }

    #[test]
    fn sign_flip_is_an_involutive_homomorphism(a in op(), b in op()) {
        prop_assert_eq!(a.sign_flip().sign_flip(), a.clone());
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.sign_flip(), a.sign_flip().compose(&b.sign_flip()).unwrap());
    }

    #[test]
    fn substitution_respects_composition(a in op(), b in op(), n in 1i64..=3, m in -2i64..=2) {
        let sub = Substitution { alpha: Scalar::from_int(n), beta: Scalar::from_int(m), params: vec![] };
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.substitute(&sub).unwrap(), a.substitute(&sub).unwrap().compose(&b.substitute(&sub).unwrap()).unwrap());
        let inv = Substitution {
            alpha: Scalar::from_frac(1, n),
            beta: Scalar::from_frac(-m, n),
            params: vec![],
        };
        prop_assert_eq!(a.substitute(&sub).unwrap().substitute(&inv).unwrap(), a);
    }

    #[test]
    fn text_round_trip(a in op(), p in poly()) {
        // the zero operator has no variable to print
        prop_assume!(!a.is_zero());
        prop_assert_eq!(parse_op::<Scalar>(&render_op(&a)).unwrap(), a);
        prop_assert_eq!(parse_poly::<Scalar>(&render_poly(&p)).unwrap(), p);
    }
}
