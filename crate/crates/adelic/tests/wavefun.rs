use adelic::text::{parse_op, parse_ratfunc};
use adelic::wavefun::{validate, Involution, Param};
use adelic::{Error, Rf, Scalar, Var};

fn h(s: &str) -> Rf {
    parse_ratfunc(s).unwrap()
}

fn real(name: &str) -> Vec<Param> {
    vec![Param { var: Var::named(name), real: true }]
}

const DG: &str = "((x+1/z)^3-z^(-3)-r)/(x^3-r)";

#[test]
fn exp_is_trivial() {
    let w = validate::<Scalar>("exp", h("1"), vec![]).unwrap();
    assert!(w.p.is_one() && w.q.is_one());
    assert_eq!(w.d1, 0);
    assert_eq!(w.d2(), Some(0));
    assert_eq!(w.pw, parse_op("(1) Dx^0").unwrap());
    assert_eq!(w.codegree.as_ref().unwrap().ptilde, parse_op("(1) Dx^0").unwrap());
    assert_eq!(w.adjoint().unwrap().prefactor, h("1"));
}

#[test]
fn cm1_degree_witness() {
    let w = validate::<Scalar>("cm1", h("(x*z-1)/(x*z)"), vec![]).unwrap();
    assert_eq!(w.p, adelic::text::parse_poly("x").unwrap());
    assert_eq!(w.q, adelic::text::parse_poly("z").unwrap());
    assert_eq!(w.pw, parse_op("(-x) Dx^1 + (-1) Dx^0").unwrap());
    assert_eq!(w.d1, 1);
    // (xz-1)/(xz) e^{-xz} has no constant-coefficient inverse: not adelic here
    assert!(w.codegree.is_none());
    assert_eq!(w.involution(Involution::A).unwrap_err(), Error::MissingWitness);
}

#[test]
fn kdv1_is_self_adjoint() {
    let w = validate::<Scalar>("kdv1", h("(x*z+1)/(x*z)"), vec![]).unwrap();
    assert_eq!(w.d1, 1);
    assert_eq!(w.d2(), Some(1));
    assert_eq!(w.adjoint().unwrap().prefactor, *w.h());
    assert!(w.is_fixed("ac").unwrap());
    // a inverts constant multipliers and c conjugates them, so a unimodular
    // multiplier survives ac while 2i does not
    let wi = validate::<Scalar>("kdv1i", h("i*(x*z+1)/(x*z)"), vec![]).unwrap();
    assert!(wi.is_fixed("ac").unwrap());
    let w2i = validate::<Scalar>("kdv1-2i", h("2*i*(x*z+1)/(x*z)"), vec![]).unwrap();
    assert!(!w2i.is_fixed("ac").unwrap());
}

#[test]
fn literal_dg_degrees() {
    // literal form: p = x^3 + r, q = z^3
    let w = validate::<Scalar>("dg-literal", h("((x+1/z)^3-z^3+r)/(x^3+r)"), real("r")).unwrap();
    assert_eq!(w.p, adelic::text::parse_poly("x^3+r").unwrap());
    assert_eq!(w.q, adelic::text::parse_poly("z^3").unwrap());
    assert_eq!(w.d1, 6);
}

#[test]
fn dg_wave_function() {
    let w = validate::<Scalar>("dg139", h(DG), real("r")).unwrap();
    assert_eq!(w.d1, 2);
    assert_eq!(w.d2(), Some(2));
    assert!(w.is_fixed("ac").unwrap());
    assert!(w.is_fixed("a").unwrap());
}

#[test]
fn involutions_square_to_identity_and_ab_squared_is_s() {
    for (name, src) in [("exp", "1"), ("kdv1", "(x*z+1)/(x*z)"), ("b52", "(x^2*z^2+3*x*z+3)/(x^2*z^2)"), ("dg139", DG)] {
        let w = validate::<Scalar>(name, h(src), real("r")).unwrap();
        for t in [Involution::A, Involution::B, Involution::S, Involution::C] {
            let back = w.involution(t).unwrap().involution(t).unwrap();
            assert_eq!(back.h(), w.h(), "{name} {t:?}");
        }
        let abab = w.apply_word(&Involution::word("abab").unwrap()).unwrap();
        let s = w.involution(Involution::S).unwrap();
        assert_eq!(abab.h(), s.h(), "{name}");
    }
}
