use adelic::fourier::{
    b_inverse, check_caps, dimension_table, find_pairs, find_pairs_default, find_pairs_with, intertwine, AnsatzCaps,
    LeftMode,
};
use adelic::text::{parse_op, parse_ratfunc};
use adelic::wavefun::{validate, Param, WaveFunction};
use adelic::{Op, Scalar, Var};

fn wf(name: &str, h: &str, params: &[&str]) -> WaveFunction<Scalar> {
    let ps = params.iter().map(|p| Param { var: Var::named(p), real: true }).collect();
    validate(name, parse_ratfunc(h).unwrap(), ps).unwrap()
}

fn op(s: &str) -> Op {
    parse_op(s).unwrap()
}

fn holds(w: &WaveFunction<Scalar>, l: &Op, r: &Op) -> bool {
    w.psi.apply(l).unwrap() == w.psi.apply(r).unwrap()
}

#[test]
fn exp_slices_are_full() {
    let e = wf("exp", "1", &[]);
    for ell in 1..=3 {
        for m in 1..=3 {
            let b = find_pairs_default(&e, ell, m).unwrap();
            assert_eq!(b.dim(), (ell + 1) * (m + 1), "({ell},{m})");
            for p in &b.pairs {
                assert!(holds(&e, &p.l, &p.r));
            }
        }
    }
}

#[test]
fn exp_unit_slice() {
    let e = wf("exp", "1", &[]);
    let b = find_pairs_default(&e, 1, 1).unwrap();
    assert!(b.pairs[0].is_constant());
    let rs = b.r_ops();
    for want in ["(z) Dz^0", "(1) Dz^1", "(z) Dz^1"] {
        assert!(adelic::fourier::span_coordinates(&rs, &op(want)).is_some(), "{want}");
    }
    assert_eq!(b_inverse(&b, &op("(z) Dz^0")).unwrap(), op("(-1) Dx^1"));
    assert_eq!(b_inverse(&b, &op("(-1) Dz^1")).unwrap(), op("(x) Dx^0"));
}

#[test]
fn b_inverse_reverses_products() {
    let e = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    let b = find_pairs_default(&e, 4, 4).unwrap();
    let small: Vec<_> = b.pairs.iter().filter(|p| !p.is_constant() && p.order() <= 2 && p.coorder() <= 2).collect();
    assert!(small.len() >= 2);
    for p1 in &small {
        for p2 in &small {
            let r = p1.r.compose(&p2.r).unwrap();
            let l = b_inverse(&b, &r).unwrap();
            assert_eq!(l, p2.l.compose(&p1.l).unwrap());
        }
    }
}

#[test]
fn modes_agree() {
    for (name, h) in [("exp", "1"), ("kdv1", "(x*z+1)/(x*z)")] {
        let w = wf(name, h, &[]);
        for (ell, m) in [(1, 1), (2, 2), (2, 3)] {
            let caps = AnsatzCaps::defaults(&w, ell, m);
            let a = find_pairs_with(&w, ell, m, caps, LeftMode::Eliminate).unwrap();
            let b = find_pairs_with(&w, ell, m, caps, LeftMode::Ansatz).unwrap();
            assert_eq!(a.dim(), b.dim(), "{name} ({ell},{m})");
        }
    }
}

#[test]
fn kdv1_deficit_is_two() {
    let w = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    let t = dimension_table(&w, 3, 3).unwrap();
    assert!(t.consistent);
    assert_eq!(t.n, Some(2));
    let mut b = find_pairs_default(&w, 2, 2).unwrap();
    assert!(check_caps(&w, &mut b).unwrap());
    assert!(b.warning.is_none());
}

#[test]
fn intertwine_kdv1_spectral() {
    let w = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    let l = intertwine(&w, &op("(z^2) Dz^0")).unwrap();
    assert_eq!(l, op("(1) Dx^2 + (-2/x^2) Dx^0"));
    assert!(intertwine(&w, &op("(z) Dz^0")).is_err());
}

#[test]
fn caps_too_small_is_degenerate() {
    let w = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    let caps = AnsatzCaps { a: 0, b: 3, c: 3, deg_u: 0, deg_v: 2 };
    assert!(find_pairs(&w, 1, 1, caps).is_err());
}
