use adelic::concom::concomitant;
use adelic::fourier::intertwine;
use adelic::reflector::{find_reflected, rotate_op, rotate_to_commuting, ReflectorConfig};
use adelic::text::{parse_op, parse_ratfunc};
use adelic::wavefun::{validate, Param, WaveFunction};
use adelic::{Op, Scalar, Var};
use std::time::Instant;

fn wf(name: &str, h: &str, params: &[&str]) -> WaveFunction<Scalar> {
    let ps = params.iter().map(|p| Param { var: Var::named(p), real: true }).collect();
    validate(name, parse_ratfunc(h).unwrap(), ps).unwrap()
}

fn op(s: &str) -> Op {
    parse_op(s).unwrap()
}

const DG_ORDER3: &str = include_str!("data/dg_order3.txt");

#[test]
fn exp_first_order() {
    let e = wf("exp", "1", &[]);
    let res = find_reflected(&e, &ReflectorConfig::symbolic()).unwrap();
    assert_eq!((res.ell, res.m), (1, 1));
    let want = op("(z+t) Dz^1 + (s*z) Dz^0");
    assert!(res.contains(&want));
    assert_eq!(res.canonical.r, want);
    assert_eq!(res.canonical.partners, vec![intertwine(&e, &want).unwrap()]);
    assert!(res.certificates.iter().all(|c| c.is_zero()));
}

#[test]
fn exp_at_order_two() {
    let e = wf("exp", "1", &[]);
    let mut cfg = ReflectorConfig::symbolic();
    cfg.orders = Some((2, 2));
    let res = find_reflected(&e, &cfg).unwrap();
    assert!(res.contains(&op("(z+t) Dz^1 + (s*z) Dz^0")));
    assert_eq!(res.canonical.r.order(), 1);
}

#[test]
fn members_satisfy_certificates() {
    let e = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    let cfg = ReflectorConfig::symbolic();
    let res = find_reflected(&e, &cfg).unwrap();
    for mm in &res.solution_space {
        assert!(concomitant(&mm.r).vanishes_at(&cfg.t.neg_ref()).unwrap());
        assert!(concomitant(&mm.partners[0]).vanishes_at(&cfg.s).unwrap());
        assert_eq!(e.psi.apply(&mm.partners[0]).unwrap(), e.psi.apply(&mm.r).unwrap());
    }
    assert!(res.canonical.r.order() <= 2);
}

#[test]
fn dg_order_three_membership() {
    let w = wf("dg139", "((x+1/z)^3-z^(-3)-r)/(x^3-r)", &["r"]);
    let start = Instant::now();
    let res = find_reflected(&w, &ReflectorConfig::symbolic()).unwrap();
    eprintln!("dg139 reflector in {:?}, dim {}", start.elapsed(), res.solution_space.len());
    assert_eq!((res.ell, res.m), (4, 4));
    assert!(res.contains(&op(DG_ORDER3)));
    assert_eq!(res.canonical.r.order(), 2);
}

#[test]
fn exp_rotation() {
    let e = wf("exp", "1", &[]);
    let res = find_reflected(&e, &ReflectorConfig::symbolic()).unwrap();
    let rot = rotate_to_commuting(&res).unwrap();
    assert_eq!(rot.r, op("(z-t) Dz^1 + (-i*s*z) Dz^0"));
}

#[test]
fn dg_rotated_adjoint_relation() {
    let rt = rotate_op(&op(DG_ORDER3), Var::T).unwrap().r;
    let shift = op("(s^2*t^2+4) Dz^0");
    let sum = rt.hermitian_adjoint().add(&rt).unwrap().sub(&shift).unwrap();
    assert!(sum.is_zero());
}
