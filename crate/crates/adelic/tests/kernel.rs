use adelic::kernel::{
    cd_kernel, commutation_residual, ftc_residual, off_diagonal, reflection_residual, spectral_element,
    verify_commutation_fourier, verify_reflection_symbolic,
};
use adelic::reflector::{find_reflected, rotate_op, ReflectorConfig};
use adelic::text::{parse_op, parse_poly, parse_ratfunc};
use adelic::wavefun::{validate, Param, WaveFunction};
use adelic::{Op, Qe, Rf, Scalar, Var};

fn wf(name: &str, h: &str, params: &[&str]) -> WaveFunction<Scalar> {
    let ps = params.iter().map(|p| Param { var: Var::named(p), real: true }).collect();
    validate(name, parse_ratfunc(h).unwrap(), ps).unwrap()
}

fn op(s: &str) -> Op {
    parse_op(s).unwrap()
}

fn rf(s: &str) -> Rf {
    parse_ratfunc(s).unwrap()
}

const DG: &str = "((x+1/z)^3-z^(-3)-r)/(x^3-r)";

#[test]
fn spectral_elements() {
    let e = spectral_element(&wf("exp", "1", &[]), 4).unwrap();
    assert_eq!((e.l, e.pi), (op("(-1) Dx^1"), parse_poly("z").unwrap()));
    let k = spectral_element(&wf("kdv1", "(x*z+1)/(x*z)", &[]), 6).unwrap();
    assert_eq!((k.l, k.pi), (op("(1) Dx^2 + (-2/x^2) Dx^0"), parse_poly("z^2").unwrap()));
    let d = spectral_element(&wf("dg139", DG, &["r"]), 8).unwrap();
    let w = wf("dg139", DG, &["r"]);
    assert_eq!(w.psi.apply(&d.l).unwrap().prefactor, w.h().mul_poly(&d.pi));
    assert_eq!(d.pi, parse_poly("z^2").unwrap());
}

#[test]
fn exp_kernel() {
    let k = cd_kernel(&wf("exp", "1", &[]), &rf("s")).unwrap();
    assert_eq!(k.form, Qe::new(parse_poly("-s*z-s*w").unwrap(), rf("1/(z+w)")));
    assert!(verify_reflection_symbolic(&op("(z+t) Dz^1 + (s*z) Dz^0"), &k).unwrap());
    assert!(verify_reflection_symbolic(&op("(3/2) Dz^0"), &k).unwrap());
    // symmetric in z and w, so ∂z passes the kernel identity
    assert!(verify_reflection_symbolic(&op("(1) Dz^1"), &k).unwrap());
    assert!(!verify_reflection_symbolic(&op("(z) Dz^1"), &k).unwrap());
    assert!(!reflection_residual(&op("(z) Dz^1"), &k.form).unwrap().is_zero());
}

#[test]
fn kernel_derivative_in_s() {
    for (name, h, ps) in [("exp", "1", vec![]), ("kdv1", "(x*z+1)/(x*z)", vec![]), ("dg139", DG, vec!["r"])] {
        let w = wf(name, h, &ps);
        let k = cd_kernel(&w, &rf("s")).unwrap();
        assert!(ftc_residual(&w, &k).unwrap().is_zero(), "{name}");
    }
}

#[test]
fn dg_kernel_is_a_wronskian_quotient() {
    let w = wf("dg139", DG, &["r"]);
    let k = cd_kernel(&w, &rf("s")).unwrap();
    // (ψ(s,z) ψ_x(s,w) − ψ_x(s,z) ψ(s,w)) / (z² − w²)
    let psi = |v: Var| w.psi.subst_poly(Var::Z, &adelic::Poly::var(v)).unwrap();
    let (pz, pw) = (psi(Var::Z), psi(Var::W));
    let num = pz.mul(&pw.diff(Var::X)).add(&pz.diff(Var::X).mul(&pw).scale(&rf("-1"))).unwrap();
    let at_s = Qe::new(num.exponent.subst(Var::X, &parse_poly("s").unwrap()), num.prefactor.subst(Var::X, &rf("s")).unwrap());
    assert_eq!(k.form.exponent, at_s.exponent);
    assert_eq!(k.form.prefactor, at_s.prefactor.div_ref(&rf("z^2-w^2")).unwrap());
}

#[test]
fn reflection_on_whole_solution_spaces() {
    for (name, h, ps) in [("exp", "1", vec![]), ("dg139", DG, vec!["r"])] {
        let w = wf(name, h, &ps);
        let cfg = ReflectorConfig::symbolic();
        let res = find_reflected(&w, &cfg).unwrap();
        let k = cd_kernel(&w, &cfg.s).unwrap();
        for mm in &res.solution_space {
            assert!(verify_reflection_symbolic(&mm.r, &k).unwrap(), "{name}: {}", mm.r);
        }
    }
}

#[test]
fn exp_rotated_commutation() {
    let w = wf("exp", "1", &[]);
    let (s, t) = (rf("s"), rf("t"));
    let rt = op("(z-t) Dz^1 + (-i*s*z) Dz^0");
    assert!(verify_commutation_fourier(&rt, &w, &s, &t).unwrap().holds());
    assert!(!verify_commutation_fourier(&op("(1) Dz^1"), &w, &s, &t).unwrap().holds());
    let rot = rotate_op(&op("(z+t) Dz^1 + (s*z) Dz^0"), Var::T).unwrap();
    let koff = off_diagonal(&cd_kernel(&w, &s).unwrap()).unwrap();
    assert!(commutation_residual(&rot.companion, &koff).unwrap().is_zero());
}

#[test]
fn exp_companions() {
    let w = wf("exp", "1", &[]);
    let (s, t) = (rf("s"), rf("t"));
    let quoted = op("((z-t)^2) Dz^2 + (2*z-2*t-2*i*s*z^2+2*i*s*t*z) Dz^1 + (-2*i*s*z+i*s*t) Dz^0");
    let corrected = op("((z-t)^2) Dz^2 + (2*z-2*t-2*i*s*z^2+2*i*s*t*z) Dz^1 + (-2*i*s*z+i*s*t-s^2*z^2) Dz^0");
    let rot = rotate_op(&op("(z+t) Dz^1 + (s*z) Dz^0"), Var::T).unwrap();
    assert_eq!(rot.companion, corrected);
    assert!(verify_commutation_fourier(&corrected, &w, &s, &t).unwrap().holds());
    let bad = verify_commutation_fourier(&quoted, &w, &s, &t).unwrap();
    assert!(!bad.kernel_residual.is_zero());
}
