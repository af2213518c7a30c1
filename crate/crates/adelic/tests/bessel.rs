use adelic::reflector::{membership_report, unrotation};
use adelic::text::parse_ratfunc;
use adelic::wavefun::{validate, WaveFunction};
use adelic::{Op, Rf, Scalar, Var};

fn wf(name: &str, h: &str) -> WaveFunction<Scalar> {
    validate(name, parse_ratfunc(h).unwrap(), vec![]).unwrap()
}

fn rf(s: &str) -> Rf {
    parse_ratfunc(s).unwrap()
}

fn symmetric() -> Op {
    let fs = [
        "z^2*(3*s^6*t^3-54*s^4*t)/6+s^6*z^5-3/2*s^6*t*z^4+12*s^4*z^3",
        "(z-t)*(3*s^4*z^4-3*s^4*t*z^3+12*s^2*z^2+9*s^2*t*z-9*s^2*t^2)",
        "(z-t)^2*(3*s^2*z^3-3/2*s^2*t*z^2+12*t)",
        "(z-t)^3*z^2",
    ];
    let fs: Vec<Rf> = fs.iter().map(|f| rf(f)).collect();
    Op::from_symmetric_form(Var::Z, &fs)
}

#[test]
fn symmetric_form_is_self_adjoint() {
    let r = symmetric();
    assert_eq!(r.order(), 6);
    assert_eq!(r.formal_adjoint(), r);
    assert_eq!(r.hermitian_adjoint(), r);
}

#[test]
fn divergence_report_names_the_rejecting_function() {
    let r = symmetric().substitute(&unrotation(Var::T).unwrap()).unwrap();
    let (s, t) = (rf("s"), rf("t"));
    let b32 = wf("bessel32", "(x*z+1)/(x*z)");
    let b52 = wf("bessel52", "(x^2*z^2+3*x*z+3)/(x^2*z^2)");
    let e = wf("exp", "1");
    let rep = membership_report(&[b32, b52.clone()], &r, &s, &t).unwrap();
    assert_eq!(rep.rejected_by, vec!["bessel32".to_string()]);
    assert!(!rep.reflected_by_all);
    let json = serde_json::to_string(&rep).unwrap();
    assert!(json.contains("\"rejected_by\":[\"bessel32\"]"));

    let ok = membership_report(&[e, b52], &r, &s, &t).unwrap();
    assert!(ok.reflected_by_all);
    assert!(ok.verdicts.iter().all(|v| v.coorder == Some(5)));
}
