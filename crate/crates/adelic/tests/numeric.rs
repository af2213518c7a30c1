use adelic::numeric::{
    check_contour, gauss_legendre, integrate_decaying, nystrom_alignment, quadrature_kernel,
    quadrature_vs_closed_form, specialised_kernel, NystromConfig,
};
use adelic::reflector::{find_reflected, ReflectorConfig};
use adelic::text::{parse_op, parse_ratfunc};
use adelic::wavefun::{validate, Param, WaveFunction};
use adelic::{Error, Field, Scalar, Var};
use num_complex::Complex64;
use std::time::Instant;

fn wf(name: &str, h: &str, params: &[&str]) -> WaveFunction<Scalar> {
    let ps = params.iter().map(|p| Param { var: Var::named(p), real: true }).collect();
    validate(name, parse_ratfunc(h).unwrap(), ps).unwrap()
}

fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

const DG: &str = "((x+1/z)^3-z^(-3)-r)/(x^3-r)";

#[test]
fn gauss_legendre_is_exact_on_polynomials() {
    let (xs, ws) = gauss_legendre::<f64>(10);
    for k in 0..20 {
        let got: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(k)).sum();
        let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
        assert!((got - want).abs() < 1e-14, "{k}");
    }
    let (xs32, _) = gauss_legendre::<f32>(5);
    assert!((xs32[2]).abs() < 1e-6);
}

#[test]
fn decaying_integral() {
    let r = integrate_decaying(|y: f64| y * y * (-2.0 * y).exp(), 1.0, 1.0).unwrap();
    assert!((r.value - 1.25 * (-2.0f64).exp()).abs() < 1e-15);
    let e = integrate_decaying(|y: f64| (-2.0 * y).exp(), 1.0, 2.0).unwrap();
    assert!((e.value - (-2.0f64).exp() / 2.0).abs() < 1e-15);
    assert_eq!(integrate_decaying(|y: f64| y, 0.0, -1.0).unwrap_err(), Error::DivergentKernel);
}

#[test]
fn exp_quadrature_at_two_three() {
    let e = wf("exp", "1", &[]);
    let got = quadrature_kernel(&e, &q(1), &[], 2.0, 3.0).unwrap();
    let want = (-5.0f64).exp() / 5.0;
    assert!((got.re - want).abs() / want <= 1e-10);
}

#[test]
fn closed_forms_match_quadrature() {
    let start = Instant::now();
    let e = wf("exp", "1", &[]);
    assert!(quadrature_vs_closed_form(&e, &q(1), &[], 20, 7).unwrap() <= 1e-10);
    let k = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    assert!(quadrature_vs_closed_form(&k, &q(1), &[], 20, 7).unwrap() <= 1e-10);
    let d = wf("dg139", DG, &["r"]);
    assert!(quadrature_vs_closed_form(&d, &q(2), &[(Var::R, q(1))], 20, 7).unwrap() <= 1e-8);
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn poles_on_the_ray_are_rejected() {
    let d = wf("dg139", DG, &["r"]);
    // x^3 - 8 vanishes at 2
    assert_eq!(check_contour(&d, &q(1), &[(Var::R, q(8))]).unwrap_err(), Error::PoleOnContour);
    assert_eq!(check_contour(&d, &q(2), &[(Var::R, q(8))]).unwrap_err(), Error::PoleOnContour);
    assert!(check_contour(&d, &q(3), &[(Var::R, q(8))]).is_ok());
    assert!(check_contour(&d, &q(1), &[(Var::R, q(-1))]).is_ok());
    let k = wf("kdv1", "(x*z+1)/(x*z)", &[]);
    assert_eq!(check_contour(&k, &q(0), &[]).unwrap_err(), Error::PoleOnContour);
    assert_eq!(check_contour(&d, &q(1), &[]).unwrap_err(), Error::Unsupported("every parameter needs a numeric value".into()));
}

#[test]
fn nystrom_alignment_for_exp() {
    let e = wf("exp", "1", &[]);
    let d = parse_op::<Scalar>("(z^2-t^2) Dz^2 + (2*z) Dz^1 + (-s^2*z^2) Dz^0").unwrap();
    let mut cfg = ReflectorConfig::symbolic();
    cfg.orders = Some((2, 2));
    assert!(find_reflected(&e, &cfg).unwrap().contains(&d));
    let k = specialised_kernel(&e, &q(1), &[]).unwrap();
    let pt = [(Var::S, Complex64::new(1.0, 0.0)), (Var::T, Complex64::new(1.0, 0.0))];
    let al = nystrom_alignment(&k, &d, &pt, NystromConfig::truncated(1.0)).unwrap();
    assert_eq!(al.residuals.len(), 5);
    assert!(al.worst() <= 1e-4, "{al:?}");
    assert!(al.commutator <= 1e-10, "{al:?}");
    assert!(al.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
}
