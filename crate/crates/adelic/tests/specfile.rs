use adelic::specfile::WaveSpec;
use adelic::text::parse_ratfunc;
use adelic::{Rf, Scalar};

const FIXTURES: [&str; 6] = ["exp", "cm1", "kdv1", "dg139", "bessel32", "bessel52"];

fn path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn fixtures_round_trip() {
    for name in FIXTURES {
        let spec = WaveSpec::load(path(name)).unwrap();
        assert_eq!(spec.name, name);
        let wf = spec.wave_function::<Scalar>().unwrap();
        let back = WaveSpec::of(&wf, &spec.notes);
        assert_eq!(back, spec, "{name}");
        let again = WaveSpec::from_json(&back.to_json()).unwrap().wave_function::<Scalar>().unwrap();
        assert_eq!(again.h(), wf.h());
    }
}

#[test]
fn prefactors() {
    let want: [(&str, &str); 3] =
        [("dg139", "((x+1/z)^3-z^(-3)-r)/(x^3-r)"), ("bessel52", "1+3/(x*z)+3/(x*z)^2"), ("cm1", "(x*z-1)/(x*z)")];
    for (name, h) in want {
        let spec = WaveSpec::load(path(name)).unwrap();
        assert_eq!(spec.prefactor::<Scalar>().unwrap(), parse_ratfunc::<Scalar>(h).unwrap());
    }
}

#[test]
fn rejects_bad_specs() {
    assert!(WaveSpec::from_json(r#"{"name": "a", "numerator": "1", "colour": 3}"#).is_err());
    let s = WaveSpec::from_json(r#"{"name": "a", "numerator": "x+q"}"#).unwrap();
    assert!(s.prefactor::<Scalar>().is_err());
    let s = WaveSpec::from_json(r#"{"name": "a", "numerator": "1", "denominator_x": "x+z"}"#).unwrap();
    assert!(s.prefactor::<Scalar>().is_err());
    let s = WaveSpec::from_json(r#"{"name": "a", "numerator": "1", "parameters": [{"name": "x"}]}"#).unwrap();
    assert!(s.params().is_err());
    let ok = WaveSpec::from_json(r#"{"name": "a", "numerator": "x*z+q", "denominator_x": "x", "parameters": [{"name": "q"}]}"#);
    let h: Rf = ok.unwrap().prefactor().unwrap();
    assert_eq!(h, parse_ratfunc("(x*z+q)/x").unwrap());
}
