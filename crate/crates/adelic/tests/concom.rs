use adelic::concom::{
    concomitant, condition_bound, condition_rank, generic_template, lagrange_residual, vanishing_conditions,
};
use adelic::text::{parse_op, parse_ratfunc};
use adelic::{Error, Op, Rf, Scalar, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn op(s: &str) -> Op {
    parse_op(s).unwrap()
}

fn rf(s: &str) -> Rf {
    parse_ratfunc(s).unwrap()
}

fn seed() -> u64 {
    std::env::var("ADELIC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_917)
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> Rf {
    let mut s = String::from("0");
    for k in 0..=deg {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=5);
        s.push_str(&format!("+({n}/{d})*z^{k}"));
    }
    rf(&s)
}

#[test]
fn first_order_form() {
    let c = concomitant(&op("(z^2+s) Dz^1 + (z) Dz^0"));
    assert_eq!(c.matrix, vec![vec![rf("z^2+s")]]);
}

#[test]
fn second_order_form() {
    // (a1 - a2') f g + a2 (f' g - f g')
    let c = concomitant(&op("(z^3) Dz^2 + (t*z) Dz^1 + (1) Dz^0"));
    assert_eq!(c.matrix, vec![vec![rf("t*z-3*z^2"), rf("-z^3")], vec![rf("z^3"), rf("0")]]);
}

#[test]
fn first_order_vanishes_at_minus_t() {
    let c = concomitant(&op("(z+t) Dz^1 + (s*z) Dz^0"));
    assert!(c.vanishes_at(&rf("-t")).unwrap());
    assert!(!c.vanishes_at(&rf("t")).unwrap());
}

#[test]
fn constant_operator_has_empty_form() {
    assert_eq!(concomitant(&op("(z) Dz^0")).n(), 0);
}

#[test]
fn lagrange_identity_on_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    for _ in 0..100 {
        let ord = rng.gen_range(0..=5);
        let coeffs: Vec<Rf> = (0..=ord).map(|_| random_poly(&mut rng, 3)).collect();
        let r = Op::new(Var::Z, coeffs);
        let f = random_poly(&mut rng, 6);
        let g = random_poly(&mut rng, 6);
        assert!(lagrange_residual(&r, &f, &g).is_zero());
    }
}

#[test]
fn lagrange_identity_with_rational_coefficients() {
    let r = op("((z+t)^2/z) Dz^3 + (s/z^2) Dz^1 + (1/(z+1)) Dz^0");
    assert!(lagrange_residual(&r, &rf("1/(z-2)"), &rf("z^2+s")).is_zero());
}

#[test]
fn low_order_condition_counts() {
    let c = rf("c");
    let t1 = generic_template::<Scalar>(Var::Z, 1, 1);
    assert_eq!(condition_rank(&t1, &c).unwrap(), 1);
    let t2 = generic_template::<Scalar>(Var::Z, 2, 2);
    assert_eq!(condition_rank(&t2, &c).unwrap(), 2);
    let t3 = generic_template::<Scalar>(Var::Z, 3, 3);
    assert!(condition_rank(&t3, &c).unwrap() <= 4);
}

#[test]
fn generic_rank_meets_bound() {
    for ell in 1..=6 {
        let t = generic_template::<Scalar>(Var::Z, ell, ell);
        assert_eq!(condition_rank(&t, &rf("c")).unwrap(), condition_bound(ell), "order {ell}");
        assert_eq!(condition_rank(&t, &rf("-3/2")).unwrap(), condition_bound(ell), "order {ell} at -3/2");
    }
}

#[test]
fn pole_at_point_is_reported() {
    let t = vec![op("(1/(z+t)) Dz^2")];
    assert_eq!(vanishing_conditions(&t, &rf("-t")).unwrap_err(), Error::PoleAtPoint);
}
