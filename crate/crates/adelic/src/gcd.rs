//! Multivariate gcd by recursive primitive pseudo-remainder sequences.

use crate::field::Field;
use crate::poly::{Mono, MultiPoly};
use crate::symbol::Var;

type P<F> = MultiPoly<F>;

/// Greatest common divisor, normalized monic. `gcd(0, 0) = 0`.
pub fn gcd<F: Field>(a: &P<F>, b: &P<F>) -> P<F> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return P::one();
    }
    if a == b {
        return a.monic();
    }
    let (ma, a1) = split_mono_content(a);
    let (mb, b1) = split_mono_content(b);
    let mg = P::monomial(ma.gcd(&mb), F::one());
    if a1.is_constant() || b1.is_constant() {
        return mg;
    }
    let g = gcd_no_mono(&a1, &b1);
    g.mul_ref(&mg).monic()
}

/// gcd of a list, stopping early at 1.
pub fn gcd_many<'a, F: Field>(items: impl IntoIterator<Item = &'a P<F>>) -> P<F> {
    let mut g = P::zero();
    for p in items {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn split_mono_content<F: Field>(a: &P<F>) -> (Mono, P<F>) {
    let mut m = a.terms()[0].0.clone();
    for (t, _) in &a.terms()[1..] {
        m = m.gcd(t);
        if m.is_one() {
            return (m, a.clone());
        }
    }
    if m.is_one() {
        return (m, a.clone());
    }
    let rest = a.div_exact(&P::monomial(m.clone(), F::one())).expect("monomial content divides");
    (m, rest)
}

fn gcd_no_mono<F: Field>(a: &P<F>, b: &P<F>) -> P<F> {
    // Cheap exact-divisibility probes cover the common "one divides the other" case.
    if a.len() >= b.len() && divides_quick(b, a) {
        return b.monic();
    }
    if b.len() >= a.len() && divides_quick(a, b) {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        let c = content(a, v);
        return gcd(&c, b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        let c = content(b, v);
        return gcd(a, &c);
    }
    // Same variable set: pick the main variable of lowest degree.
    let v = *va
        .iter()
        .min_by_key(|&&v| (a.degree(v).max(b.degree(v)), v.0))
        .expect("non-constant polynomials have variables");
    if va.len() == 1 {
        return euclid_univariate(a, b, v);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = prs(&pa, &pb, v);
    g.mul_ref(&c).monic()
}

fn divides_quick<F: Field>(d: &P<F>, n: &P<F>) -> bool {
    if d.total_degree() > n.total_degree() {
        return false;
    }
    let nv = n.vars();
    for v in d.vars() {
        if !nv.contains(&v) || d.degree(v) > n.degree(v) {
            return false;
        }
    }
    n.div_exact(d).is_some()
}

/// gcd of the coefficients of `a` viewed as a polynomial in `v`.
pub fn content<F: Field>(a: &P<F>, v: Var) -> P<F> {
    let cs = a.coeffs_in(v);
    let mut nz: Vec<&P<F>> = cs.iter().filter(|c| !c.is_zero()).collect();
    // Short coefficients first: the gcd collapses faster.
    nz.sort_by_key(|c| (c.len(), c.total_degree()));
    gcd_many(nz)
}

fn euclid_univariate<F: Field>(a: &P<F>, b: &P<F>, v: Var) -> P<F> {
    let (mut x, mut y) = if a.degree(v) >= b.degree(v) { (a.monic(), b.monic()) } else { (b.monic(), a.monic()) };
    while !y.is_zero() {
        let (_, r) = x.divrem_in(&y, v);
        x = y;
        y = r.monic();
    }
    x.monic()
}

/// Primitive PRS over the coefficient ring in the remaining variables.
fn prs<F: Field>(a: &P<F>, b: &P<F>, v: Var) -> P<F> {
    let (mut f, mut g) = if a.degree(v) >= b.degree(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            return primitive(&g, v);
        }
        if r.degree(v) == 0 {
            return P::one();
        }
        f = g;
        g = primitive(&r, v);
    }
}

fn primitive<F: Field>(a: &P<F>, v: Var) -> P<F> {
    let c = content(a, v);
    a.div_exact(&c).expect("content divides").monic()
}

/// Sparse pseudo-remainder of `f` by `g` in `v`.
pub fn pseudo_rem<F: Field>(f: &P<F>, g: &P<F>, v: Var) -> P<F> {
    let dg = g.degree(v);
    let lg = g.coeff_of(v, dg);
    let mut r = f.clone();
    while !r.is_zero() && r.degree(v) >= dg {
        let dr = r.degree(v);
        let lr = r.coeff_of(v, dr);
        let shift = P::monomial(Mono::var(v, dr - dg), F::one());
        r = r.mul_ref(&lg).sub_ref(&lr.mul_ref(&shift).mul_ref(g));
    }
    r
}

/// Least common multiple, monic.
pub fn lcm<F: Field>(a: &P<F>, b: &P<F>) -> P<F> {
    if a.is_zero() || b.is_zero() {
        return P::zero();
    }
    let g = gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul_ref(b).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    type Q = BigRational;

    fn v(x: Var) -> P<Q> {
        P::var(x)
    }

    #[test]
    fn difference_of_squares() {
        let (z, w) = (v(Var::Z), v(Var::W));
        let a = z.mul_ref(&z).sub_ref(&w.mul_ref(&w));
        let b = z.sub_ref(&w);
        assert_eq!(gcd(&a, &b), b);
    }

    #[test]
    fn multivariate_common_factor() {
        let (x, s, t) = (v(Var::X), v(Var::S), v(Var::T));
        let f = x.mul_ref(&s).add_ref(&t).add_ref(&P::int(3));
        let a = f.mul_ref(&x.add_ref(&s)).mul_ref(&f);
        let b = f.mul_ref(&t.sub_ref(&x.mul_ref(&x)));
        assert_eq!(gcd(&a, &b), f.monic());
        assert_eq!(gcd(&a, &P::int(7)), P::one());
    }

    #[test]
    fn coprime_gives_one() {
        let (x, z) = (v(Var::X), v(Var::Z));
        let a = x.pow(3).add_ref(&z);
        let b = x.mul_ref(&z).add_ref(&P::int(1));
        assert!(gcd(&a, &b).is_one());
    }
}
