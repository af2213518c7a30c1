//! Reduced fractions of multivariate polynomials.

use crate::field::Field;
use crate::gcd::gcd;
use crate::poly::MultiPoly;
use crate::symbol::Var;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatError {
    #[error("zero denominator")]
    ZeroDenominator,
}

/// `num / den` with `gcd(num, den) = 1` and `den` monic; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: MultiPoly<F>,
    den: MultiPoly<F>,
}

impl<F: Field> Default for RatFunc<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> From<MultiPoly<F>> for RatFunc<F> {
    fn from(p: MultiPoly<F>) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }
}

impl<F: Field> RatFunc<F> {
    pub fn zero() -> Self {
        RatFunc { num: MultiPoly::zero(), den: MultiPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: MultiPoly::one(), den: MultiPoly::one() }
    }

    pub fn constant(c: F) -> Self {
        MultiPoly::constant(c).into()
    }

    pub fn int(n: i64) -> Self {
        MultiPoly::int(n).into()
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::var(v).into()
    }

    /// Reduces `num / den` to canonical form.
    pub fn new(num: MultiPoly<F>, den: MultiPoly<F>) -> Result<Self, RatError> {
        if den.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    /// Like [`new`](Self::new) but panics on a zero denominator.
    pub fn frac(num: MultiPoly<F>, den: MultiPoly<F>) -> Self {
        Self::new(num, den).expect("zero denominator")
    }

    fn reduce(num: MultiPoly<F>, den: MultiPoly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return RatFunc { num: num.scale(&c.inv()), den: MultiPoly::one() };
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::from_coprime(n, d)
    }

    /// Caller guarantees `gcd(n, d) = 1`; only the monic scaling is applied.
    pub fn from_coprime(n: MultiPoly<F>, d: MultiPoly<F>) -> Self {
        let lc = d.lc();
        if lc.is_one() {
            RatFunc { num: n, den: d }
        } else {
            let inv = lc.inv();
            RatFunc { num: n.scale(&inv), den: d.scale(&inv) }
        }
    }

    pub fn num(&self) -> &MultiPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly<F> {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly<F>, MultiPoly<F>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly<F>> {
        self.is_poly().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<F> {
        if self.den.is_one() { self.num.as_constant() } else { None }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        for v in self.den.vars() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort();
        vs
    }

    /// Total degree of numerator plus denominator; used as a size measure.
    pub fn weight(&self) -> u32 {
        self.num.total_degree() + self.den.total_degree()
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add_ref(&o.num);
            if self.den.is_one() {
                return n.into();
            }
            return Self::reduce(n, self.den.clone());
        }
        if self.den.is_one() {
            let n = self.num.mul_ref(&o.den).add_ref(&o.num);
            return Self::from_coprime(n, o.den.clone());
        }
        if o.den.is_one() {
            let n = self.num.add_ref(&o.num.mul_ref(&self.den));
            return Self::from_coprime(n, self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let n = self.num.mul_ref(&o.den).add_ref(&o.num.mul_ref(&self.den));
            return Self::from_coprime(n, self.den.mul_ref(&o.den));
        }
        let bd = self.den.div_exact(&g).expect("gcd divides");
        let dd = o.den.div_exact(&g).expect("gcd divides");
        let n = self.num.mul_ref(&dd).add_ref(&o.num.mul_ref(&bd));
        let d = self.den.mul_ref(&dd);
        // Only factors of g can cancel.
        let h = gcd(&n, &g);
        if h.is_one() {
            Self::from_coprime(n, d)
        } else {
            Self::from_coprime(n.div_exact(&h).expect("gcd divides"), d.div_exact(&h).expect("gcd divides"))
        }
    }

    pub fn neg_ref(&self) -> Self {
        RatFunc { num: self.num.neg_ref(), den: self.den.clone() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return self.num.mul_ref(&o.num).into();
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = o.den.div_exact(&g1).expect("gcd divides");
        let c = o.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        Self::from_coprime(a.mul_ref(&c), b.mul_ref(&d))
    }

    pub fn mul_poly(&self, p: &MultiPoly<F>) -> Self {
        self.mul_ref(&p.clone().into())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, RatError> {
        if self.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div_ref(&self, o: &Self) -> Result<Self, RatError> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn pow_i(&self, e: i32) -> Result<Self, RatError> {
        if e >= 0 { Ok(self.pow(e as u32)) } else { Ok(self.inv()?.pow((-e) as u32)) }
    }

    pub fn diff(&self, v: Var) -> Self {
        if !self.den.contains(v) {
            return RatFunc { num: self.num.diff(v), den: self.den.clone() };
        }
        let n = self.num.diff(v).mul_ref(&self.den).sub_ref(&self.num.mul_ref(&self.den.diff(v)));
        Self::reduce(n, self.den.mul_ref(&self.den))
    }

    pub fn diff_n(&self, v: Var, k: u32) -> Self {
        let mut r = self.clone();
        for _ in 0..k {
            r = r.diff(v);
        }
        r
    }

    /// Substitutes `v := val` where `val` is itself a fraction.
    pub fn subst(&self, v: Var, val: &Self) -> Result<Self, RatError> {
        if !self.contains(v) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, v, val);
        let d = subst_poly(&self.den, v, val);
        n.div_ref(&d)
    }

    /// Substitutes `v := val` for a polynomial value.
    pub fn subst_poly(&self, v: Var, val: &MultiPoly<F>) -> Result<Self, RatError> {
        if !self.contains(v) {
            return Ok(self.clone());
        }
        Self::new(self.num.subst(v, val), self.den.subst(v, val))
    }

    /// Simultaneous polynomial substitution.
    pub fn subst_many(&self, map: &[(Var, MultiPoly<F>)]) -> Result<Self, RatError> {
        Self::new(self.num.subst_many(map), self.den.subst_many(map))
    }

    pub fn eval_partial(&self, point: &[(Var, F)]) -> Result<Self, RatError> {
        Self::new(self.num.eval_partial(point), self.den.eval_partial(point))
    }

    pub fn eval(&self, point: &[(Var, F)]) -> Result<Option<F>, RatError> {
        Ok(self.eval_partial(point)?.as_constant())
    }

    pub fn conj(&self) -> Self {
        Self::from_coprime(self.num.conj(), self.den.conj())
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> RatFunc<G> {
        RatFunc::frac(self.num.map_field(f), self.den.map_field(f))
    }

    pub fn eval_c64(&self, point: &[(Var, num_complex::Complex64)]) -> num_complex::Complex64 {
        self.num.eval_c64(point) / self.den.eval_c64(point)
    }

    /// Equality by cross-multiplication; agrees with `==` on reduced values.
    /// Coefficients of the polynomial part in `v` (entry `k` multiplies `v^k`),
    /// over the fraction field of the other variables.
    pub fn polynomial_part(&self, v: Var) -> Vec<Self> {
        let mut n: Vec<Self> = self.num.coeffs_in(v).into_iter().map(Self::from).collect();
        let d: Vec<Self> = self.den.coeffs_in(v).into_iter().map(Self::from).collect();
        let dd = d.len() - 1;
        if n.len() <= dd {
            return Vec::new();
        }
        let mut q = vec![Self::zero(); n.len() - dd];
        for k in (0..q.len()).rev() {
            let c = n[k + dd].div_ref(&d[dd]).expect("leading coefficient nonzero");
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.iter().enumerate() {
                n[k + i] = n[k + i].sub_ref(&c.mul_ref(di));
            }
            q[k] = c;
        }
        q
    }

    pub fn cross_eq(&self, o: &Self) -> bool {
        self.num.mul_ref(&o.den) == o.num.mul_ref(&self.den)
    }
}

fn subst_poly<F: Field>(p: &MultiPoly<F>, v: Var, val: &RatFunc<F>) -> RatFunc<F> {
    if val.is_poly() {
        return p.subst(v, val.num()).into();
    }
    // Homogenize over the denominator to stay polynomial until the end.
    let cs = p.coeffs_in(v);
    let d = cs.len().saturating_sub(1) as u32;
    let mut acc = MultiPoly::zero();
    for (k, c) in cs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = c.mul_ref(&val.num().pow(k as u32)).mul_ref(&val.den().pow(d - k as u32));
        acc = acc.add_ref(&t);
    }
    RatFunc::frac(acc, val.den().pow(d))
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}
impl<F: Field> Add for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, o: Self) -> RatFunc<F> {
        self.add_ref(o)
    }
}
impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}
impl<F: Field> Sub for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, o: Self) -> RatFunc<F> {
        self.sub_ref(o)
    }
}
impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}
impl<F: Field> Mul for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, o: Self) -> RatFunc<F> {
        self.mul_ref(o)
    }
}
impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    /// Panics on division by zero; use [`RatFunc::div_ref`] to handle it.
    fn div(self, o: Self) -> Self {
        self.div_ref(&o).expect("division by zero")
    }
}
impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}
