//! Quasi-exponential functions `h · e^E` with rational `h` and polynomial `E`.

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuasiExp<F> {
    pub exponent: MultiPoly<F>,
    pub prefactor: RatFunc<F>,
}

impl<F: Field> QuasiExp<F> {
    /// `h(x,z) e^{−xz}`.
    pub fn standard(h: RatFunc<F>) -> Self {
        let e = MultiPoly::var(Var::X).mul_ref(&MultiPoly::var(Var::Z)).neg_ref();
        QuasiExp { exponent: e, prefactor: h }
    }

    pub fn new(exponent: MultiPoly<F>, prefactor: RatFunc<F>) -> Self {
        QuasiExp { exponent, prefactor }
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// `∂_v`, acting as `h_v + E_v h`.
    pub fn diff(&self, v: Var) -> Self {
        let ev: RatFunc<F> = self.exponent.diff(v).into();
        let p = self.prefactor.diff(v).add_ref(&ev.mul_ref(&self.prefactor));
        QuasiExp { exponent: self.exponent.clone(), prefactor: p }
    }

    pub fn scale(&self, f: &RatFunc<F>) -> Self {
        QuasiExp { exponent: self.exponent.clone(), prefactor: self.prefactor.mul_ref(f) }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.exponent != o.exponent {
            return Err(Error::Unsupported("adding quasi-exponentials with different exponents".into()));
        }
        Ok(QuasiExp { exponent: self.exponent.clone(), prefactor: self.prefactor.add_ref(&o.prefactor) })
    }

    pub fn mul(&self, o: &Self) -> Self {
        QuasiExp { exponent: self.exponent.add_ref(&o.exponent), prefactor: self.prefactor.mul_ref(&o.prefactor) }
    }

    pub fn apply(&self, d: &DiffOp<F>) -> Result<Self> {
        let v = d.var();
        if !self.exponent.contains(v) {
            return Err(Error::NotActing(v.name()));
        }
        let ev: RatFunc<F> = self.exponent.diff(v).into();
        let mut acc = RatFunc::zero();
        let mut cur = self.prefactor.clone();
        for (k, a) in d.coeffs().iter().enumerate() {
            if k > 0 {
                cur = cur.diff(v).add_ref(&ev.mul_ref(&cur));
            }
            if !a.is_zero() {
                acc = acc.add_ref(&a.mul_ref(&cur));
            }
        }
        Ok(QuasiExp { exponent: self.exponent.clone(), prefactor: acc })
    }

    /// Substitutes a polynomial for `v` in exponent and prefactor.
    pub fn subst_poly(&self, v: Var, val: &MultiPoly<F>) -> Result<Self> {
        Ok(QuasiExp { exponent: self.exponent.subst(v, val), prefactor: self.prefactor.subst_poly(v, val)? })
    }

    pub fn subst_many(&self, map: &[(Var, MultiPoly<F>)]) -> Result<Self> {
        Ok(QuasiExp { exponent: self.exponent.subst_many(map), prefactor: self.prefactor.subst_many(map)? })
    }

    pub fn conj(&self) -> Self {
        QuasiExp { exponent: self.exponent.conj(), prefactor: self.prefactor.conj() }
    }
}

impl<F: Field> std::fmt::Debug for QuasiExp<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}) exp({:?})", self.prefactor, self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_op, parse_ratfunc};
    use num_rational::BigRational;
    type Q = BigRational;

    #[test]
    fn derivative_of_exponential() {
        let e = QuasiExp::<Q>::standard(RatFunc::one());
        let d = DiffOp::d(Var::Z, 1);
        assert_eq!(e.apply(&d).unwrap().prefactor, parse_ratfunc("-x").unwrap());
        let p = parse_op::<Q>("(-x) Dx^1 + (-1) Dx^0").unwrap();
        assert_eq!(e.apply(&p).unwrap().prefactor, parse_ratfunc("x*z-1").unwrap());
    }

    #[test]
    fn foreign_variable_rejected() {
        let e = QuasiExp::<Q>::standard(RatFunc::one());
        assert!(matches!(e.apply(&DiffOp::d(Var::W, 1)), Err(Error::NotActing(_))));
    }
}
