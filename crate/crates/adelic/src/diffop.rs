//! Differential operators `Σ a_m(v) ∂_v^m` with rational-function coefficients.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::MultiPoly;
use crate::quasiexp::QuasiExp;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp<F> {
    var: Var,
    coeffs: Vec<RatFunc<F>>,
}

/// Affine change of the operator variable plus parameter rescaling:
/// `v → α v + β`, `∂ → α⁻¹ ∂`, `p → c_p p`.
#[derive(Clone, Debug)]
pub struct Substitution<F> {
    pub alpha: F,
    pub beta: F,
    pub params: Vec<(Var, F)>,
}

impl<F: Field> Substitution<F> {
    /// `v → −v`, `∂ → −∂`.
    pub fn sign() -> Self {
        Substitution { alpha: F::one().neg(), beta: F::zero(), params: Vec::new() }
    }
}

pub(crate) fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl<F: Field> DiffOp<F> {
    pub fn new(var: Var, mut coeffs: Vec<RatFunc<F>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOp { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        DiffOp { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::mult(var, RatFunc::one())
    }

    /// Multiplication by `f`.
    pub fn mult(var: Var, f: RatFunc<F>) -> Self {
        Self::new(var, vec![f])
    }

    /// `∂_var^k`.
    pub fn d(var: Var, k: usize) -> Self {
        let mut cs = vec![RatFunc::zero(); k + 1];
        cs[k] = RatFunc::one();
        Self::new(var, cs)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[RatFunc<F>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFunc<F> {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; the zero operator reports 0.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> RatFunc<F> {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1 && self.coeffs.first().is_none_or(|c| c.as_constant().is_some())
    }

    fn check_var(&self, o: &Self) -> Result<()> {
        if self.var != o.var && !self.is_zero() && !o.is_zero() {
            return Err(Error::VarMismatch(self.var.name(), o.var.name()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_var(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        let cs = (0..n).map(|k| self.coeff(k).add_ref(&o.coeff(k))).collect();
        Ok(Self::new(if self.is_zero() { o.var } else { self.var }, cs))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        DiffOp { var: self.var, coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect() }
    }

    /// Left multiplication by a function.
    pub fn scale(&self, f: &RatFunc<F>) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|c| c.mul_ref(f)).collect())
    }

    pub fn scale_const(&self, c: &F) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// `self ∘ o` by the Leibniz rule.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.check_var(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.var));
        }
        let v = self.var;
        let mut out = vec![RatFunc::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        // derivs[j][k] = k-th derivative of o.coeffs[j]
        let maxk = self.order();
        let derivs: Vec<Vec<RatFunc<F>>> = o
            .coeffs
            .iter()
            .map(|b| {
                let mut ds = vec![b.clone()];
                for _ in 0..maxk {
                    let last = ds.last().expect("nonempty").diff(v);
                    ds.push(last);
                }
                ds
            })
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, ds) in derivs.iter().enumerate() {
                for k in 0..=i {
                    let bk = &ds[k];
                    if bk.is_zero() {
                        continue;
                    }
                    let c = binom(i, k);
                    let t = a.mul_ref(bk).scale(&F::from_int(c));
                    let idx = i + j - k;
                    out[idx] = out[idx].add_ref(&t);
                }
            }
        }
        Ok(Self::new(v, out))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.var);
        for _ in 0..e {
            acc = acc.compose(self).expect("same variable");
        }
        acc
    }

    /// Action on a function of the operator variable.
    pub fn apply(&self, f: &RatFunc<F>) -> RatFunc<F> {
        let mut acc = RatFunc::zero();
        let mut d = f.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                d = d.diff(self.var);
            }
            if !a.is_zero() {
                acc = acc.add_ref(&a.mul_ref(&d));
            }
        }
        acc
    }

    /// `R* f = Σ (−∂)^m (a_m f)`.
    pub fn formal_adjoint(&self) -> Self {
        let v = self.var;
        let mut out = vec![RatFunc::zero(); self.coeffs.len()];
        for (m, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if m % 2 == 0 { F::one() } else { F::one().neg() };
            let mut da = a.clone();
            // (∂^m a) = Σ_k C(m,k) a^{(m−k)} ∂^k; walk k from m down.
            let mut ders = vec![da.clone()];
            for _ in 0..m {
                da = da.diff(v);
                ders.push(da.clone());
            }
            for k in 0..=m {
                let c = F::from_int(binom(m, k)).mul(&sign);
                let t = ders[m - k].scale(&c);
                out[k] = out[k].add_ref(&t);
            }
        }
        Self::new(v, out)
    }

    /// Formal adjoint with complex conjugation of the coefficients
    /// (parameters and the operator variable are treated as real).
    pub fn hermitian_adjoint(&self) -> Self {
        self.conj().formal_adjoint()
    }

    pub fn conj(&self) -> Self {
        DiffOp { var: self.var, coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// Exact substitution `v → α v + β`, `∂ → α⁻¹ ∂`, parameters rescaled.
    pub fn substitute(&self, sub: &Substitution<F>) -> Result<Self> {
        if sub.alpha.is_zero() {
            return Err(Error::ZeroScale);
        }
        let v = self.var;
        let lin = MultiPoly::var(v).scale(&sub.alpha).add_ref(&MultiPoly::constant(sub.beta.clone()));
        let mut map = vec![(v, lin)];
        for (p, c) in &sub.params {
            map.push((*p, MultiPoly::var(*p).scale(c)));
        }
        let ainv = sub.alpha.inv();
        let mut cs = Vec::with_capacity(self.coeffs.len());
        let mut scale = F::one();
        for a in &self.coeffs {
            cs.push(a.subst_many(&map)?.scale(&scale));
            scale = scale.mul(&ainv);
        }
        Ok(Self::new(v, cs))
    }

    /// Sign flip `R(−v, −∂)`.
    pub fn sign_flip(&self) -> Self {
        self.substitute(&Substitution::sign()).expect("alpha = -1")
    }

    /// Renames the operator variable (coefficients included).
    pub fn rename(&self, to: Var) -> Self {
        let v = self.var;
        let cs = self.coeffs.iter().map(|c| c.subst_poly(v, &MultiPoly::var(to)).expect("renaming keeps denominators")).collect();
        Self::new(to, cs)
    }

    /// Applies a map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&RatFunc<F>) -> Result<RatFunc<F>>) -> Result<Self> {
        Ok(Self::new(self.var, self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?))
    }

    /// Coefficients `b_m` of the right form `Σ ∂^m ∘ b_m`.
    pub fn right_form(&self) -> Vec<RatFunc<F>> {
        let mut rest = self.clone();
        let mut bs = vec![RatFunc::zero(); self.coeffs.len()];
        while !rest.is_zero() {
            let m = rest.order();
            let b = rest.leading();
            let t = Self::d(self.var, m).compose(&Self::mult(self.var, b.clone())).expect("same variable");
            rest = rest.sub(&t).expect("same variable");
            bs[m] = b;
        }
        bs
    }

    /// `Σ ∂^m ∘ f_m ∘ ∂^m`.
    pub fn from_symmetric_form(var: Var, fs: &[RatFunc<F>]) -> Self {
        let mut acc = Self::zero(var);
        for (m, f) in fs.iter().enumerate() {
            let t = Self::d(var, m).compose(&Self::mult(var, f.clone())).and_then(|a| a.compose(&Self::d(var, m)));
            acc = acc.add(&t.expect("same variable")).expect("same variable");
        }
        acc
    }

    /// Anticommutator `{f, ∂} = f∂ + ∂f`.
    pub fn anticommutator_d(var: Var, f: &RatFunc<F>) -> Self {
        let a = Self::mult(var, f.clone()).compose(&Self::d(var, 1)).expect("same variable");
        let b = Self::d(var, 1).compose(&Self::mult(var, f.clone())).expect("same variable");
        a.add(&b).expect("same variable")
    }

    pub fn apply_to_quasiexp(&self, f: &QuasiExp<F>) -> Result<QuasiExp<F>> {
        f.apply(self)
    }

    /// Variables occurring in the coefficients.
    pub fn coeff_vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = Vec::new();
        for c in &self.coeffs {
            for v in c.vars() {
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
        }
        vs.sort();
        vs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_op, parse_ratfunc};
    use num_complex::Complex;
    use num_rational::BigRational;
    type G = Complex<BigRational>;

    fn op(s: &str) -> DiffOp<G> {
        parse_op(s).unwrap()
    }

    #[test]
    fn leibniz_examples() {
        let d = DiffOp::<G>::d(Var::Z, 1);
        let z = DiffOp::mult(Var::Z, RatFunc::var(Var::Z));
        assert_eq!(d.compose(&z).unwrap(), op("(z) Dz^1 + (1) Dz^0"));
        let zd = op("(z) Dz^1");
        assert_eq!(zd.compose(&zd).unwrap(), op("(z^2) Dz^2 + (z) Dz^1"));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(DiffOp::<G>::d(Var::Z, 1).formal_adjoint(), op("(-1) Dz^1"));
        assert_eq!(op("(z) Dz^1").formal_adjoint(), op("(-z) Dz^1 + (-1) Dz^0"));
    }

    #[test]
    fn sign_and_rotation() {
        let r = op("(z+t) Dz^1 + (s*z) Dz^0");
        assert_eq!(r.sign_flip(), op("(z-t) Dz^1 + (-s*z) Dz^0"));
        let i = G::new(BigRational::from_integer(0.into()), BigRational::from_integer(1.into()));
        let rot = Substitution { alpha: i.neg(), beta: G::zero(), params: vec![(Var::T, i.clone())] };
        let rr = r.substitute(&rot).unwrap();
        assert_eq!(rr, op("(z-t) Dz^1 + (-i*s*z) Dz^0"));
        let back = Substitution { alpha: i.clone(), beta: G::zero(), params: vec![(Var::T, i.neg())] };
        assert_eq!(rr.substitute(&back).unwrap(), r);
    }

    #[test]
    fn zero_alpha_rejected() {
        let sub = Substitution { alpha: G::zero(), beta: G::zero(), params: vec![] };
        assert_eq!(op("(z) Dz^1").substitute(&sub), Err(Error::ZeroScale));
    }

    #[test]
    fn right_form_roundtrip() {
        let r = op("(z^3+t) Dz^2 + (s*z) Dz^1 + (z^2/(z+1)) Dz^0");
        let bs = r.right_form();
        let mut acc = DiffOp::zero(Var::Z);
        for (m, b) in bs.iter().enumerate() {
            let t = DiffOp::d(Var::Z, m).compose(&DiffOp::mult(Var::Z, b.clone())).unwrap();
            acc = acc.add(&t).unwrap();
        }
        assert_eq!(acc, r);
        let f: RatFunc<G> = parse_ratfunc("z^2+1").unwrap();
        assert_eq!(DiffOp::from_symmetric_form(Var::Z, &[RatFunc::zero(), f.clone()]), op("(z^2+1) Dz^2 + (2*z) Dz^1"));
    }
}
