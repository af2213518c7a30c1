//! Closed-form kernels `K(z,w) = ∫_s^∞ ψ(y,z) ψ*(y,w) dy` and exact checks of
//! the reflection and commutation identities on them.

use crate::concom::concomitant;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::{imag_unit, Field};
use crate::fourier::{find_pairs, AnsatzCaps, BispectralPair};
use crate::poly::MultiPoly;
use crate::quasiexp::QuasiExp;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::wavefun::WaveFunction;

/// `L ψ = π(z) ψ` with `π` non-constant, monic and without constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralElement<F: Field> {
    pub l: DiffOp<F>,
    pub pi: MultiPoly<F>,
}

/// Smallest-degree spectral element with `deg π ≤ cap`.
pub fn spectral_element<F: Field>(wf: &WaveFunction<F>, cap: usize) -> Result<SpectralElement<F>> {
    for k in 1..=cap {
        let caps = AnsatzCaps { a: 0, b: 0, c: 0, deg_u: 0, deg_v: k };
        let basis = find_pairs(wf, 0, k, caps)?;
        let Some(p) = basis.pairs.iter().filter(|p| !p.is_constant()).min_by_key(|p| p.coorder()) else {
            continue;
        };
        let BispectralPair { l, r } = p;
        let pi = r.coeff(0).as_poly().cloned().ok_or_else(|| Error::NonExact("spectral symbol is not polynomial".into()))?;
        let c = pi.lc().inv();
        return Ok(SpectralElement { l: l.scale_const(&c), pi: pi.scale(&c) });
    }
    Err(Error::NoSpectralElement(cap))
}

/// Default degree cap for [`spectral_element`].
pub fn spectral_cap<F: Field>(wf: &WaveFunction<F>) -> usize {
    2 * wf.d1 + 4
}

/// `prefactor(z, w, s, …) · e^{exponent}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel<F: Field> {
    pub form: QuasiExp<F>,
    pub s: RatFunc<F>,
    pub spectral: SpectralElement<F>,
}

/// `h(x, v) e^{−xv}`.
fn wave_in<F: Field>(h: &RatFunc<F>, v: Var) -> Result<QuasiExp<F>> {
    let qe = QuasiExp::standard(h.clone());
    if v == Var::Z {
        return Ok(qe);
    }
    qe.subst_poly(Var::Z, &MultiPoly::var(v))
}

/// Christoffel–Darboux form: `K (π(z) − π(−w)) = −C_L(ψ(·,z), ψ*(·,w); s)`.
pub fn cd_kernel<F: Field>(wf: &WaveFunction<F>, s: &RatFunc<F>) -> Result<Kernel<F>> {
    let spectral = spectral_element(wf, spectral_cap(wf))?;
    let star = wf.adjoint()?;
    let f = wave_in(wf.h(), Var::Z)?;
    let g = wave_in(&star.prefactor, Var::W)?;
    let cf = concomitant(&spectral.l);
    let n = cf.n();
    let mut fs = vec![f];
    let mut gs = vec![g];
    for k in 1..n.max(1) {
        let nf = fs[k - 1].diff(Var::X);
        fs.push(nf);
        let ng = gs[k - 1].diff(Var::X);
        gs.push(ng);
    }
    let exponent = fs[0].mul(&gs[0]).exponent;
    let mut acc = QuasiExp::new(exponent, RatFunc::zero());
    for (j, row) in cf.matrix.iter().enumerate() {
        for (i, e) in row.iter().enumerate() {
            if !e.is_zero() {
                acc = acc.add(&fs[j].mul(&gs[i]).scale(e))?;
            }
        }
    }
    let at_s = subst_x(&acc, s)?;
    let pi_z = spectral.pi.clone();
    let pi_mw = spectral.pi.subst(Var::Z, &MultiPoly::var(Var::W).neg_ref());
    let d = pi_z.sub_ref(&pi_mw);
    let pref = at_s.prefactor.neg_ref().div_ref(&RatFunc::from(d))?;
    Ok(Kernel { form: QuasiExp::new(at_s.exponent, pref), s: s.clone(), spectral })
}

fn subst_x<F: Field>(q: &QuasiExp<F>, s: &RatFunc<F>) -> Result<QuasiExp<F>> {
    let sp = s.as_poly().ok_or_else(|| Error::Unsupported("s must be a polynomial".into()))?;
    Ok(QuasiExp::new(q.exponent.subst(Var::X, sp), q.prefactor.subst(Var::X, s)?))
}

/// `∂_s K + ψ(s,z) ψ*(s,w)`, which must vanish; `s` has to be a symbol.
pub fn ftc_residual<F: Field>(wf: &WaveFunction<F>, k: &Kernel<F>) -> Result<RatFunc<F>> {
    let sv = crate::reflector::symbol_of(&k.s).ok_or_else(|| Error::Unsupported("s must be symbolic".into()))?;
    let star = wf.adjoint()?;
    let f = wave_in(wf.h(), Var::Z)?;
    let g = wave_in(&star.prefactor, Var::W)?;
    let prod = subst_x(&f.mul(&g), &k.s)?;
    let dk = k.form.diff(sv);
    if dk.exponent != prod.exponent {
        return Err(Error::NonExact("exponent mismatch".into()));
    }
    Ok(dk.prefactor.add_ref(&prod.prefactor))
}

/// `R(z,∂z) K − R*(−w,−∂w) K` as the prefactor of the common exponential.
pub fn reflection_residual<F: Field>(r: &DiffOp<F>, k: &QuasiExp<F>) -> Result<RatFunc<F>> {
    if r.var() != Var::Z {
        return Err(Error::VarMismatch(r.var().name(), "z".into()));
    }
    let lhs = k.apply(r)?;
    let rw = r.formal_adjoint().sign_flip().rename(Var::W);
    let rhs = k.apply(&rw)?;
    Ok(lhs.prefactor.sub_ref(&rhs.prefactor))
}

pub fn verify_reflection_symbolic<F: Field>(r: &DiffOp<F>, k: &Kernel<F>) -> Result<bool> {
    Ok(reflection_residual(r, &k.form)?.is_zero())
}

/// `K_off(z,w) = K(−iz, iw)`, the smooth part of the rotated kernel.
pub fn off_diagonal<F: Field>(k: &Kernel<F>) -> Result<QuasiExp<F>> {
    let i = imag_unit::<F>().ok_or_else(|| Error::Unsupported("rotation needs the Gaussian rationals".into()))?;
    let z = MultiPoly::var(Var::Z).scale(&i.neg());
    let w = MultiPoly::var(Var::W).scale(&i);
    k.form.subst_many(&[(Var::Z, z), (Var::W, w)])
}

/// `R̃(z,∂z) K_off − R̃ᵀ(w,∂w) K_off`, with `ᵀ` the plain formal adjoint.
pub fn commutation_residual<F: Field>(rt: &DiffOp<F>, koff: &QuasiExp<F>) -> Result<RatFunc<F>> {
    let lhs = koff.apply(rt)?;
    let rhs = koff.apply(&rt.formal_adjoint().rename(Var::W))?;
    Ok(lhs.prefactor.sub_ref(&rhs.prefactor))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationCheck<F: Field> {
    pub kernel_residual: RatFunc<F>,
    pub concomitant_vanishes: bool,
}

impl<F: Field> CommutationCheck<F> {
    pub fn holds(&self) -> bool {
        self.kernel_residual.is_zero() && self.concomitant_vanishes
    }
}

/// Fourier-picture check for an `ac`-fixed `ψ`: the kernel identity on the
/// off-diagonal part and vanishing of the concomitant of `R̃` at `t`.
pub fn verify_commutation_fourier<F: Field>(
    rt: &DiffOp<F>,
    wf: &WaveFunction<F>,
    s: &RatFunc<F>,
    t: &RatFunc<F>,
) -> Result<CommutationCheck<F>> {
    if !wf.is_fixed("ac")? {
        return Err(Error::NotAcFixed);
    }
    let k = cd_kernel(wf, s)?;
    let koff = off_diagonal(&k)?;
    Ok(CommutationCheck {
        kernel_residual: commutation_residual(rt, &koff)?,
        concomitant_vanishes: concomitant(rt).vanishes_at(t)?,
    })
}
