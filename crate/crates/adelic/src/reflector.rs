//! Differential operators reflected by the integral operator of a wave
//! function: members `R` of the Fourier algebra whose concomitants vanish, the
//! one of `b⁻¹R` at `x = s` and the one of `R` at `z = −t`.

use crate::concom::{concomitant, vanishing_conditions};
use crate::diffop::{DiffOp, Substitution};
use crate::error::{Error, Result};
use crate::field::{imag_unit, Field};
use crate::fourier::{constant_part, find_pairs, intertwine, rref, span_coordinates, AnsatzCaps, FourierBasis};
use crate::linalg::LinearSystem;
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::text::render_op;
use crate::wavefun::{push_identity_rows, WaveFunction};
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct ReflectorConfig<F: Field> {
    pub s: RatFunc<F>,
    pub t: RatFunc<F>,
    /// `(ℓ, m)`; by default both are `max(2·min(d1,d2), 1)`, maximised over the inputs.
    pub orders: Option<(usize, usize)>,
    /// By default the componentwise maximum of the per-input defaults.
    pub caps: Option<AnsatzCaps>,
    /// Retry once with both orders raised by 2 when only constants survive.
    pub escalate: bool,
}

impl<F: Field> ReflectorConfig<F> {
    /// Symbolic endpoints `s` and `t`.
    pub fn symbolic() -> Self {
        Self::new(RatFunc::var(Var::S), RatFunc::var(Var::T))
    }

    pub fn new(s: RatFunc<F>, t: RatFunc<F>) -> Self {
        ReflectorConfig { s, t, orders: None, caps: None, escalate: true }
    }
}

/// A reflected operator with its partner `L_k = b⁻¹(R)` for every input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member<F: Field> {
    pub r: DiffOp<F>,
    pub partners: Vec<DiffOp<F>>,
}

impl<F: Field> Member<F> {
    pub fn order(&self) -> usize {
        self.r.order()
    }

    pub fn coorder(&self) -> usize {
        self.partners.iter().map(|l| l.order()).max().unwrap_or(0)
    }

    fn scale(&self, c: &F) -> Self {
        Member { r: self.r.scale_const(c), partners: self.partners.iter().map(|l| l.scale_const(c)).collect() }
    }
}

/// Concomitant matrices of the canonical operator: `b⁻¹R` at `s`, `R` at `−t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<F: Field> {
    pub psi: String,
    pub at_s: Vec<Vec<RatFunc<F>>>,
    pub at_minus_t: Vec<Vec<RatFunc<F>>>,
}

impl<F: Field> Certificate<F> {
    pub fn is_zero(&self) -> bool {
        self.at_s.iter().chain(&self.at_minus_t).flatten().all(|e| e.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct ReflectorResult<F: Field> {
    pub psi: Vec<String>,
    pub s: RatFunc<F>,
    pub t: RatFunc<F>,
    pub ell: usize,
    pub m: usize,
    pub caps: AnsatzCaps,
    pub escalated: bool,
    /// A basis of the solution space modulo constants.
    pub solution_space: Vec<Member<F>>,
    pub canonical: Member<F>,
    pub certificates: Vec<Certificate<F>>,
}

impl<F: Field> ReflectorResult<F> {
    /// Coordinates of `r` in the solution space plus constants; the last entry
    /// is the constant.
    pub fn coordinates(&self, r: &DiffOp<F>) -> Option<Vec<RatFunc<F>>> {
        let mut ops: Vec<DiffOp<F>> = self.solution_space.iter().map(|m| m.r.clone()).collect();
        ops.push(DiffOp::one(Var::Z));
        span_coordinates(&ops, r)
    }

    pub fn contains(&self, r: &DiffOp<F>) -> bool {
        self.coordinates(r).is_some()
    }
}

/// Default order cap `max(2·min(d1,d2), 1)`.
pub fn default_order<F: Field>(wf: &WaveFunction<F>) -> Result<usize> {
    let d = wf.min_degree().ok_or(Error::NoCodegreeWitness(wf.codegree_cap))?;
    Ok((2 * d).max(1))
}

pub fn find_reflected<F: Field>(wf: &WaveFunction<F>, cfg: &ReflectorConfig<F>) -> Result<ReflectorResult<F>> {
    find_universal(std::slice::from_ref(wf), cfg)
}

/// Operators reflected simultaneously for every wave function in `wfs`.
pub fn find_universal<F: Field>(wfs: &[WaveFunction<F>], cfg: &ReflectorConfig<F>) -> Result<ReflectorResult<F>> {
    if wfs.is_empty() {
        return Err(Error::Unsupported("no wave functions given".into()));
    }
    let mut base = 0;
    for w in wfs {
        base = base.max(default_order(w)?);
    }
    let (ell0, m0) = cfg.orders.unwrap_or((base, base));
    let attempts = if cfg.escalate { 2 } else { 1 };
    for a in 0..attempts {
        let (ell, m) = (ell0 + 2 * a, m0 + 2 * a);
        if let Some(mut res) = solve_at(wfs, cfg, ell, m)? {
            res.escalated = a > 0;
            return Ok(res);
        }
    }
    Err(Error::CapsInsufficient(format!(
        "only constants are reflected at orders up to ({}, {}); a nonconstant operator must exist, so the ansatz caps \
         are too small or the input is outside the supported class",
        ell0 + 2 * (attempts - 1),
        m0 + 2 * (attempts - 1)
    )))
}

fn solve_at<F: Field>(
    wfs: &[WaveFunction<F>],
    cfg: &ReflectorConfig<F>,
    ell: usize,
    m: usize,
) -> Result<Option<ReflectorResult<F>>> {
    let caps = match cfg.caps {
        Some(c) => c,
        None => wfs.iter().map(|w| AnsatzCaps::defaults(w, ell, m)).reduce(|a, b| a.max(&b)).expect("nonempty"),
    };
    let bases: Vec<FourierBasis<F>> = wfs.iter().map(|w| find_pairs(w, ell, m, caps)).collect::<Result<_>>()?;
    let offsets: Vec<usize> = bases
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.dim();
            Some(o)
        })
        .collect();
    let n: usize = bases.iter().map(|b| b.dim()).sum();
    let mut sys = LinearSystem::<F>::new(n);
    // all inputs share the same R
    for (k, b) in bases.iter().enumerate().skip(1) {
        for i in 0..=ell {
            let mut entries: Vec<(usize, RatFunc<F>)> =
                bases[0].pairs.iter().enumerate().map(|(a, p)| (a, p.r.coeff(i))).collect();
            entries.extend(b.pairs.iter().enumerate().map(|(a, p)| (offsets[k] + a, p.r.coeff(i).neg_ref())));
            push_identity_rows(&mut sys, &entries);
        }
    }
    let minus_t = cfg.t.neg_ref();
    let rs: Vec<DiffOp<F>> = bases[0].r_ops();
    for row in vanishing_conditions(&rs, &minus_t)? {
        sys.push_fractions(row);
    }
    for (k, b) in bases.iter().enumerate() {
        let ls: Vec<DiffOp<F>> = b.pairs.iter().map(|p| p.l.clone()).collect();
        for row in vanishing_conditions(&ls, &cfg.s)? {
            sys.push_fractions(row.into_iter().map(|(c, e)| (offsets[k] + c, e)).collect());
        }
    }
    let null = sys.solve_nullspace();

    let member = |v: &[RatFunc<F>]| -> Result<Member<F>> {
        let combine = |k: usize, pick: &dyn Fn(usize) -> DiffOp<F>, var: Var| -> Result<DiffOp<F>> {
            let mut acc = DiffOp::zero(var);
            for a in 0..bases[k].dim() {
                let c = &v[offsets[k] + a];
                if !c.is_zero() {
                    acc = acc.add(&pick(a).scale(c))?;
                }
            }
            Ok(acc)
        };
        let r = combine(0, &|a| bases[0].pairs[a].r.clone(), Var::Z)?;
        let partners = (0..bases.len())
            .map(|k| combine(k, &|a| bases[k].pairs[a].l.clone(), Var::X))
            .collect::<Result<Vec<_>>>()?;
        Ok(Member { r, partners })
    };

    // the constant pair sits first in every basis
    let mut one = vec![RatFunc::zero(); n];
    for &o in &offsets {
        one[o] = RatFunc::one();
    }
    let mut vs = Vec::new();
    for v in &null {
        let kappa = constant_part(&member(v)?.r);
        let w: Vec<RatFunc<F>> = v.iter().zip(&one).map(|(a, b)| a.sub_ref(&kappa.mul_ref(b))).collect();
        if w.iter().any(|e| !e.is_zero()) {
            vs.push(w);
        }
    }
    if vs.is_empty() {
        return Ok(None);
    }
    let priority: Vec<usize> = (0..n).rev().collect();
    let rows = rref(vs, &priority);
    let mut members: Vec<Member<F>> = rows.iter().map(|v| member(v)).collect::<Result<_>>()?;
    members.sort_by_cached_key(|mm| (mm.order(), mm.coorder(), render_op(&mm.r)));

    let canonical = monic(&members[0]);
    let mut certificates = Vec::new();
    let rc = concomitant(&canonical.r).at(&minus_t)?;
    for (w, l) in wfs.iter().zip(&canonical.partners) {
        certificates.push(Certificate { psi: w.name.clone(), at_s: concomitant(l).at(&cfg.s)?, at_minus_t: rc.clone() });
    }
    Ok(Some(ReflectorResult {
        psi: wfs.iter().map(|w| w.name.clone()).collect(),
        s: cfg.s.clone(),
        t: cfg.t.clone(),
        ell,
        m,
        caps,
        escalated: false,
        solution_space: members,
        canonical,
        certificates,
    }))
}

/// Scales so that the leading term of the numerator of the top coefficient is 1.
fn monic<F: Field>(mm: &Member<F>) -> Member<F> {
    let lc = mm.r.leading().num().lc();
    mm.scale(&lc.inv())
}

/// `R_{s,it}(−iz, i∂z)` and its self-adjoint companion `−R̃ R̃†`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotated<F: Field> {
    pub r: DiffOp<F>,
    pub companion: DiffOp<F>,
}

/// The rotation `z → −iz`, `∂ → i∂`, `t → it`.
pub fn rotation<F: Field>(t: Var) -> Result<Substitution<F>> {
    let i = imag_unit::<F>().ok_or_else(|| Error::Unsupported("rotation needs the Gaussian rationals".into()))?;
    Ok(Substitution { alpha: i.neg(), beta: F::zero(), params: vec![(t, i)] })
}

/// The inverse rotation `z → iz`, `∂ → −i∂`, `t → −it`.
pub fn unrotation<F: Field>(t: Var) -> Result<Substitution<F>> {
    let i = imag_unit::<F>().ok_or_else(|| Error::Unsupported("rotation needs the Gaussian rationals".into()))?;
    Ok(Substitution { alpha: i.clone(), beta: F::zero(), params: vec![(t, i.neg())] })
}

pub fn rotate_op<F: Field>(r: &DiffOp<F>, t: Var) -> Result<Rotated<F>> {
    let rt = r.substitute(&rotation(t)?)?;
    let companion = rt.compose(&rt.hermitian_adjoint())?.neg();
    Ok(Rotated { r: rt, companion })
}

/// Rotates the canonical operator; `t` has to be a symbol.
pub fn rotate_to_commuting<F: Field>(res: &ReflectorResult<F>) -> Result<Rotated<F>> {
    let t = symbol_of(&res.t).ok_or_else(|| Error::Unsupported("rotation needs a symbolic t".into()))?;
    rotate_op(&res.canonical.r, t)
}

pub(crate) fn symbol_of<F: Field>(v: &RatFunc<F>) -> Option<Var> {
    let p = v.as_poly()?;
    let vs = p.vars();
    (vs.len() == 1 && *p == MultiPoly::var(vs[0])).then(|| vs[0])
}

/// How one wave function judges a candidate operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub psi: String,
    pub in_fourier_algebra: bool,
    /// Order of `b⁻¹R`, when it exists.
    pub coorder: Option<usize>,
    pub concomitant_at_s_vanishes: Option<bool>,
    pub concomitant_at_minus_t_vanishes: bool,
    pub reflected: bool,
}

/// Membership of one operator in the reflected spaces of several wave functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub operator: String,
    pub verdicts: Vec<Verdict>,
    /// Names of the wave functions whose Fourier algebra does not contain the operator.
    pub rejected_by: Vec<String>,
    pub reflected_by_all: bool,
}

pub fn membership_report<F: Field>(
    wfs: &[WaveFunction<F>],
    r: &DiffOp<F>,
    s: &RatFunc<F>,
    t: &RatFunc<F>,
) -> Result<MembershipReport> {
    let at_t = concomitant(r).vanishes_at(&t.neg_ref())?;
    let mut verdicts = Vec::new();
    for w in wfs {
        let v = match intertwine(w, r) {
            Ok(l) => {
                let at_s = concomitant(&l).vanishes_at(s)?;
                Verdict {
                    psi: w.name.clone(),
                    in_fourier_algebra: true,
                    coorder: Some(l.order()),
                    concomitant_at_s_vanishes: Some(at_s),
                    concomitant_at_minus_t_vanishes: at_t,
                    reflected: at_s && at_t,
                }
            }
            Err(Error::NotInSpan(_)) => Verdict {
                psi: w.name.clone(),
                in_fourier_algebra: false,
                coorder: None,
                concomitant_at_s_vanishes: None,
                concomitant_at_minus_t_vanishes: at_t,
                reflected: false,
            },
            Err(e) => return Err(e),
        };
        verdicts.push(v);
    }
    Ok(MembershipReport {
        operator: render_op(r),
        rejected_by: verdicts.iter().filter(|v| !v.in_fourier_algebra).map(|v| v.psi.clone()).collect(),
        reflected_by_all: verdicts.iter().all(|v| v.reflected),
        verdicts,
    })
}
