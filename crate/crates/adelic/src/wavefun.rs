//! Wave functions `ψ = h(x,z) e^{−xz}` with `h = N / (p(x) q(z))`, their
//! degree and codegree witnesses, and the involutions a, b, s, c.

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcd::{content, lcm};
use crate::linalg::{clear_denominators, LinearSystem};
use crate::poly::MultiPoly;
use crate::quasiexp::QuasiExp;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use once_cell::sync::OnceCell;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub var: Var,
    pub real: bool,
}

/// `P̃ ψ = p̃(x) q̃(z) e^{−xz}` with `P̃ = p̃ Q̃`.
#[derive(Clone, Debug)]
pub struct Codegree<F: Field> {
    pub ptilde: DiffOp<F>,
    pub qtilde_op: DiffOp<F>,
    pub p_tilde: MultiPoly<F>,
    pub q_tilde: MultiPoly<F>,
    pub d2: usize,
}

#[derive(Clone, Debug)]
pub struct WaveFunction<F: Field> {
    pub name: String,
    pub params: Vec<Param>,
    pub psi: QuasiExp<F>,
    pub numerator: MultiPoly<F>,
    pub p: MultiPoly<F>,
    pub q: MultiPoly<F>,
    /// Degree witness: `P e^{−xz} = N e^{−xz}`.
    pub pw: DiffOp<F>,
    pub d1: usize,
    pub codegree: Option<Codegree<F>>,
    pub codegree_cap: usize,
    adjoint: OnceCell<QuasiExp<F>>,
}

/// One of a, b, s, c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    A,
    B,
    S,
    C,
}

impl Involution {
    /// Parses a word such as `"ac"`; letters act right to left like composition.
    pub fn word(s: &str) -> Result<Vec<Involution>> {
        s.chars()
            .map(|c| match c {
                'a' => Ok(Involution::A),
                'b' => Ok(Involution::B),
                's' => Ok(Involution::S),
                'c' => Ok(Involution::C),
                other => Err(Error::Parse(format!("unknown involution `{other}`"))),
            })
            .collect()
    }
}

impl<F: Field> WaveFunction<F> {
    pub fn h(&self) -> &RatFunc<F> {
        &self.psi.prefactor
    }

    pub fn d2(&self) -> Option<usize> {
        self.codegree.as_ref().map(|c| c.d2)
    }

    pub fn param_vars(&self) -> Vec<Var> {
        self.params.iter().map(|p| p.var).collect()
    }

    /// `min(d1, d2)`, or `None` without a codegree witness.
    pub fn min_degree(&self) -> Option<usize> {
        self.d2().map(|d2| d2.min(self.d1))
    }

    /// `ψ*`, the image under involution a.
    pub fn adjoint(&self) -> Result<&QuasiExp<F>> {
        let cg = self.codegree.as_ref().ok_or(Error::MissingWitness)?;
        self.adjoint.get_or_try_init(|| {
            let e = QuasiExp::standard(RatFunc::one());
            let applied = e.apply(&cg.qtilde_op.formal_adjoint())?;
            let qm: RatFunc<F> = cg.q_tilde.subst(Var::Z, &MultiPoly::var(Var::Z).neg_ref()).into();
            Ok(QuasiExp::standard(applied.prefactor.div_ref(&qm)?))
        })
    }

    pub fn involution(&self, tag: Involution) -> Result<WaveFunction<F>> {
        let (x, z) = (MultiPoly::var(Var::X), MultiPoly::var(Var::Z));
        let h = self.h();
        let nh = match tag {
            Involution::B => h.subst_many(&[(Var::X, z), (Var::Z, x)])?,
            Involution::S => h.subst_many(&[(Var::X, x.neg_ref()), (Var::Z, z.neg_ref())])?,
            Involution::C => h.conj(),
            Involution::A => self.adjoint()?.prefactor.clone(),
        };
        validate_with_cap(&self.name, nh, self.params.clone(), Some(self.codegree_cap))
    }

    /// Applies a word right to left (`"ab"` means b first).
    pub fn apply_word(&self, word: &[Involution]) -> Result<WaveFunction<F>> {
        let mut cur = self.clone();
        for &t in word.iter().rev() {
            cur = cur.involution(t)?;
        }
        Ok(cur)
    }

    pub fn is_fixed(&self, word: &str) -> Result<bool> {
        let w = Involution::word(word)?;
        Ok(self.apply_word(&w)?.h() == self.h())
    }

    /// Degree witness divided by `p`: `M = P / p`, so that `ψ = (1/q) M e^{−xz}`.
    pub fn m_op(&self) -> DiffOp<F> {
        self.pw.scale(&RatFunc::frac(MultiPoly::one(), self.p.clone()))
    }
}

/// Validates `h` with the default codegree cap `2·d1 + 4`.
pub fn validate<F: Field>(name: &str, h: RatFunc<F>, params: Vec<Param>) -> Result<WaveFunction<F>> {
    validate_with_cap(name, h, params, None)
}

pub fn validate_with_cap<F: Field>(
    name: &str,
    h: RatFunc<F>,
    params: Vec<Param>,
    cap: Option<usize>,
) -> Result<WaveFunction<F>> {
    if h.is_zero() {
        return Err(Error::Unsupported("zero prefactor".into()));
    }
    for v in h.vars() {
        if !(v == Var::X || v == Var::Z || v.is_parameter()) {
            return Err(Error::Unsupported(format!("variable {v} in prefactor")));
        }
    }
    let den = h.den().clone();
    let q = content(&den, Var::X).monic();
    let p = den.div_exact(&q).expect("content divides").monic();
    if p.contains(Var::Z) {
        return Err(Error::Unsupported("denominator is not p(x) q(z)".into()));
    }
    // h = N / (p q) with den = p q up to the monic scaling
    let scale = den.lc().div(&p.mul_ref(&q).lc());
    let numerator = h.num().scale(&scale.inv());
    let cs = numerator.coeffs_in(Var::Z);
    let d1 = cs.len().saturating_sub(1);
    let pw = DiffOp::new(
        Var::X,
        cs.iter()
            .enumerate()
            .map(|(j, a)| RatFunc::from(if j % 2 == 0 { a.clone() } else { a.neg_ref() }))
            .collect(),
    );
    let cap = cap.unwrap_or(2 * d1 + 4);
    let mut wf = WaveFunction {
        name: name.to_string(),
        params,
        psi: QuasiExp::standard(h),
        numerator,
        p,
        q,
        pw,
        d1,
        codegree: None,
        codegree_cap: cap,
        adjoint: OnceCell::new(),
    };
    wf.codegree = find_codegree(&wf, cap).ok();
    Ok(wf)
}

/// Like [`validate`] but fails when no codegree witness exists within the cap.
pub fn validate_strict<F: Field>(name: &str, h: RatFunc<F>, params: Vec<Param>) -> Result<WaveFunction<F>> {
    let wf = validate(name, h, params)?;
    if wf.codegree.is_none() {
        return Err(Error::NoCodegreeWitness(wf.codegree_cap));
    }
    Ok(wf)
}

/// Searches constant-coefficient `G(∂)` of order `d1, d1+1, …` with `G = Q̃ M`
/// exactly and `q(z) | G(−z)`.
pub fn find_codegree<F: Field>(wf: &WaveFunction<F>, cap: usize) -> Result<Codegree<F>> {
    let m = wf.m_op();
    let d1 = wf.d1;
    let lead = m.leading();
    let x = Var::X;
    // ∂^k = quots[k] ∘ M + rems[k]
    let mut quots: Vec<DiffOp<F>> = Vec::new();
    let mut rems: Vec<DiffOp<F>> = Vec::new();
    let reduce = |xop: DiffOp<F>, q: DiffOp<F>| -> (DiffOp<F>, DiffOp<F>) {
        if !xop.is_zero() && xop.order() == d1 {
            let c = xop.leading().div_ref(&lead).expect("leading coefficient nonzero");
            let r = xop.sub(&m.scale(&c)).expect("same variable");
            let q2 = q.add(&DiffOp::mult(x, c)).expect("same variable");
            (r, q2)
        } else {
            (xop, q)
        }
    };
    let (r0, q0) = reduce(DiffOp::one(x), DiffOp::zero(x));
    rems.push(r0);
    quots.push(q0);
    for k in 1..=cap {
        let xk = DiffOp::d(x, 1).compose(&rems[k - 1]).expect("same variable");
        let qk = DiffOp::d(x, 1).compose(&quots[k - 1]).expect("same variable");
        let (r, q) = reduce(xk, qk);
        rems.push(r);
        quots.push(q);
    }
    let zq = wf.q.clone();
    for kmax in d1..=cap {
        let n = kmax + 1;
        let mut sys = LinearSystem::<F>::new(n);
        // remainder conditions, one identity per ∂-power, matched in x
        for j in 0..d1 {
            let entries: Vec<(usize, RatFunc<F>)> = (0..n).map(|k| (k, rems[k].coeff(j))).collect();
            push_identity_rows(&mut sys, &entries);
        }
        // q(z) | G(−z)
        let zrems: Vec<RatFunc<F>> = (0..n)
            .map(|k| {
                let mono = MultiPoly::var(Var::Z).neg_ref().pow(k as u32);
                univariate_rem(&mono, &zq, Var::Z)
            })
            .collect();
        let entries: Vec<(usize, RatFunc<F>)> = zrems.into_iter().enumerate().collect();
        push_identity_rows(&mut sys, &entries);
        let basis = sys.solve_nullspace();
        if basis.is_empty() {
            continue;
        }
        let g = clear_denominators(&basis[0]);
        let gpoly = MultiPoly::from_terms(g.iter().enumerate().flat_map(|(k, c)| {
            c.mul_ref(&MultiPoly::var(Var::Z).neg_ref().pow(k as u32)).terms().to_vec()
        }));
        let q_tilde = gpoly.div_exact(&zq).ok_or_else(|| Error::NonExact("q does not divide G(-z)".into()))?;
        let mut qt = DiffOp::zero(x);
        for (k, c) in g.iter().enumerate() {
            if !c.is_zero() {
                qt = qt.add(&quots[k].scale(&c.clone().into())).expect("same variable");
            }
        }
        let mut pt = MultiPoly::one();
        for c in qt.coeffs() {
            if !c.is_zero() {
                pt = lcm(&pt, c.den());
            }
        }
        let ptilde = qt.scale(&pt.clone().into());
        return Ok(Codegree { ptilde, qtilde_op: qt, p_tilde: pt, q_tilde, d2: kmax - d1 });
    }
    Err(Error::NoCodegreeWitness(cap))
}

/// Remainder of `a` modulo `b` in `v` over the fraction field of the other variables.
pub fn univariate_rem<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>, v: Var) -> RatFunc<F> {
    let db = b.degree(v);
    if db == 0 {
        return RatFunc::zero();
    }
    let lg = b.coeff_of(v, db);
    let mut r = a.clone();
    let mut e = 0;
    while !r.is_zero() && r.degree(v) >= db {
        let dr = r.degree(v);
        let lr = r.coeff_of(v, dr);
        let shift = MultiPoly::monomial(crate::poly::Mono::var(v, dr - db), F::one());
        r = r.mul_ref(&lg).sub_ref(&lr.mul_ref(&shift).mul_ref(b));
        e += 1;
    }
    RatFunc::frac(r, lg.pow(e))
}

/// Rows for the identity `Σ_k u_k E_k = 0`, where the `E_k` are fractions in
/// spatial variables and parameters; matched coefficientwise in the spatial
/// variables after clearing a common denominator.
pub fn push_identity_rows<F: Field>(sys: &mut LinearSystem<F>, entries: &[(usize, RatFunc<F>)]) {
    let mut d = MultiPoly::one();
    for (_, e) in entries {
        if !e.is_zero() && !e.den().is_one() {
            d = lcm(&d, e.den());
        }
    }
    let polys: Vec<(usize, MultiPoly<F>)> = entries
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(k, e)| (*k, e.num().mul_ref(&d.div_exact(e.den()).expect("lcm is a multiple"))))
        .collect();
    push_poly_identity_rows(sys, &polys);
}

/// Polynomial version of [`push_identity_rows`].
pub fn push_poly_identity_rows<F: Field>(sys: &mut LinearSystem<F>, polys: &[(usize, MultiPoly<F>)]) {
    use crate::poly::Mono;
    use std::collections::BTreeMap;
    let mut rows: BTreeMap<Mono, Vec<(usize, Vec<(Mono, F)>)>> = BTreeMap::new();
    for (k, p) in polys {
        for (m, c) in p.terms() {
            let mut spatial = Mono::one();
            let mut param = Mono::one();
            for (v, e) in m.vars() {
                if v.is_parameter() {
                    param.set(v, e);
                } else {
                    spatial.set(v, e);
                }
            }
            let row = rows.entry(spatial).or_default();
            match row.iter_mut().find(|(kk, _)| kk == k) {
                Some((_, ts)) => ts.push((param, c.clone())),
                None => row.push((*k, vec![(param, c.clone())])),
            }
        }
    }
    for (_, row) in rows.into_iter().rev() {
        sys.push(row.into_iter().map(|(k, ts)| (k, MultiPoly::from_terms(ts))).collect());
    }
}
