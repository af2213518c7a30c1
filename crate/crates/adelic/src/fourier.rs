//! Slices of the Fourier algebra: operators `R(z,∂z)` that have a partner
//! `L(x,∂x)` with `Lψ = Rψ`, found by ansatz and exact linear algebra.
//!
//! The default solve puts an ansatz on `R` only. The partner is eliminated by
//! division in `z` against `(∂x − z)^j h`, which is triangular in `z`, and the
//! remainder has to vanish identically. The two-sided ansatz is available as
//! [`LeftMode::Ansatz`].

use crate::diffop::{binom, DiffOp};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinearSystem;
use crate::poly::{Mono, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::text::render_op;
use crate::wavefun::{push_identity_rows, push_poly_identity_rows, WaveFunction};

/// Bounds on the coefficient ansatz. `L` coefficients are `u_j(x)/p^a` with
/// `deg u_j ≤ deg_u`; `R` coefficients are `v_i(z)/(q^b z^c)` with
/// `deg v_i ≤ deg_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzCaps {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub deg_u: usize,
    pub deg_v: usize,
}

impl AnsatzCaps {
    pub fn defaults<F: Field>(wf: &WaveFunction<F>, ell: usize, m: usize) -> Self {
        let dp = wf.p.degree(Var::X) as usize;
        let dq = wf.q.degree(Var::Z) as usize;
        let (a, b, c) = (m, ell, ell * (1 + dq));
        AnsatzCaps { a, b, c, deg_u: m + dp * a + 2, deg_v: ell + dq * b + c + 2 }
    }

    /// Every cap doubled.
    pub fn doubled(&self) -> Self {
        AnsatzCaps { a: 2 * self.a, b: 2 * self.b, c: 2 * self.c, deg_u: 2 * self.deg_u, deg_v: 2 * self.deg_v }
    }

    /// Componentwise maximum.
    pub fn max(&self, o: &Self) -> Self {
        AnsatzCaps {
            a: self.a.max(o.a),
            b: self.b.max(o.b),
            c: self.c.max(o.c),
            deg_u: self.deg_u.max(o.deg_u),
            deg_v: self.deg_v.max(o.deg_v),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LeftMode {
    /// Ansatz on `R` only; `L` is eliminated exactly.
    #[default]
    Eliminate,
    /// Ansatz on both `L` and `R`.
    Ansatz,
}

/// `L ψ = R ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BispectralPair<F: Field> {
    pub l: DiffOp<F>,
    pub r: DiffOp<F>,
}

impl<F: Field> BispectralPair<F> {
    pub fn order(&self) -> usize {
        self.r.order()
    }

    pub fn coorder(&self) -> usize {
        self.l.order()
    }

    pub fn is_constant(&self) -> bool {
        self.r.is_constant()
    }
}

#[derive(Clone, Debug)]
pub struct FourierBasis<F: Field> {
    pub ell: usize,
    pub m: usize,
    pub caps: AnsatzCaps,
    /// The constant pair first, then sorted by order, coorder and text of `R`.
    pub pairs: Vec<BispectralPair<F>>,
    /// Set by [`check_caps`] when doubling the caps changed the dimension.
    pub warning: Option<String>,
}

impl<F: Field> FourierBasis<F> {
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn r_ops(&self) -> Vec<DiffOp<F>> {
        self.pairs.iter().map(|p| p.r.clone()).collect()
    }
}

/// `Ñ_j` with `(∂x − z)^j h = D̃_j / (p^{j+1} q)`.
pub(crate) fn x_jets<F: Field>(wf: &WaveFunction<F>, m: usize) -> Vec<MultiPoly<F>> {
    jets(&wf.numerator, &wf.p, Var::X, Var::Z, m)
}

/// `Ẽ_i` with `(∂z − x)^i h = Ẽ_i / (p q^{i+1})`.
pub(crate) fn z_jets<F: Field>(wf: &WaveFunction<F>, ell: usize) -> Vec<MultiPoly<F>> {
    jets(&wf.numerator, &wf.q, Var::Z, Var::X, ell)
}

fn jets<F: Field>(n: &MultiPoly<F>, den: &MultiPoly<F>, v: Var, other: Var, k: usize) -> Vec<MultiPoly<F>> {
    // den^{j+1} ∂^j (n / den)
    let dd = den.diff(v);
    let mut nt = vec![n.clone()];
    for j in 0..k {
        let cur = &nt[j];
        let next = cur.diff(v).mul_ref(den).sub_ref(&dd.mul_ref(cur).scale(&F::from_int(j as i64 + 1)));
        nt.push(next);
    }
    let shift = MultiPoly::var(other).neg_ref().mul_ref(den);
    let pows: Vec<MultiPoly<F>> = (0..=k).map(|e| shift.pow(e as u32)).collect();
    (0..=k)
        .map(|j| {
            let mut acc = MultiPoly::zero();
            for (i, nti) in nt.iter().enumerate().take(j + 1) {
                acc = acc.add_ref(&pows[j - i].mul_ref(nti).scale(&F::from_int(binom(j, i))));
            }
            acc
        })
        .collect()
}

/// Layout of the `R` unknowns: column `i·(deg_v+1) + k` multiplies `z^k/(q^b z^c) ∂z^i`.
#[derive(Clone, Debug)]
struct RLayout<F: Field> {
    ell: usize,
    deg_v: usize,
    /// `q^b z^c`
    den: MultiPoly<F>,
}

impl<F: Field> RLayout<F> {
    fn ncols(&self) -> usize {
        (self.ell + 1) * (self.deg_v + 1)
    }

    fn col(&self, i: usize, k: usize) -> usize {
        i * (self.deg_v + 1) + k
    }

    fn op(&self, v: &[RatFunc<F>]) -> DiffOp<F> {
        let coeffs = (0..=self.ell)
            .map(|i| {
                let mut num = RatFunc::zero();
                for k in 0..=self.deg_v {
                    let c = &v[self.col(i, k)];
                    if !c.is_zero() {
                        num = num.add_ref(&c.mul_poly(&MultiPoly::monomial(Mono::var(Var::Z, k as u32), F::one())));
                    }
                }
                num.mul_ref(&RatFunc::frac(MultiPoly::one(), self.den.clone()))
            })
            .collect();
        DiffOp::new(Var::Z, coeffs)
    }

    /// Coordinates of the identity operator.
    fn constant(&self) -> Option<Vec<RatFunc<F>>> {
        let mut v = vec![RatFunc::zero(); self.ncols()];
        for (m, c) in self.den.terms() {
            let k = m.exp(Var::Z) as usize;
            if k > self.deg_v {
                return None;
            }
            let mut rest = m.clone();
            rest.set(Var::Z, 0);
            let e = RatFunc::from(MultiPoly::monomial(rest, c.clone()));
            v[self.col(0, k)] = v[self.col(0, k)].add_ref(&e);
        }
        Some(v)
    }
}

/// Constant term of the polynomial part of the `∂^0` coefficient.
pub(crate) fn constant_part<F: Field>(r: &DiffOp<F>) -> RatFunc<F> {
    r.coeff(0).polynomial_part(Var::Z).into_iter().next().unwrap_or_else(RatFunc::zero)
}

/// Computes a basis of `F_z^{ℓ,m}(ψ)` with the given caps.
pub fn find_pairs<F: Field>(wf: &WaveFunction<F>, ell: usize, m: usize, caps: AnsatzCaps) -> Result<FourierBasis<F>> {
    find_pairs_with(wf, ell, m, caps, LeftMode::Eliminate)
}

/// [`find_pairs`] with default caps.
pub fn find_pairs_default<F: Field>(wf: &WaveFunction<F>, ell: usize, m: usize) -> Result<FourierBasis<F>> {
    find_pairs(wf, ell, m, AnsatzCaps::defaults(wf, ell, m))
}

pub fn find_pairs_with<F: Field>(
    wf: &WaveFunction<F>,
    ell: usize,
    m: usize,
    caps: AnsatzCaps,
    mode: LeftMode,
) -> Result<FourierBasis<F>> {
    let layout = RLayout {
        ell,
        deg_v: caps.deg_v,
        den: wf.q.pow(caps.b as u32).mul_mono(&Mono::var(Var::Z, caps.c as u32), &F::one()),
    };
    if layout.constant().is_none() {
        return Err(Error::Degenerate("numerator cap too small to hold the constant operator".into()));
    }
    let dt = x_jets(wf, m);
    let et = z_jets(wf, ell);
    let nr = layout.ncols();
    let pairs = match mode {
        LeftMode::Eliminate => {
            let sys = eliminate_system(wf, &layout, m, &dt, &et);
            let mut found: Option<Vec<BispectralPair<F>>> = None;
            sys.solve_nullspace_checked(|basis| match canonical_pairs(wf, &layout, basis, m) {
                Ok(p) => {
                    found = Some(p);
                    true
                }
                Err(_) => false,
            });
            match found {
                Some(p) => p,
                None => return Err(Error::NonExact("Fourier slice basis failed exact verification".into())),
            }
        }
        LeftMode::Ansatz => {
            let sys = ansatz_system(wf, &layout, m, &caps, &dt, &et);
            let basis = sys.solve_nullspace();
            let rpart: Vec<Vec<RatFunc<F>>> = basis.iter().map(|v| v[..nr].to_vec()).collect();
            canonical_pairs(wf, &layout, &rpart, m)?
        }
    };
    Ok(FourierBasis { ell, m, caps, pairs, warning: None })
}

fn eliminate_system<F: Field>(
    wf: &WaveFunction<F>,
    layout: &RLayout<F>,
    m: usize,
    dt: &[MultiPoly<F>],
    et: &[MultiPoly<F>],
) -> LinearSystem<F> {
    let ell = layout.ell;
    // Multiplying Lψ = Rψ by p q^{ℓ+1} q^b z^c e^{xz}:
    //   Σ_j (λ_j/p^j) D̃_j F = Σ_i v_i Ẽ_i q^{ℓ−i},  F = q^ℓ q^b z^c.
    let f = wf.q.pow(ell as u32).mul_ref(&layout.den);
    let h: Vec<MultiPoly<F>> = dt.iter().map(|d| d.mul_ref(&f)).collect();
    let tops: Vec<(u32, MultiPoly<F>)> = h
        .iter()
        .map(|hj| {
            let t = hj.degree(Var::Z);
            (t, hj.coeff_of(Var::Z, t))
        })
        .collect();
    let bases: Vec<MultiPoly<F>> = (0..=ell).map(|i| et[i].mul_ref(&wf.q.pow((ell - i) as u32))).collect();
    let mut polys: Vec<(usize, MultiPoly<F>)> = Vec::with_capacity(layout.ncols());
    for (i, base) in bases.iter().enumerate() {
        for k in 0..=layout.deg_v {
            let mut g = base.mul_mono(&Mono::var(Var::Z, k as u32), &F::one());
            for j in (0..=m).rev() {
                let (t, c) = &tops[j];
                let coef = g.coeff_of(Var::Z, *t);
                g = g.mul_ref(c);
                if !coef.is_zero() {
                    g = g.sub_ref(&coef.mul_ref(&h[j]));
                }
            }
            polys.push((layout.col(i, k), g));
        }
    }
    let mut sys = LinearSystem::new(layout.ncols());
    push_poly_identity_rows(&mut sys, &polys);
    sys
}

fn ansatz_system<F: Field>(
    wf: &WaveFunction<F>,
    layout: &RLayout<F>,
    m: usize,
    caps: &AnsatzCaps,
    dt: &[MultiPoly<F>],
    et: &[MultiPoly<F>],
) -> LinearSystem<F> {
    let ell = layout.ell;
    let nr = layout.ncols();
    let f = wf.q.pow(ell as u32).mul_ref(&layout.den);
    let pam = wf.p.pow((caps.a + m) as u32);
    let mut polys: Vec<(usize, MultiPoly<F>)> = Vec::new();
    for i in 0..=ell {
        let base = et[i].mul_ref(&pam).mul_ref(&wf.q.pow((ell - i) as u32)).neg_ref();
        for k in 0..=layout.deg_v {
            polys.push((layout.col(i, k), base.mul_mono(&Mono::var(Var::Z, k as u32), &F::one())));
        }
    }
    for j in 0..=m {
        let base = dt[j].mul_ref(&wf.p.pow((m - j) as u32)).mul_ref(&f);
        for k in 0..=caps.deg_u {
            polys.push((nr + j * (caps.deg_u + 1) + k, base.mul_mono(&Mono::var(Var::X, k as u32), &F::one())));
        }
    }
    let mut sys = LinearSystem::new(nr + (m + 1) * (caps.deg_u + 1));
    push_poly_identity_rows(&mut sys, &polys);
    sys
}

/// Turns null-space vectors in `R` coordinates into the canonical basis: the
/// constant pair, then a reduced echelon basis of the rest with constants
/// removed, each paired with its exact partner.
fn canonical_pairs<F: Field>(
    wf: &WaveFunction<F>,
    layout: &RLayout<F>,
    basis: &[Vec<RatFunc<F>>],
    m: usize,
) -> Result<Vec<BispectralPair<F>>> {
    let one = layout.constant().expect("checked by the caller");
    let mut vs: Vec<Vec<RatFunc<F>>> = Vec::new();
    for v in basis {
        let k = constant_part(&layout.op(v));
        let w: Vec<RatFunc<F>> = v.iter().zip(&one).map(|(a, b)| a.sub_ref(&k.mul_ref(b))).collect();
        if w.iter().any(|e| !e.is_zero()) {
            vs.push(w);
        }
    }
    // priority: highest ∂-order first, then highest z-power
    let order: Vec<usize> = (0..=layout.ell)
        .rev()
        .flat_map(|i| (0..=layout.deg_v).rev().map(move |k| layout.col(i, k)))
        .collect();
    let rows = rref(vs, &order);
    let mut pairs = vec![BispectralPair { l: DiffOp::one(Var::X), r: DiffOp::one(Var::Z) }];
    let mut rest = Vec::new();
    for v in rows {
        let r = layout.op(&v);
        let l = intertwine(wf, &r)?;
        if l.order() > m && !l.is_zero() {
            return Err(Error::NonExact(format!("partner of order {} exceeds {m}", l.order())));
        }
        rest.push(BispectralPair { l, r });
    }
    sort_pairs(&mut rest);
    pairs.extend(rest);
    Ok(pairs)
}

pub(crate) fn sort_pairs<F: Field>(ps: &mut [BispectralPair<F>]) {
    ps.sort_by_cached_key(|p| (p.order(), p.coorder(), render_op(&p.r)));
}

/// Reduced row echelon form with pivots chosen along `order`; zero rows dropped.
pub(crate) fn rref<F: Field>(mut rows: Vec<Vec<RatFunc<F>>>, order: &[usize]) -> Vec<Vec<RatFunc<F>>> {
    let mut out: Vec<Vec<RatFunc<F>>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for &c in order {
        let Some(idx) = rows.iter().position(|r| !r[c].is_zero()) else { continue };
        let r = rows.swap_remove(idx);
        let inv = r[c].inv().expect("nonzero pivot");
        let r: Vec<RatFunc<F>> = r.iter().map(|e| e.mul_ref(&inv)).collect();
        for other in rows.iter_mut().chain(out.iter_mut()) {
            if !other[c].is_zero() {
                let f = other[c].clone();
                for (e, p) in other.iter_mut().zip(&r) {
                    if !p.is_zero() {
                        *e = e.sub_ref(&f.mul_ref(p));
                    }
                }
            }
        }
        out.push(r);
        pivots.push(c);
        rows.retain(|r| r.iter().any(|e| !e.is_zero()));
        if rows.is_empty() {
            break;
        }
    }
    out
}

/// The partner `L = b⁻¹(R)` with `Lψ = Rψ`, computed directly; fails when `R`
/// is not in the Fourier algebra.
pub fn intertwine<F: Field>(wf: &WaveFunction<F>, r: &DiffOp<F>) -> Result<DiffOp<F>> {
    if r.var() != Var::Z {
        return Err(Error::VarMismatch(r.var().name(), "z".into()));
    }
    let g = wf.psi.apply(r)?.prefactor;
    if g.is_zero() {
        return Ok(DiffOp::zero(Var::X));
    }
    // Σ_j ν_j D̃_j Gd = Gn q with ν_j = λ_j / p^{j+1}, solved top-down in z.
    let (gn, gd) = (g.num(), g.den());
    let rhs_poly = gn.mul_ref(&wf.q);
    let dz_gd = gd.degree(Var::Z) as i64;
    let top = rhs_poly.degree(Var::Z) as i64 - wf.d1 as i64 - dz_gd;
    if top < 0 {
        return Err(Error::NotInSpan("no partner L exists (degree mismatch in z)".into()));
    }
    let m = top as usize;
    let dt = x_jets(wf, m);
    let mut rhs: Vec<RatFunc<F>> = rhs_poly.coeffs_in(Var::Z).into_iter().map(RatFunc::from).collect();
    let mut lam = vec![RatFunc::zero(); m + 1];
    let mut pp = wf.p.clone();
    let mut ppows = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        ppows.push(pp.clone());
        pp = pp.mul_ref(&wf.p);
    }
    for j in (0..=m).rev() {
        let hj: Vec<RatFunc<F>> = dt[j].mul_ref(gd).coeffs_in(Var::Z).into_iter().map(RatFunc::from).collect();
        let t = hj.len() - 1;
        if t >= rhs.len() {
            continue;
        }
        let nu = rhs[t].div_ref(&hj[t])?;
        if nu.is_zero() {
            continue;
        }
        for (k, e) in hj.iter().enumerate() {
            if !e.is_zero() {
                rhs[k] = rhs[k].sub_ref(&nu.mul_ref(e));
            }
        }
        lam[j] = nu.mul_poly(&ppows[j]);
    }
    if rhs.iter().any(|e| !e.is_zero()) {
        return Err(Error::NotInSpan("no partner L exists".into()));
    }
    Ok(DiffOp::new(Var::X, lam))
}

/// Coordinates of `target` in the span of `ops` over the parameter field.
pub fn span_coordinates<F: Field>(ops: &[DiffOp<F>], target: &DiffOp<F>) -> Option<Vec<RatFunc<F>>> {
    let n = ops.len();
    let ord = ops.iter().map(|o| o.order()).chain([target.order()]).max().unwrap_or(0);
    let mut sys = LinearSystem::<F>::new(n + 1);
    for i in 0..=ord {
        let mut entries: Vec<(usize, RatFunc<F>)> = ops.iter().enumerate().map(|(k, o)| (k, o.coeff(i))).collect();
        entries.push((n, target.coeff(i).neg_ref()));
        push_identity_rows(&mut sys, &entries);
    }
    let basis = sys.solve_nullspace();
    let v = basis.into_iter().find(|v| !v[n].is_zero())?;
    let s = v[n].inv().ok()?;
    Some(v[..n].iter().map(|e| e.mul_ref(&s)).collect())
}

/// `b⁻¹(R)` within a computed basis.
pub fn b_inverse<F: Field>(basis: &FourierBasis<F>, r: &DiffOp<F>) -> Result<DiffOp<F>> {
    let c = span_coordinates(&basis.r_ops(), r)
        .ok_or_else(|| Error::NotInSpan(format!("R is not in F^({},{})", basis.ell, basis.m)))?;
    let mut l = DiffOp::zero(Var::X);
    for (ck, p) in c.iter().zip(&basis.pairs) {
        if !ck.is_zero() {
            l = l.add(&p.l.scale(ck))?;
        }
    }
    Ok(l)
}

/// Recomputes the basis with doubled caps and records a warning on `basis`
/// when the dimension moved.
pub fn check_caps<F: Field>(wf: &WaveFunction<F>, basis: &mut FourierBasis<F>) -> Result<bool> {
    let big = find_pairs(wf, basis.ell, basis.m, basis.caps.doubled())?;
    let stable = big.dim() == basis.dim();
    if !stable {
        basis.warning = Some(format!(
            "dimension changed from {} to {} when the caps were doubled; basis possibly incomplete",
            basis.dim(),
            big.dim()
        ));
    }
    Ok(stable)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionTable {
    /// `(ℓ, m, dim)` for every slice computed.
    pub entries: Vec<(usize, usize, usize)>,
    /// Slices with `ℓ, m ≥` this bound count as stable.
    pub stable_from: usize,
    /// `(ℓ+1)(m+1) − dim` on the stable range, when it is a single value.
    pub n: Option<usize>,
    pub consistent: bool,
}

impl DimensionTable {
    pub fn dim(&self, ell: usize, m: usize) -> Option<usize> {
        self.entries.iter().find(|e| e.0 == ell && e.1 == m).map(|e| e.2)
    }
}

pub fn dimension_table<F: Field>(wf: &WaveFunction<F>, ell_max: usize, m_max: usize) -> Result<DimensionTable> {
    dimension_table_from(wf, 1, ell_max, m_max)
}

/// Like [`dimension_table`] with both orders starting at `lo`.
pub fn dimension_table_from<F: Field>(
    wf: &WaveFunction<F>,
    lo: usize,
    ell_max: usize,
    m_max: usize,
) -> Result<DimensionTable> {
    let stable_from = match wf.min_degree() {
        Some(d) => (2 * d).saturating_sub(1),
        None => 0,
    };
    let mut entries = Vec::new();
    let mut ns: Vec<usize> = Vec::new();
    for ell in lo..=ell_max {
        for m in lo..=m_max {
            let b = find_pairs_default(wf, ell, m)?;
            let full = (ell + 1) * (m + 1);
            if ell >= stable_from && m >= stable_from {
                ns.push(full.saturating_sub(b.dim()));
            }
            entries.push((ell, m, b.dim()));
        }
    }
    ns.dedup();
    let consistent = ns.len() <= 1;
    let n = if ns.len() == 1 { Some(ns[0]) } else { None };
    Ok(DimensionTable { entries, stable_from, n, consistent })
}
