//! Bilinear concomitants: the boundary form `C_R(f,g)` with
//! `d/dv C_R(f,g) = (R f) g − f (R* g)`, and the linear conditions expressing
//! that it vanishes identically at a point.

use crate::diffop::{binom, DiffOp};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{LinearSystem, SparseRow};
use crate::poly::{Mono, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;

/// `C(f,g) = Σ_{j,i} f^{(j)} M[j][i] g^{(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcomitantForm<F: Field> {
    pub var: Var,
    pub matrix: Vec<Vec<RatFunc<F>>>,
}

impl<F: Field> ConcomitantForm<F> {
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|e| e.is_zero())
    }

    pub fn evaluate(&self, f: &RatFunc<F>, g: &RatFunc<F>) -> RatFunc<F> {
        let n = self.n();
        let fs = derivatives(f, self.var, n);
        let gs = derivatives(g, self.var, n);
        let mut acc = RatFunc::zero();
        for (j, row) in self.matrix.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    acc = acc.add_ref(&fs[j].mul_ref(e).mul_ref(&gs[i]));
                }
            }
        }
        acc
    }

    /// The matrix with the variable set to `c`.
    pub fn at(&self, c: &RatFunc<F>) -> Result<Vec<Vec<RatFunc<F>>>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|e| e.subst(self.var, c).map_err(|_| Error::PoleAtPoint)).collect())
            .collect()
    }

    pub fn vanishes_at(&self, c: &RatFunc<F>) -> Result<bool> {
        Ok(self.at(c)?.iter().flatten().all(|e| e.is_zero()))
    }
}

fn derivatives<F: Field>(f: &RatFunc<F>, v: Var, n: usize) -> Vec<RatFunc<F>> {
    let mut out = vec![f.clone()];
    for k in 1..n.max(1) {
        let d = out[k - 1].diff(v);
        out.push(d);
    }
    out
}

/// `C_R(f,g) = Σ_{m≥1} Σ_{j+k=m−1} (−1)^k f^{(j)} (a_m g)^{(k)}`, expanded by Leibniz.
pub fn concomitant<F: Field>(r: &DiffOp<F>) -> ConcomitantForm<F> {
    let v = r.var();
    let n = if r.is_zero() { 0 } else { r.order() };
    let mut mat = vec![vec![RatFunc::zero(); n]; n];
    for m in 1..=n {
        let a = r.coeff(m);
        if a.is_zero() {
            continue;
        }
        let da = derivatives(&a, v, m);
        for j in 0..m {
            let k = m - 1 - j;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for i in 0..=k {
                let c = F::from_int(sign * binom(k, i));
                mat[j][i] = mat[j][i].add_ref(&da[k - i].scale(&c));
            }
        }
    }
    ConcomitantForm { var: v, matrix: mat }
}

/// `d/dv C_R(f,g) − ((R f) g − f (R* g))`, zero for a correct concomitant.
pub fn lagrange_residual<F: Field>(r: &DiffOp<F>, f: &RatFunc<F>, g: &RatFunc<F>) -> RatFunc<F> {
    let c = concomitant(r).evaluate(f, g).diff(r.var());
    let rhs = r.apply(f).mul_ref(g).sub_ref(&f.mul_ref(&r.formal_adjoint().apply(g)));
    c.sub_ref(&rhs)
}

/// Rows in the unknowns `u_k` stating that the concomitant of `Σ_k u_k T_k`
/// vanishes identically at `c`: one row per jet pair `(j, i)`.
pub fn vanishing_conditions<F: Field>(template: &[DiffOp<F>], c: &RatFunc<F>) -> Result<Vec<SparseRow<RatFunc<F>>>> {
    let mut mats = Vec::with_capacity(template.len());
    for t in template {
        for a in t.coeffs() {
            a.subst(t.var(), c).map_err(|_| Error::PoleAtPoint)?;
        }
        mats.push(concomitant(t).at(c)?);
    }
    let n = mats.iter().map(|m| m.len()).max().unwrap_or(0);
    let mut rows = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let row: SparseRow<RatFunc<F>> = mats
                .iter()
                .enumerate()
                .filter_map(|(k, m)| m.get(j).and_then(|r| r.get(i)).filter(|e| !e.is_zero()).map(|e| (k, e.clone())))
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Rank of [`vanishing_conditions`] over the parameter field.
pub fn condition_rank<F: Field>(template: &[DiffOp<F>], c: &RatFunc<F>) -> Result<usize> {
    let rows = vanishing_conditions(template, c)?;
    let mut sys = LinearSystem::<F>::new(template.len());
    for r in rows {
        sys.push_fractions(r);
    }
    Ok(sys.rank())
}

/// `z^d ∂^m` for `m ≤ ell`, `d ≤ deg`: a template whose coefficients are generic
/// polynomials of degree `deg`.
pub fn generic_template<F: Field>(var: Var, ell: usize, deg: usize) -> Vec<DiffOp<F>> {
    let mut out = Vec::new();
    for m in 0..=ell {
        for d in 0..=deg {
            let mut cs = vec![RatFunc::zero(); m + 1];
            cs[m] = MultiPoly::monomial(Mono::var(var, d as u32), F::one()).into();
            out.push(DiffOp::new(var, cs));
        }
    }
    out
}

/// `⌈ℓ/2⌉·⌈(ℓ+1)/2⌉`, the bound on independent vanishing conditions.
pub fn condition_bound(ell: usize) -> usize {
    ell.div_ceil(2) * (ell + 1).div_ceil(2)
}
