//! Exact null spaces of linear systems whose entries are polynomials in
//! parameter symbols.
//!
//! The default solver picks a maximal independent row set at a seeded random
//! specialization of the parameters, runs sparse Gauss-Jordan over the
//! parameter fraction field on those rows, and then checks every basis vector
//! against every original row exactly. Rows that fail the check are added and
//! the solve repeats, so the answer never depends on the specialization being
//! lucky. A dense fraction-free Bareiss solver is available as well.

use crate::field::Field;
use crate::gcd::lcm;
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub type SparseRow<E> = Vec<(usize, E)>;

#[derive(Clone, Debug)]
pub struct LinearSystem<F: Field> {
    pub ncols: usize,
    pub labels: Vec<String>,
    pub rows: Vec<SparseRow<MultiPoly<F>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Specialised row selection, sparse Gauss-Jordan over the fraction field, exact check.
    Sparse,
    /// Dense fraction-free Gauss-Jordan over the polynomial ring.
    Bareiss,
}

impl<F: Field> LinearSystem<F> {
    pub fn new(ncols: usize) -> Self {
        LinearSystem { ncols, labels: (0..ncols).map(|i| format!("u{i}")).collect(), rows: Vec::new() }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        LinearSystem { ncols: labels.len(), labels, rows: Vec::new() }
    }

    /// Adds a row; zero entries are dropped, duplicate columns summed.
    pub fn push(&mut self, row: SparseRow<MultiPoly<F>>) {
        let mut m: HashMap<usize, MultiPoly<F>> = HashMap::new();
        for (c, e) in row {
            assert!(c < self.ncols, "column out of range");
            let cur = m.remove(&c).unwrap_or_default();
            m.insert(c, cur.add_ref(&e));
        }
        let mut r: SparseRow<MultiPoly<F>> = m.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        if r.is_empty() {
            return;
        }
        r.sort_by_key(|(c, _)| *c);
        self.rows.push(r);
    }

    /// Adds a row of fractions after clearing denominators.
    pub fn push_fractions(&mut self, row: SparseRow<RatFunc<F>>) {
        let mut d = MultiPoly::one();
        for (_, e) in &row {
            if !e.is_zero() && !e.den().is_one() {
                d = lcm(&d, e.den());
            }
        }
        let r = row
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(c, e)| (c, e.num().mul_ref(&d.div_exact(e.den()).expect("lcm is a multiple"))))
            .collect();
        self.push(r);
    }

    pub fn params(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = Vec::new();
        for r in &self.rows {
            for (_, e) in r {
                for v in e.vars() {
                    if !vs.contains(&v) {
                        vs.push(v);
                    }
                }
            }
        }
        vs.sort();
        vs
    }

    pub fn solve_nullspace(&self) -> Vec<Vec<RatFunc<F>>> {
        self.solve_with(Strategy::Sparse)
    }

    pub fn solve_with(&self, strategy: Strategy) -> Vec<Vec<RatFunc<F>>> {
        match strategy {
            Strategy::Sparse => self.solve_sparse(),
            Strategy::Bareiss => bareiss_nullspace(self.ncols, &self.rows),
        }
    }

    pub fn rank(&self) -> usize {
        self.ncols - self.solve_nullspace().len()
    }

    /// Like [`solve_nullspace`](Self::solve_nullspace), but a candidate basis is
    /// first offered to `accept`. When `accept` certifies it by other exact
    /// means, the row-by-row check is skipped.
    pub fn solve_nullspace_checked(&self, mut accept: impl FnMut(&[Vec<RatFunc<F>>]) -> bool) -> Vec<Vec<RatFunc<F>>> {
        self.solve_sparse_with(&mut accept)
    }

    fn solve_sparse(&self) -> Vec<Vec<RatFunc<F>>> {
        self.solve_sparse_with(&mut |_| false)
    }

    fn solve_sparse_with(&self, accept: &mut dyn FnMut(&[Vec<RatFunc<F>>]) -> bool) -> Vec<Vec<RatFunc<F>>> {
        let params = self.params();
        if params.is_empty() {
            let rows: Vec<SparseRow<F>> = self
                .rows
                .iter()
                .map(|r| r.iter().map(|(c, e)| (*c, e.constant_term())).collect())
                .collect();
            let mut ech = Echelon::new();
            for r in rows {
                ech.insert(r);
            }
            let basis: Vec<Vec<RatFunc<F>>> = ech
                .nullspace(self.ncols)
                .into_iter()
                .map(|v| v.into_iter().map(RatFunc::constant).collect())
                .collect();
            accept(&basis);
            return basis;
        }
        let mut selected = self.select_rows(&params);
        loop {
            let mut ech: Echelon<RatFunc<F>> = Echelon::new();
            for &i in &selected {
                ech.insert(self.rows[i].iter().map(|(c, e)| (*c, RatFunc::from(e.clone()))).collect());
            }
            let basis = ech.nullspace(self.ncols);
            if accept(&basis) {
                return basis;
            }
            let failing = self.failing_rows(&basis);
            if failing.is_empty() {
                return basis;
            }
            for i in failing {
                if !selected.contains(&i) {
                    selected.push(i);
                }
            }
            selected.sort();
        }
    }

    /// Indices of a maximal set of rows independent at a random specialization
    /// of the parameters, computed modulo a prime.
    fn select_rows(&self, params: &[Var]) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ad11);
        let point: Vec<(Var, u64)> = params.iter().map(|&v| (v, rng.gen_range(2..MODULUS))).collect();
        let mut ech: Echelon<ModP> = Echelon::new();
        let mut keep = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let sr: SparseRow<ModP> = r
                .iter()
                .map(|(c, e)| (*c, ModP(eval_mod(e, &point))))
                .filter(|(_, e)| e.0 != 0)
                .collect();
            if ech.insert(sr) {
                keep.push(i);
            }
            if ech.rank() == self.ncols {
                break;
            }
        }
        keep
    }

    /// Rows not annihilated by some basis vector (exact polynomial check).
    pub fn failing_rows(&self, basis: &[Vec<RatFunc<F>>]) -> Vec<usize> {
        let cleared: Vec<Vec<MultiPoly<F>>> = basis.iter().map(|v| clear_denominators(v)).collect();
        let mut bad = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for v in &cleared {
                let mut acc = MultiPoly::zero();
                for (c, e) in r {
                    if !v[*c].is_zero() {
                        acc = acc.add_ref(&e.mul_ref(&v[*c]));
                    }
                }
                if !acc.is_zero() {
                    bad.push(i);
                    break;
                }
            }
        }
        bad
    }
}

const MODULUS: u64 = 998_244_353;
/// A square root of −1 modulo [`MODULUS`].
const IOTA: u64 = crate::field::powmod(3, (MODULUS - 1) / 4, MODULUS);

fn eval_mod<F: Field>(e: &MultiPoly<F>, point: &[(Var, u64)]) -> u64 {
    let mut acc = 0;
    for (m, c) in e.terms() {
        let Some(mut t) = c.to_mod(MODULUS, IOTA) else { continue };
        for (v, k) in m.vars() {
            let x = point.iter().find(|(w, _)| *w == v).map(|(_, x)| *x).unwrap_or(0);
            t = t * crate::field::powmod(x, k as u64, MODULUS) % MODULUS;
        }
        acc = (acc + t) % MODULUS;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ModP(u64);

impl Elem for ModP {
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn sub(&self, o: &Self) -> Self {
        ModP((self.0 + MODULUS - o.0) % MODULUS)
    }
    fn mul(&self, o: &Self) -> Self {
        ModP(self.0 * o.0 % MODULUS)
    }
    fn div(&self, o: &Self) -> Self {
        ModP(self.0 * crate::field::powmod(o.0, MODULUS - 2, MODULUS) % MODULUS)
    }
    fn neg(&self) -> Self {
        ModP((MODULUS - self.0) % MODULUS)
    }
    fn one() -> Self {
        ModP(1)
    }
    fn zero() -> Self {
        ModP(0)
    }
    fn weight(&self) -> u64 {
        0
    }
}

/// Scales a fraction vector by the lcm of its denominators.
pub fn clear_denominators<F: Field>(v: &[RatFunc<F>]) -> Vec<MultiPoly<F>> {
    let mut d = MultiPoly::one();
    for e in v {
        if !e.is_zero() && !e.den().is_one() {
            d = lcm(&d, e.den());
        }
    }
    v.iter().map(|e| e.num().mul_ref(&d.div_exact(e.den()).expect("lcm is a multiple"))).collect()
}

/// Arithmetic needed by the sparse eliminator.
pub(crate) trait Elem: Clone {
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn one() -> Self;
    fn zero() -> Self;
    /// Size used for pivot choice; smaller is preferred.
    fn weight(&self) -> u64;
}

impl<F: Field> Elem for F {
    fn is_zero(&self) -> bool {
        Field::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        Field::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Field::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        Field::div(self, o)
    }
    fn neg(&self) -> Self {
        Field::neg(self)
    }
    fn one() -> Self {
        Field::one()
    }
    fn zero() -> Self {
        Field::zero()
    }
    fn weight(&self) -> u64 {
        0
    }
}

impl<F: Field> Elem for RatFunc<F> {
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn div(&self, o: &Self) -> Self {
        self.div_ref(o).expect("pivot is nonzero")
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn weight(&self) -> u64 {
        RatFunc::weight(self) as u64
    }
}

/// Incrementally maintained reduced row echelon form.
pub(crate) struct Echelon<E> {
    rows: Vec<SparseRow<E>>,
    pivot_of: HashMap<usize, usize>,
    pivots: Vec<usize>,
}

fn axpy<E: Elem>(row: &SparseRow<E>, f: &E, piv: &SparseRow<E>) -> SparseRow<E> {
    // row − f · piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map(|t| t.0).unwrap_or(usize::MAX);
        let cj = piv.get(j).map(|t| t.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, f.mul(&piv[j].1).neg()));
            j += 1;
        } else {
            let v = row[i].1.sub(&f.mul(&piv[j].1));
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<E: Elem> Echelon<E> {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new(), pivot_of: HashMap::new(), pivots: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots.
    pub(crate) fn reduce(&self, row: SparseRow<E>) -> SparseRow<E> {
        let mut r = row;
        loop {
            let hit = r.iter().find(|(c, _)| self.pivot_of.contains_key(c)).cloned();
            match hit {
                Some((c, f)) => {
                    let p = &self.rows[self.pivot_of[&c]];
                    r = axpy(&r, &f, p);
                }
                None => return r,
            }
        }
    }

    /// Inserts a row; returns whether it raised the rank.
    pub(crate) fn insert(&mut self, row: SparseRow<E>) -> bool {
        let r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        // Lowest weight, then lowest column.
        let (pc, pv) = r
            .iter()
            .min_by_key(|(c, e)| (e.weight(), *c))
            .map(|(c, e)| (*c, e.clone()))
            .expect("nonempty");
        let inv = E::one().div(&pv);
        let r: SparseRow<E> = r.into_iter().map(|(c, e)| (c, if c == pc { E::one() } else { e.mul(&inv) })).collect();
        for k in 0..self.rows.len() {
            if let Some((_, f)) = self.rows[k].iter().find(|(c, _)| *c == pc).cloned() {
                self.rows[k] = axpy(&self.rows[k], &f, &r);
            }
        }
        self.pivot_of.insert(pc, self.rows.len());
        self.pivots.push(pc);
        self.rows.push(r);
        true
    }

    pub(crate) fn nullspace(&self, ncols: usize) -> Vec<Vec<E>> {
        let mut out = Vec::new();
        for f in 0..ncols {
            if self.pivot_of.contains_key(&f) {
                continue;
            }
            let mut v = vec![E::zero(); ncols];
            v[f] = E::one();
            for (k, r) in self.rows.iter().enumerate() {
                if let Some((_, e)) = r.iter().find(|(c, _)| *c == f) {
                    v[self.pivots[k]] = e.neg();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Fraction-free Gauss-Jordan; pivots by lowest total degree, then lowest column.
pub fn bareiss_nullspace<F: Field>(ncols: usize, rows: &[SparseRow<MultiPoly<F>>]) -> Vec<Vec<RatFunc<F>>> {
    let mut a: Vec<Vec<MultiPoly<F>>> = rows
        .iter()
        .map(|r| {
            let mut d = vec![MultiPoly::zero(); ncols];
            for (c, e) in r {
                d[*c] = e.clone();
            }
            d
        })
        .collect();
    let n = a.len();
    let mut prev = MultiPoly::one();
    let mut pivcol: Vec<usize> = Vec::new();
    let mut used = vec![false; ncols];
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate() {
                if used[j] || e.is_zero() {
                    continue;
                }
                let key = (e.total_degree(), j, i);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, j, i)) = best else { break };
        a.swap(i, k);
        used[j] = true;
        pivcol.push(j);
        let pk = a[k][j].clone();
        for r in 0..n {
            if r == k {
                continue;
            }
            let arj = a[r][j].clone();
            for c in 0..ncols {
                let t = pk.mul_ref(&a[r][c]).sub_ref(&arj.mul_ref(&a[k][c]));
                a[r][c] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pk;
    }
    let rank = pivcol.len();
    let mut out = Vec::new();
    for f in 0..ncols {
        if used[f] {
            continue;
        }
        let mut v = vec![RatFunc::zero(); ncols];
        v[f] = RatFunc::one();
        for k in 0..rank {
            v[pivcol[k]] = RatFunc::frac(a[k][f].neg_ref(), prev.clone());
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;
    type Q = num_rational::BigRational;

    fn p(s: &str) -> MultiPoly<Q> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let mut sys = LinearSystem::<Q>::new(3);
        for i in 0..3 {
            sys.push(vec![(i, p("1"))]);
        }
        assert!(sys.solve_nullspace().is_empty());
        assert!(sys.solve_with(Strategy::Bareiss).is_empty());
    }

    #[test]
    fn single_parametric_row() {
        let mut sys = LinearSystem::<Q>::new(2);
        sys.push(vec![(0, p("s")), (1, p("-s"))]);
        let b = sys.solve_nullspace();
        assert_eq!(b, vec![vec![RatFunc::one(), RatFunc::one()]]);
        assert_eq!(sys.solve_with(Strategy::Bareiss), b);
    }

    #[test]
    fn strategies_agree_on_parametric_system() {
        let mut sys = LinearSystem::<Q>::new(4);
        sys.push(vec![(0, p("s")), (1, p("t")), (2, p("1")), (3, p("s*t"))]);
        sys.push(vec![(0, p("1")), (1, p("s-t")), (3, p("t^2"))]);
        sys.push(vec![(0, p("s+1")), (1, p("s")), (2, p("1")), (3, p("s*t+t^2"))]);
        let a = sys.solve_nullspace();
        assert_eq!(a.len(), 2);
        assert!(sys.failing_rows(&a).is_empty());
        let b = sys.solve_with(Strategy::Bareiss);
        assert_eq!(b.len(), 2);
        assert!(sys.failing_rows(&b).is_empty());
    }
}
