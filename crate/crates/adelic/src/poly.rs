//! Sparse multivariate polynomials.

use crate::field::Field;
use crate::symbol::Var;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector indexed by [`Var`] id, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(SmallVec<[u16; 8]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Mono {
        let mut m = Mono::one();
        m.set(v, e);
        m
    }

    pub fn from_pairs(pairs: &[(Var, u32)]) -> Mono {
        let mut m = Mono::one();
        for &(v, e) in pairs {
            let cur = m.exp(v);
            m.set(v, cur + e);
        }
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.get(v.index()).copied().unwrap_or(0) as u32
    }

    pub fn set(&mut self, v: Var, e: u32) {
        let i = v.index();
        if self.0.len() <= i {
            if e == 0 {
                return;
            }
            self.0.resize(i + 1, 0);
        }
        self.0[i] = u16::try_from(e).expect("exponent overflow");
        self.trim();
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        let mut v: SmallVec<[u16; 8]> = SmallVec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = o.0.get(i).copied().unwrap_or(0);
            v.push(a.checked_add(b).expect("exponent overflow"));
        }
        Mono(v)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, &b) in o.0.iter().enumerate() {
            if v[i] < b {
                return None;
            }
            v[i] -= b;
        }
        let mut m = Mono(v);
        m.trim();
        Some(m)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, o: &Mono) -> Mono {
        let n = self.0.len().min(o.0.len());
        let mut m = Mono((0..n).map(|i| self.0[i].min(o.0[i])).collect());
        m.trim();
        m
    }

    /// Variables with a positive exponent, ascending.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var(i as u16), e as u32))
    }
}

impl Ord for Mono {
    /// Degree reverse lexicographic: higher total degree first, ties broken by
    /// the smaller exponent in the last differing variable.
    fn cmp(&self, o: &Mono) -> Ordering {
        let (da, db) = (self.degree(), o.degree());
        if da != db {
            return da.cmp(&db);
        }
        let n = self.0.len().max(o.0.len());
        for i in (0..n).rev() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = o.0.get(i).copied().unwrap_or(0);
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial with terms sorted in decreasing monomial order, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<F> {
    terms: Vec<(Mono, F)>,
}

impl<F: Field> Default for MultiPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Mono::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(F::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Mono::var(v, 1), F::one())
    }

    pub fn monomial(m: Mono, c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, F)>) -> Self {
        let mut map: HashMap<Mono, F> = HashMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(map)
    }

    fn from_map(map: HashMap<Mono, F>) -> Self {
        let mut terms: Vec<(Mono, F)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Mono, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<F> {
        if self.terms.is_empty() {
            Some(F::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Coefficient of the monomial 1.
    pub fn constant_term(&self) -> F {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => F::zero(),
        }
    }

    pub fn coeff(&self, m: &Mono) -> F {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| F::zero())
    }

    pub fn leading(&self) -> Option<&(Mono, F)> {
        self.terms.first()
    }

    pub fn lc(&self) -> F {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v)).max().unwrap_or(0)
    }

    /// Lowest exponent of `v` over all terms.
    pub fn low_degree(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v)).min().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.iter().any(|t| t.0.exp(v) > 0)
    }

    /// Variables that occur, ascending.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen: Vec<Var> = Vec::new();
        for (m, _) in &self.terms {
            for (v, _) in m.vars() {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        seen.sort();
        seen
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect() }
    }

    pub fn mul_mono(&self, m: &Mono, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(a, b)| (a.mul(m), b.mul(c))).collect() }
    }

    /// Monic normalization: leading coefficient 1.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { cb.neg() } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca.sub(cb) } else { ca.add(cb) };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for (m, c) in &o.terms[j..] {
            out.push((m.clone(), if negate { c.neg() } else { c.clone() }));
        }
        MultiPoly { terms: out }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_mono(m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_mono(m, c);
        }
        let mut map: HashMap<Mono, F> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match map.get_mut(&m) {
                    Some(acc) => *acc = acc.add(&c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(map)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    pub fn neg_ref(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn diff(&self, v: Var) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            if e == 0 {
                return None;
            }
            let mut m2 = m.clone();
            m2.set(v, e - 1);
            Some((m2, c.mul(&F::from_int(e as i64))))
        });
        Self::from_terms(terms)
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Self> {
        let d = self.degree(v) as usize;
        let mut buckets: Vec<Vec<(Mono, F)>> = vec![Vec::new(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut m2 = m.clone();
            m2.set(v, 0);
            buckets[e as usize].push((m2, c.clone()));
        }
        // Removing one variable keeps the relative order of the remaining
        // monomials only within a fixed power, so re-sort each bucket.
        buckets
            .into_iter()
            .map(|mut b| {
                b.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { terms: b }
            })
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(v: Var, cs: &[Self]) -> Self {
        let terms = cs.iter().enumerate().flat_map(|(k, c)| {
            c.terms.iter().map(move |(m, a)| (m.mul(&Mono::var(v, k as u32)), a.clone()))
        });
        Self::from_terms(terms)
    }

    /// Coefficient of `v^k` as a polynomial in the other variables.
    pub fn coeff_of(&self, v: Var, k: u32) -> Self {
        let mut terms: Vec<(Mono, F)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) == k)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.set(v, 0);
                (m2, c.clone())
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    /// Replaces `v` by the polynomial `val`.
    pub fn subst(&self, v: Var, val: &Self) -> Self {
        if !self.contains(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = acc.mul_ref(val).add_ref(c);
        }
        acc
    }

    /// Simultaneous substitution of several variables.
    pub fn subst_many(&self, map: &[(Var, Self)]) -> Self {
        let mut powers: HashMap<(usize, u32), Self> = HashMap::new();
        let mut acc: HashMap<Mono, F> = HashMap::new();
        let mut pieces: Vec<Self> = Vec::new();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor = Self::constant(c.clone());
            for (idx, (v, val)) in map.iter().enumerate() {
                let e = m.exp(*v);
                if e == 0 {
                    continue;
                }
                rest.set(*v, 0);
                let pw = powers.entry((idx, e)).or_insert_with(|| val.pow(e)).clone();
                factor = factor.mul_ref(&pw);
            }
            if factor.is_constant() {
                let c = factor.constant_term();
                match acc.get_mut(&rest) {
                    Some(a) => *a = a.add(&c),
                    None => {
                        acc.insert(rest, c);
                    }
                }
            } else {
                pieces.push(factor.mul_mono(&rest, &F::one()));
            }
        }
        let mut out = Self::from_map(acc);
        for p in pieces {
            out = out.add_ref(&p);
        }
        out
    }

    /// Renames variable `from` to `to` (which must not already occur).
    pub fn rename(&self, from: Var, to: Var) -> Self {
        self.subst(from, &Self::var(to))
    }

    /// Evaluates the listed variables at field values.
    pub fn eval_partial(&self, point: &[(Var, F)]) -> Self {
        let map: Vec<(Var, Self)> = point.iter().map(|(v, c)| (*v, Self::constant(c.clone()))).collect();
        self.subst_many(&map)
    }

    /// Full evaluation; variables missing from `point` are an error.
    pub fn eval(&self, point: &[(Var, F)]) -> Option<F> {
        self.eval_partial(point).as_constant()
    }

    pub fn conj(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// True if no coefficient has an imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    /// Exact quotient `self / b`, or `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = b.as_constant() {
            return Some(self.scale(&c.inv()));
        }
        if b.terms.len() == 1 {
            let (mb, cb) = &b.terms[0];
            let inv = cb.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(mb)?, c.mul(&inv)));
            }
            return Some(MultiPoly { terms });
        }
        let (lm, lcb) = b.terms[0].clone();
        let inv = lcb.inv();
        let mut r = self.clone();
        let mut q: Vec<(Mono, F)> = Vec::new();
        while let Some((m, c)) = r.terms.first().cloned() {
            let qm = m.div(&lm)?;
            let qc = c.mul(&inv);
            r = r.sub_ref(&b.mul_mono(&qm, &qc));
            q.push((qm, qc));
        }
        Some(MultiPoly { terms: q })
    }

    /// Evaluates at a complex double point (missing variables read as 0).
    pub fn eval_c64(&self, point: &[(Var, num_complex::Complex64)]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (v, e) in m.vars() {
                let x = point.iter().find(|p| p.0 == v).map(|p| p.1).unwrap_or_default();
                t *= x.powu(e);
            }
            acc += t;
        }
        acc
    }

    /// Univariate division with remainder in `v`, valid when the leading
    /// coefficient of `b` in `v` is a constant.
    pub fn divrem_in(&self, b: &Self, v: Var) -> (Self, Self) {
        let db = b.degree(v);
        let lcb = b.coeff_of(v, db).as_constant().expect("leading coefficient must be constant");
        let inv = lcb.inv();
        let mut r = self.clone();
        let mut q = Self::zero();
        loop {
            let dr = r.degree(v);
            if r.is_zero() || dr < db {
                break;
            }
            let c = r.coeff_of(v, dr).scale(&inv);
            let t = c.mul_mono(&Mono::var(v, dr - db), &F::one());
            r = r.sub_ref(&t.mul_ref(b));
            q = q.add_ref(&t);
        }
        (q, r)
    }
}

impl<F: Field> Add for MultiPoly<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}
impl<F: Field> Add for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, o: Self) -> MultiPoly<F> {
        self.add_ref(o)
    }
}
impl<F: Field> Sub for MultiPoly<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}
impl<F: Field> Sub for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, o: Self) -> MultiPoly<F> {
        self.sub_ref(o)
    }
}
impl<F: Field> Mul for MultiPoly<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}
impl<F: Field> Mul for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, o: Self) -> MultiPoly<F> {
        self.mul_ref(o)
    }
}
impl<F: Field> Neg for MultiPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}
impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        self.neg_ref()
    }
}
