//! Floating-point cross-checks of the exact results: Gauss–Legendre quadrature
//! of kernels on `[s, ∞)` and a Nyström discretisation of integral operators.

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcd::content;
use crate::kernel::cd_kernel;
use crate::poly::MultiPoly;
use crate::quasiexp::QuasiExp;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::wavefun::WaveFunction;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl NumericCheck {
    pub fn new(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        NumericCheck { check: check.into(), residual, tolerance, pass: residual <= tolerance }
    }
}

fn cst<T: Float>(x: f64) -> T {
    T::from(x).expect("representable constant")
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre<T: Float>(n: usize, x: T) -> (T, T) {
    let (mut prev, mut cur) = (T::one(), x);
    for k in 2..=n {
        let kf = cst::<T>(k as f64);
        let next = ((kf + kf - T::one()) * x * cur - (kf - T::one()) * prev) / kf;
        prev = cur;
        cur = next;
    }
    let nf = cst::<T>(n as f64);
    (cur, nf * (x * cur - prev) / (x * x - T::one()))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre<T: Float + FloatConst>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut xs = vec![T::zero(); n];
    let mut ws = vec![T::zero(); n];
    let nf = cst::<T>(n as f64);
    for i in 0..n.div_ceil(2) {
        let mut r = (T::PI() * (cst::<T>(i as f64) + cst(0.75)) / (nf + cst(0.5))).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, r);
            let dr = p / dp;
            r = r - dr;
            if dr.abs() <= T::epsilon() * cst(4.0) {
                break;
            }
        }
        let (_, dp) = legendre(n, r);
        let w = cst::<T>(2.0) / ((T::one() - r * r) * dp * dp);
        xs[i] = -r;
        xs[n - 1 - i] = r;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// `rule` mapped onto `[a, b]`.
pub fn map_rule<T: Float>(rule: &(Vec<T>, Vec<T>), a: T, b: T) -> (Vec<T>, Vec<T>) {
    let half = (b - a) / cst(2.0);
    let mid = (a + b) / cst(2.0);
    (rule.0.iter().map(|&x| mid + half * x).collect(), rule.1.iter().map(|&w| w * half).collect())
}

fn composite<T: Float>(f: &impl Fn(T) -> T, a: T, b: T, panels: usize, rule: &(Vec<T>, Vec<T>)) -> T {
    let h = (b - a) / cst(panels as f64);
    let mut acc = T::zero();
    for k in 0..panels {
        let lo = a + h * cst(k as f64);
        let (xs, ws) = map_rule(rule, lo, lo + h);
        for (x, w) in xs.into_iter().zip(ws) {
            acc = acc + w * f(x);
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub upper: T,
    pub panels: usize,
}

const PANEL_NODES: usize = 16;

/// `∫_a^∞ f` for `f` decaying at least like `e^{−rate·y}`: the range is cut
/// where the tail bound `|f(Y)|/rate` drops below `1e−18`, and the number of
/// panels doubles until two results agree to `1e−12`.
pub fn integrate_decaying<T: Float + FloatConst>(f: impl Fn(T) -> T, a: T, rate: T) -> Result<Quadrature<T>> {
    if rate.is_nan() || rate <= T::zero() {
        return Err(Error::DivergentKernel);
    }
    let bound = cst::<T>(1e-18);
    let mut span = T::one() / rate;
    let mut cut = None;
    for _ in 0..64 {
        let y = a + span;
        let fy = f(y);
        if !fy.is_finite() {
            return Err(Error::PoleOnContour);
        }
        if fy.abs() / rate < bound && f(y + span).abs() / rate < bound {
            cut = Some(y);
            break;
        }
        span = span + span;
    }
    let upper = cut.ok_or(Error::DivergentKernel)?;
    let rule = gauss_legendre::<T>(PANEL_NODES);
    let mut panels = ((upper - a) * rate).ceil().to_usize().unwrap_or(1).max(1);
    let mut prev = composite(&f, a, upper, panels, &rule);
    for _ in 0..20 {
        panels *= 2;
        let cur = composite(&f, a, upper, panels, &rule);
        if !cur.is_finite() {
            return Err(Error::PoleOnContour);
        }
        if (cur - prev).abs() <= cst::<T>(1e-12) * cur.abs().max(T::min_positive_value()) {
            return Ok(Quadrature { value: cur, upper, panels });
        }
        prev = cur;
    }
    Err(Error::Numeric("quadrature did not converge".into()))
}

/// Dense univariate polynomial over Q, lowest degree first.
type Dense = Vec<BigRational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn dense_rem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let c = r[r.len() - 1].clone() / b[db].clone();
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - c.clone() * bi.clone();
        }
        r = trim(r);
    }
    r
}

fn dense_gcd(a: &Dense, b: &Dense) -> Dense {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn dense_diff(p: &Dense) -> Dense {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c.clone() * BigRational::from_integer((k as i64).into())).collect())
}

fn dense_eval(p: &Dense, x: &BigRational) -> BigRational {
    p.iter().rev().fold(<BigRational as Zero>::zero(), |acc, c| acc * x.clone() + c.clone())
}

fn sign(c: &BigRational) -> i32 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let nz: Vec<i32> = signs.filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Whether `p` has a real root in `[s, ∞)`, by a Sturm sequence.
fn has_root_from(p: &Dense, s: &BigRational) -> bool {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return false;
    }
    if Zero::is_zero(&dense_eval(&p, s)) {
        return true;
    }
    let mut seq = vec![p.clone(), dense_diff(&p)];
    loop {
        let n = seq.len();
        let r = dense_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at_s = sign_changes(seq.iter().map(|q| sign(&dense_eval(q, s))));
    let at_inf = sign_changes(seq.iter().map(|q| sign(q.last().expect("nonzero"))));
    at_s > at_inf
}

/// The part of `den` that depends on `x`, with all parameters set, as a real
/// polynomial whose roots are the real roots of the original.
fn x_factor<F: Field>(den: &MultiPoly<F>, params: &[(Var, F)]) -> Result<Dense> {
    let c = content(den, Var::X);
    let px = den.div_exact(&c).expect("content divides");
    let px = px.eval_partial(params);
    if px.vars().iter().any(|&v| v != Var::X) {
        return Err(Error::Unsupported("every parameter needs a numeric value".into()));
    }
    let cs = px.coeffs_in(Var::X);
    let re: Dense = cs.iter().map(|c| c.as_constant().unwrap_or_else(F::zero).parts().0).collect();
    let im: Dense = cs.iter().map(|c| c.as_constant().unwrap_or_else(F::zero).parts().1).collect();
    Ok(dense_gcd(&re, &im))
}

/// Fails with [`Error::PoleOnContour`] when `ψ` or `ψ*` has a pole at some `y ≥ s`.
pub fn check_contour<F: Field>(wf: &WaveFunction<F>, s: &F, params: &[(Var, F)]) -> Result<()> {
    let s = s.parts().0;
    let star = wf.adjoint()?;
    for den in [wf.h().den(), star.prefactor.den()] {
        if has_root_from(&x_factor(den, params)?, &s) {
            return Err(Error::PoleOnContour);
        }
    }
    Ok(())
}

fn c64_point<F: Field>(params: &[(Var, F)]) -> Vec<(Var, Complex64)> {
    params.iter().map(|(v, c)| (*v, c.to_c64())).collect()
}

/// `∫_s^∞ ψ(y,z) ψ*(y,w) dy` by quadrature, at real `z`, `w`.
pub fn quadrature_kernel<F: Field>(wf: &WaveFunction<F>, s: &F, params: &[(Var, F)], z: f64, w: f64) -> Result<Complex64> {
    check_contour(wf, s, params)?;
    let h = wf.h();
    let star = &wf.adjoint()?.prefactor;
    let base = c64_point(params);
    let integrand = |y: f64| -> Complex64 {
        let mut pz = base.clone();
        pz.extend([(Var::X, Complex64::new(y, 0.0)), (Var::Z, Complex64::new(z, 0.0))]);
        let mut pw = base.clone();
        pw.extend([(Var::X, Complex64::new(y, 0.0)), (Var::Z, Complex64::new(w, 0.0))]);
        h.eval_c64(&pz) * star.eval_c64(&pw) * (-y * (z + w)).exp()
    };
    let a = s.to_c64().re;
    let re = integrate_decaying(|y| integrand(y).re, a, z + w)?;
    let im = integrate_decaying(|y| integrand(y).im, a, z + w)?;
    Ok(Complex64::new(re.value, im.value))
}

/// Value of an exact form `prefactor · e^{exponent}` at a complex point.
pub fn eval_form<F: Field>(form: &QuasiExp<F>, point: &[(Var, Complex64)]) -> Complex64 {
    form.prefactor.eval_c64(point) * form.exponent.eval_c64(point).exp()
}

/// Largest relative difference between quadrature and the closed-form kernel
/// over `count` seeded random rational points `z, w ∈ [1/2, 4]`.
pub fn quadrature_vs_closed_form<F: Field>(
    wf: &WaveFunction<F>,
    s: &F,
    params: &[(Var, F)],
    count: usize,
    seed: u64,
) -> Result<f64> {
    let k = cd_kernel(wf, &RatFunc::constant(s.clone()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let z = rng.gen_range(4..=32) as f64 / 8.0;
        let w = rng.gen_range(4..=32) as f64 / 8.0;
        let mut pt = c64_point(params);
        pt.extend([(Var::Z, Complex64::new(z, 0.0)), (Var::W, Complex64::new(w, 0.0))]);
        let exact = eval_form(&k.form, &pt);
        let quad = quadrature_kernel(wf, s, params, z, w)?;
        worst = worst.max((quad - exact).norm() / exact.norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NystromConfig {
    pub a: f64,
    pub b: f64,
    pub nodes: usize,
    pub modes: usize,
}

impl NystromConfig {
    /// `[t, t + 20]` with 200 nodes and 5 modes.
    pub fn truncated(t: f64) -> Self {
        NystromConfig { a: t, b: t + 20.0, nodes: 200, modes: 5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    /// Leading eigenvalues of the discretised integral operator.
    pub eigenvalues: Vec<f64>,
    /// Rayleigh quotients of the differential operator on the matching modes.
    pub rayleigh: Vec<f64>,
    /// `‖Dφ − μφ‖ / ‖Dφ‖` per mode.
    pub residuals: Vec<f64>,
    /// `max |D_z K − D_w K| / max |D_z K|` over the node grid.
    pub commutator: f64,
}

impl Alignment {
    pub fn worst(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

fn matrix_of<F: Field>(form: &QuasiExp<F>, ys: &[f64], point: &[(Var, Complex64)]) -> DMatrix<f64> {
    let n = ys.len();
    DMatrix::from_fn(n, n, |i, j| {
        let mut pt = point.to_vec();
        pt.extend([(Var::Z, Complex64::new(ys[i], 0.0)), (Var::W, Complex64::new(ys[j], 0.0))]);
        eval_form(form, &pt).re
    })
}

/// Discretises the symmetric kernel `k(z,w)` on `[a, b]` and measures how far
/// its leading eigenfunctions are from eigenfunctions of `op` (acting in
/// `z`). Eigenfunctions are extended off the nodes by the Nyström
/// interpolant, so derivatives are exact derivatives of the kernel.
pub fn nystrom_alignment<F: Field>(
    k: &QuasiExp<F>,
    op: &DiffOp<F>,
    point: &[(Var, Complex64)],
    cfg: NystromConfig,
) -> Result<Alignment> {
    let (ys, ws) = map_rule(&gauss_legendre::<f64>(cfg.nodes), cfg.a, cfg.b);
    let sq: Vec<f64> = ws.iter().map(|w| w.sqrt()).collect();
    let kz = matrix_of(k, &ys, point);
    let a = DMatrix::from_fn(cfg.nodes, cfg.nodes, |i, j| sq[i] * kz[(i, j)] * sq[j]);
    let dk_form = k.apply(op)?;
    let dkw_form = k.apply(&op.rename(Var::W))?;
    let dk = matrix_of(&dk_form, &ys, point);
    let dkw = matrix_of(&dkw_form, &ys, point);
    let scale = dk.amax().max(f64::MIN_POSITIVE);
    let commutator = (&dk - &dkw).amax() / scale;

    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..cfg.nodes).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut out = Alignment { eigenvalues: vec![], rayleigh: vec![], residuals: vec![], commutator };
    for &m in order.iter().take(cfg.modes) {
        let lambda = eig.eigenvalues[m];
        if lambda == 0.0 || lambda.is_nan() {
            return Err(Error::Numeric("vanishing eigenvalue".into()));
        }
        let v = eig.eigenvectors.column(m);
        let phi: Vec<f64> = (0..cfg.nodes).map(|i| v[i] / sq[i]).collect();
        let coef: Vec<f64> = (0..cfg.nodes).map(|j| sq[j] * v[j] / lambda).collect();
        let dphi: Vec<f64> = (0..cfg.nodes).map(|i| (0..cfg.nodes).map(|j| dk[(i, j)] * coef[j]).sum()).collect();
        let dot = |f: &[f64], g: &[f64]| -> f64 { (0..cfg.nodes).map(|i| ws[i] * f[i] * g[i]).sum() };
        let mu = dot(&phi, &dphi) / dot(&phi, &phi);
        let r: Vec<f64> = (0..cfg.nodes).map(|i| dphi[i] - mu * phi[i]).collect();
        let denom = dot(&dphi, &dphi).sqrt().max(mu.abs() * dot(&phi, &phi).sqrt()).max(f64::MIN_POSITIVE);
        out.eigenvalues.push(lambda);
        out.rayleigh.push(mu);
        out.residuals.push(dot(&r, &r).sqrt() / denom);
    }
    Ok(out)
}

/// The closed form of `∫_s^∞ ψ(y,z) ψ*(y,w) dy` with `s` and the parameters set.
pub fn specialised_kernel<F: Field>(wf: &WaveFunction<F>, s: &F, params: &[(Var, F)]) -> Result<QuasiExp<F>> {
    let k = cd_kernel(wf, &RatFunc::constant(s.clone()))?;
    Ok(QuasiExp::new(k.form.exponent.eval_partial(params), k.form.prefactor.eval_partial(params)?))
}
