//! Canonical text form of polynomials, fractions and operators, and a parser
//! for the same grammar (integers, `a/b`, `i`, `^`, explicit `*`, parentheses).

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::{imag_unit, Field};
use crate::poly::{Mono, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn render_rational(q: &BigRational) -> String {
    if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) }
}

/// Renders a scalar; mixed complex values come parenthesized.
pub fn render_scalar<F: Field>(c: &F) -> String {
    let (re, im) = c.parts();
    if Zero::is_zero(&im) {
        return render_rational(&re);
    }
    let imag = if One::is_one(&im) {
        "i".to_string()
    } else if One::is_one(&(-im.clone())) {
        "-i".to_string()
    } else {
        format!("{}*i", render_rational(&im))
    };
    if Zero::is_zero(&re) {
        imag
    } else if imag.starts_with('-') {
        format!("({}{})", render_rational(&re), imag)
    } else {
        format!("({}+{})", render_rational(&re), imag)
    }
}

fn render_mono(m: &Mono) -> String {
    let mut parts: Vec<(String, u32)> = m.vars().map(|(v, e)| (v.name(), e)).collect();
    parts.sort();
    parts
        .into_iter()
        .map(|(n, e)| if e == 1 { n } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_term<F: Field>(m: &Mono, c: &F) -> String {
    if m.is_one() {
        return render_scalar(c);
    }
    let mono = render_mono(m);
    if c.is_one() {
        mono
    } else if c.neg().is_one() {
        format!("-{mono}")
    } else {
        format!("{}*{mono}", render_scalar(c))
    }
}

/// Terms in decreasing monomial order, no spaces.
pub fn render_poly<F: Field>(p: &MultiPoly<F>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let t = render_term(m, c);
        if k > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

pub fn render_ratfunc<F: Field>(r: &RatFunc<F>) -> String {
    if r.den().is_one() {
        render_poly(r.num())
    } else {
        format!("({})/({})", render_poly(r.num()), render_poly(r.den()))
    }
}

/// `(<ratfunc>) D<var>^<k>` terms by descending order, joined by ` + `.
pub fn render_op<F: Field>(op: &DiffOp<F>) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let v = op.var().name();
    op.coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("({}) D{v}^{k}", render_ratfunc(c)))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().map_err(|_| Error::Parse(txt.clone()))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<F: Field>(&mut self) -> Result<RatFunc<F>> {
        let mut acc = self.term::<F>()?;
        loop {
            if self.eat('+') {
                acc = acc.add_ref(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub_ref(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<RatFunc<F>> {
        let mut acc = self.unary::<F>()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_ref(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary::<F>()?;
                acc = acc.div_ref(&d).map_err(|_| Error::ZeroDenominator)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<F: Field>(&mut self) -> Result<RatFunc<F>> {
        if self.eat('-') {
            return Ok(self.unary::<F>()?.neg_ref());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power<F: Field>(&mut self) -> Result<RatFunc<F>> {
        let base = self.atom::<F>()?;
        if self.eat('^') {
            let paren = self.eat('(');
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Num(n)) => {
                    let n = n.clone();
                    self.pos += 1;
                    i32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            };
            if paren && !self.eat(')') {
                return Err(Error::Parse("missing `)` after exponent".into()));
            }
            let e = if neg { -e } else { e };
            return base.pow_i(e).map_err(|_| Error::ZeroDenominator);
        }
        Ok(base)
    }

    fn atom<F: Field>(&mut self) -> Result<RatFunc<F>> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(F::from_rational(&BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    let i = imag_unit::<F>().ok_or_else(|| Error::Parse("imaginary unit in a real field".into()))?;
                    Ok(RatFunc::constant(i))
                } else {
                    Ok(RatFunc::var(Var::named(&name)))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_ratfunc<F: Field>(s: &str) -> Result<RatFunc<F>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0 };
    let r = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(r)
}

pub fn parse_poly<F: Field>(s: &str) -> Result<MultiPoly<F>> {
    let r = parse_ratfunc::<F>(s)?;
    r.as_poly().cloned().ok_or_else(|| Error::Parse(format!("`{s}` is not a polynomial")))
}

/// Parses the operator grammar produced by [`render_op`].
pub fn parse_op<F: Field>(s: &str) -> Result<DiffOp<F>> {
    let s = s.trim();
    if s == "0" {
        return Err(Error::Parse("the zero operator carries no variable; use DiffOp::zero".into()));
    }
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut var: Option<Var> = None;
    let mut coeffs: Vec<RatFunc<F>> = Vec::new();
    loop {
        while i < cs.len() && cs[i].is_whitespace() {
            i += 1;
        }
        if i >= cs.len() || cs[i] != '(' {
            return Err(Error::Parse("expected `(`".into()));
        }
        let mut depth = 0;
        let st = i;
        while i < cs.len() {
            if cs[i] == '(' {
                depth += 1;
            } else if cs[i] == ')' {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            i += 1;
        }
        if i >= cs.len() {
            return Err(Error::Parse("unbalanced parentheses".into()));
        }
        let inner: String = cs[st + 1..i].iter().collect();
        i += 1;
        while i < cs.len() && cs[i].is_whitespace() {
            i += 1;
        }
        if i >= cs.len() || cs[i] != 'D' {
            return Err(Error::Parse("expected `D<var>^<k>`".into()));
        }
        i += 1;
        let vs = i;
        while i < cs.len() && cs[i] != '^' {
            i += 1;
        }
        let vname: String = cs[vs..i].iter().collect();
        i += 1;
        let ks = i;
        while i < cs.len() && cs[i].is_ascii_digit() {
            i += 1;
        }
        let k: usize = cs[ks..i].iter().collect::<String>().parse().map_err(|_| Error::Parse("bad order".into()))?;
        let v = Var::named(&vname);
        if var.is_some_and(|u| u != v) {
            return Err(Error::Parse("mixed operator variables".into()));
        }
        var = Some(v);
        if coeffs.len() <= k {
            coeffs.resize(k + 1, RatFunc::zero());
        }
        coeffs[k] = coeffs[k].add_ref(&parse_ratfunc(&inner)?);
        while i < cs.len() && cs[i].is_whitespace() {
            i += 1;
        }
        if i >= cs.len() {
            break;
        }
        if cs[i] != '+' {
            return Err(Error::Parse("expected ` + ` between terms".into()));
        }
        i += 1;
    }
    Ok(DiffOp::new(var.expect("at least one term"), coeffs))
}

impl<F: Field> std::fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_poly(self))
    }
}
impl<F: Field> std::fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_poly(self))
    }
}
impl<F: Field> std::fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_ratfunc(self))
    }
}
impl<F: Field> std::fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_ratfunc(self))
    }
}
impl<F: Field> std::fmt::Display for DiffOp<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_op(self))
    }
}
impl<F: Field> std::fmt::Debug for DiffOp<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_op(self))
    }
}

/// Convenience parse of a rational number `a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}
