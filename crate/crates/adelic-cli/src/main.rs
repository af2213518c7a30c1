use adelic::fourier::{find_pairs, AnsatzCaps, FourierBasis};
use adelic::kernel::{cd_kernel, ftc_residual, reflection_residual, verify_commutation_fourier};
use adelic::numeric::{quadrature_vs_closed_form, NumericCheck};
use adelic::reflector::{default_order, find_reflected, find_universal, rotate_to_commuting, ReflectorConfig, ReflectorResult};
use adelic::specfile::WaveSpec;
use adelic::text::{parse_ratfunc, render_op, render_poly, render_ratfunc};
use adelic::wavefun::{validate, Involution, WaveFunction};
use adelic::{Error, Op, Qe, Rf, Scalar, Var};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "adelic", version, about = "Reflected and commuting differential operators for bispectral wave functions")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operators reflected by the integral operator of one wave function.
    Reflect(Common),
    /// The rotated commuting operator and its self-adjoint companion.
    Rotate(Common),
    /// Operators reflected for every given wave function at once.
    Universal(Common),
    /// Closed-form kernel of the integral operator.
    Kernel(Common),
    /// Symbolic and numeric verification report.
    Verify(Common),
    /// Bispectral pairs spanning a Fourier slice.
    FourierBasis(Common),
    /// Applies a word in the involutions a, b, s, c.
    Involution {
        #[command(flatten)]
        common: Common,
        /// Applied right to left, e.g. `ab` applies b first.
        #[arg(long)]
        word: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args, Debug)]
struct Common {
    /// Wave-function spec file; repeat for several.
    #[arg(long, required = true)]
    psi: Vec<PathBuf>,
    /// Left endpoint: a rational `a/b` or `sym`.
    #[arg(long, default_value = "sym")]
    s: String,
    /// Reflection point: a rational `a/b` or `sym`.
    #[arg(long, default_value = "sym")]
    t: String,
    /// Keep both s and t symbolic (overrides --s and --t).
    #[arg(long)]
    symbolic_st: bool,
    /// Value for the parameter r.
    #[arg(long)]
    r: Option<String>,
    /// Parameter values as `name=value`.
    #[arg(long = "set")]
    set: Vec<String>,
    /// `ell,m,A,B,C,deg`.
    #[arg(long)]
    caps: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapsInsufficient(_) => 3,
            Error::Numeric(_) | Error::PoleOnContour | Error::DivergentKernel => 4,
            _ => 2,
        };
        Fail { code, msg: e.to_string() }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Fail {
    Fail { code, msg: msg.into() }
}

struct Resolved {
    sub: &'static str,
    wfs: Vec<WaveFunction<Scalar>>,
    paths: Vec<PathBuf>,
    s: Rf,
    t: Rf,
    values: Vec<(Var, Scalar)>,
    orders: Option<(usize, usize)>,
    caps: Option<AnsatzCaps>,
    format: Format,
}

impl Resolved {
    fn config(&self) -> Value {
        json!({
            "subcommand": self.sub,
            "psi": self.paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "s": render_ratfunc(&self.s),
            "t": render_ratfunc(&self.t),
            "parameters": self.values.iter().map(|(v, c)| json!({"name": v.name(), "value": adelic::text::render_scalar(c)})).collect::<Vec<_>>(),
            "orders": self.orders.map(|(l, m)| vec![l, m]),
            "caps": self.caps.map(caps_json),
            "format": match self.format { Format::Text => "text", Format::Structured => "structured" },
        })
    }

    fn reflector_config(&self) -> ReflectorConfig<Scalar> {
        let mut cfg = ReflectorConfig::new(self.s.clone(), self.t.clone());
        cfg.orders = self.orders;
        cfg.caps = self.caps;
        cfg
    }

    fn single(&self) -> Result<&WaveFunction<Scalar>, Fail> {
        match self.wfs.as_slice() {
            [w] => Ok(w),
            _ => Err(fail(2, format!("{} takes exactly one --psi", self.sub))),
        }
    }
}

fn caps_json(c: AnsatzCaps) -> Value {
    json!({"A": c.a, "B": c.b, "C": c.c, "deg_u": c.deg_u, "deg_v": c.deg_v})
}

fn endpoint(s: &str, sym: Var) -> Result<Rf, Fail> {
    if s == "sym" {
        return Ok(Rf::var(sym));
    }
    let v: Rf = parse_ratfunc(s).map_err(|e| fail(2, format!("--{}: {e}", sym.name())))?;
    if v.as_constant().is_none() {
        return Err(fail(2, format!("--{} must be a rational number or `sym`", sym.name())));
    }
    Ok(v)
}

fn resolve(sub: &'static str, c: &Common) -> Result<Resolved, Fail> {
    let (s, t) = if c.symbolic_st {
        (Rf::var(Var::S), Rf::var(Var::T))
    } else {
        (endpoint(&c.s, Var::S)?, endpoint(&c.t, Var::T)?)
    };
    let mut values = Vec::new();
    let mut assigns: Vec<(String, String)> = c.r.iter().map(|v| ("r".to_string(), v.clone())).collect();
    for a in &c.set {
        let (n, v) = a.split_once('=').ok_or_else(|| fail(2, format!("--set expects name=value, got `{a}`")))?;
        assigns.push((n.trim().to_string(), v.trim().to_string()));
    }
    for (n, v) in assigns {
        let var = Var::named(&n);
        if !var.is_parameter() || var == Var::S || var == Var::T {
            return Err(fail(2, format!("`{n}` is not a wave-function parameter")));
        }
        let val: Rf = parse_ratfunc(&v).map_err(|e| fail(2, format!("{n}: {e}")))?;
        let val = val.as_constant().ok_or_else(|| fail(2, format!("{n} must be a number")))?;
        values.push((var, val));
    }
    let (orders, caps) = match &c.caps {
        None => (None, None),
        Some(text) => {
            let n: Vec<usize> = text
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| fail(2, "--caps expects ell,m,A,B,C,deg"))?;
            if n.len() != 6 {
                return Err(fail(2, "--caps expects ell,m,A,B,C,deg"));
            }
            (Some((n[0], n[1])), Some(AnsatzCaps { a: n[2], b: n[3], c: n[4], deg_u: n[5], deg_v: n[5] }))
        }
    };
    let mut wfs = Vec::new();
    for p in &c.psi {
        let spec = WaveSpec::load(p)?;
        let h: Rf = spec.prefactor()?;
        let h = h.eval_partial(&values).map_err(Error::from)?;
        let params = spec.params()?.into_iter().filter(|q| !values.iter().any(|(v, _)| *v == q.var)).collect();
        wfs.push(validate(&spec.name, h, params)?);
    }
    Ok(Resolved { sub, wfs, paths: c.psi.clone(), s, t, values, orders, caps, format: c.format })
}

fn op_json(r: &Op) -> Value {
    json!({
        "var": r.var().name(),
        "text": render_op(r),
        "coeffs": r.coeffs().iter().map(render_ratfunc).collect::<Vec<_>>(),
    })
}

fn matrix_json(m: &[Vec<Rf>]) -> Value {
    json!(m.iter().map(|row| row.iter().map(render_ratfunc).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn form_json(q: &Qe) -> Value {
    json!({"prefactor": render_ratfunc(&q.prefactor), "exponent": render_poly(&q.exponent)})
}

/// Text rendering: `key: value` lines, nested objects indented.
fn to_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        to_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x))),
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        to_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_text(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn result_json(res: &ReflectorResult<Scalar>) -> Value {
    json!({
        "orders": [res.ell, res.m],
        "caps": caps_json(res.caps),
        "escalated": res.escalated,
        "canonical": op_json(&res.canonical.r),
        "partners": res.canonical.partners.iter().zip(&res.psi).map(|(l, n)| json!({"psi": n, "l": op_json(l)})).collect::<Vec<_>>(),
        "solution_space": res.solution_space.iter().map(|m| op_json(&m.r)).collect::<Vec<_>>(),
        "certificates": res.certificates.iter().map(|c| json!({
            "psi": c.psi,
            "concomitant_at_s": matrix_json(&c.at_s),
            "concomitant_at_minus_t": matrix_json(&c.at_minus_t),
            "vanish": c.is_zero(),
        })).collect::<Vec<_>>(),
    })
}

fn basis_json(b: &FourierBasis<Scalar>) -> Value {
    json!({
        "ell": b.ell,
        "m": b.m,
        "caps": caps_json(b.caps),
        "dimension": b.dim(),
        "warning": b.warning,
        "pairs": b.pairs.iter().map(|p| json!({"r": op_json(&p.r), "l": op_json(&p.l)})).collect::<Vec<_>>(),
    })
}

fn check(name: &str, residual: f64, tol: f64) -> NumericCheck {
    NumericCheck::new(name, residual, tol)
}

/// Runs the subcommand; the boolean is false when a verification failed.
fn run(rc: &Resolved, word: Option<&str>) -> Result<(Value, bool), Fail> {
    let mut ok = true;
    let result = match rc.sub {
        "reflect" => result_json(&find_reflected(rc.single()?, &rc.reflector_config())?),
        "universal" => result_json(&find_universal(&rc.wfs, &rc.reflector_config())?),
        "rotate" => {
            let res = find_reflected(rc.single()?, &rc.reflector_config())?;
            let rot = rotate_to_commuting(&res)?;
            json!({"rotated": op_json(&rot.r), "companion": op_json(&rot.companion)})
        }
        "kernel" => {
            let k = cd_kernel(rc.single()?, &rc.s)?;
            json!({"kernel": form_json(&k.form), "spectral": {"l": op_json(&k.spectral.l), "pi": render_poly(&k.spectral.pi)}})
        }
        "fourier-basis" => {
            let w = rc.single()?;
            let (ell, m) = match rc.orders {
                Some(o) => o,
                None => {
                    let d = default_order(w)?;
                    (d, d)
                }
            };
            let caps = rc.caps.unwrap_or_else(|| AnsatzCaps::defaults(w, ell, m));
            basis_json(&find_pairs(w, ell, m, caps)?)
        }
        "involution" => {
            let w = rc.single()?;
            let word = Involution::word(word.unwrap_or(""))?;
            let out = w.apply_word(&word)?;
            json!({"prefactor": render_ratfunc(out.h()), "fixed": out.h() == w.h()})
        }
        "verify" => {
            let (v, pass) = verify(rc)?;
            ok = pass;
            v
        }
        _ => unreachable!("all subcommands are listed"),
    };
    Ok((json!({"config": rc.config(), "result": result}), ok))
}

fn verify(rc: &Resolved) -> Result<(Value, bool), Fail> {
    let w = rc.single()?;
    let mut checks = Vec::new();
    let res = find_reflected(w, &rc.reflector_config())?;
    let k = cd_kernel(w, &rc.s)?;
    let exact = |name: &str, zero: bool| check(name, if zero { 0.0 } else { 1.0 }, 0.0);
    let all_reflect = res
        .solution_space
        .iter()
        .map(|m| reflection_residual(&m.r, &k.form).map(|r| r.is_zero()))
        .collect::<adelic::Result<Vec<bool>>>()?;
    checks.push(exact("reflection identity on the solution space", all_reflect.iter().all(|&b| b)));
    checks.push(exact("concomitant certificates", res.certificates.iter().all(|c| c.is_zero())));
    let sym = cd_kernel(w, &Rf::var(Var::S))?;
    checks.push(exact("kernel derivative in s", ftc_residual(w, &sym)?.is_zero()));
    if rc.t.as_constant().is_none() && w.is_fixed("ac").unwrap_or(false) {
        let rot = rotate_to_commuting(&res)?;
        let c = verify_commutation_fourier(&rot.r, w, &rc.s, &rc.t)?;
        checks.push(exact("rotated operator commutes", c.holds()));
    }
    if let (Some(s), true) = (rc.s.as_constant(), w.param_vars().is_empty()) {
        let tol = 1e-8;
        let worst = quadrature_vs_closed_form(w, &s, &[], 20, 0x5eed)?;
        checks.push(check("quadrature against closed-form kernel", worst, tol));
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok((json!({"checks": checks, "canonical": op_json(&res.canonical.r), "pass": pass}), pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common, word) = match &cli.cmd {
        Command::Reflect(c) => ("reflect", c, None),
        Command::Rotate(c) => ("rotate", c, None),
        Command::Universal(c) => ("universal", c, None),
        Command::Kernel(c) => ("kernel", c, None),
        Command::Verify(c) => ("verify", c, None),
        Command::FourierBasis(c) => ("fourier-basis", c, None),
        Command::Involution { common, word } => ("involution", common, Some(word.as_str())),
    };
    let outcome = resolve(sub, common).and_then(|rc| run(&rc, word).map(|(v, ok)| (v, ok, rc.format)));
    match outcome {
        Ok((v, ok, format)) => {
            let text = match format {
                Format::Structured => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Format::Text => {
                    let mut s = String::new();
                    to_text(&v, 0, &mut s);
                    s
                }
            };
            match &common.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification failed");
                ExitCode::from(4)
            }
        }
        Err(f) => {
            eprintln!("error [{sub}]: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
