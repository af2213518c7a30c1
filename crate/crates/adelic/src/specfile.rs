//! Wave-function spec files: JSON with the prefactor split as
//! `numerator / (denominator_x · denominator_z)`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::text::{parse_poly, render_poly};
use crate::wavefun::{validate, Param, WaveFunction};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    #[serde(default)]
    pub real: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    pub name: String,
    pub numerator: String,
    #[serde(default = "one")]
    pub denominator_x: String,
    #[serde(default = "one")]
    pub denominator_z: String,
    #[serde(default)]
    pub parameters: Vec<ParamSpec>,
    #[serde(default)]
    pub notes: String,
}

fn one() -> String {
    "1".into()
}

impl WaveSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }

    pub fn params(&self) -> Result<Vec<Param>> {
        self.parameters
            .iter()
            .map(|p| {
                let var = Var::named(&p.name);
                if !var.is_parameter() {
                    return Err(Error::Parse(format!("`{}` cannot be a parameter", p.name)));
                }
                Ok(Param { var, real: p.real })
            })
            .collect()
    }

    pub fn prefactor<F: Field>(&self) -> Result<RatFunc<F>> {
        let n = parse_poly::<F>(&self.numerator)?;
        let dx = parse_poly::<F>(&self.denominator_x)?;
        let dz = parse_poly::<F>(&self.denominator_z)?;
        if dx.contains(Var::Z) || dz.contains(Var::X) {
            return Err(Error::Unsupported("denominator_x must not contain z, nor denominator_z x".into()));
        }
        let params = self.params()?;
        for v in n.vars().into_iter().chain(dx.vars()).chain(dz.vars()) {
            if v != Var::X && v != Var::Z && !params.iter().any(|p| p.var == v) {
                return Err(Error::UnknownVariable(v.name()));
            }
        }
        Ok(RatFunc::new(n, dx.mul_ref(&dz))?)
    }

    pub fn wave_function<F: Field>(&self) -> Result<WaveFunction<F>> {
        validate(&self.name, self.prefactor()?, self.params()?)
    }

    /// The spec of a validated wave function, in lowest terms.
    pub fn of<F: Field>(wf: &WaveFunction<F>, notes: &str) -> Self {
        WaveSpec {
            name: wf.name.clone(),
            numerator: render_poly(&wf.numerator),
            denominator_x: render_poly(&wf.p),
            denominator_z: render_poly(&wf.q),
            parameters: wf.params.iter().map(|p| ParamSpec { name: p.var.name(), real: p.real }).collect(),
            notes: notes.into(),
        }
    }
}
