//! Named builders with `key=value` parameters, shared by the command line
//! `build` and `sweep` commands.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kronecker::{build_family, KroneckerFamily};
use crate::linalg::{self, Complex64};
use crate::operators::{self, Example};
use crate::rep::Representation;

pub const MODEL_NAMES: &[&str] = &[
    "jordan_first",
    "jordan_second",
    "wide",
    "tall",
    "perturbation",
    "hrr",
    "ex1",
    "ex2",
    "ex3",
    "ex4",
    "ex6",
    "ex7",
    "ex8",
    "ex8star",
    "ex9",
];

/// Parses `1.5`, `-2`, `0.5i`, `1-2i`, `1e-3+4i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidParameter(format!("cannot read `{s}` as a complex number"));
    if let Ok(x) = t.parse::<f64>() {
        return Ok(linalg::real(x));
    }
    let body = t.strip_suffix('i').ok_or_else(bad)?;
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(linalg::c(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// A model name with its parameters in the order given.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub params: Vec<(String, String)>,
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

impl ModelSpec {
    pub fn new(name: &str, params: &[&str]) -> Result<Self> {
        if !MODEL_NAMES.contains(&name) {
            return Err(Error::InvalidParameter(format!(
                "unknown model `{name}`; available: {}",
                MODEL_NAMES.join(", ")
            )));
        }
        let params = params
            .iter()
            .map(|p| {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidParameter(format!("parameter `{p}` is not key=value")))?;
                Ok((normalize_key(k), v.trim().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelSpec { name: name.to_string(), params })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn with(&self, key: &str, value: impl Into<String>) -> Self {
        let mut out = self.clone();
        let value = value.into();
        match out.params.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => out.params.push((key.to_string(), value)),
        }
        out
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let v = self
            .get(key)
            .ok_or_else(|| Error::InvalidParameter(format!("model `{}` needs parameter `{key}`", self.name)))?;
        v.parse()
            .map_err(|_| Error::InvalidParameter(format!("parameter `{key}` must be a nonnegative integer, got `{v}`")))
    }

    fn complex(&self, key: &str, default: Option<Complex64>) -> Result<Complex64> {
        match (self.get(key), default) {
            (Some(v), _) => parse_complex(v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::InvalidParameter(format!("model `{}` needs parameter `{key}`", self.name))),
        }
    }

    fn real(&self, key: &str, default: Option<f64>) -> Result<f64> {
        let z = self.complex(key, default.map(linalg::real))?;
        if z.im != 0.0 {
            return Err(Error::InvalidParameter(format!("parameter `{key}` must be real")));
        }
        Ok(z.re)
    }

    /// The model with `lambda` replaced by `mu`, when `mu` is given.
    pub fn cross_partner(&self) -> Option<ModelSpec> {
        let mu = self.get("mu")?;
        if !matches!(self.name.as_str(), "hrr" | "ex8" | "ex8star" | "jordan_first" | "jordan_second") {
            return None;
        }
        Some(self.with("lambda", mu))
    }

    /// True for compressions of infinite-dimensional constructions.
    pub fn is_truncation(&self) -> bool {
        matches!(self.name.as_str(), "perturbation" | "hrr" | "ex2" | "ex3" | "ex4" | "ex8" | "ex8star" | "ex9")
    }

    pub fn build(&self) -> Result<Representation> {
        let lambda0 = linalg::ZERO;
        match self.name.as_str() {
            "jordan_first" => build_family(KroneckerFamily::JordanFirst {
                lambda: self.complex("lambda", Some(lambda0))?,
                n: self.usize("n")?,
            }),
            "jordan_second" => build_family(KroneckerFamily::JordanSecond {
                lambda: self.complex("lambda", Some(lambda0))?,
                n: self.usize("n")?,
            }),
            "wide" => build_family(KroneckerFamily::Wide { n: self.usize("n")? }),
            "tall" => build_family(KroneckerFamily::Tall { n: self.usize("n")? }),
            "perturbation" => {
                let n = self.usize("n")?;
                let (lambda, w) = operators::default_perturbation_params(n);
                operators::perturbation_model(n, &lambda, &w)
            }
            "hrr" => operators::hrr_model(self.usize("n")?, self.real("lambda", None)?),
            "ex1" => operators::example(Example::Ex1 { theta: self.real("theta", Some(std::f64::consts::FRAC_PI_4))? }),
            "ex2" => operators::example(Example::Ex2 { n: self.usize("n")? }),
            "ex3" => operators::example(Example::Ex3 { n: self.usize("n")? }),
            "ex4" => operators::example(Example::Ex4 { n: self.usize("n")? }),
            "ex6" => operators::example(Example::Ex6),
            "ex7" => operators::example(Example::Ex7),
            "ex8" => operators::example(Example::Ex8 { lambda: self.complex("lambda", None)?, n: self.usize("n")? }),
            "ex8star" => {
                operators::example(Example::Ex8Star { lambda: self.complex("lambda", None)?, n: self.usize("n")? })
            }
            "ex9" => operators::example(Example::Ex9 { n: self.usize("n")? }),
            other => {
                Err(Error::InvalidParameter(format!("unknown model `{other}`; available: {}", MODEL_NAMES.join(", "))))
            }
        }
    }

    /// `meta` object recorded in built documents.
    pub fn meta(&self, seed: u64) -> Value {
        let params: serde_json::Map<String, Value> =
            self.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        json!({
            "model": self.name,
            "params": params,
            "seed": seed,
            "finite_truncation": self.is_truncation(),
        })
    }
}

fn normalize_key(k: &str) -> String {
    let k = k.trim();
    if k == "N" {
        "n".to_string()
    } else {
        k.to_string()
    }
}

/// Canonical `key=value;...` string of a parameter list, sorted by key.
pub fn canonical_params(params: &[(String, String)]) -> String {
    let mut p: Vec<(String, String)> = params
        .iter()
        .map(|(k, v)| {
            let v = parse_complex(v).map(format_complex).unwrap_or_else(|_| v.clone());
            (k.clone(), v)
        })
        .collect();
    p.sort();
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), linalg::real(1.5));
        assert_eq!(parse_complex("-1.5i").unwrap(), linalg::c(0.0, -1.5));
        assert_eq!(parse_complex("1-2i").unwrap(), linalg::c(1.0, -2.0));
        assert_eq!(parse_complex("1e-3+4i").unwrap(), linalg::c(1e-3, 4.0));
        assert_eq!(parse_complex("i").unwrap(), linalg::c(0.0, 1.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn build_known_models() {
        let p = ModelSpec::new("perturbation", &["N=4"]).unwrap().build().unwrap();
        assert_eq!(p.dims(), [4, 4]);
        let w = ModelSpec::new("wide", &["n=0"]).unwrap().build().unwrap();
        assert_eq!(w.dims(), [1, 0]);
        let e = ModelSpec::new("ex3", &["n=3"]).unwrap().build().unwrap();
        assert_eq!(e.quiver().arrow_count(), 2);
        assert!(ModelSpec::new("nope", &[]).unwrap_err().to_string().contains("available"));
        assert!(ModelSpec::new("hrr", &["n=4"]).unwrap().build().is_err());
    }

    #[test]
    fn cross_partner_swaps_lambda() {
        let m = ModelSpec::new("ex8", &["lambda=0.5", "mu=1.5", "n=3"]).unwrap();
        assert_eq!(m.cross_partner().unwrap().get("lambda"), Some("1.5"));
        assert!(ModelSpec::new("ex9", &["mu=1", "n=2"]).unwrap().cross_partner().is_none());
    }

    #[test]
    fn canonical_params_are_order_free() {
        let a = ModelSpec::new("ex8", &["lambda=0.50", "n=3"]).unwrap();
        let b = ModelSpec::new("ex8", &["N=3", "lambda=0.5"]).unwrap();
        assert_eq!(canonical_params(&a.params), canonical_params(&b.params));
    }
}
