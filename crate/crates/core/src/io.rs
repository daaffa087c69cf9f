//! JSON file formats: systems of equations, series (tropical or classical),
//! and exact rationals as `"num/den"` strings.
//!
//! A system file:
//!
//! ```json
//! {"field": {"kind": "eisenstein", "p": 3}, "vars": 1, "truncation": 18,
//!  "polynomials": ["x' - 3*zeta*t^2*x"]}
//! ```
//!
//! A series file lists the coefficients that are not `∞` (tropical) or not
//! zero (classical). A `field` entry marks a classical series, whose values
//! are rationals or, over the Eisenstein backend, arrays of `ζ`-coordinates:
//!
//! ```json
//! {"valuation": {"kind": "p-adic", "p": 3}, "truncation": 18,
//!  "coeffs": [{"n": 0, "val": "0/1"}, {"n": 3, "val": "1/2"}]}
//! ```
//!
//! Several series (one per variable) go in `{"series": [...]}`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diffpoly::DiffPoly;
use crate::field::{FieldBackend, FieldElem};
use crate::parser::parse_poly;
use crate::series::{PowerSeries, TropSeries};
use crate::valuation::NatValuation;
use crate::{Error, Rational, Result, TropNum};

pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"num/den"` and plain integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Format(format!("not a rational: {s:?}")))
}

pub fn format_trop(x: &TropNum) -> String {
    match x.finite() {
        Some(v) => format_rational(v),
        None => "inf".into(),
    }
}

pub fn parse_trop(s: &str) -> Result<TropNum> {
    if s.trim() == "inf" {
        Ok(TropNum::Inf)
    } else {
        parse_rational(s).map(TropNum::new)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub field: FieldBackend,
    #[serde(default = "one")]
    pub vars: usize,
    #[serde(default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub order: Option<usize>,
    pub polynomials: Vec<String>,
}

fn one() -> usize {
    1
}

/// A parsed system of differential polynomials.
#[derive(Clone, Debug)]
pub struct System {
    pub backend: FieldBackend,
    pub nvars: usize,
    pub truncation: usize,
    pub order: Option<usize>,
    pub polynomials: Vec<DiffPoly>,
}

/// `N = 6p`, or 12 over the trivially valued backend.
pub fn default_truncation(backend: FieldBackend) -> usize {
    backend.prime().map_or(12, |p| 6 * p as usize)
}

/// `m = 3p`, or 6 over the trivially valued backend.
pub fn default_order(backend: FieldBackend) -> usize {
    backend.prime().map_or(6, |p| 3 * p as usize)
}

pub fn load_system(text: &str) -> Result<System> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let backend = file.field.validate()?;
    let truncation = file.truncation.unwrap_or_else(|| default_truncation(backend));
    let polynomials = file
        .polynomials
        .iter()
        .map(|src| parse_poly(src, backend, file.vars, truncation))
        .collect::<Result<_>>()?;
    Ok(System {
        backend,
        nvars: file.vars,
        truncation,
        order: file.order,
        polynomials,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ValRepr {
    Scalar(String),
    Vector(Vec<String>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CoeffEntry {
    n: usize,
    val: ValRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SeriesFile {
    #[serde(default)]
    field: Option<FieldBackend>,
    #[serde(default)]
    valuation: Option<NatValuation>,
    truncation: usize,
    coeffs: Vec<CoeffEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SeriesDocument {
    Many { series: Vec<SeriesFile> },
    One(SeriesFile),
}

/// A series read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesData {
    Tropical(TropSeries),
    Classical(PowerSeries),
}

impl SeriesData {
    /// The tropical series, tropicalizing a classical one.
    pub fn to_tropical(&self) -> TropSeries {
        match self {
            SeriesData::Tropical(s) => s.clone(),
            SeriesData::Classical(a) => crate::series::tropicalize_series(a),
        }
    }
}

fn convert(file: SeriesFile, default_val: Option<NatValuation>) -> Result<SeriesData> {
    let check_index = |n: usize| {
        if n > file.truncation {
            Err(Error::Format(format!("coefficient index {n} beyond truncation {}", file.truncation)))
        } else {
            Ok(())
        }
    };
    match file.field {
        Some(backend) => {
            let backend = backend.validate()?;
            let mut coeffs = vec![FieldElem::zero(backend); file.truncation + 1];
            for entry in &file.coeffs {
                check_index(entry.n)?;
                coeffs[entry.n] = match &entry.val {
                    ValRepr::Scalar(s) => FieldElem::from_rational(backend, parse_rational(s)?),
                    ValRepr::Vector(v) => {
                        if v.len() > backend.degree() {
                            return Err(Error::Format(format!("too many coordinates at n = {}", entry.n)));
                        }
                        FieldElem::from_coeffs(backend, v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
                    }
                };
            }
            Ok(SeriesData::Classical(PowerSeries::from_coeffs(backend, coeffs)))
        }
        None => {
            let nat_val = file
                .valuation
                .or(default_val)
                .ok_or_else(|| Error::Format("series needs a valuation or a field".into()))?;
            let mut s = TropSeries::all_inf(nat_val, file.truncation);
            for entry in &file.coeffs {
                check_index(entry.n)?;
                match &entry.val {
                    ValRepr::Scalar(v) => s.set_coeff(entry.n, parse_trop(v)?),
                    ValRepr::Vector(_) => {
                        return Err(Error::Format("tropical coefficients are scalars".into()))
                    }
                }
            }
            Ok(SeriesData::Tropical(s))
        }
    }
}

/// Reads one or several series. Tropical series without a `valuation` entry
/// use `default_val`.
pub fn load_series(text: &str, default_val: Option<NatValuation>) -> Result<Vec<SeriesData>> {
    let doc: SeriesDocument = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    match doc {
        SeriesDocument::One(f) => Ok(vec![convert(f, default_val)?]),
        SeriesDocument::Many { series } => series.into_iter().map(|f| convert(f, default_val)).collect(),
    }
}

pub fn trop_series_json(s: &TropSeries) -> Value {
    let coeffs: Vec<Value> = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_finite())
        .map(|(n, c)| json!({"n": n, "val": format_trop(c)}))
        .collect();
    json!({
        "valuation": s.nat_val(),
        "truncation": s.truncation().unwrap_or(0),
        "coeffs": coeffs,
    })
}

pub fn power_series_json(a: &PowerSeries) -> Value {
    let eisenstein = matches!(a.backend(), FieldBackend::Eisenstein { .. });
    let coeffs: Vec<Value> = a
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| {
            let val = if eisenstein {
                json!(c.coeffs().iter().map(format_rational).collect::<Vec<_>>())
            } else {
                json!(format_rational(&c.coeffs()[0]))
            };
            json!({"n": n, "val": val})
        })
        .collect();
    json!({
        "field": a.backend(),
        "truncation": a.truncation(),
        "coeffs": coeffs,
    })
}
