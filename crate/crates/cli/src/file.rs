//! Curvature files (TOML).
//!
//! ```toml
//! n = 4
//! kind = "components"          # or "einstein_weyl", "model"
//! entries = [[0, 1, 0, 1, "1"], [0, 2, 0, 2, 0.5]]
//! ```
//!
//! Indices are 0-based and only canonical entries `i < j`, `k < l`,
//! `(i, j) ≤ (k, l)` are listed; every other component follows by symmetry.
//! Values are integers, decimals or `"p/q"` strings, and are read exactly.
//! `einstein_weyl` files carry `s` and `weyl` (canonical Weyl entries);
//! `model` files carry `name = "sphere" | "flat"` and `curvature`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rigidity_core::scalar::parse_rational;
use rigidity_core::tensor::{assemble_einstein, kulkarni_nomizu_gg, CurvatureTensor, EinsteinData};
use rigidity_core::{Rational, Scalar};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{0}")]
    Syntax(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("invalid curvature data: {0}")]
    Invalid(#[from] rigidity_core::Error),
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> FileError {
    FileError::Field { field: field.into(), message: message.into() }
}

/// Canonical component list.
pub type Entries = Vec<([usize; 4], Rational)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Sphere,
    Flat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureSpec {
    Components(Entries),
    EinsteinWeyl { s: Rational, weyl: Entries },
    Model { model: Model, curvature: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureFile {
    pub n: usize,
    pub spec: CurvatureSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    n: i64,
    kind: String,
    entries: Option<Vec<toml::Value>>,
    s: Option<toml::Value>,
    weyl: Option<Vec<toml::Value>>,
    name: Option<String>,
    curvature: Option<toml::Value>,
}

fn parse_value(field: &str, v: &toml::Value) -> Result<Rational, FileError> {
    let text = match v {
        toml::Value::Integer(i) => i.to_string(),
        // shortest round-trip decimal, read exactly
        toml::Value::Float(f) if f.is_finite() => format!("{f:?}"),
        toml::Value::String(s) => s.clone(),
        other => return Err(field_error(field, format!("expected a number or \"p/q\" string, found {other}"))),
    };
    parse_rational(&text).map_err(|e| field_error(field, e.to_string()))
}

fn parse_entries(field: &str, n: usize, items: &[toml::Value]) -> Result<Entries, FileError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(items.len());
    for (pos, item) in items.iter().enumerate() {
        let here = format!("{field}[{pos}]");
        let arr = item.as_array().filter(|a| a.len() == 5).ok_or_else(|| field_error(&here, "expected [i, j, k, l, value]"))?;
        let mut idx = [0usize; 4];
        for (slot, v) in idx.iter_mut().zip(arr) {
            let i = v.as_integer().ok_or_else(|| field_error(&here, "indices must be integers"))?;
            if i < 0 || i as usize >= n {
                return Err(field_error(&here, format!("index {i} outside 0..{n}")));
            }
            *slot = i as usize;
        }
        let [i, j, k, l] = idx;
        if !(i < j && k < l && (i, j) <= (k, l)) {
            return Err(field_error(&here, format!("{idx:?} is not canonical (need i<j, k<l, (i,j)<=(k,l))")));
        }
        if !seen.insert(idx) {
            return Err(field_error(&here, format!("duplicate entry {idx:?}")));
        }
        out.push((idx, parse_value(&here, &arr[4])?));
    }
    Ok(out)
}

fn require<T>(v: Option<T>, field: &str, kind: &str) -> Result<T, FileError> {
    v.ok_or_else(|| field_error(field, format!("required for kind = \"{kind}\"")))
}

fn forbid<T>(v: &Option<T>, field: &str, kind: &str) -> Result<(), FileError> {
    match v {
        Some(_) => Err(field_error(field, format!("not allowed for kind = \"{kind}\""))),
        None => Ok(()),
    }
}

impl CurvatureFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: Raw = toml::from_str(text).map_err(|e| FileError::Syntax(e.to_string().trim_end().to_string()))?;
        if raw.n < 2 {
            return Err(field_error("n", format!("dimension must be >= 2, got {}", raw.n)));
        }
        let n = raw.n as usize;
        let kind = raw.kind.as_str();
        let spec = match kind {
            "components" => {
                forbid(&raw.s, "s", kind)?;
                forbid(&raw.weyl, "weyl", kind)?;
                forbid(&raw.name, "name", kind)?;
                forbid(&raw.curvature, "curvature", kind)?;
                CurvatureSpec::Components(parse_entries("entries", n, &require(raw.entries, "entries", kind)?)?)
            }
            "einstein_weyl" => {
                forbid(&raw.entries, "entries", kind)?;
                forbid(&raw.name, "name", kind)?;
                forbid(&raw.curvature, "curvature", kind)?;
                let s = parse_value("s", &require(raw.s, "s", kind)?)?;
                let weyl = parse_entries("weyl", n, &require(raw.weyl, "weyl", kind)?)?;
                CurvatureSpec::EinsteinWeyl { s, weyl }
            }
            "model" => {
                forbid(&raw.entries, "entries", kind)?;
                forbid(&raw.s, "s", kind)?;
                forbid(&raw.weyl, "weyl", kind)?;
                let model = match require(raw.name, "name", kind)?.as_str() {
                    "sphere" => Model::Sphere,
                    "flat" => Model::Flat,
                    other => return Err(field_error("name", format!("unknown model \"{other}\" (expected sphere or flat)"))),
                };
                let curvature = match (model, raw.curvature) {
                    (_, Some(v)) => parse_value("curvature", &v)?,
                    (Model::Flat, None) => Rational::from_int(0),
                    (Model::Sphere, None) => Rational::from_int(1),
                };
                if model == Model::Flat && curvature != Rational::from_int(0) {
                    return Err(field_error("curvature", "a flat model has curvature 0"));
                }
                CurvatureSpec::Model { model, curvature }
            }
            other => {
                return Err(field_error("kind", format!("unknown kind \"{other}\" (expected components, einstein_weyl or model)")))
            }
        };
        let file = CurvatureFile { n, spec };
        file.tensor()?;
        Ok(file)
    }

    /// Einstein data when the file specifies it directly.
    pub fn einstein(&self) -> Result<Option<EinsteinData<Rational>>, FileError> {
        let n = self.n;
        Ok(match &self.spec {
            CurvatureSpec::Components(_) => None,
            CurvatureSpec::EinsteinWeyl { s, weyl } => {
                let w = CurvatureTensor::from_canonical(n, weyl.iter().cloned())?;
                Some(EinsteinData::new(s.clone(), w)?)
            }
            CurvatureSpec::Model { curvature, .. } => {
                let s = curvature.clone() * Rational::from_usize(n * (n - 1));
                Some(EinsteinData::new(s, CurvatureTensor::zero(n))?)
            }
        })
    }

    /// The full curvature tensor, validated.
    pub fn tensor(&self) -> Result<CurvatureTensor<Rational>, FileError> {
        match &self.spec {
            CurvatureSpec::Components(entries) => Ok(CurvatureTensor::from_canonical(self.n, entries.iter().cloned())?),
            CurvatureSpec::Model { curvature, .. } => Ok(kulkarni_nomizu_gg::<Rational>(self.n)?.scale(curvature)),
            CurvatureSpec::EinsteinWeyl { .. } => {
                let data = self.einstein()?.expect("einstein data");
                Ok(assemble_einstein(&data))
            }
        }
    }

    /// Serializes with every value as an exact `"p/q"` string.
    pub fn to_toml(&self) -> String {
        fn entries(out: &mut String, key: &str, list: &Entries) {
            let _ = writeln!(out, "{key} = [");
            for ([i, j, k, l], v) in list {
                let _ = writeln!(out, "  [{i}, {j}, {k}, {l}, \"{v}\"],");
            }
            let _ = writeln!(out, "]");
        }
        let mut out = format!("n = {}\n", self.n);
        match &self.spec {
            CurvatureSpec::Components(list) => {
                out.push_str("kind = \"components\"\n");
                entries(&mut out, "entries", list);
            }
            CurvatureSpec::EinsteinWeyl { s, weyl } => {
                let _ = writeln!(out, "kind = \"einstein_weyl\"\ns = \"{s}\"");
                entries(&mut out, "weyl", weyl);
            }
            CurvatureSpec::Model { model, curvature } => {
                let name = match model {
                    Model::Sphere => "sphere",
                    Model::Flat => "flat",
                };
                let _ = writeln!(out, "kind = \"model\"\nname = \"{name}\"\ncurvature = \"{curvature}\"");
            }
        }
        out
    }

    /// `components` file listing the nonzero canonical entries of `r`.
    pub fn from_tensor(r: &CurvatureTensor<Rational>) -> Self {
        let entries = r.canonical_entries().into_iter().filter(|(_, v)| *v != Rational::from_int(0)).collect();
        CurvatureFile { n: r.n(), spec: CurvatureSpec::Components(entries) }
    }

    /// `einstein_weyl` file for `data`.
    pub fn from_einstein(data: &EinsteinData<Rational>) -> Self {
        let weyl = data.weyl().canonical_entries().into_iter().filter(|(_, v)| *v != Rational::from_int(0)).collect();
        CurvatureFile { n: data.n(), spec: CurvatureSpec::EinsteinWeyl { s: data.scalar_curvature().clone(), weyl } }
    }
}
