//! The JSON function spec format.
//!
//! ```json
//! {"arity": 2, "kind": "table", "table": "8", "defined": "f"}
//! {"arity": 3, "kind": "symmetric", "params": {"profile": "0111"}}
//! {"arity": 3, "kind": "junta", "params": {"junta": [0], "profiles": ["0000", "0101"]}}
//! {"kind": "zoo", "name": "sink", "params": [4]}
//! ```
//!
//! Hex strings are little-endian by input index (see [`BitTable::to_hex`]).
//! A missing `defined` mask means the function is total.

use super::{zoo, JuntaSymmetricSpec, PartialFn, SymmetricSpectrum};
use crate::bits::BitTable;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Table,
    Symmetric,
    Junta,
    Zoo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FnSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub kind: SpecKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defined: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

fn parse_profile(s: &str) -> Result<SymmetricSpectrum> {
    let profile = s
        .chars()
        .map(|c| match c {
            '0' => Ok(Some(false)),
            '1' => Ok(Some(true)),
            '*' => Ok(None),
            _ => Err(Error::Spec(format!("profile character {c:?} not in {{0,1,*}}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    SymmetricSpectrum::new(profile)
}

fn profile_string(s: &SymmetricSpectrum) -> String {
    s.profile()
        .iter()
        .map(|v| match v {
            Some(true) => '1',
            Some(false) => '0',
            None => '*',
        })
        .collect()
}

impl FnSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialises")
    }

    /// Table spec of an arbitrary function; `defined` is omitted when total.
    pub fn from_fn(f: &PartialFn) -> Self {
        Self {
            arity: Some(f.arity()),
            kind: SpecKind::Table,
            table: Some(f.values().to_hex()),
            defined: (!f.is_total()).then(|| f.defined().to_hex()),
            name: None,
            params: Value::Null,
        }
    }

    pub fn from_spectrum(s: &SymmetricSpectrum) -> Self {
        Self {
            arity: Some(s.arity()),
            kind: SpecKind::Symmetric,
            table: None,
            defined: None,
            name: None,
            params: serde_json::json!({ "profile": profile_string(s) }),
        }
    }

    fn arity(&self) -> Result<usize> {
        self.arity
            .ok_or_else(|| Error::Spec(format!("{:?} spec needs an arity", self.kind)))
    }

    pub fn build(&self) -> Result<PartialFn> {
        match self.kind {
            SpecKind::Table => {
                let n = self.arity()?;
                crate::func::Limits::default().check(n)?;
                let size = 1usize << n;
                let table = self
                    .table
                    .as_deref()
                    .ok_or_else(|| Error::Spec("table spec needs \"table\"".into()))?;
                let values = BitTable::from_hex(size, table).map_err(Error::Spec)?;
                let defined = match &self.defined {
                    Some(h) => BitTable::from_hex(size, h).map_err(Error::Spec)?,
                    None => BitTable::ones(size),
                };
                PartialFn::from_tables(n, defined, values)
            }
            SpecKind::Symmetric => {
                let profile = self.params["profile"]
                    .as_str()
                    .ok_or_else(|| Error::Spec("symmetric spec needs params.profile".into()))?;
                let s = parse_profile(profile)?;
                if let Some(n) = self.arity {
                    if n != s.arity() {
                        return Err(Error::Spec(format!(
                            "profile of length {} does not match arity {n}",
                            s.arity() + 1
                        )));
                    }
                }
                s.to_fn()
            }
            SpecKind::Junta => self.junta_spec()?.to_fn(),
            SpecKind::Zoo => {
                let name = self
                    .name
                    .as_deref()
                    .ok_or_else(|| Error::Spec("zoo spec needs \"name\"".into()))?;
                let mut full = name.to_string();
                if let Some(args) = self.params.as_array() {
                    for a in args {
                        let v = a
                            .as_u64()
                            .ok_or_else(|| Error::Spec(format!("zoo parameter {a} not an integer")))?;
                        full.push_str(&format!(":{v}"));
                    }
                }
                let f = zoo::by_name(&full)?;
                match self.arity {
                    Some(n) if n != f.arity() => Err(Error::Spec(format!(
                        "zoo function {full} has arity {}, spec says {n}",
                        f.arity()
                    ))),
                    _ => Ok(f),
                }
            }
        }
    }

    pub fn junta_spec(&self) -> Result<JuntaSymmetricSpec> {
        let n = self.arity()?;
        let junta = self.params["junta"]
            .as_array()
            .ok_or_else(|| Error::Spec("junta spec needs params.junta".into()))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::Spec(format!("junta index {v} not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        let table = self.params["profiles"]
            .as_array()
            .ok_or_else(|| Error::Spec("junta spec needs params.profiles".into()))?
            .iter()
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| Error::Spec("profiles must be strings".into()))
                    .and_then(parse_profile)
            })
            .collect::<Result<Vec<_>>>()?;
        JuntaSymmetricSpec::new(n, junta, table)
    }
}
