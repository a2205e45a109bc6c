//! Micro-syntax for distributions, matrices and ensembles on the command
//! line.
//!
//! Distributions: `bsc:p`, `asym:a,b`, or a path to a JSON object with keys
//! `p00 p01 p10 p11`. Matrices: an alist path, `regular:dv,dc`, or
//! `dd:<ensemble.json>`. Ensembles: `regular:dv,dc` or a JSON path holding
//! either a bare ensemble or the output of `de-search`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use syndrec_core::de::DegreeDistribution;
use syndrec_core::ldpc::{generate, SparseParityMatrix};
use syndrec_core::JointDistribution;

use crate::{alist, Error};

fn read_json(path: &Path) -> Result<serde_json::Value, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn numbers(body: &str, count: usize) -> Option<Vec<f64>> {
    let vals: Vec<f64> = body
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .ok()?;
    (vals.len() == count).then_some(vals)
}

pub fn parse_dist(spec: &str) -> Result<JointDistribution, Error> {
    let bad = |msg: &str| Error::DistSpec {
        spec: spec.to_string(),
        msg: msg.to_string(),
    };
    if let Some(body) = spec.strip_prefix("bsc:") {
        let v = numbers(body, 1).ok_or_else(|| bad("expected bsc:p"))?;
        return Ok(JointDistribution::from_bsc(v[0])?);
    }
    if let Some(body) = spec.strip_prefix("asym:") {
        let v = numbers(body, 2).ok_or_else(|| bad("expected asym:a,b"))?;
        return Ok(JointDistribution::from_asymmetric(v[0], v[1])?);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(bad("expected bsc:p, asym:a,b, or an existing JSON file"));
    }
    let value = read_json(path)?;
    serde_json::from_value(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Comma-separated list of numbers.
pub fn parse_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("{t:?} in {text:?} is not a number")))
        })
        .collect()
}

fn parse_regular(spec: &str, body: &str) -> Result<DegreeDistribution, Error> {
    let bad = || Error::MatrixSpec {
        spec: spec.to_string(),
        msg: "expected regular:dv,dc with integer degrees".into(),
    };
    let parts: Vec<usize> = body
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match parts[..] {
        [dv, dc] => Ok(DegreeDistribution::regular(dv, dc)?),
        _ => Err(bad()),
    }
}

/// Loads an ensemble from JSON. A `de-search` result file is accepted and
/// its best ensemble is used.
pub fn load_ensemble(path: &Path) -> Result<DegreeDistribution, Error> {
    let value = read_json(path)?;
    let value = match value.pointer("/payload/result/best") {
        Some(best) => best.clone(),
        None => value,
    };
    serde_json::from_value(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_ensemble(spec: &str) -> Result<DegreeDistribution, Error> {
    match spec.strip_prefix("regular:") {
        Some(body) => parse_regular(spec, body),
        None => load_ensemble(Path::new(spec)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixSpec {
    Alist { path: PathBuf },
    Regular { dv: usize, dc: usize },
    Ensemble { path: PathBuf },
}

impl fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSpec::Alist { path } => write!(f, "{}", path.display()),
            MatrixSpec::Regular { dv, dc } => write!(f, "regular:{dv},{dc}"),
            MatrixSpec::Ensemble { path } => write!(f, "dd:{}", path.display()),
        }
    }
}

impl std::str::FromStr for MatrixSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self, Error> {
        if let Some(body) = spec.strip_prefix("regular:") {
            let dd = parse_regular(spec, body)?;
            return Ok(MatrixSpec::Regular {
                dv: dd.lambda()[0].0,
                dc: dd.rho()[0].0,
            });
        }
        if let Some(path) = spec.strip_prefix("dd:") {
            return Ok(MatrixSpec::Ensemble {
                path: PathBuf::from(path),
            });
        }
        if spec.is_empty() {
            return Err(Error::MatrixSpec {
                spec: spec.to_string(),
                msg: "empty".into(),
            });
        }
        Ok(MatrixSpec::Alist {
            path: PathBuf::from(spec),
        })
    }
}

/// Size of the matrix a generated spec yields for block length `n`.
pub fn checks_for(n: usize, dd: &DegreeDistribution) -> usize {
    (n as f64 * dd.compression_rate()).round() as usize
}

impl MatrixSpec {
    /// Loads or generates the matrix. Generated matrices use `seed` for
    /// PEG tie-breaking; a loaded matrix must have `n` columns.
    pub fn resolve(&self, n: usize, seed: u64) -> Result<SparseParityMatrix, Error> {
        let dd = match self {
            MatrixSpec::Alist { path } => {
                let h = alist::load(path)?;
                if h.n() != n {
                    return Err(Error::Invalid(format!(
                        "{} has {} columns but --n is {n}",
                        path.display(),
                        h.n()
                    )));
                }
                return Ok(h);
            }
            MatrixSpec::Regular { dv, dc } => DegreeDistribution::regular(*dv, *dc)?,
            MatrixSpec::Ensemble { path } => load_ensemble(path)?,
        };
        Ok(generate(n, checks_for(n, &dd), &dd, seed)?)
    }
}
