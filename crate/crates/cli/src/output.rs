//! Output envelopes.
//!
//! JSON output is `{"payload": {...}, "metadata": {...}}`. The payload holds
//! the command, its fully resolved configuration and the result, and is a
//! pure function of the inputs. Wall-clock data lives only in `metadata`.
//! CSV output is one row per report and carries no timing at all.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use syndrec_core::session::SimReport;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct Payload<'a, C: Serialize, R: Serialize> {
    pub command: &'a str,
    pub config: &'a C,
    pub result: &'a R,
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub wall_clock_ms: u128,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub payload: Payload<'a, C, R>,
    pub metadata: Metadata,
}

pub fn json<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    result: &R,
    wall_clock_ms: u128,
) -> Result<String, Error> {
    let env = Envelope {
        payload: Payload {
            command,
            config,
            result,
        },
        metadata: Metadata {
            wall_clock_ms,
            version: env!("CARGO_PKG_VERSION"),
        },
    };
    let mut text = serde_json::to_string_pretty(&env)
        .map_err(|e| Error::Invalid(format!("cannot serialize output: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub const CSV_HEADER: [&str; 13] = [
    "scheme",
    "dist",
    "n",
    "m",
    "reveal",
    "trials",
    "fer",
    "undetected",
    "leak_alice",
    "leak_total",
    "efficiency",
    "conditional_entropy",
    "seed",
];

pub fn csv(reports: &[SimReport]) -> Result<String, Error> {
    let fail = |e: csv::Error| Error::Invalid(format!("cannot write CSV: {e}"));
    let opt = |v: Option<String>| v.unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(fail)?;
    for r in reports {
        w.write_record([
            r.scheme.clone(),
            r.dist.clone(),
            r.n.to_string(),
            opt(r.m.map(|m| m.to_string())),
            opt(r.reveal_fraction.map(|f| f.to_string())),
            r.trials.to_string(),
            r.fer.to_string(),
            r.undetected.to_string(),
            r.mean_leak_alice.to_string(),
            r.mean_leak_total.to_string(),
            opt(r.efficiency.map(|e| e.to_string())),
            r.conditional_entropy.to_string(),
            r.seed.to_string(),
        ])
        .map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invalid(format!("cannot write CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
