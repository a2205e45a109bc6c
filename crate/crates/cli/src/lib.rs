//! File formats, parallel experiment runner and command-line front end for
//! [`syndrec_core`].

pub mod alist;
pub mod cli;
pub mod output;
pub mod runner;
pub mod spec;

use std::path::{Path, PathBuf};

pub use runner::Parallel;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alist line {line}: {msg}")]
    Alist { line: usize, msg: String },
    #[error("{path}: {inner}")]
    InFile { path: PathBuf, inner: Box<Error> },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed distribution spec {spec:?}: {msg}")]
    DistSpec { spec: String, msg: String },
    #[error("malformed matrix spec {spec:?}: {msg}")]
    MatrixSpec { spec: String, msg: String },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] syndrec_core::Error),
}

impl Error {
    pub(crate) fn in_file(self, path: &Path) -> Error {
        Error::InFile {
            path: path.to_path_buf(),
            inner: Box::new(self),
        }
    }
}
