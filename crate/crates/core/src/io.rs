//! Versioned JSON documents for instances, matrices and solve results.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, ModelError, MultiLayerMatrix, Node, Seconds};
use crate::solver::SolveResult;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: unsupported format version {found} (expected {FORMAT_VERSION})")]
    Version { path: String, found: u32 },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: ModelError,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub version: u32,
    pub depot_index: usize,
    pub nodes: Vec<Node>,
}

impl From<&Instance> for InstanceDocument {
    fn from(instance: &Instance) -> Self {
        Self {
            version: FORMAT_VERSION,
            depot_index: Instance::DEPOT,
            nodes: instance.nodes().to_vec(),
        }
    }
}

impl InstanceDocument {
    pub fn into_instance(self) -> Result<Instance, ModelError> {
        if self.depot_index != Instance::DEPOT {
            return Err(ModelError::InvalidInput(format!(
                "depot_index must be {}, got {}",
                Instance::DEPOT,
                self.depot_index
            )));
        }
        Instance::new(self.nodes)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub version: u32,
    pub n_nodes: usize,
    pub n_layers: usize,
    pub step_seconds: Seconds,
    pub closed: bool,
    pub times: Vec<Vec<Vec<Seconds>>>,
}

impl From<&MultiLayerMatrix> for MatrixDocument {
    fn from(m: &MultiLayerMatrix) -> Self {
        Self {
            version: FORMAT_VERSION,
            n_nodes: m.n_nodes(),
            n_layers: m.n_layers(),
            step_seconds: m.step_seconds(),
            closed: m.is_closed(),
            times: m.layers(),
        }
    }
}

impl MatrixDocument {
    pub fn into_matrix(self) -> Result<MultiLayerMatrix, ModelError> {
        if self.times.len() != self.n_layers {
            return Err(ModelError::MalformedMatrix(format!(
                "n_layers is {} but times holds {} layers",
                self.n_layers,
                self.times.len()
            )));
        }
        if self.times.first().map_or(0, Vec::len) != self.n_nodes {
            return Err(ModelError::MalformedMatrix(format!(
                "n_nodes is {} but layers are {} rows",
                self.n_nodes,
                self.times.first().map_or(0, Vec::len)
            )));
        }
        let m = MultiLayerMatrix::new(self.step_seconds, self.times)?;
        if self.closed && !m.is_closed() {
            let report = m.validate();
            return Err(ModelError::MalformedMatrix(format!(
                "matrix is flagged closed but has {} triangle-inequality violations",
                report.triangle_violations()
            )));
        }
        Ok(m)
    }
}

fn parse_error(path: &str, e: serde_json::Error) -> FormatError {
    FormatError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: shown.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| parse_error(&shown, e))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    text
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    fs::write(path, pretty(value)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn check_version(path: &Path, found: u32) -> Result<(), FormatError> {
    if found != FORMAT_VERSION {
        return Err(FormatError::Version {
            path: path.display().to_string(),
            found,
        });
    }
    Ok(())
}

pub fn instance_from_str(text: &str) -> Result<Instance, FormatError> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(|e| parse_error("<string>", e))?;
    check_version(Path::new("<string>"), doc.version)?;
    doc.into_instance().map_err(|source| FormatError::Invalid {
        path: "<string>".into(),
        source,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, FormatError> {
    let doc: InstanceDocument = read_doc(path)?;
    check_version(path, doc.version)?;
    doc.into_instance().map_err(|source| FormatError::Invalid {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_instance(path: &Path, instance: &Instance) -> Result<(), FormatError> {
    write_json(path, &InstanceDocument::from(instance))
}

/// Pretty-printed instance document with a trailing newline, as written by
/// [`write_instance`].
pub fn instance_to_string(instance: &Instance) -> String {
    pretty(&InstanceDocument::from(instance))
}

pub fn matrix_from_str(text: &str) -> Result<MultiLayerMatrix, FormatError> {
    let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| parse_error("<string>", e))?;
    check_version(Path::new("<string>"), doc.version)?;
    doc.into_matrix().map_err(|source| FormatError::Invalid {
        path: "<string>".into(),
        source,
    })
}

pub fn matrix_to_string(matrix: &MultiLayerMatrix) -> String {
    serde_json::to_string(&MatrixDocument::from(matrix)).expect("documents always serialize")
}

pub fn read_matrix(path: &Path) -> Result<MultiLayerMatrix, FormatError> {
    let doc: MatrixDocument = read_doc(path)?;
    check_version(path, doc.version)?;
    doc.into_matrix().map_err(|source| FormatError::Invalid {
        path: path.display().to_string(),
        source,
    })
}

/// Matrices are written compactly; a 64-node, 24-layer matrix is ~100k numbers.
pub fn write_matrix(path: &Path, matrix: &MultiLayerMatrix) -> Result<(), FormatError> {
    let mut text = matrix_to_string(matrix);
    text.push('\n');
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    read_doc(path)
}

pub fn result_to_string(result: &SolveResult) -> String {
    pretty(result)
}

pub fn write_result(path: &Path, result: &SolveResult) -> Result<(), FormatError> {
    write_json(path, result)
}

pub fn read_result(path: &Path) -> Result<SolveResult, FormatError> {
    read_doc(path)
}

pub fn result_from_str(text: &str) -> Result<SolveResult, FormatError> {
    serde_json::from_str(text).map_err(|e| parse_error("<string>", e))
}
