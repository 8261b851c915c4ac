//! Network JSON files.
//!
//! ```json
//! {"widths": [1, 2, 1], "scalar_mode": "rational",
//!  "layers": [["2", "-5", "-1", "4"], ["1", "1", "1"]]}
//! ```
//!
//! Each layer is its matrix in row-major order (bias last in each row).
//! Rational entries are `"p/q"` strings; float entries are JSON numbers.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Architecture, Network};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar, ScalarMode};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub widths: Vec<usize>,
    pub scalar_mode: ScalarMode,
    pub layers: Vec<Vec<Value>>,
}

/// A loaded network in whichever mode the file declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyNetwork {
    Rational(Network<Rational>),
    Float(Network<f64>),
}

impl AnyNetwork {
    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyNetwork::Rational(_) => ScalarMode::Rational,
            AnyNetwork::Float(_) => ScalarMode::Float,
        }
    }

    pub fn into_rational(self) -> Result<Network<Rational>> {
        match self {
            AnyNetwork::Rational(n) => Ok(n),
            other => Err(Error::ModeMismatch { expected: ScalarMode::Rational, found: other.mode() }),
        }
    }

    pub fn into_float(self) -> Result<Network<f64>> {
        match self {
            AnyNetwork::Float(n) => Ok(n),
            other => Err(Error::ModeMismatch { expected: ScalarMode::Float, found: other.mode() }),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        match self {
            AnyNetwork::Rational(n) => n.to_json_string(),
            AnyNetwork::Float(n) => n.to_json_string(),
        }
    }
}

impl TryFrom<NetworkFile> for AnyNetwork {
    type Error = Error;

    fn try_from(f: NetworkFile) -> Result<Self> {
        Ok(match f.scalar_mode {
            ScalarMode::Rational => AnyNetwork::Rational(Network::from_file(&f)?),
            ScalarMode::Float => AnyNetwork::Float(Network::from_file(&f)?),
        })
    }
}

impl<S: Scalar> Network<S> {
    pub fn to_file(&self) -> NetworkFile {
        NetworkFile {
            widths: self.arch.widths().to_vec(),
            scalar_mode: S::MODE,
            layers: self.layers.iter().map(|a| a.data().iter().map(Scalar::to_json).collect()).collect(),
        }
    }

    /// Rejects files whose declared mode differs from `S`.
    pub fn from_file(f: &NetworkFile) -> Result<Self> {
        if f.scalar_mode != S::MODE {
            return Err(Error::ModeMismatch { expected: S::MODE, found: f.scalar_mode });
        }
        let arch = Architecture::new(f.widths.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        if f.layers.len() != arch.depth() {
            return Err(Error::Schema(format!(
                "{} layers listed for widths {:?}",
                f.layers.len(),
                f.widths
            )));
        }
        let mut layers = Vec::with_capacity(arch.depth());
        for (i, entries) in f.layers.iter().enumerate() {
            let (r, c) = (arch.width(i + 1), arch.width(i) + 1);
            if entries.len() != r * c {
                return Err(Error::Schema(format!(
                    "layer {} has {} entries, expected {r}x{c} = {}",
                    i + 1,
                    entries.len(),
                    r * c
                )));
            }
            let data = entries
                .iter()
                .map(S::from_json)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Schema(format!("layer {}: {e}", i + 1)))?;
            layers.push(Matrix::new(r, c, data).map_err(|e| Error::Schema(e.to_string()))?);
        }
        Network::new(arch, layers)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("network serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }
}

pub fn load_network(path: impl AsRef<Path>) -> Result<AnyNetwork> {
    let text = std::fs::read_to_string(path)?;
    AnyNetwork::from_json_str(&text)
}

pub fn save_network<S: Scalar>(net: &Network<S>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, net.to_json_string() + "\n")?;
    Ok(())
}
