//! Watermark key material: codebook, key and embedding mode.
//!
//! ```json
//! {"codebook": {"I": "0001", "T": "0010"},
//!  "key": {"bits": "1100101011", "op": "AND"},
//!  "mode": "replace_opcodes"}
//! ```
//!
//! Every field is optional: the codebook defaults to the six-character book,
//! the key to empty (pass-through), the mode to `replace_opcodes`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bytecode::Mode;
use crate::codec::{apply_key, encode_chars, Bitstream, CodecError, Codebook, KeySpec};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WatermarkConfig {
    #[serde(default)]
    pub codebook: Codebook,
    #[serde(default)]
    pub key: KeySpec,
    #[serde(default)]
    pub mode: Mode,
}

impl WatermarkConfig {
    pub fn new(codebook: Codebook, key: KeySpec, mode: Mode) -> Self {
        WatermarkConfig { codebook, key, mode }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        WatermarkConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Bits a message occupies once encoded and keyed.
    pub fn keyed_bits(&self, message: &str) -> Result<Bitstream, CodecError> {
        apply_key(&encode_chars(message, &self.codebook)?, &self.key)
    }
}
