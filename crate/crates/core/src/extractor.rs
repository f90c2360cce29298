//! Reads carrier bits back out of every method and searches them for a
//! keyed watermark. The dummy's name and position are never needed.

use serde::Serialize;

use crate::bytecode::{decode_instructions, Mode};
use crate::classfile::ClassFile;
use crate::codec::{codepoints_to_bits, decode_chars, Bitstream, CodecError, Codebook, Decoded};
use crate::config::WatermarkConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodBits {
    pub method_index: usize,
    pub name: String,
    pub descriptor: String,
    pub bits: Bitstream,
    pub decoded: Decoded,
    /// Set when the code array could not be decoded; `bits` is then empty.
    pub error: Option<String>,
}

/// Bits and text of every method that has code, in file order.
pub fn decode_all(cf: &ClassFile, mode: Mode, book: &Codebook) -> Vec<MethodBits> {
    let mut out = Vec::new();
    for (i, m) in cf.methods.iter().enumerate() {
        let Some(code) = m.code() else { continue };
        let (bits, error) = match decode_instructions(&code.code) {
            Ok(insns) => (codepoints_to_bits(&insns, mode), None),
            Err(e) => (Bitstream::new(), Some(e.to_string())),
        };
        out.push(MethodBits {
            method_index: i,
            name: cf.method_name(i),
            descriptor: cf.method_descriptor(i),
            decoded: decode_chars(&bits, book),
            bits,
            error,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Found {
        method: String,
        method_index: usize,
        /// Bit offset of the match within the method's stream.
        offset: usize,
        /// The message was empty, so the match is vacuous.
        degenerate: bool,
    },
    NotFound {
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
}

impl Verdict {
    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found { .. })
    }
}

/// Searches every method of `cf` for the keyed bits of `message`.
pub fn verify_model(cf: &ClassFile, message: &str, config: &WatermarkConfig) -> Result<Verdict, CodecError> {
    let needle = config.keyed_bits(message)?;
    Ok(search(cf, &needle, config.mode))
}

fn search(cf: &ClassFile, needle: &Bitstream, mode: Mode) -> Verdict {
    for (i, m) in cf.methods.iter().enumerate() {
        let Some(code) = m.code() else { continue };
        let Ok(insns) = decode_instructions(&code.code) else { continue };
        if let Some(offset) = codepoints_to_bits(&insns, mode).find(needle) {
            return Verdict::Found { method: cf.method_name(i), method_index: i, offset, degenerate: needle.is_empty() };
        }
    }
    Verdict::NotFound { error: None }
}

/// One verdict per input file. Files that fail to parse are `NotFound`
/// with the parse error attached.
pub fn verify<'a, I>(files: I, message: &str, config: &WatermarkConfig) -> Result<Vec<(String, Verdict)>, CodecError>
where
    I: IntoIterator<Item = (&'a str, &'a [u8])>,
{
    let needle = config.keyed_bits(message)?;
    Ok(files
        .into_iter()
        .map(|(name, bytes)| {
            let v = match crate::classfile::parse(bytes) {
                Ok(cf) => search(&cf, &needle, config.mode),
                Err(e) => Verdict::NotFound { error: Some(e.to_string()) },
            };
            (name.to_string(), v)
        })
        .collect())
}

/// One JSON-lines record per (file, method).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtractionRecord {
    pub file: String,
    pub class: String,
    pub method: String,
    pub descriptor: String,
    pub bit_length: usize,
    pub bits_hex: String,
    pub text: String,
    pub unknown_codes: usize,
    pub dropped_bits: usize,
    /// Bit offsets where the expected keyed message occurs.
    pub matches: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn extraction_report(
    file: &str,
    cf: &ClassFile,
    config: &WatermarkConfig,
    message: Option<&str>,
) -> Result<Vec<ExtractionRecord>, CodecError> {
    let needle = message.map(|m| config.keyed_bits(m)).transpose()?;
    let class = cf.class_name();
    Ok(decode_all(cf, config.mode, &config.codebook)
        .into_iter()
        .map(|m| ExtractionRecord {
            file: file.to_string(),
            class: class.clone(),
            matches: needle.as_ref().map(|n| m.bits.find_all(n)).unwrap_or_default(),
            method: m.name,
            descriptor: m.descriptor,
            bit_length: m.bits.len(),
            bits_hex: m.bits.to_hex(),
            text: m.decoded.text,
            unknown_codes: m.decoded.unknown,
            dropped_bits: m.decoded.dropped_bits,
            error: m.error,
        })
        .collect())
}

pub fn to_json_lines(records: &[ExtractionRecord]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("record serializes") + "\n").collect()
}
