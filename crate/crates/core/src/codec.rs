//! Text <-> bits <-> codepoint values, and the key transform.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bytecode::{CodepointKind, Instruction, Mode};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("character {0:?} is not in the codebook")]
    UnmappedCharacter(char),
    #[error("key has {key} bits but the code only {code}")]
    KeyTooLong { key: usize, code: usize },
    #[error("need {needed} bits but the sites hold {available}")]
    InsufficientCapacity { needed: usize, available: usize },
    #[error("invalid bit string {0:?}")]
    BadBits(String),
    #[error("codebook: {0}")]
    BadCodebook(String),
}

/// Ordered bits with a read cursor. Equality ignores the cursor.
#[derive(Clone, Default)]
pub struct Bitstream {
    bits: Vec<bool>,
    cursor: usize,
}

impl PartialEq for Bitstream {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Bitstream {}

impl std::hash::Hash for Bitstream {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl Bitstream {
    pub fn new() -> Self {
        Bitstream::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Bitstream { bits, cursor: 0 }
    }

    /// Low `width` bits of `value`, most significant first.
    pub fn from_value(value: u64, width: usize) -> Self {
        let mut s = Bitstream::new();
        s.push_value(value, width);
        s
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn push_value(&mut self, value: u64, width: usize) {
        for i in (0..width).rev() {
            self.bits.push(value >> i & 1 == 1);
        }
    }

    pub fn extend(&mut self, other: &Bitstream) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.cursor
    }

    /// Consumes up to `n` bits; fewer only when the stream runs out.
    pub fn take(&mut self, n: usize) -> &[bool] {
        let end = (self.cursor + n).min(self.bits.len());
        let out = &self.bits[self.cursor..end];
        self.cursor = end;
        out
    }

    pub fn rewind(&mut self) {
        self.cursor = 0;
    }

    /// First bit offset where `needle` occurs as a contiguous run.
    pub fn find(&self, needle: &Bitstream) -> Option<usize> {
        if needle.is_empty() {
            return Some(0);
        }
        self.bits.windows(needle.len()).position(|w| w == needle.bits())
    }

    pub fn find_all(&self, needle: &Bitstream) -> Vec<usize> {
        if needle.is_empty() {
            return Vec::new();
        }
        self.bits
            .windows(needle.len())
            .enumerate()
            .filter(|(_, w)| *w == needle.bits())
            .map(|(i, _)| i)
            .collect()
    }

    /// Packs into bytes, most significant bit first, zero-padded at the end.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(8)
            .map(|c| {
                let v = c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b as u8) << (7 - i));
                format!("{v:02x}")
            })
            .collect()
    }
}

impl fmt::Display for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstream({self})")
    }
}

impl FromStr for Bitstream {
    type Err = CodecError;

    /// Accepts '0'/'1' with optional spaces or underscores between groups.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Bitstream::new();
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                ' ' | '_' => {}
                _ => return Err(CodecError::BadBits(s.to_string())),
            }
        }
        Ok(out)
    }
}

impl Serialize for Bitstream {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstream {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fixed-width character codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    width: usize,
    forward: BTreeMap<char, u64>,
    reverse: HashMap<u64, char>,
}

impl Codebook {
    pub fn new<I, S>(codes: I) -> Result<Self, CodecError>
    where
        I: IntoIterator<Item = (char, S)>,
        S: AsRef<str>,
    {
        let mut width = None;
        let mut forward = BTreeMap::new();
        let mut reverse = HashMap::new();
        for (c, bits) in codes {
            let bits: Bitstream = bits.as_ref().parse()?;
            if bits.is_empty() || bits.len() > 32 {
                return Err(CodecError::BadCodebook(format!("code for {c:?} must have 1..=32 bits")));
            }
            match width {
                None => width = Some(bits.len()),
                Some(w) if w != bits.len() => {
                    return Err(CodecError::BadCodebook(format!(
                        "code for {c:?} has {} bits, others have {w}",
                        bits.len()
                    )))
                }
                _ => {}
            }
            let v = bits.bits().iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
            if let Some(prev) = reverse.insert(v, c) {
                return Err(CodecError::BadCodebook(format!("{prev:?} and {c:?} share code {bits}")));
            }
            if forward.insert(c, v).is_some() {
                return Err(CodecError::BadCodebook(format!("{c:?} listed twice")));
            }
        }
        let width = width.ok_or_else(|| CodecError::BadCodebook("empty codebook".into()))?;
        Ok(Codebook { width, forward, reverse })
    }

    /// Six 4-bit codes: space, I, T, S, U, R.
    pub fn standard() -> Self {
        Codebook::new([(' ', "0000"), ('I', "0001"), ('T', "0010"), ('S', "0011"), ('U', "0100"), ('R', "0101")])
            .expect("static book")
    }

    /// The default book extended in order of first appearance in
    /// "ITS SURABAYA": A, B, Y take the next free codes.
    pub fn extended() -> Self {
        let mut codes: Vec<(char, String)> = Codebook::standard().entries().collect();
        codes.extend([('A', "0110".to_string()), ('B', "0111".into()), ('Y', "1000".into())]);
        Codebook::new(codes).expect("static book")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn code(&self, c: char) -> Option<Bitstream> {
        self.forward.get(&c).map(|&v| Bitstream::from_value(v, self.width))
    }

    pub fn lookup(&self, code: u64) -> Option<char> {
        self.reverse.get(&code).copied()
    }

    pub fn contains(&self, c: char) -> bool {
        self.forward.contains_key(&c)
    }

    pub fn alphabet(&self) -> impl Iterator<Item = char> + '_ {
        self.forward.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (char, String)> + '_ {
        self.forward.iter().map(|(&c, &v)| (c, Bitstream::from_value(v, self.width).to_string()))
    }
}

impl Default for Codebook {
    fn default() -> Self {
        Codebook::standard()
    }
}

impl Serialize for Codebook {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.entries().map(|(c, b)| (c.to_string(), b)))
    }
}

impl<'de> Deserialize<'de> for Codebook {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut codes = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let mut it = k.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => codes.push((c, v)),
                _ => return Err(serde::de::Error::custom(format!("codebook key {k:?} is not one character"))),
            }
        }
        Codebook::new(codes).map_err(serde::de::Error::custom)
    }
}

pub fn encode_chars(message: &str, book: &Codebook) -> Result<Bitstream, CodecError> {
    let mut out = Bitstream::new();
    for c in message.chars() {
        out.extend(&book.code(c).ok_or(CodecError::UnmappedCharacter(c))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub text: String,
    /// Chunks with no entry in the book (rendered as '?').
    pub unknown: usize,
    /// Trailing bits that did not fill a whole code.
    pub dropped_bits: usize,
}

pub fn decode_chars(bits: &Bitstream, book: &Codebook) -> Decoded {
    let w = book.width();
    let mut text = String::new();
    let mut unknown = 0;
    let chunks = bits.bits().chunks_exact(w);
    let dropped_bits = chunks.remainder().len();
    for chunk in chunks {
        let v = chunk.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        match book.lookup(v) {
            Some(c) => text.push(c),
            None => {
                unknown += 1;
                text.push('?');
            }
        }
    }
    Decoded { text, unknown, dropped_bits }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum KeyOp {
    And,
    Or,
    #[default]
    Xor,
}

impl FromStr for KeyOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(KeyOp::And),
            "OR" => Ok(KeyOp::Or),
            "XOR" => Ok(KeyOp::Xor),
            _ => Err(format!("unknown key operator `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeySpec {
    #[serde(default)]
    pub bits: Bitstream,
    #[serde(default)]
    pub op: KeyOp,
}

impl KeySpec {
    pub fn new(bits: Bitstream, op: KeyOp) -> Self {
        KeySpec { bits, op }
    }
}

/// Combines the key, right-aligned, with the code. Positions left of the
/// key pass through unchanged.
pub fn apply_key(code: &Bitstream, key: &KeySpec) -> Result<Bitstream, CodecError> {
    let (n, k) = (code.len(), key.bits.len());
    if k > n {
        return Err(CodecError::KeyTooLong { key: k, code: n });
    }
    let mut out = code.bits().to_vec();
    for (o, &kb) in out[n - k..].iter_mut().zip(key.bits.bits()) {
        *o = match key.op {
            KeyOp::And => *o & kb,
            KeyOp::Or => *o | kb,
            KeyOp::Xor => *o ^ kb,
        };
    }
    Ok(Bitstream::from_bits(out))
}

/// Value written to one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SiteValue {
    /// Position in the site list handed to [`bits_to_codepoints`].
    pub site: usize,
    pub kind: CodepointKind,
    /// Stream bits placed here, read as an integer.
    pub value: u8,
    /// Number of stream bits placed here; below `kind.width()` only for
    /// the last site of a stream that does not fill it.
    pub bits: usize,
}

impl SiteValue {
    pub fn is_partial(&self) -> bool {
        self.bits < self.kind.width()
    }

    /// Full-width value after merging with the value the site holds now:
    /// stream bits go high, the site's own low bits stay.
    pub fn merged(&self, current: u8) -> u8 {
        let w = self.kind.width();
        let low = w - self.bits;
        let mask = ((1u16 << low) - 1) as u8;
        (self.value << low) | (current & mask)
    }

    /// Byte for a site whose current carrier value is `current`.
    pub fn byte(&self, current: u8) -> u8 {
        self.kind.byte_for(self.merged(current))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub values: Vec<SiteValue>,
    /// Sites left at their compiled values.
    pub untouched: usize,
}

/// Greedy in-order placement of `bits` over `sites`.
pub fn bits_to_codepoints(bits: &Bitstream, sites: &[CodepointKind]) -> Result<Assignment, CodecError> {
    let available: usize = sites.iter().map(|k| k.width()).sum();
    if bits.len() > available {
        return Err(CodecError::InsufficientCapacity { needed: bits.len(), available });
    }
    let mut stream = bits.clone();
    stream.rewind();
    let mut values = Vec::new();
    for (site, &kind) in sites.iter().enumerate() {
        if stream.remaining() == 0 {
            break;
        }
        let chunk = stream.take(kind.width());
        let value = chunk.iter().fold(0u8, |acc, &b| acc << 1 | b as u8);
        values.push(SiteValue { site, kind, value, bits: chunk.len() });
    }
    let untouched = sites.len() - values.len();
    Ok(Assignment { values, untouched })
}

/// Bit value carried by one instruction at its codepoint.
pub fn site_bits(kind: CodepointKind, insn: &Instruction) -> Bitstream {
    Bitstream::from_value(kind.value_of(insn) as u64, kind.width())
}

/// Concatenated carrier bits of every codepoint in `insns` under `mode`.
pub fn codepoints_to_bits(insns: &[Instruction], mode: Mode) -> Bitstream {
    let mut out = Bitstream::new();
    for cp in crate::bytecode::scan_codepoints(insns, mode) {
        out.push_value(cp.kind.value_of(&insns[cp.index]) as u64, cp.kind.width());
    }
    out
}
