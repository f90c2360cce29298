//! Writes a keyed watermark into the codepoints of one method.

use serde::Serialize;

use crate::bytecode::{
    self, apply_edit, decode_instructions, intra_class_callers, mnemonic, scan_codepoints, BytecodeError,
    CodepointKind, Edit, Mode,
};
use crate::classfile::ClassFile;
use crate::codec::{bits_to_codepoints, CodecError};
use crate::config::WatermarkConfig;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("method #{method} has no Code attribute")]
    NoCode { method: usize },
    #[error("method #{method} does not exist")]
    NoSuchMethod { method: usize },
    #[error("watermark needs {required} bits, method holds {available} ({shortfall} short)")]
    InsufficientCapacity { required: usize, available: usize, shortfall: usize },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Bytecode(#[from] BytecodeError),
}

/// What an embed did, site by site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedPlan {
    pub class: String,
    pub method: String,
    pub descriptor: String,
    pub method_index: usize,
    pub mode: Mode,
    pub keyed_bits: String,
    pub required_bits: usize,
    pub capacity: usize,
    pub consumed_sites: usize,
    pub untouched_sites: usize,
    pub sites: Vec<PlannedSite>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlannedSite {
    /// Instruction start within the code array.
    pub pc: usize,
    /// Byte actually rewritten within the code array.
    pub byte_offset: usize,
    pub kind: CodepointKind,
    pub bits: String,
    pub old: u8,
    pub new: u8,
    pub old_insn: String,
    pub new_insn: String,
}

fn code_of(cf: &ClassFile, method: usize) -> Result<&crate::classfile::Code, EmbedError> {
    cf.methods
        .get(method)
        .ok_or(EmbedError::NoSuchMethod { method })?
        .code()
        .ok_or(EmbedError::NoCode { method })
}

/// Bits method `method` can carry under `mode`.
pub fn capacity(cf: &ClassFile, method: usize, mode: Mode) -> Result<usize, EmbedError> {
    let insns = decode_instructions(&code_of(cf, method)?.code)?;
    Ok(bytecode::capacity_of(&scan_codepoints(&insns, mode)))
}

pub fn embed(
    cf: &ClassFile,
    method: usize,
    message: &str,
    config: &WatermarkConfig,
) -> Result<(ClassFile, EmbedPlan), EmbedError> {
    let insns = decode_instructions(&code_of(cf, method)?.code)?;
    let points = scan_codepoints(&insns, config.mode);
    let kinds: Vec<CodepointKind> = points.iter().map(|p| p.kind).collect();
    let available = bytecode::capacity_of(&points);
    let bits = config.keyed_bits(message)?;
    let assignment = bits_to_codepoints(&bits, &kinds).map_err(|e| match e {
        CodecError::InsufficientCapacity { needed, available } => EmbedError::InsufficientCapacity {
            required: needed,
            available,
            shortfall: needed - available,
        },
        e => e.into(),
    })?;

    let mut out = cf.clone();
    let code = &mut out.methods[method].code_mut().expect("checked above").code;
    let mut sites = Vec::with_capacity(assignment.values.len());
    let mut cursor = 0;
    for v in &assignment.values {
        let p = points[v.site];
        let insn = &insns[p.index];
        let current = p.kind.value_of(insn);
        let new = v.byte(current);
        let edit = if p.kind.is_opcode() { Edit::Opcode(new) } else { Edit::Operand(new) };
        let byte_offset = apply_edit(code, insn, p.index, edit)?;
        let old = cf.methods[method].code().expect("checked above").code[byte_offset];
        sites.push(PlannedSite {
            pc: insn.offset,
            byte_offset,
            kind: p.kind,
            bits: bits.bits()[cursor..cursor + v.bits].iter().map(|&b| if b { '1' } else { '0' }).collect(),
            old,
            new,
            old_insn: describe(insn.opcode, p.kind, old),
            new_insn: describe(insn.opcode, p.kind, new),
        });
        cursor += v.bits;
    }

    let mut warnings = Vec::new();
    if !cf.methods[method].is_private() {
        warnings.push("target method is not private; it may be reachable from other classes".to_string());
    }
    let callers = intra_class_callers(cf, method);
    if !callers.is_empty() {
        let names: Vec<String> = callers.iter().map(|&m| cf.method_name(m)).collect();
        warnings.push(format!(
            "target method is invoked from {}; make sure every call is behind an always-false guard",
            names.join(", ")
        ));
    }
    if let Some(last) = assignment.values.last().filter(|v| v.is_partial()) {
        warnings.push(format!(
            "last site holds only {} of its {} bits; its low bits keep their compiled value",
            last.bits,
            last.kind.width()
        ));
    }

    let plan = EmbedPlan {
        class: cf.class_name(),
        method: cf.method_name(method),
        descriptor: cf.method_descriptor(method),
        method_index: method,
        mode: config.mode,
        keyed_bits: bits.to_string(),
        required_bits: bits.len(),
        capacity: available,
        consumed_sites: assignment.values.len(),
        untouched_sites: assignment.untouched,
        sites,
        warnings,
    };
    Ok((out, plan))
}

fn describe(opcode: u8, kind: CodepointKind, byte: u8) -> String {
    if kind.is_opcode() {
        mnemonic(byte).to_string()
    } else {
        format!("{} {}", mnemonic(opcode), byte as i8)
    }
}

impl EmbedPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::classfile::{parse, serialize};
    use crate::codec::Codebook;

    /// Class with one method whose code is `code`, built by hand.
    pub(crate) fn class_with_code(code: &[u8], max_stack: u16, max_locals: u16) -> ClassFile {
        let mut b = vec![0xCA, 0xFE, 0xBA, 0xBE, 0, 0, 0, 49, 0, 8];
        b.extend_from_slice(&[1, 0, 1, b'A', 7, 0, 1, 1, 0, 16]);
        b.extend_from_slice(b"java/lang/Object");
        b.extend_from_slice(&[7, 0, 3, 1, 0, 1, b'm', 1, 0, 4, b'(', b'I', b')', b'V']);
        b.extend_from_slice(&[1, 0, 4, b'C', b'o', b'd', b'e']);
        b.extend_from_slice(&[0, 0x21, 0, 2, 0, 4, 0, 0, 0, 0, 0, 1, 0, 2, 0, 5, 0, 6, 0, 1, 0, 7]);
        b.extend_from_slice(&(12 + code.len() as u32).to_be_bytes());
        b.extend_from_slice(&max_stack.to_be_bytes());
        b.extend_from_slice(&max_locals.to_be_bytes());
        b.extend_from_slice(&(code.len() as u32).to_be_bytes());
        b.extend_from_slice(code);
        b.extend_from_slice(&[0, 0, 0, 0, 0, 0]);
        parse(&b).unwrap()
    }

    // iload_1 bipush 7 iadd istore_1 iload_1 iflt +6 iinc 1 3 ... return
    const BODY: [u8; 13] = [0x1B, 0x10, 7, 0x60, 0x3C, 0x1B, 0x9B, 0, 6, 0x84, 1, 3, 0xB1];

    #[test]
    fn capacity_per_mode() {
        let cf = class_with_code(&BODY, 2, 2);
        assert_eq!(capacity(&cf, 0, Mode::ReplaceOpcodes).unwrap(), 5);
        assert_eq!(capacity(&cf, 0, Mode::OverwriteOperands).unwrap(), 16);
        assert_eq!(capacity(&cf, 0, Mode::Combined).unwrap(), 21);
        assert_eq!(capacity(&cf, 3, Mode::Combined), Err(EmbedError::NoSuchMethod { method: 3 }));
    }

    #[test]
    fn embed_touches_only_assigned_bytes() {
        let cf = class_with_code(&BODY, 2, 2);
        let cfg = WatermarkConfig::new(Codebook::new([('a', "10101")]).unwrap(), Default::default(), Mode::ReplaceOpcodes);
        let (out, plan) = embed(&cf, 0, "a", &cfg).unwrap();
        // 101 -> iand at pc 3, 01 -> ifge at pc 6
        let code = &out.methods[0].code().unwrap().code;
        assert_eq!(code[3], 0x7E);
        assert_eq!(code[6], 0x9C);
        assert_eq!(plan.consumed_sites, 2);
        assert_eq!(plan.untouched_sites, 0);
        let a = serialize(&cf).unwrap();
        let b = serialize(&out).unwrap();
        assert_eq!(a.len(), b.len());
        assert_eq!(a.iter().zip(&b).filter(|(x, y)| x != y).count(), 2);
    }

    #[test]
    fn empty_message_is_identity() {
        let cf = class_with_code(&BODY, 2, 2);
        let (out, plan) = embed(&cf, 0, "", &WatermarkConfig::default()).unwrap();
        assert_eq!(out, cf);
        assert!(plan.sites.is_empty());
    }

    #[test]
    fn over_capacity_reports_shortfall() {
        let cf = class_with_code(&BODY, 2, 2);
        let cfg = WatermarkConfig::new(Codebook::new([('a', "101010")]).unwrap(), Default::default(), Mode::ReplaceOpcodes);
        assert_eq!(
            embed(&cf, 0, "a", &cfg).unwrap_err(),
            EmbedError::InsufficientCapacity { required: 6, available: 5, shortfall: 1 }
        );
    }
}
