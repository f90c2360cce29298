use serde::{Deserialize, Serialize};

use super::opcodes::*;
use super::Instruction;

/// Bytecode sites that carry watermark bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodepointKind {
    /// iadd isub imul idiv irem iand ior ixor, 3 bits.
    Arith8,
    /// iflt ifge ifgt ifle, 2 bits.
    Branch4,
    /// ifnull ifnonnull, 1 bit.
    Branch2,
    /// bipush operand byte.
    OperandBipush,
    /// iinc increment byte (the local index is never touched).
    OperandIinc,
}

/// Opcode families, indexed by their bit value.
pub const ARITH8: [u8; 8] = [IADD, ISUB, IMUL, IDIV, IREM, IAND, IOR, IXOR];
pub const BRANCH4: [u8; 4] = [IFLT, IFGE, IFGT, IFLE];
pub const BRANCH2: [u8; 2] = [IFNULL, IFNONNULL];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    ReplaceOpcodes,
    OverwriteOperands,
    Combined,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::ReplaceOpcodes, Mode::OverwriteOperands, Mode::Combined];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ReplaceOpcodes => "replace_opcodes",
            Mode::OverwriteOperands => "overwrite_operands",
            Mode::Combined => "combined",
        }
    }

    fn admits(self, kind: CodepointKind) -> bool {
        match self {
            Mode::Combined => true,
            Mode::ReplaceOpcodes => kind.is_opcode(),
            Mode::OverwriteOperands => !kind.is_opcode(),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "replace_opcodes" | "replace" => Ok(Mode::ReplaceOpcodes),
            "overwrite_operands" | "operands" => Ok(Mode::OverwriteOperands),
            "combined" => Ok(Mode::Combined),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CodepointKind {
    pub fn width(self) -> usize {
        match self {
            CodepointKind::Arith8 => 3,
            CodepointKind::Branch4 => 2,
            CodepointKind::Branch2 => 1,
            CodepointKind::OperandBipush | CodepointKind::OperandIinc => 8,
        }
    }

    pub fn is_opcode(self) -> bool {
        self.family().is_some()
    }

    pub fn family(self) -> Option<&'static [u8]> {
        match self {
            CodepointKind::Arith8 => Some(&ARITH8),
            CodepointKind::Branch4 => Some(&BRANCH4),
            CodepointKind::Branch2 => Some(&BRANCH2),
            _ => None,
        }
    }

    /// Kind of an instruction, if it is any codepoint at all.
    pub fn of(insn: &Instruction) -> Option<CodepointKind> {
        let op = insn.opcode;
        if ARITH8.contains(&op) {
            Some(CodepointKind::Arith8)
        } else if BRANCH4.contains(&op) {
            Some(CodepointKind::Branch4)
        } else if BRANCH2.contains(&op) {
            Some(CodepointKind::Branch2)
        } else if op == BIPUSH {
            Some(CodepointKind::OperandBipush)
        } else if op == IINC {
            Some(CodepointKind::OperandIinc)
        } else {
            None
        }
    }

    /// Position of the carrier byte relative to the instruction start.
    pub fn byte_offset(self) -> usize {
        match self {
            CodepointKind::OperandBipush => 1,
            CodepointKind::OperandIinc => 2,
            _ => 0,
        }
    }

    /// Bit value currently stored at this site.
    pub fn value_of(self, insn: &Instruction) -> u8 {
        match self.family() {
            Some(f) => f.iter().position(|&o| o == insn.opcode).expect("kind matches insn") as u8,
            None => insn.operands[self.byte_offset() - 1],
        }
    }

    /// Byte to store for a bit value.
    pub fn byte_for(self, value: u8) -> u8 {
        match self.family() {
            Some(f) => f[value as usize],
            None => value,
        }
    }

    /// Bit value a carrier byte denotes, if the byte belongs to this kind.
    pub fn value_for(self, byte: u8) -> Option<u8> {
        match self.family() {
            Some(f) => f.iter().position(|&o| o == byte).map(|p| p as u8),
            None => Some(byte),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Codepoint {
    /// Index into the instruction list.
    pub index: usize,
    pub kind: CodepointKind,
}

pub fn scan_codepoints(insns: &[Instruction], mode: Mode) -> Vec<Codepoint> {
    insns
        .iter()
        .enumerate()
        .filter_map(|(index, insn)| {
            let kind = CodepointKind::of(insn)?;
            mode.admits(kind).then_some(Codepoint { index, kind })
        })
        .collect()
}

pub fn capacity_of(points: &[Codepoint]) -> usize {
    points.iter().map(|p| p.kind.width()).sum()
}
