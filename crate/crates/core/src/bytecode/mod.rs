//! Instruction decoding and same-length rewriting of Code arrays.

mod calls;
mod codepoint;
pub mod opcodes;

pub use calls::{intra_class_callees, intra_class_callers, resolve_own_method};

pub use codepoint::{capacity_of, scan_codepoints, Codepoint, CodepointKind, Mode, ARITH8, BRANCH2, BRANCH4};
pub use opcodes::{info, mnemonic, OpInfo, Operands, StackEffect};

use opcodes::*;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BytecodeError {
    #[error("unknown opcode 0x{opcode:02X} at offset {offset}")]
    UnknownOpcode { offset: usize, opcode: u8 },
    #[error("instruction at offset {offset} runs past the end of the code")]
    TruncatedInstruction { offset: usize },
    #[error("malformed {what} at offset {offset}")]
    Malformed { offset: usize, what: &'static str },
    #[error("cannot replace {from} with {to}: different families")]
    FamilyViolation { from: &'static str, to: &'static str },
    #[error("instruction {index} ({mnemonic}) is not a codepoint for this edit")]
    NotACodepoint { index: usize, mnemonic: &'static str },
    #[error("instruction index {index} out of range")]
    IndexOutOfRange { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instruction {
    pub offset: usize,
    pub opcode: u8,
    /// Everything after the opcode byte, including switch padding. For
    /// `wide` this starts with the modified opcode.
    pub operands: Vec<u8>,
}

impl Instruction {
    pub fn len(&self) -> usize {
        1 + self.operands.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end(&self) -> usize {
        self.offset + self.len()
    }

    pub fn mnemonic(&self) -> &'static str {
        mnemonic(self.opcode)
    }

    fn u16_at(&self, i: usize) -> u16 {
        u16::from_be_bytes([self.operands[i], self.operands[i + 1]])
    }

    fn i32_at(&self, i: usize) -> i32 {
        i32::from_be_bytes([self.operands[i], self.operands[i + 1], self.operands[i + 2], self.operands[i + 3]])
    }

    /// First operand as an unsigned constant pool index.
    pub fn pool_index(&self) -> Option<u16> {
        (self.operands.len() >= 2).then(|| self.u16_at(0))
    }

    /// Opcode this instruction actually executes (looks through `wide`).
    pub fn effective_opcode(&self) -> u8 {
        if self.opcode == WIDE {
            self.operands[0]
        } else {
            self.opcode
        }
    }

    /// Absolute branch targets, including switch defaults. Targets are
    /// signed so that a jump before the method start stays visible.
    pub fn branch_targets(&self) -> Vec<i64> {
        let at = self.offset as i64;
        match self.opcode {
            op if is_conditional(op) || op == GOTO || op == JSR => {
                vec![at + self.u16_at(0) as i16 as i64]
            }
            GOTO_W | JSR_W => vec![at + self.i32_at(0) as i64],
            TABLESWITCH => {
                let p = switch_padding(self.offset);
                let low = self.i32_at(p + 4);
                let high = self.i32_at(p + 8);
                let mut out = vec![at + self.i32_at(p) as i64];
                for k in 0..=(high as i64 - low as i64) as usize {
                    out.push(at + self.i32_at(p + 12 + 4 * k) as i64);
                }
                out
            }
            LOOKUPSWITCH => {
                let p = switch_padding(self.offset);
                let n = self.i32_at(p + 4) as usize;
                let mut out = vec![at + self.i32_at(p) as i64];
                for k in 0..n {
                    out.push(at + self.i32_at(p + 8 + 8 * k + 4) as i64);
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// True when control never falls through to the next instruction.
    pub fn ends_block(&self) -> bool {
        matches!(self.opcode, GOTO | GOTO_W | TABLESWITCH | LOOKUPSWITCH | ATHROW | RET)
            || is_return(self.opcode)
            || (self.opcode == WIDE && self.operands[0] == RET)
    }
}

fn switch_padding(offset: usize) -> usize {
    (4 - (offset + 1) % 4) % 4
}

pub fn decode_instructions(code: &[u8]) -> Result<Vec<Instruction>, BytecodeError> {
    let mut out = Vec::new();
    let mut pc = 0;
    while pc < code.len() {
        let opcode = code[pc];
        let info = info(opcode).ok_or(BytecodeError::UnknownOpcode { offset: pc, opcode })?;
        let need = |n: usize| -> Result<usize, BytecodeError> {
            if pc + 1 + n > code.len() {
                Err(BytecodeError::TruncatedInstruction { offset: pc })
            } else {
                Ok(n)
            }
        };
        let read_i32 = |at: usize| -> Result<i32, BytecodeError> {
            code.get(at..at + 4)
                .map(|b| i32::from_be_bytes([b[0], b[1], b[2], b[3]]))
                .ok_or(BytecodeError::TruncatedInstruction { offset: pc })
        };
        let n = match info.operands {
            Operands::Fixed(n) => need(n as usize)?,
            Operands::Wide => {
                let inner = *code.get(pc + 1).ok_or(BytecodeError::TruncatedInstruction { offset: pc })?;
                match inner {
                    IINC => need(5)?,
                    0x15..=0x19 | 0x36..=0x3a | RET => need(3)?,
                    _ => return Err(BytecodeError::Malformed { offset: pc, what: "wide" }),
                }
            }
            Operands::TableSwitch => {
                let p = switch_padding(pc);
                let base = pc + 1 + p;
                let low = read_i32(base + 4)?;
                let high = read_i32(base + 8)?;
                if high < low {
                    return Err(BytecodeError::Malformed { offset: pc, what: "tableswitch" });
                }
                need(p + 12 + 4 * (high as i64 - low as i64 + 1) as usize)?
            }
            Operands::LookupSwitch => {
                let p = switch_padding(pc);
                let npairs = read_i32(pc + 1 + p + 4)?;
                if npairs < 0 {
                    return Err(BytecodeError::Malformed { offset: pc, what: "lookupswitch" });
                }
                need(p + 8 + 8 * npairs as usize)?
            }
        };
        out.push(Instruction { offset: pc, opcode, operands: code[pc + 1..pc + 1 + n].to_vec() });
        pc += 1 + n;
    }
    Ok(out)
}

pub fn encode_instructions(insns: &[Instruction]) -> Vec<u8> {
    let mut out = Vec::with_capacity(insns.last().map_or(0, Instruction::end));
    for i in insns {
        out.push(i.opcode);
        out.extend_from_slice(&i.operands);
    }
    out
}

/// A single-byte change at a codepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edit {
    Opcode(u8),
    Operand(u8),
}

/// Applies `edit` to `code` in place and returns the byte offset touched.
pub fn apply_edit(code: &mut [u8], insn: &Instruction, index: usize, edit: Edit) -> Result<usize, BytecodeError> {
    let kind = CodepointKind::of(insn);
    match (kind, edit) {
        (Some(k), Edit::Opcode(new)) if k.is_opcode() => {
            let family = k.family().expect("opcode kind");
            if !family.contains(&new) {
                return Err(BytecodeError::FamilyViolation { from: insn.mnemonic(), to: mnemonic(new) });
            }
            code[insn.offset] = new;
            Ok(insn.offset)
        }
        (Some(k), Edit::Operand(b)) if !k.is_opcode() => {
            let at = insn.offset + k.byte_offset();
            code[at] = b;
            Ok(at)
        }
        (None, Edit::Opcode(new)) if new != insn.opcode && CodepointKind::of(&probe(new)).is_some() => {
            Err(BytecodeError::FamilyViolation { from: insn.mnemonic(), to: mnemonic(new) })
        }
        _ => Err(BytecodeError::NotACodepoint { index, mnemonic: insn.mnemonic() }),
    }
}

fn probe(opcode: u8) -> Instruction {
    Instruction { offset: 0, opcode, operands: vec![0, 0] }
}

/// Returns a copy of `code` with one codepoint rewritten.
pub fn rewrite(code: &[u8], insns: &[Instruction], index: usize, edit: Edit) -> Result<Vec<u8>, BytecodeError> {
    let insn = insns.get(index).ok_or(BytecodeError::IndexOutOfRange { index })?;
    let mut out = code.to_vec();
    apply_edit(&mut out, insn, index, edit)?;
    Ok(out)
}
