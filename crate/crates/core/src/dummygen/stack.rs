use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::bytecode::opcodes::{self, JSR, JSR_W, WIDE};
use crate::bytecode::{decode_instructions, info, Instruction, StackEffect};
use crate::classfile::{ClassFile, Constant};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Problem {
    NoCode,
    Decode(String),
    Underflow { depth: u32, pops: u32 },
    Overflow { depth: u32, max_stack: u16 },
    BadBranchTarget { target: i64 },
    BadHandler { start: u16, end: u16, handler: u16 },
    InconsistentDepth { expected: u32, found: u32 },
    FallsOffEnd,
    Unresolvable { opcode: &'static str },
}

/// First structural violation found in a method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub method: String,
    pub offset: usize,
    pub problem: Problem,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @{}: {:?}", self.method, self.offset, self.problem)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StackSummary {
    /// Deepest stack seen on any path.
    pub max_depth: u32,
    /// Instructions reached from the entry or a handler.
    pub reachable: usize,
}

/// Width in slots of a field descriptor (`V` is 0).
fn slots(desc: &str) -> u32 {
    match desc.as_bytes().first() {
        Some(b'J') | Some(b'D') => 2,
        Some(b'V') => 0,
        _ => 1,
    }
}

/// `(argument slots, return slots)` of a method descriptor.
fn method_slots(desc: &str) -> Option<(u32, u32)> {
    let b = desc.as_bytes();
    if b.first() != Some(&b'(') {
        return None;
    }
    let mut i = 1;
    let mut args = 0;
    while *b.get(i)? != b')' {
        let start = i;
        while b[i] == b'[' {
            i += 1;
        }
        if b[i] == b'L' {
            i += desc[i..].find(';')?;
        }
        args += if i == start && (b[i] == b'J' || b[i] == b'D') { 2 } else { 1 };
        i += 1;
    }
    Some((args, slots(&desc[i + 1..])))
}

fn effect(insn: &Instruction, cf: &ClassFile) -> Option<(u32, u32)> {
    let op = insn.effective_opcode();
    let info = info(op)?;
    if let StackEffect::Fixed { pop, push } = info.stack {
        return Some((pop as u32, push as u32));
    }
    let pool = &cf.constant_pool;
    let index = if insn.opcode == opcodes::WIDE { None } else { insn.pool_index() };
    match op {
        0x12 => {
            let i = insn.operands[0] as u16;
            match pool.get(i)? {
                Constant::Integer(_) | Constant::Float(_) | Constant::String { .. } | Constant::Class { .. } => Some((0, 1)),
                _ => None,
            }
        }
        0x13 => match pool.get(index?)? {
            Constant::Integer(_) | Constant::Float(_) | Constant::String { .. } | Constant::Class { .. } => Some((0, 1)),
            _ => None,
        },
        0xb2..=0xb5 => {
            let (_, _, desc) = pool.member_ref(index?)?;
            let s = slots(&desc);
            Some(match op {
                0xb2 => (0, s),
                0xb3 => (s, 0),
                0xb4 => (1, s),
                _ => (1 + s, 0),
            })
        }
        0xb6..=0xb9 => {
            let (_, _, desc) = pool.member_ref(index?)?;
            let (args, ret) = method_slots(&desc)?;
            let receiver = if op == opcodes::INVOKESTATIC { 0 } else { 1 };
            Some((args + receiver, ret))
        }
        0xc5 => Some((insn.operands[2] as u32, 1)),
        _ => None,
    }
}

/// Abstract stack-depth walk of method `index`: depth never negative, never
/// above `max_stack`, equal on every path into an instruction, branch and
/// handler targets on instruction starts, no path falling off the end.
pub fn validate_structure(cf: &ClassFile, index: usize) -> Result<StackSummary, Diagnostic> {
    let method = cf.method_name(index);
    let fail = |offset: usize, problem: Problem| Diagnostic { method: method.clone(), offset, problem };
    let code = cf.methods[index].code().ok_or_else(|| fail(0, Problem::NoCode))?;
    let insns = decode_instructions(&code.code).map_err(|e| fail(0, Problem::Decode(e.to_string())))?;
    if insns.is_empty() {
        return Err(fail(0, Problem::FallsOffEnd));
    }
    let at: HashMap<usize, usize> = insns.iter().enumerate().map(|(i, x)| (x.offset, i)).collect();
    let len = code.code.len();

    let mut depth: Vec<Option<u32>> = vec![None; insns.len()];
    let mut work = vec![(0usize, 0u32)];
    for h in &code.exception_table {
        let ok = h.start_pc < h.end_pc
            && (h.end_pc as usize) <= len
            && at.contains_key(&(h.start_pc as usize))
            && (h.end_pc as usize == len || at.contains_key(&(h.end_pc as usize)));
        match at.get(&(h.handler_pc as usize)) {
            Some(&hi) if ok => work.push((hi, 1)),
            _ => {
                return Err(fail(
                    h.handler_pc as usize,
                    Problem::BadHandler { start: h.start_pc, end: h.end_pc, handler: h.handler_pc },
                ))
            }
        }
    }

    let mut max_depth = 0;
    while let Some((i, d)) = work.pop() {
        let insn = &insns[i];
        match depth[i] {
            Some(prev) if prev == d => continue,
            Some(prev) => return Err(fail(insn.offset, Problem::InconsistentDepth { expected: prev, found: d })),
            None => depth[i] = Some(d),
        }
        let (pop, push) =
            effect(insn, cf).ok_or_else(|| fail(insn.offset, Problem::Unresolvable { opcode: insn.mnemonic() }))?;
        if d < pop {
            return Err(fail(insn.offset, Problem::Underflow { depth: d, pops: pop }));
        }
        let after = d - pop + push;
        if after > code.max_stack as u32 {
            return Err(fail(insn.offset, Problem::Overflow { depth: after, max_stack: code.max_stack }));
        }
        max_depth = max_depth.max(after);
        let is_jsr = matches!(insn.opcode, JSR | JSR_W);
        for t in insn.branch_targets() {
            let ti = usize::try_from(t)
                .ok()
                .and_then(|t| at.get(&t))
                .ok_or_else(|| fail(insn.offset, Problem::BadBranchTarget { target: t }))?;
            work.push((*ti, after));
        }
        if !insn.ends_block() {
            if i + 1 >= insns.len() {
                return Err(fail(insn.offset, Problem::FallsOffEnd));
            }
            // After a subroutine returns the address is gone again.
            work.push((i + 1, if is_jsr { d } else { after }));
        }
        debug_assert!(insn.opcode != WIDE || insn.operands.len() >= 3);
    }
    Ok(StackSummary { max_depth, reachable: depth.iter().filter(|d| d.is_some()).count() })
}
