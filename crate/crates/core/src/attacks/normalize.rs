use crate::bytecode::{decode_instructions, opcodes, ARITH8, BRANCH4};
use crate::classfile::ClassFile;

/// Rewrites every Arith8 opcode to `iadd` and every Branch4 opcode to `iflt`.
/// Methods whose code does not decode are left as they are.
pub fn attack_normalize_opcodes(cf: &ClassFile) -> ClassFile {
    let mut out = cf.clone();
    for m in out.methods.iter_mut() {
        let Some(code) = m.code_mut() else { continue };
        let Ok(insns) = decode_instructions(&code.code) else { continue };
        for insn in &insns {
            if ARITH8.contains(&insn.opcode) {
                code.code[insn.offset] = opcodes::IADD;
            } else if BRANCH4.contains(&insn.opcode) {
                code.code[insn.offset] = opcodes::IFLT;
            }
        }
    }
    out
}
