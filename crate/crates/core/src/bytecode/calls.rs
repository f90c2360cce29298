use std::collections::BTreeSet;

use super::{decode_instructions, opcodes};
use crate::classfile::{ClassFile, Constant};

/// Methods of this class invoked from method `index` through
/// invokespecial/invokestatic/invokevirtual/invokeinterface references whose
/// owner is `this_class`. Undecodable code yields no callees.
pub fn intra_class_callees(cf: &ClassFile, index: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let Some(code) = cf.methods[index].code() else { return out };
    let Ok(insns) = decode_instructions(&code.code) else { return out };
    for insn in insns {
        if !matches!(
            insn.opcode,
            opcodes::INVOKEVIRTUAL | opcodes::INVOKESPECIAL | opcodes::INVOKESTATIC | opcodes::INVOKEINTERFACE
        ) {
            continue;
        }
        if let Some(target) = insn.pool_index().and_then(|i| resolve_own_method(cf, i)) {
            out.insert(target);
        }
    }
    out
}

/// Method index a Methodref/InterfaceMethodref points at, when the ref is
/// owned by this class.
pub fn resolve_own_method(cf: &ClassFile, pool_index: u16) -> Option<usize> {
    let pool = &cf.constant_pool;
    if !matches!(pool.get(pool_index)?, Constant::Methodref { .. } | Constant::InterfaceMethodref { .. }) {
        return None;
    }
    let (class_index, name, descriptor) = pool.member_ref(pool_index)?;
    if class_index != cf.this_class && pool.class_name(class_index)? != cf.class_name() {
        return None;
    }
    cf.method_index(&name, Some(&descriptor))
}

/// Callers of method `index` inside this class.
pub fn intra_class_callers(cf: &ClassFile, index: usize) -> Vec<usize> {
    (0..cf.methods.len()).filter(|&m| intra_class_callees(cf, m).contains(&index)).collect()
}
