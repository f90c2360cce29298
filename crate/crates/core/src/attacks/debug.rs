use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classfile::{Attribute, AttributeInfo, ClassFile, ConstantPool};

fn strip(attrs: &mut Vec<Attribute>, pool: &ConstantPool) {
    attrs.retain(|a| !a.is_debug(pool));
    for a in attrs.iter_mut() {
        if let Some(code) = a.as_code_mut() {
            code.attributes.retain(|a| !a.is_debug(pool));
        }
    }
}

/// Drops line, local-variable and source-file attributes everywhere.
pub fn attack_strip_debug(cf: &ClassFile) -> ClassFile {
    let mut out = cf.clone();
    let pool = &out.constant_pool;
    strip(&mut out.attributes, pool);
    for m in out.fields.iter_mut().chain(out.methods.iter_mut()) {
        strip(&mut m.attributes, pool);
    }
    out
}

/// Shuffles the line numbers inside each LineNumberTable; pcs stay put.
pub fn attack_scramble_debug(cf: &ClassFile, seed: u64) -> ClassFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = cf.clone();
    for m in out.methods.iter_mut() {
        for a in m.attributes.iter_mut() {
            let Some(code) = a.as_code_mut() else { continue };
            for inner in code.attributes.iter_mut() {
                if let AttributeInfo::LineNumberTable(rows) = &mut inner.info {
                    let mut lines: Vec<u16> = rows.iter().map(|r| r.line_number).collect();
                    lines.shuffle(&mut rng);
                    for (r, l) in rows.iter_mut().zip(lines) {
                        r.line_number = l;
                    }
                }
            }
        }
    }
    out
}
