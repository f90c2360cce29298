//! Dummy carriers: class-level synthesis, source templates, and a stack-depth
//! checker standing in for the verifier.

mod snippets;
mod stack;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bytecode::opcodes::{self, BIPUSH, IINC};
use crate::bytecode::{capacity_of, decode_instructions, scan_codepoints, Mode, ARITH8};
use crate::classfile::{access, Attribute, AttributeInfo, ClassFile, ClassFileError, Code, MemberInfo};

pub use snippets::{emit_source_snippets, guard_source, template, SnippetBundle};
pub use stack::{validate_structure, Diagnostic, Problem, StackSummary};

/// Which listing the carrier imitates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DummyShape {
    R,
    S,
    X,
    Y,
    Z,
}

impl DummyShape {
    pub const ALL: [DummyShape; 5] = [DummyShape::R, DummyShape::S, DummyShape::X, DummyShape::Y, DummyShape::Z];

    pub fn letter(self) -> char {
        match self {
            DummyShape::R => 'R',
            DummyShape::S => 'S',
            DummyShape::X => 'X',
            DummyShape::Y => 'Y',
            DummyShape::Z => 'Z',
        }
    }

    fn units(self) -> &'static [Unit] {
        use Unit::*;
        match self {
            DummyShape::R => &[Loop, Arith(4), Arith(2), Sign, Arith(0)],
            DummyShape::S => &[Arith(2), Bump, Arith(0), Null],
            DummyShape::X => &[Loop, Arith(0), Arith(2), Arith(1)],
            DummyShape::Y => &[Sign, Arith(3), Loop, Arith(0)],
            DummyShape::Z => &[Arith(0), Sign, Arith(2), Loop],
        }
    }
}

impl std::str::FromStr for DummyShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" => Ok(DummyShape::R),
            "S" | "s" => Ok(DummyShape::S),
            "X" | "x" => Ok(DummyShape::X),
            "Y" | "y" => Ok(DummyShape::Y),
            "Z" | "z" => Ok(DummyShape::Z),
            _ => Err(format!("unknown dummy shape `{s}` (expected R, S, X, Y or Z)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DummySpec {
    pub name: String,
    /// Bits the method must carry under `mode`.
    pub capacity_bits: usize,
    #[serde(default)]
    pub mode: Mode,
    pub shape: DummyShape,
    /// Picks the bipush/iinc constants.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum DummyError {
    #[error("class already has a method named `{0}`")]
    NameCollision(String),
    #[error("`{0}` is not a valid method name")]
    BadName(String),
    #[error("constant pool cannot take the new entries")]
    PoolOverflow,
    #[error("{bits} bits need {bytes} bytes of code, over the 65535 limit")]
    CodeTooLarge { bits: usize, bytes: usize },
    #[error(transparent)]
    ClassFile(#[from] ClassFileError),
}

/// Building blocks of a synthesized body. Local 1 is `k`, local 2 a counter.
#[derive(Debug, Clone, Copy)]
enum Unit {
    /// `k = k <op> c`
    Arith(usize),
    /// `if (k >= 0) k += c`
    Sign,
    /// `if (this != null) k += c`
    Null,
    /// `k += c`
    Bump,
    /// `for (i = 0; i < n; i++);`
    Loop,
}

const ILOAD_1: u8 = 0x1b;
const ISTORE_1: u8 = 0x3c;
const ILOAD_2: u8 = 0x1c;
const ISTORE_2: u8 = 0x3d;
const ICONST_0: u8 = 0x03;
const ALOAD_0: u8 = 0x2a;
const IF_ICMPLT: u8 = 0xa1;
const RETURN: u8 = 0xb1;

fn emit(unit: Unit, branches: bool, rng: &mut ChaCha8Rng, out: &mut Vec<u8>) {
    let c = rng.gen_range(1..=127u8);
    match unit {
        Unit::Arith(op) => out.extend([ILOAD_1, BIPUSH, c, ARITH8[op], ISTORE_1]),
        Unit::Bump => out.extend([IINC, 1, c]),
        Unit::Sign if branches => {
            out.extend([ILOAD_1, opcodes::IFLT, 0, 6, IINC, 1, c]);
        }
        Unit::Null if branches => {
            out.extend([ALOAD_0, opcodes::IFNULL, 0, 6, IINC, 1, c]);
        }
        Unit::Loop if branches => {
            let n = rng.gen_range(2..=16u8);
            out.extend([ICONST_0, ISTORE_2, IINC, 2, 1, ILOAD_2, BIPUSH, n, IF_ICMPLT, 0xff, 0xfa]);
        }
        // Without a StackMapTable, class files past 50 cannot branch.
        Unit::Sign => out.extend([ILOAD_1, BIPUSH, c, opcodes::ISUB, ISTORE_1]),
        Unit::Null => out.extend([ILOAD_1, BIPUSH, c, opcodes::IXOR, ISTORE_1]),
        Unit::Loop => out.extend([IINC, 1, c, ILOAD_1, BIPUSH, c, opcodes::IMUL, ISTORE_1]),
    }
}

fn seed_of(spec: &DummySpec) -> u64 {
    spec.name.bytes().fold(spec.seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Method body carrying at least `spec.capacity_bits` under `spec.mode`.
pub fn synthesize_code(spec: &DummySpec, major_version: u16) -> Result<Vec<u8>, DummyError> {
    let branches = major_version <= 50;
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(spec));
    let mut body = Vec::new();
    let mut bits = 0;
    let units = spec.shape.units();
    let mut i = 0;
    while bits < spec.capacity_bits {
        let start = body.len();
        emit(units[i % units.len()], branches, &mut rng, &mut body);
        i += 1;
        let insns = decode_instructions(&body[start..]).expect("generated unit decodes");
        bits += capacity_of(&scan_codepoints(&insns, spec.mode));
        if body.len() >= 65535 {
            return Err(DummyError::CodeTooLarge { bits: spec.capacity_bits, bytes: body.len() + 1 });
        }
    }
    body.push(RETURN);
    Ok(body)
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(['.', ';', '[', '/', '<', '>'])
}

/// Adds `private void <name>(int)` to a copy of `cf`.
pub fn synthesize_dummy(cf: &ClassFile, spec: &DummySpec) -> Result<ClassFile, DummyError> {
    if !valid_name(&spec.name) {
        return Err(DummyError::BadName(spec.name.clone()));
    }
    if (0..cf.methods.len()).any(|i| cf.method_name(i) == spec.name) {
        return Err(DummyError::NameCollision(spec.name.clone()));
    }
    let code = synthesize_code(spec, cf.major_version)?;
    let mut out = cf.clone();
    let pool = &mut out.constant_pool;
    let overflow = |e: ClassFileError| match e {
        ClassFileError::PoolOverflow => DummyError::PoolOverflow,
        e => DummyError::ClassFile(e),
    };
    let name_index = pool.intern_utf8(&spec.name).map_err(overflow)?;
    let descriptor_index = pool.intern_utf8("(I)V").map_err(overflow)?;
    let code_index = pool.intern_utf8("Code").map_err(overflow)?;
    out.methods.push(MemberInfo {
        access_flags: access::PRIVATE,
        name_index,
        descriptor_index,
        attributes: vec![Attribute {
            name_index: code_index,
            info: AttributeInfo::Code(Code {
                max_stack: 2,
                max_locals: 3,
                code,
                exception_table: Vec::new(),
                attributes: Vec::new(),
            }),
        }],
    });
    if out.methods.len() > u16::MAX as usize {
        return Err(DummyError::ClassFile(ClassFileError::IndexOverflow {
            what: "methods_count",
            value: out.methods.len(),
        }));
    }
    Ok(out)
}
