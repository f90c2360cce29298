/// How many operand bytes follow an opcode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operands {
    Fixed(u8),
    TableSwitch,
    LookupSwitch,
    Wide,
}

/// Operand stack effect in slots (long/double count as two).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackEffect {
    Fixed { pop: u8, push: u8 },
    /// Depends on a constant pool entry or an operand (invokes, field access,
    /// ldc, multianewarray).
    Dynamic,
}

#[derive(Debug, Clone, Copy)]
pub struct OpInfo {
    pub mnemonic: &'static str,
    pub operands: Operands,
    pub stack: StackEffect,
}

const fn op(mnemonic: &'static str, n: u8, pop: u8, push: u8) -> Option<OpInfo> {
    Some(OpInfo { mnemonic, operands: Operands::Fixed(n), stack: StackEffect::Fixed { pop, push } })
}

const fn dynamic(mnemonic: &'static str, n: u8) -> Option<OpInfo> {
    Some(OpInfo { mnemonic, operands: Operands::Fixed(n), stack: StackEffect::Dynamic })
}

const fn special(mnemonic: &'static str, operands: Operands, pop: u8) -> Option<OpInfo> {
    Some(OpInfo { mnemonic, operands, stack: StackEffect::Fixed { pop, push: 0 } })
}

pub fn info(opcode: u8) -> Option<OpInfo> {
    TABLE[opcode as usize]
}

pub fn mnemonic(opcode: u8) -> &'static str {
    info(opcode).map_or("<unknown>", |i| i.mnemonic)
}

static TABLE: [Option<OpInfo>; 256] = {
    let mut t: [Option<OpInfo>; 256] = [None; 256];
    t[0x00] = op("nop", 0, 0, 0);
    t[0x01] = op("aconst_null", 0, 0, 1);
    t[0x02] = op("iconst_m1", 0, 0, 1);
    t[0x03] = op("iconst_0", 0, 0, 1);
    t[0x04] = op("iconst_1", 0, 0, 1);
    t[0x05] = op("iconst_2", 0, 0, 1);
    t[0x06] = op("iconst_3", 0, 0, 1);
    t[0x07] = op("iconst_4", 0, 0, 1);
    t[0x08] = op("iconst_5", 0, 0, 1);
    t[0x09] = op("lconst_0", 0, 0, 2);
    t[0x0a] = op("lconst_1", 0, 0, 2);
    t[0x0b] = op("fconst_0", 0, 0, 1);
    t[0x0c] = op("fconst_1", 0, 0, 1);
    t[0x0d] = op("fconst_2", 0, 0, 1);
    t[0x0e] = op("dconst_0", 0, 0, 2);
    t[0x0f] = op("dconst_1", 0, 0, 2);
    t[0x10] = op("bipush", 1, 0, 1);
    t[0x11] = op("sipush", 2, 0, 1);
    t[0x12] = dynamic("ldc", 1);
    t[0x13] = dynamic("ldc_w", 2);
    t[0x14] = op("ldc2_w", 2, 0, 2);
    t[0x15] = op("iload", 1, 0, 1);
    t[0x16] = op("lload", 1, 0, 2);
    t[0x17] = op("fload", 1, 0, 1);
    t[0x18] = op("dload", 1, 0, 2);
    t[0x19] = op("aload", 1, 0, 1);
    t[0x1a] = op("iload_0", 0, 0, 1);
    t[0x1b] = op("iload_1", 0, 0, 1);
    t[0x1c] = op("iload_2", 0, 0, 1);
    t[0x1d] = op("iload_3", 0, 0, 1);
    t[0x1e] = op("lload_0", 0, 0, 2);
    t[0x1f] = op("lload_1", 0, 0, 2);
    t[0x20] = op("lload_2", 0, 0, 2);
    t[0x21] = op("lload_3", 0, 0, 2);
    t[0x22] = op("fload_0", 0, 0, 1);
    t[0x23] = op("fload_1", 0, 0, 1);
    t[0x24] = op("fload_2", 0, 0, 1);
    t[0x25] = op("fload_3", 0, 0, 1);
    t[0x26] = op("dload_0", 0, 0, 2);
    t[0x27] = op("dload_1", 0, 0, 2);
    t[0x28] = op("dload_2", 0, 0, 2);
    t[0x29] = op("dload_3", 0, 0, 2);
    t[0x2a] = op("aload_0", 0, 0, 1);
    t[0x2b] = op("aload_1", 0, 0, 1);
    t[0x2c] = op("aload_2", 0, 0, 1);
    t[0x2d] = op("aload_3", 0, 0, 1);
    t[0x2e] = op("iaload", 0, 2, 1);
    t[0x2f] = op("laload", 0, 2, 2);
    t[0x30] = op("faload", 0, 2, 1);
    t[0x31] = op("daload", 0, 2, 2);
    t[0x32] = op("aaload", 0, 2, 1);
    t[0x33] = op("baload", 0, 2, 1);
    t[0x34] = op("caload", 0, 2, 1);
    t[0x35] = op("saload", 0, 2, 1);
    t[0x36] = op("istore", 1, 1, 0);
    t[0x37] = op("lstore", 1, 2, 0);
    t[0x38] = op("fstore", 1, 1, 0);
    t[0x39] = op("dstore", 1, 2, 0);
    t[0x3a] = op("astore", 1, 1, 0);
    t[0x3b] = op("istore_0", 0, 1, 0);
    t[0x3c] = op("istore_1", 0, 1, 0);
    t[0x3d] = op("istore_2", 0, 1, 0);
    t[0x3e] = op("istore_3", 0, 1, 0);
    t[0x3f] = op("lstore_0", 0, 2, 0);
    t[0x40] = op("lstore_1", 0, 2, 0);
    t[0x41] = op("lstore_2", 0, 2, 0);
    t[0x42] = op("lstore_3", 0, 2, 0);
    t[0x43] = op("fstore_0", 0, 1, 0);
    t[0x44] = op("fstore_1", 0, 1, 0);
    t[0x45] = op("fstore_2", 0, 1, 0);
    t[0x46] = op("fstore_3", 0, 1, 0);
    t[0x47] = op("dstore_0", 0, 2, 0);
    t[0x48] = op("dstore_1", 0, 2, 0);
    t[0x49] = op("dstore_2", 0, 2, 0);
    t[0x4a] = op("dstore_3", 0, 2, 0);
    t[0x4b] = op("astore_0", 0, 1, 0);
    t[0x4c] = op("astore_1", 0, 1, 0);
    t[0x4d] = op("astore_2", 0, 1, 0);
    t[0x4e] = op("astore_3", 0, 1, 0);
    t[0x4f] = op("iastore", 0, 3, 0);
    t[0x50] = op("lastore", 0, 4, 0);
    t[0x51] = op("fastore", 0, 3, 0);
    t[0x52] = op("dastore", 0, 4, 0);
    t[0x53] = op("aastore", 0, 3, 0);
    t[0x54] = op("bastore", 0, 3, 0);
    t[0x55] = op("castore", 0, 3, 0);
    t[0x56] = op("sastore", 0, 3, 0);
    t[0x57] = op("pop", 0, 1, 0);
    t[0x58] = op("pop2", 0, 2, 0);
    t[0x59] = op("dup", 0, 1, 2);
    t[0x5a] = op("dup_x1", 0, 2, 3);
    t[0x5b] = op("dup_x2", 0, 3, 4);
    t[0x5c] = op("dup2", 0, 2, 4);
    t[0x5d] = op("dup2_x1", 0, 3, 5);
    t[0x5e] = op("dup2_x2", 0, 4, 6);
    t[0x5f] = op("swap", 0, 2, 2);
    t[0x60] = op("iadd", 0, 2, 1);
    t[0x61] = op("ladd", 0, 4, 2);
    t[0x62] = op("fadd", 0, 2, 1);
    t[0x63] = op("dadd", 0, 4, 2);
    t[0x64] = op("isub", 0, 2, 1);
    t[0x65] = op("lsub", 0, 4, 2);
    t[0x66] = op("fsub", 0, 2, 1);
    t[0x67] = op("dsub", 0, 4, 2);
    t[0x68] = op("imul", 0, 2, 1);
    t[0x69] = op("lmul", 0, 4, 2);
    t[0x6a] = op("fmul", 0, 2, 1);
    t[0x6b] = op("dmul", 0, 4, 2);
    t[0x6c] = op("idiv", 0, 2, 1);
    t[0x6d] = op("ldiv", 0, 4, 2);
    t[0x6e] = op("fdiv", 0, 2, 1);
    t[0x6f] = op("ddiv", 0, 4, 2);
    t[0x70] = op("irem", 0, 2, 1);
    t[0x71] = op("lrem", 0, 4, 2);
    t[0x72] = op("frem", 0, 2, 1);
    t[0x73] = op("drem", 0, 4, 2);
    t[0x74] = op("ineg", 0, 1, 1);
    t[0x75] = op("lneg", 0, 2, 2);
    t[0x76] = op("fneg", 0, 1, 1);
    t[0x77] = op("dneg", 0, 2, 2);
    t[0x78] = op("ishl", 0, 2, 1);
    t[0x79] = op("lshl", 0, 3, 2);
    t[0x7a] = op("ishr", 0, 2, 1);
    t[0x7b] = op("lshr", 0, 3, 2);
    t[0x7c] = op("iushr", 0, 2, 1);
    t[0x7d] = op("lushr", 0, 3, 2);
    t[0x7e] = op("iand", 0, 2, 1);
    t[0x7f] = op("land", 0, 4, 2);
    t[0x80] = op("ior", 0, 2, 1);
    t[0x81] = op("lor", 0, 4, 2);
    t[0x82] = op("ixor", 0, 2, 1);
    t[0x83] = op("lxor", 0, 4, 2);
    t[0x84] = op("iinc", 2, 0, 0);
    t[0x85] = op("i2l", 0, 1, 2);
    t[0x86] = op("i2f", 0, 1, 1);
    t[0x87] = op("i2d", 0, 1, 2);
    t[0x88] = op("l2i", 0, 2, 1);
    t[0x89] = op("l2f", 0, 2, 1);
    t[0x8a] = op("l2d", 0, 2, 2);
    t[0x8b] = op("f2i", 0, 1, 1);
    t[0x8c] = op("f2l", 0, 1, 2);
    t[0x8d] = op("f2d", 0, 1, 2);
    t[0x8e] = op("d2i", 0, 2, 1);
    t[0x8f] = op("d2l", 0, 2, 2);
    t[0x90] = op("d2f", 0, 2, 1);
    t[0x91] = op("i2b", 0, 1, 1);
    t[0x92] = op("i2c", 0, 1, 1);
    t[0x93] = op("i2s", 0, 1, 1);
    t[0x94] = op("lcmp", 0, 4, 1);
    t[0x95] = op("fcmpl", 0, 2, 1);
    t[0x96] = op("fcmpg", 0, 2, 1);
    t[0x97] = op("dcmpl", 0, 4, 1);
    t[0x98] = op("dcmpg", 0, 4, 1);
    t[0x99] = op("ifeq", 2, 1, 0);
    t[0x9a] = op("ifne", 2, 1, 0);
    t[0x9b] = op("iflt", 2, 1, 0);
    t[0x9c] = op("ifge", 2, 1, 0);
    t[0x9d] = op("ifgt", 2, 1, 0);
    t[0x9e] = op("ifle", 2, 1, 0);
    t[0x9f] = op("if_icmpeq", 2, 2, 0);
    t[0xa0] = op("if_icmpne", 2, 2, 0);
    t[0xa1] = op("if_icmplt", 2, 2, 0);
    t[0xa2] = op("if_icmpge", 2, 2, 0);
    t[0xa3] = op("if_icmpgt", 2, 2, 0);
    t[0xa4] = op("if_icmple", 2, 2, 0);
    t[0xa5] = op("if_acmpeq", 2, 2, 0);
    t[0xa6] = op("if_acmpne", 2, 2, 0);
    t[0xa7] = op("goto", 2, 0, 0);
    t[0xa8] = op("jsr", 2, 0, 1);
    t[0xa9] = op("ret", 1, 0, 0);
    t[0xaa] = special("tableswitch", Operands::TableSwitch, 1);
    t[0xab] = special("lookupswitch", Operands::LookupSwitch, 1);
    t[0xac] = op("ireturn", 0, 1, 0);
    t[0xad] = op("lreturn", 0, 2, 0);
    t[0xae] = op("freturn", 0, 1, 0);
    t[0xaf] = op("dreturn", 0, 2, 0);
    t[0xb0] = op("areturn", 0, 1, 0);
    t[0xb1] = op("return", 0, 0, 0);
    t[0xb2] = dynamic("getstatic", 2);
    t[0xb3] = dynamic("putstatic", 2);
    t[0xb4] = dynamic("getfield", 2);
    t[0xb5] = dynamic("putfield", 2);
    t[0xb6] = dynamic("invokevirtual", 2);
    t[0xb7] = dynamic("invokespecial", 2);
    t[0xb8] = dynamic("invokestatic", 2);
    t[0xb9] = dynamic("invokeinterface", 4);
    t[0xba] = dynamic("invokedynamic", 4);
    t[0xbb] = op("new", 2, 0, 1);
    t[0xbc] = op("newarray", 1, 1, 1);
    t[0xbd] = op("anewarray", 2, 1, 1);
    t[0xbe] = op("arraylength", 0, 1, 1);
    t[0xbf] = op("athrow", 0, 1, 0);
    t[0xc0] = op("checkcast", 2, 1, 1);
    t[0xc1] = op("instanceof", 2, 1, 1);
    t[0xc2] = op("monitorenter", 0, 1, 0);
    t[0xc3] = op("monitorexit", 0, 1, 0);
    t[0xc4] = special("wide", Operands::Wide, 0);
    t[0xc5] = dynamic("multianewarray", 3);
    t[0xc6] = op("ifnull", 2, 1, 0);
    t[0xc7] = op("ifnonnull", 2, 1, 0);
    t[0xc8] = op("goto_w", 4, 0, 0);
    t[0xc9] = op("jsr_w", 4, 0, 1);
    t
};

pub const IADD: u8 = 0x60;
pub const ISUB: u8 = 0x64;
pub const IMUL: u8 = 0x68;
pub const IDIV: u8 = 0x6c;
pub const IREM: u8 = 0x70;
pub const IAND: u8 = 0x7e;
pub const IOR: u8 = 0x80;
pub const IXOR: u8 = 0x82;
pub const IFLT: u8 = 0x9b;
pub const IFGE: u8 = 0x9c;
pub const IFGT: u8 = 0x9d;
pub const IFLE: u8 = 0x9e;
pub const IFNULL: u8 = 0xc6;
pub const IFNONNULL: u8 = 0xc7;
pub const BIPUSH: u8 = 0x10;
pub const IINC: u8 = 0x84;
pub const WIDE: u8 = 0xc4;
pub const GOTO: u8 = 0xa7;
pub const GOTO_W: u8 = 0xc8;
pub const JSR: u8 = 0xa8;
pub const JSR_W: u8 = 0xc9;
pub const RET: u8 = 0xa9;
pub const TABLESWITCH: u8 = 0xaa;
pub const LOOKUPSWITCH: u8 = 0xab;
pub const ATHROW: u8 = 0xbf;
pub const INVOKEVIRTUAL: u8 = 0xb6;
pub const INVOKESPECIAL: u8 = 0xb7;
pub const INVOKESTATIC: u8 = 0xb8;
pub const INVOKEINTERFACE: u8 = 0xb9;

pub fn is_return(opcode: u8) -> bool {
    (0xac..=0xb1).contains(&opcode)
}

/// Conditional branches with a 2-byte offset.
pub fn is_conditional(opcode: u8) -> bool {
    (0x99..=0xa6).contains(&opcode) || opcode == IFNULL || opcode == IFNONNULL
}
