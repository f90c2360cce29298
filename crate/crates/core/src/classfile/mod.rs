//! Class file model, parser and serializer.
//!
//! `serialize(&parse(bytes)?)? == bytes` for every well-formed input: the pool
//! keeps placeholder slots after long/double entries and every attribute that
//! is not parsed into a view is carried as raw bytes.

mod attribute;
mod io;
mod pool;

pub use attribute::{Attribute, AttributeInfo, Code, ExceptionEntry, LineNumber, LocalVariable};
pub use pool::{tag_name, Constant, ConstantPool};
pub use pool::{
    TAG_CLASS, TAG_DOUBLE, TAG_FIELDREF, TAG_FLOAT, TAG_INTEGER, TAG_INTERFACE_METHODREF, TAG_LONG,
    TAG_METHODREF, TAG_NAME_AND_TYPE, TAG_STRING, TAG_UTF8,
};

use io::{Reader, Writer};

pub const MAGIC: u32 = 0xCAFE_BABE;

pub mod access {
    pub const PUBLIC: u16 = 0x0001;
    pub const PRIVATE: u16 = 0x0002;
    pub const PROTECTED: u16 = 0x0004;
    pub const STATIC: u16 = 0x0008;
    pub const FINAL: u16 = 0x0010;
    pub const SYNCHRONIZED: u16 = 0x0020;
    pub const NATIVE: u16 = 0x0100;
    pub const ABSTRACT: u16 = 0x0400;
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ClassFileError {
    #[error("bad magic 0x{found:08X}, expected 0xCAFEBABE")]
    BadMagic { found: u32 },
    #[error("input truncated at byte {offset}")]
    Truncated { offset: usize },
    #[error("constant pool entry #{index} has unknown tag {tag} (byte {offset})")]
    BadPoolTag { index: u16, tag: u8, offset: usize },
    #[error("dangling constant pool index #{index} ({context})")]
    DanglingIndex { index: u16, context: String },
    #[error("constant pool entry #{index} is {found}, expected {expected} ({context})")]
    PoolTagMismatch { index: u16, expected: &'static str, found: &'static str, context: String },
    #[error("{} trailing bytes after the last attribute", .count)]
    TrailingBytes { count: usize },
    #[error("{what} = {value} does not fit its field")]
    IndexOverflow { what: &'static str, value: usize },
    #[error("constant pool is full")]
    PoolOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberInfo {
    pub access_flags: u16,
    pub name_index: u16,
    pub descriptor_index: u16,
    pub attributes: Vec<Attribute>,
}

impl MemberInfo {
    pub fn code(&self) -> Option<&Code> {
        self.attributes.iter().find_map(Attribute::as_code)
    }

    pub fn code_mut(&mut self) -> Option<&mut Code> {
        self.attributes.iter_mut().find_map(Attribute::as_code_mut)
    }

    pub fn is_private(&self) -> bool {
        self.access_flags & access::PRIVATE != 0
    }

    pub fn is_static(&self) -> bool {
        self.access_flags & access::STATIC != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFile {
    pub minor_version: u16,
    pub major_version: u16,
    pub constant_pool: ConstantPool,
    pub access_flags: u16,
    pub this_class: u16,
    pub super_class: u16,
    pub interfaces: Vec<u16>,
    pub fields: Vec<MemberInfo>,
    pub methods: Vec<MemberInfo>,
    pub attributes: Vec<Attribute>,
}

/// Name, descriptor and flags of a method, handed to [`find_methods`] filters.
#[derive(Debug, Clone, Copy)]
pub struct MethodSig<'a> {
    pub name: &'a str,
    pub descriptor: &'a str,
    pub access_flags: u16,
}

pub fn parse(bytes: &[u8]) -> Result<ClassFile, ClassFileError> {
    let mut r = Reader::new(bytes);
    let magic = r.u32()?;
    if magic != MAGIC {
        return Err(ClassFileError::BadMagic { found: magic });
    }
    let minor_version = r.u16()?;
    let major_version = r.u16()?;
    let constant_pool = ConstantPool::read(&mut r)?;
    let access_flags = r.u16()?;
    let this_class = r.u16()?;
    let super_class = r.u16()?;
    let n = r.u16()?;
    let interfaces = (0..n).map(|_| r.u16()).collect::<Result<Vec<_>, _>>()?;
    let fields = read_members(&mut r, &constant_pool)?;
    let methods = read_members(&mut r, &constant_pool)?;
    let attributes = attribute::read_attributes(&mut r, &constant_pool)?;
    if !r.is_empty() {
        return Err(ClassFileError::TrailingBytes { count: bytes.len() - r.pos() });
    }
    let cf = ClassFile {
        minor_version,
        major_version,
        constant_pool,
        access_flags,
        this_class,
        super_class,
        interfaces,
        fields,
        methods,
        attributes,
    };
    cf.check_indices()?;
    Ok(cf)
}

fn read_members(r: &mut Reader, pool: &ConstantPool) -> Result<Vec<MemberInfo>, ClassFileError> {
    let n = r.u16()?;
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(MemberInfo {
            access_flags: r.u16()?,
            name_index: r.u16()?,
            descriptor_index: r.u16()?,
            attributes: attribute::read_attributes(r, pool)?,
        });
    }
    Ok(out)
}

pub fn serialize(cf: &ClassFile) -> Result<Vec<u8>, ClassFileError> {
    let mut w = Writer::default();
    w.u32(MAGIC);
    w.u16(cf.minor_version);
    w.u16(cf.major_version);
    cf.constant_pool.write(&mut w)?;
    w.u16(cf.access_flags);
    w.u16(cf.this_class);
    w.u16(cf.super_class);
    w.count16(cf.interfaces.len(), "interfaces_count")?;
    for i in &cf.interfaces {
        w.u16(*i);
    }
    for (members, what) in [(&cf.fields, "fields_count"), (&cf.methods, "methods_count")] {
        w.count16(members.len(), what)?;
        for m in members {
            w.u16(m.access_flags);
            w.u16(m.name_index);
            w.u16(m.descriptor_index);
            attribute::write_attributes(&mut w, &m.attributes)?;
        }
    }
    attribute::write_attributes(&mut w, &cf.attributes)?;
    Ok(w.buf)
}

/// Non-abstract, non-native methods accepted by `pred`, in file order.
pub fn find_methods<F>(cf: &ClassFile, mut pred: F) -> Vec<(usize, &Code)>
where
    F: FnMut(MethodSig) -> bool,
{
    let mut out = Vec::new();
    for (i, m) in cf.methods.iter().enumerate() {
        if m.access_flags & (access::ABSTRACT | access::NATIVE) != 0 {
            continue;
        }
        let Some(code) = m.code() else { continue };
        let name = cf.constant_pool.utf8(m.name_index).unwrap_or_default();
        let descriptor = cf.constant_pool.utf8(m.descriptor_index).unwrap_or_default();
        if pred(MethodSig { name: &name, descriptor: &descriptor, access_flags: m.access_flags }) {
            out.push((i, code));
        }
    }
    out
}

impl ClassFile {
    pub fn parse(bytes: &[u8]) -> Result<Self, ClassFileError> {
        parse(bytes)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, ClassFileError> {
        serialize(self)
    }

    pub fn class_name(&self) -> String {
        self.constant_pool.class_name(self.this_class).unwrap_or_default()
    }

    pub fn method_name(&self, index: usize) -> String {
        self.member_name(&self.methods[index])
    }

    pub fn method_descriptor(&self, index: usize) -> String {
        self.constant_pool.utf8(self.methods[index].descriptor_index).unwrap_or_default()
    }

    pub fn member_name(&self, m: &MemberInfo) -> String {
        self.constant_pool.utf8(m.name_index).unwrap_or_default()
    }

    /// First method with this name (and descriptor, when given).
    pub fn method_index(&self, name: &str, descriptor: Option<&str>) -> Option<usize> {
        self.methods.iter().position(|m| {
            self.constant_pool.utf8_bytes(m.name_index) == Some(name.as_bytes())
                && descriptor.map_or(true, |d| {
                    self.constant_pool.utf8_bytes(m.descriptor_index) == Some(d.as_bytes())
                })
        })
    }

    /// Checks that every stored pool index resolves to an entry of the tag
    /// its position requires.
    pub fn check_indices(&self) -> Result<(), ClassFileError> {
        let pool = &self.constant_pool;
        for (i, c) in pool.iter() {
            let ctx = |what: &str| format!("{what} of entry #{i}");
            match c {
                Constant::Class { name_index } => expect(pool, *name_index, TAG_UTF8, || ctx("Class.name_index"))?,
                Constant::String { string_index } => {
                    expect(pool, *string_index, TAG_UTF8, || ctx("String.string_index"))?
                }
                Constant::Fieldref { class_index, name_and_type_index }
                | Constant::Methodref { class_index, name_and_type_index }
                | Constant::InterfaceMethodref { class_index, name_and_type_index } => {
                    expect(pool, *class_index, TAG_CLASS, || ctx("class_index"))?;
                    expect(pool, *name_and_type_index, TAG_NAME_AND_TYPE, || ctx("name_and_type_index"))?;
                }
                Constant::NameAndType { name_index, descriptor_index } => {
                    expect(pool, *name_index, TAG_UTF8, || ctx("NameAndType.name_index"))?;
                    expect(pool, *descriptor_index, TAG_UTF8, || ctx("NameAndType.descriptor_index"))?;
                }
                _ => {}
            }
        }
        expect(pool, self.this_class, TAG_CLASS, || "this_class".into())?;
        if self.super_class != 0 {
            expect(pool, self.super_class, TAG_CLASS, || "super_class".into())?;
        }
        for &i in &self.interfaces {
            expect(pool, i, TAG_CLASS, || "interfaces".into())?;
        }
        for m in self.fields.iter().chain(&self.methods) {
            expect(pool, m.name_index, TAG_UTF8, || "member name_index".into())?;
            expect(pool, m.descriptor_index, TAG_UTF8, || "member descriptor_index".into())?;
            check_attributes(pool, &m.attributes)?;
        }
        check_attributes(pool, &self.attributes)
    }
}

fn check_attributes(pool: &ConstantPool, attrs: &[Attribute]) -> Result<(), ClassFileError> {
    for a in attrs {
        expect(pool, a.name_index, TAG_UTF8, || "attribute_name_index".into())?;
        match &a.info {
            AttributeInfo::SourceFile { sourcefile_index } => {
                expect(pool, *sourcefile_index, TAG_UTF8, || "sourcefile_index".into())?
            }
            AttributeInfo::LocalVariableTable(t) => {
                for v in t {
                    expect(pool, v.name_index, TAG_UTF8, || "LocalVariableTable name_index".into())?;
                    expect(pool, v.descriptor_index, TAG_UTF8, || {
                        "LocalVariableTable descriptor_index".into()
                    })?;
                }
            }
            AttributeInfo::Code(c) => {
                for e in &c.exception_table {
                    if e.catch_type != 0 {
                        expect(pool, e.catch_type, TAG_CLASS, || "catch_type".into())?;
                    }
                }
                check_attributes(pool, &c.attributes)?;
            }
            AttributeInfo::LineNumberTable(_) | AttributeInfo::Raw(_) => {}
        }
    }
    Ok(())
}

fn expect<F>(pool: &ConstantPool, index: u16, tag: u8, context: F) -> Result<(), ClassFileError>
where
    F: FnOnce() -> String,
{
    match pool.get(index) {
        None => Err(ClassFileError::DanglingIndex { index, context: context() }),
        Some(c) if c.tag() == Some(tag) => Ok(()),
        Some(c) => Err(ClassFileError::PoolTagMismatch {
            index,
            expected: tag_name(tag),
            found: tag_name(c.tag().unwrap_or(0)),
            context: context(),
        }),
    }
}
