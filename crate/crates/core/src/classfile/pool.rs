use super::io::{Reader, Writer};
use super::ClassFileError;

pub const TAG_UTF8: u8 = 1;
pub const TAG_INTEGER: u8 = 3;
pub const TAG_FLOAT: u8 = 4;
pub const TAG_LONG: u8 = 5;
pub const TAG_DOUBLE: u8 = 6;
pub const TAG_CLASS: u8 = 7;
pub const TAG_STRING: u8 = 8;
pub const TAG_FIELDREF: u8 = 9;
pub const TAG_METHODREF: u8 = 10;
pub const TAG_INTERFACE_METHODREF: u8 = 11;
pub const TAG_NAME_AND_TYPE: u8 = 12;

/// One constant pool slot.
///
/// `Utf8` keeps the raw modified-UTF-8 bytes so that round-tripping never
/// depends on string decoding. Float and double keep their bit patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constant {
    Utf8(Vec<u8>),
    Integer(i32),
    Float(u32),
    Long(i64),
    Double(u64),
    Class { name_index: u16 },
    String { string_index: u16 },
    Fieldref { class_index: u16, name_and_type_index: u16 },
    Methodref { class_index: u16, name_and_type_index: u16 },
    InterfaceMethodref { class_index: u16, name_and_type_index: u16 },
    NameAndType { name_index: u16, descriptor_index: u16 },
    /// Second slot of a Long or Double.
    Unusable,
}

impl Constant {
    pub fn tag(&self) -> Option<u8> {
        Some(match self {
            Constant::Utf8(_) => TAG_UTF8,
            Constant::Integer(_) => TAG_INTEGER,
            Constant::Float(_) => TAG_FLOAT,
            Constant::Long(_) => TAG_LONG,
            Constant::Double(_) => TAG_DOUBLE,
            Constant::Class { .. } => TAG_CLASS,
            Constant::String { .. } => TAG_STRING,
            Constant::Fieldref { .. } => TAG_FIELDREF,
            Constant::Methodref { .. } => TAG_METHODREF,
            Constant::InterfaceMethodref { .. } => TAG_INTERFACE_METHODREF,
            Constant::NameAndType { .. } => TAG_NAME_AND_TYPE,
            Constant::Unusable => return None,
        })
    }

    pub fn is_wide(&self) -> bool {
        matches!(self, Constant::Long(_) | Constant::Double(_))
    }

    pub fn utf8(s: &str) -> Constant {
        Constant::Utf8(s.as_bytes().to_vec())
    }
}

pub fn tag_name(tag: u8) -> &'static str {
    match tag {
        TAG_UTF8 => "Utf8",
        TAG_INTEGER => "Integer",
        TAG_FLOAT => "Float",
        TAG_LONG => "Long",
        TAG_DOUBLE => "Double",
        TAG_CLASS => "Class",
        TAG_STRING => "String",
        TAG_FIELDREF => "Fieldref",
        TAG_METHODREF => "Methodref",
        TAG_INTERFACE_METHODREF => "InterfaceMethodref",
        TAG_NAME_AND_TYPE => "NameAndType",
        _ => "?",
    }
}

/// 1-indexed constant pool. Slot 0 is implicit; long/double are followed
/// by an explicit [`Constant::Unusable`] entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstantPool {
    entries: Vec<Constant>,
}

impl ConstantPool {
    pub fn new() -> Self {
        ConstantPool::default()
    }

    /// Builds a pool from raw slots without any checks. Serialization will
    /// still refuse pools whose count does not fit in a u2.
    pub fn from_entries(entries: Vec<Constant>) -> Self {
        ConstantPool { entries }
    }

    pub fn entries(&self) -> &[Constant] {
        &self.entries
    }

    /// Value written to `constant_pool_count`.
    pub fn count(&self) -> usize {
        self.entries.len() + 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: u16) -> Option<&Constant> {
        if index == 0 {
            return None;
        }
        match self.entries.get(index as usize - 1) {
            Some(Constant::Unusable) | None => None,
            Some(c) => Some(c),
        }
    }

    pub fn get_mut(&mut self, index: u16) -> Option<&mut Constant> {
        if index == 0 {
            return None;
        }
        match self.entries.get_mut(index as usize - 1) {
            Some(Constant::Unusable) | None => None,
            Some(c) => Some(c),
        }
    }

    /// Iterates `(index, constant)` over usable slots.
    pub fn iter(&self) -> impl Iterator<Item = (u16, &Constant)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, c)| !matches!(c, Constant::Unusable))
            .map(|(i, c)| ((i + 1) as u16, c))
    }

    pub fn utf8_bytes(&self, index: u16) -> Option<&[u8]> {
        match self.get(index)? {
            Constant::Utf8(b) => Some(b),
            _ => None,
        }
    }

    /// Utf8 entry as text. Modified UTF-8 that is not valid UTF-8 (embedded
    /// NUL, surrogate pairs) is decoded lossily.
    pub fn utf8(&self, index: u16) -> Option<String> {
        self.utf8_bytes(index).map(|b| String::from_utf8_lossy(b).into_owned())
    }

    pub fn class_name(&self, index: u16) -> Option<String> {
        match self.get(index)? {
            Constant::Class { name_index } => self.utf8(*name_index),
            _ => None,
        }
    }

    /// `(class, name, descriptor)` of a field/method/interface-method ref.
    pub fn member_ref(&self, index: u16) -> Option<(u16, String, String)> {
        let (class_index, nat) = match self.get(index)? {
            Constant::Fieldref { class_index, name_and_type_index }
            | Constant::Methodref { class_index, name_and_type_index }
            | Constant::InterfaceMethodref { class_index, name_and_type_index } => {
                (*class_index, *name_and_type_index)
            }
            _ => return None,
        };
        match self.get(nat)? {
            Constant::NameAndType { name_index, descriptor_index } => Some((
                class_index,
                self.utf8(*name_index)?,
                self.utf8(*descriptor_index)?,
            )),
            _ => None,
        }
    }

    /// Appends an entry and returns its index.
    pub fn push(&mut self, c: Constant) -> Result<u16, ClassFileError> {
        let slots = if c.is_wide() { 2 } else { 1 };
        if self.count() + slots > u16::MAX as usize {
            return Err(ClassFileError::PoolOverflow);
        }
        let index = self.count() as u16;
        let wide = c.is_wide();
        self.entries.push(c);
        if wide {
            self.entries.push(Constant::Unusable);
        }
        Ok(index)
    }

    pub fn find(&self, c: &Constant) -> Option<u16> {
        self.iter().find(|(_, e)| *e == c).map(|(i, _)| i)
    }

    /// Index of an equal entry, appending one if absent.
    pub fn intern(&mut self, c: Constant) -> Result<u16, ClassFileError> {
        match self.find(&c) {
            Some(i) => Ok(i),
            None => self.push(c),
        }
    }

    pub fn intern_utf8(&mut self, s: &str) -> Result<u16, ClassFileError> {
        self.intern(Constant::utf8(s))
    }

    pub(crate) fn read(r: &mut Reader) -> Result<Self, ClassFileError> {
        let count = r.u16()?;
        let mut entries = Vec::with_capacity(count as usize);
        let mut index: u32 = 1;
        while index < count as u32 {
            let offset = r.pos();
            let tag = r.u8()?;
            let c = match tag {
                TAG_UTF8 => {
                    let len = r.u16()?;
                    Constant::Utf8(r.bytes(len as usize)?.to_vec())
                }
                TAG_INTEGER => Constant::Integer(r.u32()? as i32),
                TAG_FLOAT => Constant::Float(r.u32()?),
                TAG_LONG => Constant::Long(r.u64()? as i64),
                TAG_DOUBLE => Constant::Double(r.u64()?),
                TAG_CLASS => Constant::Class { name_index: r.u16()? },
                TAG_STRING => Constant::String { string_index: r.u16()? },
                TAG_FIELDREF => Constant::Fieldref {
                    class_index: r.u16()?,
                    name_and_type_index: r.u16()?,
                },
                TAG_METHODREF => Constant::Methodref {
                    class_index: r.u16()?,
                    name_and_type_index: r.u16()?,
                },
                TAG_INTERFACE_METHODREF => Constant::InterfaceMethodref {
                    class_index: r.u16()?,
                    name_and_type_index: r.u16()?,
                },
                TAG_NAME_AND_TYPE => Constant::NameAndType {
                    name_index: r.u16()?,
                    descriptor_index: r.u16()?,
                },
                _ => return Err(ClassFileError::BadPoolTag { index: index as u16, tag, offset }),
            };
            let wide = c.is_wide();
            entries.push(c);
            index += 1;
            if wide {
                if index >= count as u32 {
                    return Err(ClassFileError::DanglingIndex {
                        index: index as u16,
                        context: "second slot of a long/double past the end of the pool".into(),
                    });
                }
                entries.push(Constant::Unusable);
                index += 1;
            }
        }
        Ok(ConstantPool { entries })
    }

    pub(crate) fn write(&self, w: &mut Writer) -> Result<(), ClassFileError> {
        w.count16(self.count(), "constant_pool_count")?;
        for c in &self.entries {
            match c {
                Constant::Utf8(b) => {
                    w.u8(TAG_UTF8);
                    w.count16(b.len(), "Utf8 length")?;
                    w.bytes(b);
                }
                Constant::Integer(v) => {
                    w.u8(TAG_INTEGER);
                    w.u32(*v as u32);
                }
                Constant::Float(v) => {
                    w.u8(TAG_FLOAT);
                    w.u32(*v);
                }
                Constant::Long(v) => {
                    w.u8(TAG_LONG);
                    w.u64(*v as u64);
                }
                Constant::Double(v) => {
                    w.u8(TAG_DOUBLE);
                    w.u64(*v);
                }
                Constant::Class { name_index } => {
                    w.u8(TAG_CLASS);
                    w.u16(*name_index);
                }
                Constant::String { string_index } => {
                    w.u8(TAG_STRING);
                    w.u16(*string_index);
                }
                Constant::Fieldref { class_index, name_and_type_index } => {
                    w.u8(TAG_FIELDREF);
                    w.u16(*class_index);
                    w.u16(*name_and_type_index);
                }
                Constant::Methodref { class_index, name_and_type_index } => {
                    w.u8(TAG_METHODREF);
                    w.u16(*class_index);
                    w.u16(*name_and_type_index);
                }
                Constant::InterfaceMethodref { class_index, name_and_type_index } => {
                    w.u8(TAG_INTERFACE_METHODREF);
                    w.u16(*class_index);
                    w.u16(*name_and_type_index);
                }
                Constant::NameAndType { name_index, descriptor_index } => {
                    w.u8(TAG_NAME_AND_TYPE);
                    w.u16(*name_index);
                    w.u16(*descriptor_index);
                }
                Constant::Unusable => {}
            }
        }
        Ok(())
    }
}
