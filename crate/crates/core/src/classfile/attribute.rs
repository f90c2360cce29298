use super::io::{Reader, Writer};
use super::pool::ConstantPool;
use super::ClassFileError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name_index: u16,
    pub info: AttributeInfo,
}

/// Attribute payload. Anything other than the four views below, or a view
/// whose bytes do not parse exactly, stays `Raw` and is written back verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeInfo {
    Code(Code),
    LineNumberTable(Vec<LineNumber>),
    LocalVariableTable(Vec<LocalVariable>),
    SourceFile { sourcefile_index: u16 },
    Raw(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    pub max_stack: u16,
    pub max_locals: u16,
    pub code: Vec<u8>,
    pub exception_table: Vec<ExceptionEntry>,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExceptionEntry {
    pub start_pc: u16,
    pub end_pc: u16,
    pub handler_pc: u16,
    pub catch_type: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineNumber {
    pub start_pc: u16,
    pub line_number: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalVariable {
    pub start_pc: u16,
    pub length: u16,
    pub name_index: u16,
    pub descriptor_index: u16,
    pub index: u16,
}

impl Attribute {
    pub fn name<'p>(&self, pool: &'p ConstantPool) -> Option<&'p [u8]> {
        pool.utf8_bytes(self.name_index)
    }

    pub fn as_code(&self) -> Option<&Code> {
        match &self.info {
            AttributeInfo::Code(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_code_mut(&mut self) -> Option<&mut Code> {
        match &mut self.info {
            AttributeInfo::Code(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_debug(&self, pool: &ConstantPool) -> bool {
        matches!(
            self.name(pool),
            Some(b"LineNumberTable") | Some(b"LocalVariableTable") | Some(b"LocalVariableTypeTable") | Some(b"SourceFile")
        )
    }
}

pub(crate) fn read_attributes(
    r: &mut Reader,
    pool: &ConstantPool,
) -> Result<Vec<Attribute>, ClassFileError> {
    let n = r.u16()?;
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(read_attribute(r, pool)?);
    }
    Ok(out)
}

fn read_attribute(r: &mut Reader, pool: &ConstantPool) -> Result<Attribute, ClassFileError> {
    let name_index = r.u16()?;
    let len = r.u32()?;
    let body = r.bytes(len as usize)?;
    let name = pool.utf8_bytes(name_index).ok_or_else(|| ClassFileError::DanglingIndex {
        index: name_index,
        context: "attribute_name_index".into(),
    })?;
    let view = match name {
        b"Code" => exact(body, |r| read_code(r, pool).map(AttributeInfo::Code)),
        b"LineNumberTable" => exact(body, |r| {
            let n = r.u16()?;
            (0..n)
                .map(|_| Ok(LineNumber { start_pc: r.u16()?, line_number: r.u16()? }))
                .collect::<Result<Vec<_>, _>>()
                .map(AttributeInfo::LineNumberTable)
        }),
        b"LocalVariableTable" => exact(body, |r| {
            let n = r.u16()?;
            (0..n)
                .map(|_| {
                    Ok(LocalVariable {
                        start_pc: r.u16()?,
                        length: r.u16()?,
                        name_index: r.u16()?,
                        descriptor_index: r.u16()?,
                        index: r.u16()?,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(AttributeInfo::LocalVariableTable)
        }),
        b"SourceFile" => exact(body, |r| Ok(AttributeInfo::SourceFile { sourcefile_index: r.u16()? })),
        _ => None,
    };
    Ok(Attribute { name_index, info: view.unwrap_or_else(|| AttributeInfo::Raw(body.to_vec())) })
}

/// Runs `f` over `body` and keeps the result only if it consumed every byte.
fn exact<F>(body: &[u8], f: F) -> Option<AttributeInfo>
where
    F: FnOnce(&mut Reader) -> Result<AttributeInfo, ClassFileError>,
{
    let mut r = Reader::new(body);
    match f(&mut r) {
        Ok(info) if r.is_empty() => Some(info),
        _ => None,
    }
}

fn read_code(r: &mut Reader, pool: &ConstantPool) -> Result<Code, ClassFileError> {
    let max_stack = r.u16()?;
    let max_locals = r.u16()?;
    let len = r.u32()?;
    let code = r.bytes(len as usize)?.to_vec();
    let n = r.u16()?;
    let mut exception_table = Vec::with_capacity(n as usize);
    for _ in 0..n {
        exception_table.push(ExceptionEntry {
            start_pc: r.u16()?,
            end_pc: r.u16()?,
            handler_pc: r.u16()?,
            catch_type: r.u16()?,
        });
    }
    let attributes = read_attributes(r, pool)?;
    Ok(Code { max_stack, max_locals, code, exception_table, attributes })
}

pub(crate) fn write_attributes(w: &mut Writer, attrs: &[Attribute]) -> Result<(), ClassFileError> {
    w.count16(attrs.len(), "attributes_count")?;
    for a in attrs {
        write_attribute(w, a)?;
    }
    Ok(())
}

fn write_attribute(w: &mut Writer, a: &Attribute) -> Result<(), ClassFileError> {
    let mut body = Writer::default();
    match &a.info {
        AttributeInfo::Raw(b) => body.bytes(b),
        AttributeInfo::SourceFile { sourcefile_index } => body.u16(*sourcefile_index),
        AttributeInfo::LineNumberTable(t) => {
            body.count16(t.len(), "line_number_table_length")?;
            for e in t {
                body.u16(e.start_pc);
                body.u16(e.line_number);
            }
        }
        AttributeInfo::LocalVariableTable(t) => {
            body.count16(t.len(), "local_variable_table_length")?;
            for e in t {
                body.u16(e.start_pc);
                body.u16(e.length);
                body.u16(e.name_index);
                body.u16(e.descriptor_index);
                body.u16(e.index);
            }
        }
        AttributeInfo::Code(c) => {
            body.u16(c.max_stack);
            body.u16(c.max_locals);
            body.count32(c.code.len(), "code_length")?;
            body.bytes(&c.code);
            body.count16(c.exception_table.len(), "exception_table_length")?;
            for e in &c.exception_table {
                body.u16(e.start_pc);
                body.u16(e.end_pc);
                body.u16(e.handler_pc);
                body.u16(e.catch_type);
            }
            write_attributes(&mut body, &c.attributes)?;
        }
    }
    w.u16(a.name_index);
    w.count32(body.buf.len(), "attribute_length")?;
    w.bytes(&body.buf);
    Ok(())
}
