//! Static software watermarking of Java class files through dummy methods.
//!
//! A message is encoded to bits, keyed, and written into the opcodes or
//! immediate operands of a method that never runs. Opaque predicate groups
//! keep the call to that method in place but always false.

pub mod attacks;
pub mod bytecode;
pub mod classfile;
pub mod codec;
pub mod config;
pub mod dummygen;
pub mod embedder;
pub mod extractor;
pub mod opaque;

pub use bytecode::{CodepointKind, Mode};
pub use classfile::{ClassFile, ClassFileError};
pub use codec::{Bitstream, CodecError, Codebook, KeyOp, KeySpec};
pub use config::{ConfigError, WatermarkConfig};
pub use dummygen::{DummyShape, DummySpec};
pub use embedder::{capacity, embed, EmbedError, EmbedPlan};
pub use extractor::{verify, verify_model, Verdict};
